"""
Unit tests for experiment configuration, reports and runners
"""

import json

import pytest

from experiments.boyd_table import run_boyd_table
from experiments.calibrate import (
    CalibrationEntry,
    CalibrationRecord,
    calibrate_constants,
)
from experiments.config import (
    THREADS_ENV,
    ExperimentConfig,
    apply_overrides,
    load_config,
    parse_space,
    parse_value,
    parse_weight,
    render_config,
)
from experiments.fejer import run_fejer_convergence, solve_theta
from experiments.grid import run_grid
from experiments.report import CALIBRATED_UPPER, EXACT, LOWER, Report, ReportRow
from experiments.verify import (
    ASYMMETRIC_WEIGHT,
    CHECKS,
    EXPECTED_FAIL,
    EXPECTED_FAILURES,
    FAIL,
    PASS,
    UNEXPECTED_PASS,
    CheckResult,
    VerificationSummary,
    _run_check,
    check_algebra_associativity,
    check_lattice_monotone,
    check_modulation_identity,
    check_reflection_asymmetric,
    run_verification_suite,
)
from experiments.weight_sweep import run_weight_sweep
from laurent_lab.errors import ConfigError, DomainError
from laurent_lab.spaces import LORENTZ, ORLICZ
from laurent_lab.weights import HALF_LINE, Verdict


def write_config(tmp_path, text):
    path = tmp_path / "experiment.env"
    path.write_text(text)
    return str(path)


class TestConfig:
    """Test cases for configuration loading and literal parsing"""

    def test_parse_values(self):
        """Lists, powers of two and booleans"""
        assert parse_value("budgets", "256, 2**10") == [256, 1024]
        assert parse_value("params", "0.5,pi/4")[1] == pytest.approx(0.7853981634)
        assert parse_value("weights", "power(0.2);none") == ["power(0.2)", None]
        assert parse_value("inject_asymmetric", "yes") is True
        assert parse_value("fejer_constant", "") is None

    def test_parse_value_errors(self):
        """Malformed values and unknown fields raise ConfigError"""
        with pytest.raises(ConfigError):
            parse_value("deltas", "0.1,0.1")
        with pytest.raises(ConfigError):
            parse_value("seed", "many")
        with pytest.raises(ConfigError):
            parse_value("nonsense", "1")

    def test_load_config(self, tmp_path):
        """File values override defaults and the kind argument overrides both"""
        path = write_config(
            tmp_path, "KIND=weights\nJ_MAX=64\nSPACES=lebesgue(2);lorentz(3,1.5)\n"
        )
        config = load_config(path, kind="boyd")
        assert config.kind == "boyd"
        assert config.j_max == 64
        assert config.spaces == ["lebesgue(2)", "lorentz(3,1.5)"]

    def test_environment_threads(self, monkeypatch):
        """LAURENT_LAB_THREADS sets the default thread count"""
        monkeypatch.setenv(THREADS_ENV, "3")
        assert load_config().threads == 3

    def test_unknown_key(self, tmp_path):
        """Unknown keys are rejected"""
        path = write_config(tmp_path, "COLOUR=blue\n")
        with pytest.raises(ConfigError):
            load_config(path)
        with pytest.raises(ConfigError):
            load_config(str(tmp_path / "missing.env"))

    def test_render_round_trip(self, tmp_path):
        """Rendered config text loads back to the same settings"""
        config = ExperimentConfig(
            kind="fejer", deltas=(0.1, 0.2, 0.1, 0.2), weights=["power(0.2)", None]
        )
        path = write_config(tmp_path, render_config(config))
        assert load_config(path) == config

    def test_overrides(self):
        """None leaves values unchanged; unknown names are rejected"""
        config = apply_overrides(ExperimentConfig(), {"seed": 7, "threads": None})
        assert config.seed == 7 and config.threads == 1
        with pytest.raises(ConfigError):
            apply_overrides(config, {"colour": "blue"})

    def test_validate(self):
        """Inconsistent settings raise ConfigError"""
        with pytest.raises(ConfigError):
            ExperimentConfig(budgets=[256]).validate()
        with pytest.raises(ConfigError):
            ExperimentConfig(plateau_tolerance=0.2).validate()
        with pytest.raises(ConfigError):
            ExperimentConfig(iterations=0).validate()
        with pytest.raises(ConfigError):
            ExperimentConfig(decay_ceiling=1.0).validate()
        with pytest.raises(ConfigError):
            ExperimentConfig(section_schedule=[64, 32]).validate()
        assert ExperimentConfig().validate().kind == "verify"

    def test_space_literals(self):
        """Space literals build the matching families"""
        assert parse_space("lorentz(3,1.5)").kind == LORENTZ
        assert parse_space("orlicz(log_power,2,1)").kind == ORLICZ
        with pytest.raises(ConfigError):
            parse_space("lebesgue(0.5)")
        with pytest.raises(ConfigError):
            parse_space("sobolev(2)")

    def test_weight_literals(self):
        """Weight literals, half-line domains and exponents"""
        assert parse_weight("none") is None
        assert parse_weight("power(0.4)^1.5").label() == "power(0.4)^1.5"
        assert parse_weight("power(0.3,half)").domain == HALF_LINE
        assert not parse_weight("table(0.5,1,2)").symmetric
        with pytest.raises(ConfigError):
            parse_weight("table(1,2)")


class TestReport:
    """Test cases for report rendering"""

    def build_report(self):
        report = Report(title="demo", metadata={"seed": 0})
        report.add(ReportRow(params={"n": 2})).measure("value", 0.5, EXACT)
        row = report.add(ReportRow(params={"n": 1}))
        row.measure("value", 0.25, LOWER).measure("upper", 1.0, CALIBRATED_UPPER)
        return report.sort("n")

    def test_csv(self):
        """CRLF rows with method columns after each measurement"""
        text = self.build_report().to_csv()
        lines = text.split("\r\n")
        assert lines[0] == "n,value,value_method,upper,upper_method"
        assert lines[1] == "1,0.25,lower,1.0,calibrated-upper"
        assert lines[2] == "2,0.5,exact,,"

    def test_json_lines(self):
        """A metadata header followed by one object per row"""
        lines = self.build_report().to_json_lines().splitlines()
        assert json.loads(lines[0]) == {"report": "demo", "metadata": {"seed": 0}}
        assert json.loads(lines[1])["value_method"] == "lower"
        assert len(lines) == 3

    def test_unknown_tag(self):
        """Only the known method tags are accepted"""
        with pytest.raises(ValueError):
            ReportRow().measure("value", 1.0, "guess")

    def test_deterministic(self):
        """Identical reports render to identical bytes"""
        assert self.build_report().render("csv") == self.build_report().render("csv")


class TestGrid:
    """Test cases for the grid runner"""

    def test_results_keyed_by_point(self):
        """Every point is evaluated once"""
        results = run_grid([1, 2, 3], lambda x: x * x, threads=2)
        assert results == {1: 1, 2: 4, 3: 9}

    def test_failures_reraised(self):
        """The first failure propagates after the grid finishes"""

        def task(x):
            if x == 2:
                raise DomainError("bad point")
            return x

        with pytest.raises(DomainError):
            run_grid([1, 2, 3], task)


class TestRunners:
    """Test cases for the experiment runners at small scale"""

    def test_solve_theta(self):
        """theta vanishes at p = 2 and stays in [0, 1)"""
        assert solve_theta(2.0, 0.1) == pytest.approx(0.0)
        theta = solve_theta(3.0, 0.1)
        assert 1 / 3 == pytest.approx((1 - theta) / 2 + theta / (3.0 * 1.1))
        with pytest.raises(ConfigError):
            solve_theta(3.0, -0.1)

    def test_fejer(self):
        """Deficit columns per degree with a self-calibrated constant"""
        config = ExperimentConfig(
            kind="fejer",
            symbol="hat(1,pi)",
            space="lebesgue(3)",
            section_schedule=[8],
            fejer_degrees=[2, 4, 8],
            restarts=1,
            iterations=10,
        )
        report = run_fejer_convergence(config)
        assert report.column("n") == [2, 4, 8]
        sup = report.column("sup_deficit")
        assert sup[0] > sup[1] > sup[2]
        assert report.metadata["constant_source"] == "self-calibrated"
        assert report.passed
        assert report.rows[0].as_record()["interpolated_upper_method"] == (
            CALIBRATED_UPPER
        )

    def test_fejer_discontinuous(self):
        """Step symbols are outside the convergence estimate"""
        config = ExperimentConfig(kind="fejer", symbol="step(0,pi,1)")
        with pytest.raises(DomainError):
            run_fejer_convergence(config)

    def test_weight_sweep(self):
        """One row per (param, p) with a verdict"""
        config = ExperimentConfig(
            kind="weights", params=[0.2], p_grid=[2.0], budgets=[64, 128, 256]
        )
        report = run_weight_sweep(config)
        assert len(report.rows) == 1
        assert report.column("verdict")[0] in {v.value for v in Verdict}
        assert report.column("characteristic")[0] >= 1.0

    def test_weight_sweep_skips_reverse_holder_outside_ap(self):
        """Weights with a NotIn verdict carry no reverse Hoelder exponent"""
        config = ExperimentConfig(
            kind="weights", params=[0.2, 0.8], p_grid=[2.0], budgets=[64, 128, 256]
        )
        report = run_weight_sweep(config)
        assert report.column("verdict") == ["InApEvidence", "NotInApEvidence"]
        assert report.column("rh_delta")[0] is not None
        assert report.column("rh_delta")[1] is None
        assert report.column("decay_ratio")[1] > 1.0

    def test_weight_sweep_needs_base(self):
        """The exponent family needs a base weight"""
        with pytest.raises(ConfigError):
            run_weight_sweep(ExperimentConfig(kind="weights", family="exponent"))

    def test_boyd_table(self):
        """l^2 has alpha = beta = 1/2"""
        config = ExperimentConfig(
            kind="boyd", spaces=["lebesgue(2)"], j_max=16, boyd_budget=256
        )
        report = run_boyd_table(config)
        assert report.column("alpha")[0] == pytest.approx(0.5, abs=1e-9)
        assert report.column("beta")[0] == pytest.approx(0.5, abs=1e-9)
        assert report.column("duality_residual")[0] == pytest.approx(0.0, abs=1e-9)

    def test_calibration_save_load(self, tmp_path):
        """Calibrated constants survive a JSON round trip"""
        config = ExperimentConfig(
            kind="calibrate",
            spaces=["lebesgue(2)"],
            fixtures=["trigpoly: 0.5,1,0,1,0"],
            section_schedule=[8],
            restarts=1,
            iterations=20,
        )
        record = calibrate_constants(config)
        constant = record.constants()["lebesgue(2)"]
        assert 0 < constant < 1
        path = str(tmp_path / "calibration.json")
        record.save(path)
        assert CalibrationRecord.load(path).constants() == record.constants()

    def test_calibration_merge(self):
        """Merged constants never decrease"""
        label = "lebesgue(3)"
        old = CalibrationRecord({label: CalibrationEntry(label, 0.8, 64, 0)})
        new = CalibrationRecord({label: CalibrationEntry(label, 0.6, 128, 1)})
        merged = old.merge(new)
        assert merged.entries[label].constant == 0.8
        assert merged.entries[label].N == 128

    def test_malformed_record(self):
        """Broken calibration JSON is a configuration error"""
        with pytest.raises(ConfigError):
            CalibrationRecord.from_json("{not json")


class TestVerification:
    """Test cases for check bookkeeping and the verification suite"""

    def test_status(self):
        """Expected failures invert the pass/fail reading"""
        assert CheckResult("spaces.x", True).status == PASS
        assert CheckResult("spaces.x", False).status == FAIL
        expected = CheckResult("spaces.x", False, expected_fail=True)
        assert expected.status == EXPECTED_FAIL
        surprise = CheckResult("spaces.x", True, expected_fail=True)
        assert surprise.status == UNEXPECTED_PASS
        assert CheckResult("weights.y", True).module == "weights"

    def test_summary(self):
        """Only failures and unexpected passes fail the summary"""
        summary = VerificationSummary(
            [
                CheckResult("spaces.a", True),
                CheckResult("spaces.b", False, expected_fail=True),
            ]
        )
        assert summary.all_passed
        report = summary.to_report()
        assert report.passed
        assert report.metadata == {"checks": 2, "failed": 0}

    def test_raising_check_is_a_failure(self):
        """Exceptions inside a check are recorded, never raised"""

        def broken(config):
            raise DomainError("boom")

        result = _run_check("laurent.broken", broken, ExperimentConfig(), False)
        assert result.status == FAIL
        assert "boom" in result.detail

    def test_asymmetric_weight_is_detected(self):
        """The asymmetric weight breaks reflection invariance"""
        assert not ASYMMETRIC_WEIGHT.symmetric
        passed, _ = check_reflection_asymmetric(ExperimentConfig())
        assert not passed
        assert "spaces.reflection_asymmetric" in EXPECTED_FAILURES

    def test_structural_checks(self):
        """Lattice, associativity and modulation checks pass and are registered"""
        config = ExperimentConfig()
        for check in (
            check_lattice_monotone,
            check_algebra_associativity,
            check_modulation_identity,
        ):
            passed, detail = check(config)
            assert passed, detail
        for name in (
            "spaces.lattice_monotone",
            "boyd.submultiplicative",
            "laurent.algebra_associativity",
            "laurent.modulation_identity",
        ):
            assert name in CHECKS

    def test_acceptance_scale(self):
        """The l2 acceptance check runs at the configured size by default"""
        config = ExperimentConfig()
        assert config.acceptance_n == 2048
        assert config.acceptance_tolerance == 0.02

    @pytest.mark.slow
    def test_full_suite(self):
        """Every check passes and the injected check is an expected failure"""
        summary = run_verification_suite(
            ExperimentConfig(inject_asymmetric=True, threads=4)
        )
        statuses = {r.name: r.status for r in summary.results}
        assert statuses["spaces.reflection_asymmetric"] == EXPECTED_FAIL
        assert summary.all_passed, [r.name for r in summary.failures()]


if __name__ == "__main__":
    pytest.main([__file__])
