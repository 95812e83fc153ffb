"""
Unit tests for sequences and rearrangement-invariant norms
"""

import itertools
import math

import numpy as np
import pytest

from laurent_lab.bounds import HOLDER_DUAL
from laurent_lab.errors import DomainError, UnsupportedError
from laurent_lab.spaces import (
    YOUNG_LOG_POWER,
    YOUNG_PIECEWISE,
    YOUNG_POWER,
    FiniteSequence,
    SpaceSpec,
    YoungFunctionSpec,
    associate_norm_estimate,
    associate_reflection_check,
    calderon_product_norm_estimate,
    decreasing_rearrangement,
    distribution_function,
    dual_spec,
    lozanovskii_check,
    minkowski_check,
    norm_by_duality,
    reflect,
    reflection_invariance_check,
    space_norm,
)
from laurent_lab.weights import HALF_LINE, Weight


def random_sequence(seed, length=10, offset=-4):
    rng = np.random.default_rng(seed)
    values = rng.normal(size=length) + 1j * rng.normal(size=length)
    return FiniteSequence(values, offset)


class TestFiniteSequence:
    """Test cases for finitely supported sequences"""

    def test_zeros_are_stripped(self):
        """Leading and trailing zeros do not change the stored window"""
        f = FiniteSequence([0, 0, 1, 2, 0], offset=-2)
        assert f.support == (0, 1)
        assert f[0] == 1
        assert f[5] == 0

    def test_zero_sequence(self):
        """The zero sequence has no support"""
        assert FiniteSequence([0, 0]).is_zero
        assert FiniteSequence.zero().support is None

    def test_arithmetic(self):
        """Sums and scalar multiples act entrywise"""
        f = FiniteSequence.from_mapping({-1: 1.0, 2: 3.0})
        g = FiniteSequence.unit(2, -3.0)
        assert f + g == FiniteSequence.unit(-1)
        assert (f * 2).support == (-1, 2)
        assert f - f == FiniteSequence.zero()

    def test_non_finite_rejected(self):
        """Non-finite entries are a domain error"""
        with pytest.raises(DomainError):
            FiniteSequence([1.0, np.inf])

    def test_reflect(self):
        """(Rf)_k = f_{-k}"""
        f = FiniteSequence([1.0, 2.0, 3.0], offset=1)
        r = reflect(f)
        assert r.support == (-3, -1)
        assert r[-1] == 1.0 and r[-3] == 3.0
        assert reflect(r) == f

    def test_rearrangement_and_distribution(self):
        """Decreasing rearrangement and distribution function"""
        f = FiniteSequence([1.0, -3.0, 0.0, 2.0])
        np.testing.assert_allclose(decreasing_rearrangement(f), [3.0, 2.0, 1.0])
        assert distribution_function(f, 1.5) == 2
        assert distribution_function(f, 0.0) == 3

    def test_rearrangement_matches_brute_force(self):
        """f*_n is the largest m with n entries of modulus >= m"""
        for seed in range(4):
            mask = np.array([1, 0, 1, 1, 0, 1, 1])
            f = FiniteSequence(random_sequence(seed, length=7).values * mask)
            magnitudes = [abs(v) for v in f.values]
            expected = []
            for n in range(1, 1 + sum(m > 0 for m in magnitudes)):
                expected.append(
                    max(min(subset) for subset in itertools.combinations(magnitudes, n))
                )
            np.testing.assert_allclose(decreasing_rearrangement(f), expected, rtol=0)
            for lam in [0.0, 0.5] + magnitudes:
                count = sum(1 for m in magnitudes if m > lam)
                assert distribution_function(f, lam) == count


class TestNorms:
    """Test cases for Lebesgue, Lorentz and Orlicz norms"""

    def test_lebesgue(self):
        """||(3, 4)||_2 = 5"""
        f = FiniteSequence([3.0, 4.0], offset=7)
        assert space_norm(SpaceSpec.lebesgue(2), f) == pytest.approx(5.0)
        assert space_norm(SpaceSpec.lebesgue(1), f) == pytest.approx(7.0)

    def test_lorentz_closed_form(self):
        """||(1, 1)||_{2,1} = 1 + 2^{-1/2}"""
        f = FiniteSequence([1.0, 1.0])
        value = space_norm(SpaceSpec.lorentz(2, 1), f)
        assert value == pytest.approx(1.0 + 2**-0.5)

    def test_lorentz_diagonal_is_lebesgue(self):
        """L^{p,p} = l^p"""
        f = random_sequence(1)
        for p in (1.0, 1.5, 3.0):
            assert space_norm(SpaceSpec.lorentz(p, p), f) == pytest.approx(
                space_norm(SpaceSpec.lebesgue(p), f), rel=1e-12
            )

    def test_orlicz_power_is_lebesgue(self):
        """The Luxemburg norm of t^p is the l^p norm"""
        f = random_sequence(2)
        spec = SpaceSpec.orlicz(YoungFunctionSpec(YOUNG_POWER, 3.0))
        assert space_norm(spec, f) == pytest.approx(
            space_norm(SpaceSpec.lebesgue(3.0), f), rel=1e-10
        )

    def test_orlicz_modular_feasible(self):
        """The Luxemburg norm keeps the modular at most one"""
        f = random_sequence(3)
        spec = SpaceSpec.orlicz(YoungFunctionSpec(YOUNG_LOG_POWER, 2.0, s=1.0))
        lam = space_norm(spec, f)
        modular = float(np.sum(spec.phi(f.magnitudes() / lam)))
        assert 1 - 1e-9 <= modular <= 1.0

    def test_weighted_lebesgue(self):
        """||e_k||_{l^p(w)} = w_k"""
        spec = SpaceSpec.lebesgue(2.5, Weight.power(0.5))
        assert space_norm(spec, FiniteSequence.unit(3)) == pytest.approx(2.0)
        assert space_norm(spec, FiniteSequence.unit(-3)) == pytest.approx(2.0)

    def test_rearrangement_invariance(self):
        """Unweighted norms ignore permutations and shifts"""
        f = random_sequence(4)
        g = FiniteSequence(f.values[::-1], offset=f.offset + 11)
        for spec in (
            SpaceSpec.lorentz(3, 1.5),
            SpaceSpec.orlicz(YoungFunctionSpec(YOUNG_PIECEWISE, 1.5, p1=3.0)),
        ):
            assert space_norm(spec, f) == pytest.approx(space_norm(spec, g), rel=1e-12)

    def test_lattice_property(self):
        """|f| <= |g| pointwise implies ||f|| <= ||g||"""
        rng = np.random.default_rng(12)
        specs = [
            SpaceSpec.lebesgue(1.5, Weight.power(0.3)),
            SpaceSpec.lorentz(3, 1.5, Weight.power(-0.2)),
            SpaceSpec.orlicz(YoungFunctionSpec(YOUNG_LOG_POWER, 2.0, s=1.0)),
        ]
        for seed in range(5):
            f = random_sequence(seed)
            g = f + FiniteSequence(rng.uniform(0.1, 1, 3), offset=f.offset - 3)
            growth = 1 + rng.uniform(0, 1, g.values.size)
            g = FiniteSequence(g.values * growth, g.offset)
            for spec in specs:
                assert space_norm(spec, f) <= space_norm(spec, g) * (1 + 1e-12)

    def test_triangle_inequality(self):
        """||f + g|| <= ||f|| + ||g||"""
        f, g = random_sequence(5), random_sequence(6, offset=-1)
        spec = SpaceSpec.lorentz(4, 2, Weight.power(0.3))
        assert space_norm(spec, f + g) <= space_norm(spec, f) + space_norm(spec, g)

    def test_invalid_parameters(self):
        """Out-of-range exponents and non-convex Young functions"""
        with pytest.raises(DomainError):
            SpaceSpec.lebesgue(0.5)
        with pytest.raises(DomainError):
            SpaceSpec.lorentz(2, 3)
        with pytest.raises(DomainError):
            YoungFunctionSpec(YOUNG_PIECEWISE, 3.0, p1=2.0)

    def test_labels(self):
        """Labels are the literal grammar"""
        spec = SpaceSpec.lebesgue(2, Weight.power(0.3))
        assert spec.label() == "lebesgue(2)[power(0.3)]"
        assert SpaceSpec.lorentz(3, 1.5).label() == "lorentz(3,1.5)"


class TestAssociateSpaces:
    """Test cases for associate norms and duality"""

    def test_dual_spec(self):
        """(l^3(w))' = l^{3/2}(w^{-1})"""
        dual = dual_spec(SpaceSpec.lebesgue(3, Weight.power(0.2)))
        assert dual.p == pytest.approx(1.5)
        assert dual.weight.values(np.array([4]))[0] == pytest.approx(5**-0.2)

    def test_dual_spec_unsupported(self):
        """Only Lebesgue spaces have a closed-form associate"""
        with pytest.raises(UnsupportedError):
            dual_spec(SpaceSpec.lorentz(3, 2))

    def test_associate_estimate_is_exact_for_lebesgue(self):
        """The Hoelder extremal is among the candidates"""
        f = random_sequence(7)
        spec = SpaceSpec.lebesgue(3.0, Weight.power(0.25))
        estimate = associate_norm_estimate(spec, f, 8, 32)
        assert estimate.upper_method == HOLDER_DUAL
        assert estimate.lower == pytest.approx(estimate.upper, rel=1e-9)
        assert estimate.is_consistent()

    def test_support_radius_must_cover(self):
        """A radius smaller than the support is rejected"""
        with pytest.raises(DomainError):
            associate_norm_estimate(SpaceSpec.lebesgue(2), random_sequence(8), 2, 8)

    def test_norm_by_duality(self):
        """||f||_X is recovered from the associate space"""
        f = random_sequence(9)
        estimate = norm_by_duality(SpaceSpec.lebesgue(1.5), f, 32)
        assert estimate.lower == pytest.approx(estimate.upper, rel=1e-9)


class TestReflection:
    """Test cases for reflection invariance"""

    def test_symmetric_weight_passes(self):
        """Symmetric weights give reflection-invariant norms"""
        report = reflection_invariance_check(
            SpaceSpec.lebesgue(2, Weight.power(0.3)), samples=10
        )
        assert report.passed
        assert report.max_discrepancy <= 1e-12

    def test_asymmetric_weight_fails(self):
        """w = (0.5, 1, 2) on {-1, 0, 1} distinguishes e_1 from e_{-1}"""
        report = reflection_invariance_check(
            SpaceSpec.lebesgue(2, Weight.from_table([0.5, 1.0, 2.0])), samples=5
        )
        assert not report.passed
        assert report.max_discrepancy == pytest.approx(0.75)

    def test_half_line_weight_rejected(self):
        """Reflection is undefined on the half line"""
        with pytest.raises(DomainError):
            reflection_invariance_check(
                SpaceSpec.lebesgue(2, Weight.power(0.3, HALF_LINE)), samples=1
            )

    def test_associate_reflection(self):
        """Associate norms of symmetric spaces are reflection invariant"""
        report = associate_reflection_check(
            SpaceSpec.lorentz(3, 2, Weight.power(0.2)), samples=4, search_budget=24
        )
        assert report.passed


class TestInterpolation:
    """Test cases for Calderon products and Minkowski's inequality"""

    def test_lozanovskii(self):
        """X^{1/2} (X')^{1/2} = l^2; (1, 1, 1) has norm sqrt(3)"""
        f = FiniteSequence([1.0, 1.0, 1.0])
        assert lozanovskii_check(SpaceSpec.lebesgue(4), f) == pytest.approx(
            0.0, abs=1e-9
        )

    def test_lebesgue_pair(self):
        """(l^1)^{1/2} (l^3)^{1/2} = l^{3/2}"""
        f = random_sequence(10)
        estimate = calderon_product_norm_estimate(
            SpaceSpec.lebesgue(1), SpaceSpec.lebesgue(3), 0.5, f, 32
        )
        target = space_norm(SpaceSpec.lebesgue(1.5), f)
        assert estimate.upper == pytest.approx(target, rel=1e-6)
        assert estimate.lower <= estimate.upper

    def test_diagonal_product(self):
        """X^{1-theta} X^theta = X"""
        f = random_sequence(11)
        spec = SpaceSpec.lorentz(3, 1.5)
        estimate = calderon_product_norm_estimate(spec, spec, 0.3, f, 32)
        assert estimate.upper == pytest.approx(space_norm(spec, f), rel=1e-9)

    def test_theta_range(self):
        """theta must lie strictly inside (0, 1)"""
        spec = SpaceSpec.lebesgue(2)
        with pytest.raises(DomainError):
            calderon_product_norm_estimate(spec, spec, 1.0, random_sequence(12), 8)

    def test_minkowski(self):
        """Minkowski's integral inequality for discrete measures"""
        report = minkowski_check(SpaceSpec.lorentz(3, 1.5), samples=5)
        assert report.passed
        assert report.max_ratio <= 1.0 + 1e-12
        assert math.isfinite(report.max_ratio)


if __name__ == "__main__":
    pytest.main([__file__])
