"""
Weight sweeps

Grid over a one-parameter weight family and the exponent p: scanned A_p
characteristic with its growth trace, the membership verdict and the best
reverse Hoelder exponent. The ``power`` family sweeps gamma in
(1 + |k|)^gamma; the ``exponent`` family sweeps eps in w^{1+eps} for the
configured base weight and adds a stability probe around (BASE_P, eps = 0).
"""

import logging
from typing import Optional

from experiments.config import ExperimentConfig, parse_weight
from experiments.grid import run_grid
from experiments.report import ESTIMATE, EXACT, LOWER, Report, ReportRow
from laurent_lab.errors import ConfigError, DomainError
from laurent_lab.weights import (
    HALF_LINE,
    Verdict,
    Weight,
    ap_membership_verdict,
    restrict_to_half_line,
    reverse_holder_probe,
    stability_probe,
)

logger = logging.getLogger(__name__)


def _family_member(config: ExperimentConfig, base: Optional[Weight], param: float):
    if config.family == "power":
        return Weight.power(param)
    return base.pow(1.0 + param)


def _half_line_view(w: Weight) -> Optional[Weight]:
    if w.domain == HALF_LINE:
        return w
    if w.symmetric:
        return restrict_to_half_line(w)
    return None


def run_weight_sweep(config: ExperimentConfig) -> Report:
    """Characteristic, verdict and reverse Hoelder columns per (param, p)."""
    try:
        base = None
        if config.family == "exponent":
            base = parse_weight(config.weight)
            if base is None:
                raise ConfigError("The exponent family needs a base WEIGHT literal")

        points = [(param, p) for param in config.params for p in config.p_grid]

        def measure(point):
            param, p = point
            w = _family_member(config, base, param)
            verdict = ap_membership_verdict(
                w,
                p,
                config.budgets,
                plateau_tolerance=config.plateau_tolerance,
                divergence_threshold=config.divergence_threshold,
                anchor_range=config.anchor_range,
                decay_ceiling=config.decay_ceiling,
            )
            half = _half_line_view(w)
            rh = None
            if half is not None and verdict.verdict != Verdict.NOT_IN_AP:
                try:
                    rh = reverse_holder_probe(
                        half,
                        p,
                        config.budgets[-1],
                        config.delta_grid,
                        cap=config.rh_cap,
                        anchor_range=config.anchor_range,
                        plateau_tolerance=config.plateau_tolerance,
                        divergence_threshold=config.divergence_threshold,
                        decay_ceiling=config.decay_ceiling,
                    )
                except DomainError as e:
                    logger.debug(f"Reverse Hoelder skipped for {w.label()}: {str(e)}")
            return w, verdict, rh

        results = run_grid(points, measure, config.threads, desc="Weight sweep")

        report = Report(
            title="weights",
            metadata={
                "family": config.family,
                "base_weight": config.weight,
                "budgets": list(config.budgets),
                "plateau_tolerance": config.plateau_tolerance,
                "divergence_threshold": config.divergence_threshold,
                "decay_ceiling": config.decay_ceiling,
            },
        )
        for point in points:
            w, verdict, rh = results[point]
            param, p = point
            row = ReportRow(
                params={
                    "family": config.family,
                    "param": param,
                    "p": p,
                    "weight": w.label(),
                }
            )
            row.measure("characteristic", verdict.characteristic, LOWER)
            row.measure("growth", verdict.growth, ESTIMATE)
            row.measure("decay_ratio", verdict.decay_ratio, ESTIMATE)
            row.measure("limit", verdict.limit, ESTIMATE)
            row.measure("verdict", verdict.verdict.value, ESTIMATE)
            row.measure("rh_delta", rh.best_delta if rh else None, ESTIMATE)
            row.measure("rh_constant", rh.best_constant if rh else None, LOWER)
            row.measure("trace", [[b, v] for b, v in verdict.trace], EXACT)
            report.add(row)
        report.sort("param", "p")

        if config.family == "exponent":
            try:
                stability = stability_probe(
                    base,
                    config.base_p,
                    config.params,
                    config.p_grid,
                    config.budgets[-1],
                    plateau_tolerance=config.plateau_tolerance,
                    divergence_threshold=config.divergence_threshold,
                    threads=config.threads,
                    decay_ceiling=config.decay_ceiling,
                )
                report.metadata["stability_box"] = stability.box_nonempty
                report.metadata["stability_matrix"] = stability.matrix.astype(
                    int
                ).tolist()
            except DomainError as e:
                logger.warning(f"Stability probe skipped: {str(e)}")
                report.metadata["stability_box"] = None

        logger.info(f"Weight sweep finished: {len(report.rows)} rows")
        return report

    except Exception as e:
        logger.error(f"Error in run_weight_sweep: {str(e)}")
        raise
