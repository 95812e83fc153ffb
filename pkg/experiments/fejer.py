"""
Fejer convergence experiment

For each degree n the deficit d_n = sigma_n(a) - a is measured in the sup
norm, in variation and through its coefficients, a witness lower bound of
||L(d_n)|| on the configured space is computed, and the interpolated
upper-bound shape

    C max{S^tp, S^tq} max{||d_n||_inf^(1-tp), ||d_n||_inf^(1-tq)}

with S = ||a||_inf + V(a) is reported next to it. The parameter tp solves
1/p = (1 - tp)/2 + tp/(p(1 + delta_1)); tq is the same for the dual exponent.
"""

import logging
from typing import Dict, Optional, Tuple

import numpy as np

from experiments.calibrate import CalibrationRecord
from experiments.config import ExperimentConfig, parse_symbol_literal, resolve_space
from experiments.grid import run_grid
from experiments.report import (
    CALIBRATED_UPPER,
    EXACT,
    LOWER,
    Report,
    ReportRow,
)
from laurent_lab.errors import ConfigError, DomainError
from laurent_lab.laurent import (
    default_coeff_radius,
    multiplier_norm_lower,
    multiplier_norm_upper,
)
from laurent_lab.symbols import TrigPoly, fejer_mean, sup_norm, total_variation

logger = logging.getLogger(__name__)

DEFAULT_DELTA = 0.1


def solve_theta(p: float, delta: float) -> float:
    """theta with 1/p = (1 - theta)/2 + theta/(p(1 + delta))."""
    denominator = 1.0 / (p * (1.0 + delta)) - 0.5
    if denominator == 0:
        raise ConfigError(f"delta={delta} makes p(1+delta)=2; theta is undefined")
    theta = (1.0 / p - 0.5) / denominator
    if not 0.0 <= theta < 1.0:
        raise ConfigError(
            f"delta={delta} gives theta={theta:.4f} outside [0, 1) for p={p}"
        )
    return theta


def default_deltas(p: float) -> Tuple[float, float, float, float]:
    """delta_1 pushes p away from 2, delta_3 does the same for q."""
    q = p / (p - 1.0)
    d1 = DEFAULT_DELTA if p >= 2 else -DEFAULT_DELTA
    d3 = DEFAULT_DELTA if q >= 2 else -DEFAULT_DELTA
    return d1, DEFAULT_DELTA, d3, DEFAULT_DELTA


def interpolation_shape(
    scale: float, deficit: float, theta_p: float, theta_q: float
) -> float:
    return max(scale**theta_p, scale**theta_q) * max(
        deficit ** (1.0 - theta_p), deficit ** (1.0 - theta_q)
    )


def _coefficient_deficit(a, n: int) -> Tuple[float, str]:
    if isinstance(a, TrigPoly):
        radius = max(n, a.degree)
        method = EXACT
    else:
        radius = default_coeff_radius(a, max(n, 8))
        method = LOWER
    k = np.arange(-radius, radius + 1)
    damping = np.where(np.abs(k) <= n, np.abs(k) / (n + 1.0), 1.0)
    return float(np.sum(damping * np.abs(a.coefficients(radius)))), method


def run_fejer_convergence(
    config: ExperimentConfig, calibration: Optional[CalibrationRecord] = None
) -> Report:
    """Deficit columns, interpolated upper shape and lower bounds per degree n."""
    try:
        a = parse_symbol_literal(config.symbol)
        if not a.is_continuous:
            raise DomainError(
                f"{config.symbol} is discontinuous; the Fejer convergence estimate "
                "needs a continuous symbol of bounded variation"
            )
        spec = resolve_space(config.space, config.weight)
        p = spec.exponent
        if not p > 1:
            raise ConfigError("Fejer convergence needs an exponent p > 1")
        q = p / (p - 1.0)

        deltas = config.deltas or default_deltas(p)
        theta_p = solve_theta(p, deltas[0])
        theta_q = solve_theta(q, deltas[2])

        scale = sup_norm(a) + total_variation(a)
        N = config.section_schedule[-1]
        degrees = list(config.fejer_degrees)
        if calibration is None and config.calibration:
            calibration = CalibrationRecord.load(config.calibration)
        constants = calibration.constants() if calibration is not None else None

        logger.info(
            f"Fejer convergence for {config.symbol} on {spec.label()}: "
            f"theta_p={theta_p:.4f}, theta_q={theta_q:.4f}, N={N}"
        )

        def measure(index_and_n):
            index, n = index_and_n
            deficit = fejer_mean(a, n) - a
            sup_deficit = sup_norm(deficit)
            coeff_deficit, coeff_method = _coefficient_deficit(a, n)
            lower = multiplier_norm_lower(
                deficit,
                spec,
                N,
                restarts=config.restarts,
                iterations=config.iterations,
                seed=config.seed + index,
            )
            stechkin = None
            if constants is not None:
                stechkin = multiplier_norm_upper(deficit, spec, calibration=constants)
            return {
                "sup": sup_deficit,
                "variation": total_variation(deficit),
                "coefficients": (coeff_deficit, coeff_method),
                "shape": interpolation_shape(scale, sup_deficit, theta_p, theta_q),
                "lower": lower.lower,
                "stechkin": stechkin.upper if stechkin is not None else None,
            }

        results: Dict = run_grid(
            list(enumerate(degrees)), measure, config.threads, desc="Fejer degrees"
        )

        constant_source = "configured"
        constant = config.fejer_constant
        if constant is None:
            ratios = [
                r["lower"] / r["shape"] for r in results.values() if r["shape"] > 0
            ]
            constant = max(ratios, default=1.0)
            constant_source = "self-calibrated"

        report = Report(
            title="fejer",
            metadata={
                "symbol": config.symbol,
                "space": spec.label(),
                "N": N,
                "theta_p": theta_p,
                "theta_q": theta_q,
                "deltas": list(deltas),
                "constant": constant,
                "constant_source": constant_source,
                "seed": config.seed,
            },
        )

        for index, n in enumerate(degrees):
            r = results[(index, n)]
            upper = constant * r["shape"]
            row = ReportRow(params={"n": n})
            row.measure("sup_deficit", r["sup"], EXACT)
            row.measure("variation_deficit", r["variation"], EXACT)
            row.measure("coefficient_deficit", *r["coefficients"])
            row.measure("interpolated_upper", upper, CALIBRATED_UPPER)
            if r["stechkin"] is not None:
                row.measure("stechkin_upper", r["stechkin"], CALIBRATED_UPPER)
            row.measure("multiplier_lower", r["lower"], LOWER)
            report.add(row)

            bounds = [upper] + ([r["stechkin"]] if r["stechkin"] is not None else [])
            if r["lower"] > min(bounds) * (1.0 + config.tolerance) + config.tolerance:
                report.passed = False
                logger.warning(
                    f"Regression guard: lower {r['lower']:.6g} exceeds calibrated "
                    f"upper {min(bounds):.6g} at n={n}"
                )

        report.sort("n")
        logger.info(f"Fejer convergence finished: {len(report.rows)} rows")
        return report

    except Exception as e:
        logger.error(f"Error in run_fejer_convergence: {str(e)}")
        raise
