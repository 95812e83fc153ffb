"""
Dilation operators and Boyd index estimation

E_j keeps every j-th entry of a nonincreasing sequence and D_j repeats each
entry j times. H(j) = ||E_j|| and K(j) = ||D_j|| are estimated over a family
of decreasing candidates; the Boyd indices follow from log-log regressions on
the tail of the dyadic schedule.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from laurent_lab.errors import DiagnosticError, DomainError
from laurent_lab.spaces import LEBESGUE, SpaceSpec, dual_spec, norm_of_magnitudes

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 2**16
DEFAULT_J_MAX = 1024
DEFAULT_FIT_POINTS = 4
MIN_FIT_POINTS = 3
RANDOM_CANDIDATES = 8
GEOMETRIC_RATIOS = (0.5, 0.9, 0.99, 0.999)
POWER_DECAYS = (0.25, 0.5, 1.0)
INDEX_TOLERANCE = 0.05


class DecreasingSequence:
    """Finite nonnegative nonincreasing sequence g_1 >= g_2 >= ... >= 0."""

    __slots__ = ("values",)

    def __init__(self, values):
        arr = np.asarray(values, dtype=float).ravel()
        if not np.all(np.isfinite(arr)) or np.any(arr < 0):
            raise DomainError("Decreasing sequence needs finite nonnegative values")
        if np.any(np.diff(arr) > 0):
            raise DomainError("Sequence is not nonincreasing")
        self.values = arr

    def __len__(self) -> int:
        return int(self.values.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DecreasingSequence):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    __hash__ = None

    def __repr__(self) -> str:
        return f"DecreasingSequence({self.values.tolist()})"


def _check_factor(j: int):
    if int(j) != j or j < 1:
        raise DomainError(f"Dilation factor must be a positive integer, got {j}")


def dilate_down(j: int, g: DecreasingSequence) -> DecreasingSequence:
    """(E_j g)_k = g_{jk}."""
    _check_factor(j)
    return DecreasingSequence(g.values[int(j) - 1 :: int(j)])


def dilate_up(j: int, g: DecreasingSequence) -> DecreasingSequence:
    """(D_j g)_k = g_{ceil(k/j)}."""
    _check_factor(j)
    return DecreasingSequence(np.repeat(g.values, int(j)))


def _require_unweighted(spec: SpaceSpec):
    if spec.is_weighted:
        raise DomainError("Boyd indices are defined for unweighted spaces only")


def candidate_family(
    budget: int, seed: int = 0, j: int = 1, max_length: Optional[int] = None
) -> List[DecreasingSequence]:
    """Decreasing test sequences of length at most ``max_length`` (default: budget)."""
    if budget < 1:
        raise DomainError(f"Candidate budget must be >= 1, got {budget}")
    cap = max(1, min(budget, max_length or budget))

    lengths = set()
    n = 1
    while n <= cap:
        lengths.add(n)
        if j * n <= cap:
            lengths.add(j * n)
        n *= 2
    candidates = [DecreasingSequence(np.ones(n)) for n in sorted(lengths)]

    k = np.arange(cap, dtype=float)
    for r in GEOMETRIC_RATIOS:
        values = r**k
        candidates.append(DecreasingSequence(values[values > 1e-16]))
    for a in POWER_DECAYS:
        candidates.append(DecreasingSequence((k + 1.0) ** -a))

    rng = np.random.default_rng(seed)
    for _ in range(RANDOM_CANDIDATES):
        n = int(rng.integers(1, cap + 1))
        candidates.append(DecreasingSequence(np.sort(rng.exponential(size=n))[::-1]))
    return candidates


def dilation_ratios(
    spec: SpaceSpec,
    j: int,
    candidates: Sequence[DecreasingSequence],
    up: bool = False,
) -> np.ndarray:
    """||E_j g|| / ||g|| (or D_j with ``up=True``) for every candidate."""
    _require_unweighted(spec)
    _check_factor(j)
    op = dilate_up if up else dilate_down
    ratios = []
    for g in candidates:
        base = norm_of_magnitudes(spec, g.values)
        if base == 0:
            continue
        ratios.append(norm_of_magnitudes(spec, op(j, g).values) / base)
    return np.asarray(ratios)


def estimate_H(
    spec: SpaceSpec, j: int, budget: int = DEFAULT_BUDGET, seed: int = 0
) -> float:
    """Lower estimate of ||E_j||_{X -> X}."""
    ratios = dilation_ratios(spec, j, candidate_family(budget, seed, j), up=False)
    return float(ratios.max())


def estimate_K(
    spec: SpaceSpec, j: int, budget: int = DEFAULT_BUDGET, seed: int = 0
) -> float:
    """Lower estimate of ||D_j||_{X -> X}; candidates stay within budget / j."""
    family = candidate_family(budget, seed, j, max_length=max(1, budget // int(j)))
    ratios = dilation_ratios(spec, j, family, up=True)
    return float(ratios.max())


@dataclass
class BoydEstimate:
    alpha_hat: float
    beta_hat: float
    per_j: List[Tuple[int, float, float]]
    fit: Dict[str, object] = field(default_factory=dict)
    dual_alpha_hat: Optional[float] = None
    duality_residual: Optional[float] = None


def _tail_slope(js: np.ndarray, values: np.ndarray, sign: float) -> Tuple[float, float]:
    x = np.log(js)
    y = sign * np.log(values)
    slope, intercept = np.polyfit(x, y, 1)
    residual = y - (slope * x + intercept)
    spread = np.sum((y - y.mean()) ** 2)
    r2 = 1.0 - np.sum(residual**2) / spread if spread > 0 else 1.0
    return float(slope), float(r2)


def boyd_indices(
    spec: SpaceSpec,
    j_max: int = DEFAULT_J_MAX,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    fit_points: int = DEFAULT_FIT_POINTS,
    with_dual: bool = True,
) -> BoydEstimate:
    """Estimate (alpha_X, beta_X) from H and K on j = 1, 2, 4, ..., j_max.

    alpha is the slope of -log H(j) against log j and beta the slope of
    log K(j); both use the last ``fit_points`` dyadic j.
    """
    _require_unweighted(spec)
    if j_max < 4:
        raise DomainError(f"Boyd estimation needs j_max >= 4, got {j_max}")
    if fit_points < MIN_FIT_POINTS:
        raise DomainError(
            f"Boyd regression needs at least {MIN_FIT_POINTS} fit points, "
            f"got {fit_points}"
        )

    js = []
    j = 1
    while j <= j_max:
        js.append(j)
        j *= 2
    if len(js) < 3:
        raise DiagnosticError(f"Dyadic schedule up to {j_max} is too short to fit")

    per_j = []
    for j in js:
        h = estimate_H(spec, j, budget, seed)
        k = estimate_K(spec, j, budget, seed)
        per_j.append((j, h, k))
        logger.debug(f"{spec.label()}: H({j})={h:.6g}, K({j})={k:.6g}")

    tail = per_j[-min(fit_points, len(per_j)) :]
    tail_js = np.array([t[0] for t in tail], dtype=float)
    alpha, alpha_r2 = _tail_slope(tail_js, np.array([t[1] for t in tail]), -1.0)
    beta, beta_r2 = _tail_slope(tail_js, np.array([t[2] for t in tail]), 1.0)

    ordered = -INDEX_TOLERANCE <= alpha <= beta + INDEX_TOLERANCE
    if not ordered or beta > 1 + INDEX_TOLERANCE:
        logger.warning(
            f"Boyd estimates for {spec.label()} out of order: alpha={alpha:.4f}, "
            f"beta={beta:.4f}"
        )

    estimate = BoydEstimate(
        alpha_hat=alpha,
        beta_hat=beta,
        per_j=per_j,
        fit={
            "js_used": [int(j) for j in tail_js],
            "alpha_r2": alpha_r2,
            "beta_r2": beta_r2,
            "budget": budget,
        },
    )

    if with_dual and spec.kind == LEBESGUE and spec.p > 1:
        dual = boyd_indices(
            dual_spec(spec), j_max, budget, seed, fit_points, with_dual=False
        )
        estimate.dual_alpha_hat = dual.alpha_hat
        estimate.duality_residual = abs(dual.alpha_hat - (1.0 - beta))

    return estimate


def lebesgue_dilation_bound(p: float, j: int) -> float:
    """j^{-1/p}, the exact norm of E_j on decreasing l^p sequences."""
    _check_factor(j)
    return float(j) ** (-1.0 / p)


def expected_lebesgue_index(p: float) -> float:
    return 1.0 / p


def duality_pairs(specs: Sequence[SpaceSpec]) -> List[Tuple[int, int]]:
    """Index pairs (i, j) with specs[j] the Lebesgue associate of specs[i]."""
    pairs = []
    for i, spec in enumerate(specs):
        if spec.kind != LEBESGUE or spec.p <= 1:
            continue
        q = spec.p / (spec.p - 1.0)
        for j, other in enumerate(specs):
            if other.kind == LEBESGUE and math.isclose(other.p, q, rel_tol=1e-12):
                pairs.append((i, j))
    return pairs
