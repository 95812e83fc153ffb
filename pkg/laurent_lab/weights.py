"""
Discrete Muckenhoupt weight machinery.

Weights are positive sequences on Z or Z_+. Every moment sum is evaluated in
log-sum-exp form so that large |gamma * p| products do not overflow. The A_p
supremum is replaced by a maximum over a deterministic family of intervals
(exhaustive short intervals near the origin plus dyadic intervals around a
ladder of anchors); the result is a certified lower bound of [w]_{A_p}.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import logsumexp

from laurent_lab.errors import DomainError

logger = logging.getLogger(__name__)

FULL_LINE = "full"
HALF_LINE = "half"

CONSTANT = "constant"
POWER = "power"
TABLE = "table"
EXPONENTIATED = "exponentiated"

DEFAULT_ANCHOR_RANGE = 64
EXHAUSTIVE_LENGTH = 64
DEFAULT_PLATEAU_TOLERANCE = 0.01
DEFAULT_DIVERGENCE_THRESHOLD = 0.10
DEFAULT_DECAY_CEILING = 0.96
VERDICT_BUDGET_COUNT = 5
DEFAULT_RH_CAP = 10.0
MIDPOINT_THETAS = (0.25, 0.5, 0.75)


@dataclass(frozen=True)
class Weight:
    """Positive sequence on Z (``domain="full"``) or Z_+ (``domain="half"``).

    Kinds:
      constant       w_k = c
      power          w_k = (1 + |k|)^gamma
      table          explicit values; a half-line table holds w_0..w_{m-1},
                     a full-line table holds w_{-m}..w_m; both are extended
                     by their boundary values
      exponentiated  w_k = base_k ** exponent (evaluated lazily)

    ``scale`` multiplies any kind.
    """

    kind: str
    domain: str = FULL_LINE
    c: float = 1.0
    gamma: float = 0.0
    table: Tuple[float, ...] = ()
    base: Optional["Weight"] = None
    exponent: float = 1.0
    scale: float = 1.0

    def __post_init__(self):
        if self.domain not in (FULL_LINE, HALF_LINE):
            raise DomainError(f"Unknown weight domain: {self.domain}")
        if not (self.scale > 0 and math.isfinite(self.scale)):
            raise DomainError(f"Weight scale must be positive, got {self.scale}")
        if self.kind == CONSTANT:
            if not (self.c > 0 and math.isfinite(self.c)):
                raise DomainError(f"Constant weight must be positive, got {self.c}")
        elif self.kind == POWER:
            if not math.isfinite(self.gamma):
                raise DomainError("Power weight exponent must be finite")
        elif self.kind == TABLE:
            values = np.asarray(self.table, dtype=float)
            if values.size == 0 or not np.all(np.isfinite(values)) or np.any(
                values <= 0
            ):
                raise DomainError("Table weight needs finite positive values")
            if self.domain == FULL_LINE and values.size % 2 == 0:
                raise DomainError(
                    "Full-line table weight needs an odd number of values "
                    "(a symmetric block -m..m)"
                )
        elif self.kind == EXPONENTIATED:
            if self.base is None:
                raise DomainError("Exponentiated weight needs a base weight")
            if self.base.domain != self.domain:
                raise DomainError("Exponentiated weight must share its base domain")
            if not math.isfinite(self.exponent):
                raise DomainError("Weight exponent must be finite")
        else:
            raise DomainError(f"Unknown weight kind: {self.kind}")

    # construction helpers

    @classmethod
    def constant(cls, c: float = 1.0, domain: str = FULL_LINE) -> "Weight":
        return cls(kind=CONSTANT, domain=domain, c=float(c))

    @classmethod
    def power(cls, gamma: float, domain: str = FULL_LINE) -> "Weight":
        return cls(kind=POWER, domain=domain, gamma=float(gamma))

    @classmethod
    def from_table(cls, values: Iterable[float], domain: str = FULL_LINE) -> "Weight":
        return cls(kind=TABLE, domain=domain, table=tuple(float(v) for v in values))

    def pow(self, exponent: float) -> "Weight":
        """Return w ** exponent."""
        return Weight(
            kind=EXPONENTIATED, domain=self.domain, base=self, exponent=float(exponent)
        )

    def scaled(self, factor: float) -> "Weight":
        """Return factor * w."""
        return Weight(
            kind=self.kind,
            domain=self.domain,
            c=self.c,
            gamma=self.gamma,
            table=self.table,
            base=self.base,
            exponent=self.exponent,
            scale=self.scale * float(factor),
        )

    # evaluation

    def log_values(self, k) -> np.ndarray:
        """log w_k for an integer array k."""
        k = np.asarray(k, dtype=np.int64)
        if self.domain == HALF_LINE and np.any(k < 0):
            raise DomainError("Half-line weight evaluated at a negative index")

        if self.kind == CONSTANT:
            out = np.full(k.shape, math.log(self.c))
        elif self.kind == POWER:
            out = self.gamma * np.log1p(np.abs(k).astype(float))
        elif self.kind == TABLE:
            logs = np.log(np.asarray(self.table, dtype=float))
            if self.domain == HALF_LINE:
                out = logs[np.minimum(k, logs.size - 1)]
            else:
                m = (logs.size - 1) // 2
                out = logs[np.clip(k, -m, m) + m]
        else:
            out = self.exponent * self.base.log_values(k)

        if self.scale != 1.0:
            out = out + math.log(self.scale)
        return out

    def values(self, k) -> np.ndarray:
        """w_k for an integer array k."""
        return np.exp(self.log_values(k))

    def __call__(self, k):
        return self.values(k)

    @property
    def symmetric(self) -> bool:
        """True iff w_{-k} = w_k for every k (full-line weights only)."""
        if self.domain != FULL_LINE:
            return False
        if self.kind in (CONSTANT, POWER):
            return True
        if self.kind == TABLE:
            return tuple(reversed(self.table)) == tuple(self.table)
        return self.base.symmetric

    @property
    def is_constant(self) -> bool:
        if self.kind == CONSTANT:
            return True
        if self.kind == POWER:
            return self.gamma == 0.0
        if self.kind == TABLE:
            return len(set(self.table)) == 1
        return self.exponent == 0.0 or self.base.is_constant

    def label(self) -> str:
        """Literal form of the weight (parseable for every kind but scaled ones)."""
        if self.kind == CONSTANT:
            text = f"const({self.c:g})"
        elif self.kind == POWER:
            suffix = ",half" if self.domain == HALF_LINE else ""
            text = f"power({self.gamma:g}{suffix})"
        elif self.kind == TABLE:
            head = "halftable" if self.domain == HALF_LINE else "table"
            text = f"{head}({','.join(f'{v:g}' for v in self.table)})"
        else:
            text = f"{self.base.label()}^{self.exponent:g}"
        if self.scale != 1.0:
            text = f"{self.scale:g}*{text}"
        return text


def symmetric_extend(w: Weight) -> Weight:
    """Even extension v_n := w_{|n|} of a half-line weight."""
    if w.domain != HALF_LINE:
        raise DomainError("symmetric_extend expects a half-line weight")

    if w.kind == CONSTANT:
        extended = Weight.constant(w.c, FULL_LINE)
    elif w.kind == POWER:
        extended = Weight.power(w.gamma, FULL_LINE)
    elif w.kind == TABLE:
        values = list(w.table)
        extended = Weight.from_table(list(reversed(values[1:])) + values, FULL_LINE)
    else:
        extended = symmetric_extend(w.base).pow(w.exponent)

    return extended.scaled(w.scale) if w.scale != 1.0 else extended


def restrict_to_half_line(w: Weight) -> Weight:
    """Restriction of a symmetric full-line weight to Z_+."""
    if w.domain == HALF_LINE:
        return w
    if not w.symmetric:
        raise DomainError("Only symmetric full-line weights can be restricted")

    if w.kind == CONSTANT:
        restricted = Weight.constant(w.c, HALF_LINE)
    elif w.kind == POWER:
        restricted = Weight.power(w.gamma, HALF_LINE)
    elif w.kind == TABLE:
        m = (len(w.table) - 1) // 2
        restricted = Weight.from_table(w.table[m:], HALF_LINE)
    else:
        restricted = restrict_to_half_line(w.base).pow(w.exponent)

    return restricted.scaled(w.scale) if w.scale != 1.0 else restricted


# interval scans


@dataclass(frozen=True)
class ScannedInterval:
    start: int
    length: int
    # smallest budget whose scan contains this interval
    budget: int

    @property
    def end(self) -> int:
        return self.start + self.length - 1


def _dyadic_ceil(n: int) -> int:
    return 1 << max(0, int(n - 1).bit_length())


def _dyadic_floor(n: int) -> int:
    return 1 << (int(n).bit_length() - 1)


def scan_intervals(
    domain: str,
    budget: int,
    anchor_range: int = DEFAULT_ANCHOR_RANGE,
    exhaustive_length: int = EXHAUSTIVE_LENGTH,
) -> List[ScannedInterval]:
    """Intervals examined for a given budget.

    All intervals of length <= ``exhaustive_length`` with endpoints in
    [-anchor_range, anchor_range], plus dyadic lengths 2^r <= budget placed to
    start at, end at, or be centred on each anchor of the ladder
    {0} u {+-b/2 : b dyadic, b <= budget}. The family grows monotonically with
    the budget.
    """
    if budget < 1:
        raise DomainError(f"Scan budget must be >= 1, got {budget}")

    found: Dict[Tuple[int, int], int] = {}

    def add(start: int, length: int, intro: int):
        if domain == HALF_LINE and start < 0:
            return
        key = (start, length)
        if key not in found or intro < found[key]:
            found[key] = intro

    low = 0 if domain == HALF_LINE else -anchor_range
    for length in range(1, min(exhaustive_length, budget) + 1):
        intro = min(_dyadic_ceil(length), budget)
        for start in range(low, anchor_range - length + 2):
            add(start, length, intro)

    top = _dyadic_floor(budget)
    length = 1
    while length <= top:
        b = 1
        while b <= top:
            anchors = {0} if b == 1 else {0, b // 2, -(b // 2)}
            for anchor in anchors:
                for start in (anchor, anchor - length + 1, anchor - length // 2):
                    add(start, length, max(length, b))
            b *= 2
        length *= 2

    return [
        ScannedInterval(start, length, intro)
        for (start, length), intro in sorted(found.items())
    ]


def _log_moments(
    w: Weight, intervals: Sequence[ScannedInterval], exponents: Sequence[float]
) -> np.ndarray:
    """log sum_{k in J} w_k^e for every interval J and exponent e.

    Returns an array of shape (len(intervals), len(exponents)).
    """
    out = np.empty((len(intervals), len(exponents)))
    if not intervals:
        return out

    lo = min(iv.start for iv in intervals)
    hi = max(iv.end for iv in intervals)
    log_w = w.log_values(np.arange(lo, hi + 1))
    exps = np.asarray(exponents, dtype=float)

    by_length: Dict[int, List[int]] = {}
    for idx, iv in enumerate(intervals):
        by_length.setdefault(iv.length, []).append(idx)

    for length, members in by_length.items():
        starts = np.array([intervals[i].start - lo for i in members])
        windows = log_w[starts[:, None] + np.arange(length)[None, :]]
        for col, e in enumerate(exps):
            out[members, col] = logsumexp(e * windows, axis=1)
    return out


def _dual_exponent(p: float) -> float:
    return p / (p - 1.0)


def _log_ap_values(
    w: Weight, p: float, intervals: Sequence[ScannedInterval]
) -> np.ndarray:
    q = _dual_exponent(p)
    moments = _log_moments(w, intervals, (p, -q))
    lengths = np.log([iv.length for iv in intervals])
    return moments[:, 0] / p + moments[:, 1] / q - lengths


@dataclass
class ApCharacteristic:
    """Scanned lower bound for [w]_{A_p}."""

    value: float
    p: float
    budget: int
    attaining_interval: Tuple[int, int]
    growth_trace: List[Tuple[int, float]] = field(default_factory=list)


def _trace_budgets(budget: int) -> List[int]:
    budgets = []
    b = 1
    while b <= budget:
        budgets.append(b)
        b *= 2
    if budgets[-1] != budget:
        budgets.append(budget)
    return budgets


def ap_characteristic(
    w: Weight,
    p: float,
    budget: int,
    anchor_range: int = DEFAULT_ANCHOR_RANGE,
    trace_budgets: Optional[Sequence[int]] = None,
) -> ApCharacteristic:
    """Maximum of (1/m(J)) (sum w^p)^{1/p} (sum w^{-q})^{1/q} over scanned J."""
    if not p > 1 or not math.isfinite(p):
        raise DomainError(f"A_p characteristic needs 1 < p < inf, got {p}")
    if budget < 1:
        raise DomainError(f"Budget must be >= 1, got {budget}")

    intervals = scan_intervals(w.domain, budget, anchor_range)
    log_values = _log_ap_values(w, p, intervals)

    best = int(np.argmax(log_values))
    attaining = intervals[best]

    budgets = list(trace_budgets) if trace_budgets else _trace_budgets(budget)
    intro = np.array([iv.budget for iv in intervals])
    trace = []
    for b in budgets:
        mask = intro <= b
        trace.append((int(b), float(np.exp(log_values[mask].max()))))

    logger.debug(
        f"A_{p:g} scan of {w.label()}: {len(intervals)} intervals, "
        f"max at [{attaining.start}, {attaining.end}]"
    )

    return ApCharacteristic(
        value=float(np.exp(log_values[best])),
        p=float(p),
        budget=int(budget),
        attaining_interval=(attaining.start, attaining.end),
        growth_trace=trace,
    )


def interval_characteristic(w: Weight, p: float, start: int, end: int) -> float:
    """A_p averaged product on the single interval {start, ..., end}."""
    if end < start:
        raise DomainError("Interval end precedes its start")
    interval = ScannedInterval(start, end - start + 1, 1)
    return float(np.exp(_log_ap_values(w, p, [interval])[0]))


def interval_power_mean(w: Weight, start: int, end: int, r: float) -> float:
    """((1/m) sum_{k=start}^{end} w_k^r)^{1/r}; the geometric mean for r = 0."""
    if end < start:
        raise DomainError("Interval end precedes its start")
    log_w = w.log_values(np.arange(start, end + 1))
    if r == 0:
        return float(np.exp(log_w.mean()))
    return float(np.exp((logsumexp(r * log_w) - math.log(log_w.size)) / r))


# membership verdicts


class Verdict(str, Enum):
    IN_AP = "InApEvidence"
    NOT_IN_AP = "NotInApEvidence"
    INCONCLUSIVE = "Inconclusive"


@dataclass
class MembershipVerdict:
    verdict: Verdict
    p: float
    growth: float
    trace: List[Tuple[int, float]]
    # per-doubling ratio of successive increments of [w]^s, s = max(p, p')
    decay_ratio: Optional[float] = None
    limit: Optional[float] = None

    @property
    def characteristic(self) -> float:
        return self.trace[-1][1]


def dyadic_budgets(max_budget: int, count: int = 5) -> List[int]:
    """The last ``count`` dyadic budgets ending at ``max_budget``."""
    top = _dyadic_floor(max_budget)
    budgets = []
    b = top
    while b >= 1 and len(budgets) < count:
        budgets.append(b)
        b //= 2
    return sorted(budgets)


def increment_decay(
    trace: Sequence[Tuple[int, float]], power: float
) -> Tuple[Optional[float], Optional[float]]:
    """Decay ratio and extrapolated limit of a characteristic trace.

    The trace values raised to ``power`` are modelled as u(b) = A + B b^{-s}.
    Increments of u then shrink by 2^{-s} per doubling of the budget; the
    ratio is fitted over every positive increment. When it is below 1 the
    geometric tail is summed to extrapolate the limit of the trace.
    """
    budgets = np.array([b for b, _ in trace], dtype=float)
    u = np.array([v for _, v in trace], dtype=float) ** power
    steps = np.diff(u)
    spans = np.diff(np.log2(budgets))
    scale = max(float(u[-1]), 1.0)
    if steps.size < 2 or steps[-1] <= 1e-12 * scale:
        return None, None

    positive = steps > 1e-12 * scale
    if positive.sum() < 2:
        return None, None
    x = np.log2(budgets[:-1])[positive]
    y = np.log2(steps[positive] / spans[positive])
    slope = float(np.polyfit(x, y, 1)[0])
    ratio = 2.0**slope

    if ratio >= 1.0:
        return ratio, None
    tail = float(steps[-1]) * ratio / (1.0 - ratio)
    return ratio, float((u[-1] + tail) ** (1.0 / power))


def ap_membership_verdict(
    w: Weight,
    p: float,
    budgets: Sequence[int],
    plateau_tolerance: float = DEFAULT_PLATEAU_TOLERANCE,
    divergence_threshold: float = DEFAULT_DIVERGENCE_THRESHOLD,
    anchor_range: int = DEFAULT_ANCHOR_RANGE,
    decay_ceiling: float = DEFAULT_DECAY_CEILING,
) -> MembershipVerdict:
    """Classify the scanned characteristic trace over the given budgets.

    Growth below ``plateau_tolerance`` over the last doubling is In. Otherwise
    the increments of the trace decide: a fitted decay ratio at most
    ``decay_ceiling`` means the trace converges (In) and a ratio >= 1 means it
    does not (NotIn). Without a ratio, or with one between the ceiling and 1,
    growth above ``divergence_threshold`` is NotIn and anything else is
    Inconclusive. Budgets are expected to be dyadic.
    """
    budgets = [int(b) for b in budgets]
    if len(budgets) < 2:
        raise DomainError("Membership verdict needs at least two budgets")
    if any(b2 <= b1 for b1, b2 in zip(budgets, budgets[1:])):
        raise DomainError(f"Budgets must be strictly increasing: {budgets}")
    if not 0 < decay_ceiling < 1:
        raise DomainError(f"Decay ceiling must lie in (0, 1), got {decay_ceiling}")

    result = ap_characteristic(
        w, p, budgets[-1], anchor_range=anchor_range, trace_budgets=budgets
    )
    trace = result.growth_trace

    (b_prev, v_prev), (b_last, v_last) = trace[-2], trace[-1]
    doublings = math.log2(b_last / b_prev)
    growth = (v_last / v_prev) ** (1.0 / doublings) - 1.0
    ratio, limit = increment_decay(trace, max(p, _dual_exponent(p)))

    if growth < plateau_tolerance:
        verdict = Verdict.IN_AP
        limit = v_last if limit is None else limit
    elif ratio is not None and ratio <= decay_ceiling:
        verdict = Verdict.IN_AP
    elif ratio is not None and ratio >= 1.0:
        verdict = Verdict.NOT_IN_AP
    elif growth > divergence_threshold:
        verdict = Verdict.NOT_IN_AP
    else:
        verdict = Verdict.INCONCLUSIVE
        ratio_text = "n/a" if ratio is None else f"{ratio:.4f}"
        logger.warning(
            f"Inconclusive A_{p:g} verdict for {w.label()}: growth {growth:.4f} "
            f"per doubling, decay ratio {ratio_text}"
        )

    return MembershipVerdict(
        verdict=verdict,
        p=float(p),
        growth=growth,
        trace=trace,
        decay_ratio=ratio,
        limit=limit,
    )


# reverse Hoelder


@dataclass
class ReverseHolderReport:
    best_delta: Optional[float]
    best_constant: Optional[float]
    table: List[Tuple[float, float]]
    cap: float
    membership: Optional[MembershipVerdict] = None


def reverse_holder_probe(
    w: Weight,
    p: float,
    budget: int,
    delta_grid: Sequence[float],
    cap: float = DEFAULT_RH_CAP,
    anchor_range: int = DEFAULT_ANCHOR_RANGE,
    plateau_tolerance: float = DEFAULT_PLATEAU_TOLERANCE,
    divergence_threshold: float = DEFAULT_DIVERGENCE_THRESHOLD,
    decay_ceiling: float = DEFAULT_DECAY_CEILING,
) -> ReverseHolderReport:
    """Largest grid delta whose reverse Hoelder constant stays below ``cap``.

    For each delta the constant is the maximum over scanned dyadic intervals
    R of ((1/m) sum w^{p(1+delta)})^{1/(1+delta)} / ((1/m) sum w^p).

    The weight must first show A_p evidence; a NotIn verdict raises
    DomainError and the verdict is attached to the report.
    """
    if w.domain != HALF_LINE:
        raise DomainError("Reverse Hoelder probe expects a half-line weight")
    if not delta_grid:
        raise DomainError("Reverse Hoelder probe needs a nonempty delta grid")
    if any(d <= -1 for d in delta_grid):
        raise DomainError("Reverse Hoelder deltas must exceed -1")
    if not p > 1:
        raise DomainError(f"Reverse Hoelder probe needs p > 1, got {p}")

    membership = ap_membership_verdict(
        w,
        p,
        dyadic_budgets(budget, VERDICT_BUDGET_COUNT),
        plateau_tolerance=plateau_tolerance,
        divergence_threshold=divergence_threshold,
        anchor_range=anchor_range,
        decay_ceiling=decay_ceiling,
    )
    if membership.verdict == Verdict.NOT_IN_AP:
        raise DomainError(
            f"{w.label()} shows no A_{p:g} evidence at budget {budget}; "
            f"reverse Hoelder exponents need a weight in A_p"
        )

    intervals = [
        iv
        for iv in scan_intervals(HALF_LINE, budget, anchor_range)
        if iv.length >= 2 and iv.length & (iv.length - 1) == 0
    ]
    if not intervals:
        raise DomainError(f"No dyadic intervals of length >= 2 within budget {budget}")

    deltas = sorted(float(d) for d in delta_grid)
    moments = _log_moments(w, intervals, [p] + [p * (1.0 + d) for d in deltas])
    log_m = np.log([iv.length for iv in intervals])
    base = moments[:, 0] - log_m

    table = []
    for col, delta in enumerate(deltas, start=1):
        if delta == 0:
            table.append((delta, 1.0))
            continue
        ratio = (moments[:, col] - log_m) / (1.0 + delta) - base
        table.append((delta, float(np.exp(ratio.max()))))

    admissible = [(d, c) for d, c in table if c <= cap]
    best_delta, best_constant = (admissible[-1] if admissible else (None, None))
    return ReverseHolderReport(
        best_delta=best_delta,
        best_constant=best_constant,
        table=table,
        cap=cap,
        membership=membership,
    )


# convexity of Gamma


@dataclass
class MidpointCheck:
    first: Tuple[float, float]
    second: Tuple[float, float]
    theta: float
    lhs: float
    rhs: float

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs


@dataclass
class ConvexityReport:
    region: Dict[Tuple[float, float], Verdict]
    checks: List[MidpointCheck]

    @property
    def in_region(self) -> List[Tuple[float, float]]:
        return [pt for pt, v in self.region.items() if v == Verdict.IN_AP]

    @property
    def min_slack(self) -> float:
        return min((c.slack for c in self.checks), default=float("inf"))

    def all_hold(self, tolerance: float = 1e-12) -> bool:
        return all(c.slack >= -tolerance * max(1.0, c.rhs) for c in self.checks)


def convexity_region_probe(
    w: Weight,
    p_grid: Sequence[float],
    delta_grid: Sequence[float],
    budget: int,
    thetas: Sequence[float] = MIDPOINT_THETAS,
    plateau_tolerance: float = DEFAULT_PLATEAU_TOLERANCE,
    divergence_threshold: float = DEFAULT_DIVERGENCE_THRESHOLD,
    decay_ceiling: float = DEFAULT_DECAY_CEILING,
) -> ConvexityReport:
    """Sample Gamma = {(p, delta) : w^{delta/p} in A_p} and test its convexity bound."""
    if w.domain != HALF_LINE:
        raise DomainError("Convexity probe expects a half-line weight")
    if any(not p > 1 for p in p_grid):
        raise DomainError("Convexity probe needs every p > 1")

    cache: Dict[Tuple[float, float], float] = {}

    def characteristic(p: float, delta: float) -> float:
        key = (p, delta / p)
        if key not in cache:
            cache[key] = ap_characteristic(w.pow(delta / p), p, budget).value
        return cache[key]

    budgets = dyadic_budgets(budget, VERDICT_BUDGET_COUNT)
    region: Dict[Tuple[float, float], Verdict] = {}
    for p in p_grid:
        for delta in delta_grid:
            result = ap_membership_verdict(
                w.pow(delta / p),
                p,
                budgets,
                plateau_tolerance=plateau_tolerance,
                divergence_threshold=divergence_threshold,
                decay_ceiling=decay_ceiling,
            )
            region[(float(p), float(delta))] = result.verdict
            cache[(float(p), float(delta) / float(p))] = result.characteristic

    points = [pt for pt, v in region.items() if v == Verdict.IN_AP]
    checks = []
    for i, (p1, d1) in enumerate(points):
        for p2, d2 in points[i + 1 :]:
            for theta in thetas:
                p_t = (1 - theta) * p1 + theta * p2
                d_t = (1 - theta) * d1 + theta * d2
                lhs = characteristic(p_t, d_t)
                rhs = characteristic(p1, d1) ** ((1 - theta) * p1 / p_t) * (
                    characteristic(p2, d2) ** (theta * p2 / p_t)
                )
                checks.append(MidpointCheck((p1, d1), (p2, d2), theta, lhs, rhs))

    return ConvexityReport(region=region, checks=checks)


# stability


@dataclass
class StabilityReport:
    matrix: np.ndarray
    eps_grid: List[float]
    p_grid: List[float]
    p0: float
    box_nonempty: bool


def _box_around(matrix: np.ndarray, row: int, col: int) -> bool:
    rows, cols = matrix.shape
    if not (0 < row < rows - 1 and 0 < col < cols - 1):
        return False
    return bool(matrix[row - 1 : row + 2, col - 1 : col + 2].all())


def stability_probe(
    w: Weight,
    p0: float,
    eps_grid: Sequence[float],
    p_grid: Sequence[float],
    budget: int,
    plateau_tolerance: float = DEFAULT_PLATEAU_TOLERANCE,
    divergence_threshold: float = DEFAULT_DIVERGENCE_THRESHOLD,
    threads: int = 1,
    decay_ceiling: float = DEFAULT_DECAY_CEILING,
) -> StabilityReport:
    """Which perturbations w^{1+eps} stay in A_p for p near p0."""
    budgets = dyadic_budgets(budget, VERDICT_BUDGET_COUNT)

    def classify(weight: Weight, p: float) -> bool:
        result = ap_membership_verdict(
            weight,
            p,
            budgets,
            plateau_tolerance=plateau_tolerance,
            divergence_threshold=divergence_threshold,
            decay_ceiling=decay_ceiling,
        )
        return result.verdict == Verdict.IN_AP

    if not classify(w, p0):
        raise DomainError(f"{w.label()} shows no A_{p0:g} evidence at budget {budget}")

    eps_list = [float(e) for e in eps_grid]
    p_list = [float(p) for p in p_grid]
    matrix = np.zeros((len(eps_list), len(p_list)), dtype=bool)

    cells = [(i, j) for i in range(len(eps_list)) for j in range(len(p_list))]
    with ThreadPoolExecutor(max_workers=max(1, threads)) as executor:
        futures = {
            executor.submit(classify, w.pow(1.0 + eps_list[i]), p_list[j]): (i, j)
            for i, j in cells
        }
        for future in as_completed(futures):
            i, j = futures[future]
            matrix[i, j] = future.result()

    box = False
    zero_rows = [i for i, e in enumerate(eps_list) if abs(e) <= 1e-15]
    p0_cols = [j for j, p in enumerate(p_list) if math.isclose(p, p0)]
    if zero_rows and p0_cols:
        box = _box_around(matrix, zero_rows[0], p0_cols[0])

    return StabilityReport(
        matrix=matrix, eps_grid=eps_list, p_grid=p_list, p0=float(p0), box_nonempty=box
    )
