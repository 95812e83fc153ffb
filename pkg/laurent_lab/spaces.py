"""
Weighted rearrangement-invariant sequence spaces

Finitely supported sequences on Z, the Lebesgue, Lorentz and Orlicz norm
families with an optional weight, associate (Koethe dual) norm estimates,
Calderon product estimates and reflection/lattice diagnostics.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np
from scipy import optimize

from laurent_lab.bounds import EXACT, FACTORIZATION, HOLDER_DUAL, BoundEstimate
from laurent_lab.errors import DiagnosticError, DomainError, UnsupportedError
from laurent_lab.weights import HALF_LINE, Weight

logger = logging.getLogger(__name__)

LEBESGUE = "lebesgue"
LORENTZ = "lorentz"
ORLICZ = "orlicz"

YOUNG_POWER = "power"
YOUNG_LOG_POWER = "log_power"
YOUNG_PIECEWISE = "piecewise"

LUXEMBURG_RTOL = 1e-12
LUXEMBURG_MAXITER = 200
BRACKET_STEPS = 200


class FiniteSequence:
    """Finitely supported complex sequence f: Z -> C.

    Stored as the window of values between the first and last nonzero
    entries; ``offset`` is the index of ``values[0]``. The zero sequence has
    an empty window and offset 0.
    """

    __slots__ = ("offset", "values")

    def __init__(self, values=(), offset: int = 0):
        arr = np.asarray(values, dtype=complex).ravel()
        if not np.all(np.isfinite(arr)):
            raise DomainError("Sequence values must be finite")

        nonzero = np.flatnonzero(arr)
        if nonzero.size == 0:
            self.offset = 0
            self.values = np.zeros(0, dtype=complex)
        else:
            first, last = int(nonzero[0]), int(nonzero[-1])
            self.offset = int(offset) + first
            self.values = arr[first : last + 1].copy()
        self.values.setflags(write=False)

    @classmethod
    def zero(cls) -> "FiniteSequence":
        return cls()

    @classmethod
    def unit(cls, k: int, value: complex = 1.0) -> "FiniteSequence":
        """Standard basis vector e_k (times ``value``)."""
        return cls([value], offset=k)

    @classmethod
    def from_mapping(cls, entries: Dict[int, complex]) -> "FiniteSequence":
        if not entries:
            return cls()
        lo, hi = min(entries), max(entries)
        values = np.zeros(hi - lo + 1, dtype=complex)
        for k, v in entries.items():
            values[k - lo] = v
        return cls(values, offset=lo)

    @property
    def is_zero(self) -> bool:
        return self.values.size == 0

    @property
    def support(self) -> Optional[tuple]:
        """(first, last) nonzero index, or None for the zero sequence."""
        if self.is_zero:
            return None
        return self.offset, self.offset + self.values.size - 1

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.offset, self.offset + self.values.size)

    def magnitudes(self) -> np.ndarray:
        return np.abs(self.values)

    def __len__(self) -> int:
        return int(self.values.size)

    def __getitem__(self, k: int) -> complex:
        i = k - self.offset
        if 0 <= i < self.values.size:
            return complex(self.values[i])
        return 0j

    def to_dense(self, lo: int, hi: int) -> np.ndarray:
        """Values on {lo, ..., hi}; the support must fit."""
        out = np.zeros(hi - lo + 1, dtype=complex)
        if self.is_zero:
            return out
        first, last = self.support
        if first < lo or last > hi:
            raise DomainError(f"Support [{first}, {last}] exceeds window [{lo}, {hi}]")
        out[first - lo : last - lo + 1] = self.values
        return out

    def shifted(self, m: int) -> "FiniteSequence":
        """(S^m f)_k = f_{k-m}."""
        return FiniteSequence(self.values, self.offset + m)

    def conj(self) -> "FiniteSequence":
        return FiniteSequence(np.conj(self.values), self.offset)

    def _binary(self, other: "FiniteSequence", sign: float) -> "FiniteSequence":
        if self.is_zero:
            return other if sign > 0 else -other
        if other.is_zero:
            return self
        lo = min(self.offset, other.offset)
        hi = max(self.support[1], other.support[1])
        return FiniteSequence(
            self.to_dense(lo, hi) + sign * other.to_dense(lo, hi), offset=lo
        )

    def __add__(self, other: "FiniteSequence") -> "FiniteSequence":
        return self._binary(other, 1.0)

    def __sub__(self, other: "FiniteSequence") -> "FiniteSequence":
        return self._binary(other, -1.0)

    def __neg__(self) -> "FiniteSequence":
        return FiniteSequence(-self.values, self.offset)

    def __mul__(self, scalar: complex) -> "FiniteSequence":
        return FiniteSequence(self.values * scalar, self.offset)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, FiniteSequence):
            return NotImplemented
        return self.offset == other.offset and np.array_equal(self.values, other.values)

    __hash__ = None

    def __repr__(self) -> str:
        return f"FiniteSequence(offset={self.offset}, values={self.values.tolist()})"


@dataclass(frozen=True)
class YoungFunctionSpec:
    """Young function Phi for an Orlicz space.

    power      Phi(t) = t^p
    log_power  Phi(t) = t^p (log(e + t) / log(e + 1))^s
    piecewise  Phi(t) = t^p for t <= 1 and t^p1 beyond
    """

    family: str
    p: float
    s: float = 0.0
    p1: Optional[float] = None

    def __post_init__(self):
        if self.family not in (YOUNG_POWER, YOUNG_LOG_POWER, YOUNG_PIECEWISE):
            raise DomainError(f"Unknown Young function family: {self.family}")
        if not self.p >= 1 or not math.isfinite(self.p):
            raise DomainError(
                f"Young function exponent must be in [1, inf), got {self.p}"
            )
        if self.family == YOUNG_LOG_POWER and self.s < 0:
            raise DomainError("log_power Young function needs s >= 0")
        if self.family == YOUNG_PIECEWISE:
            if self.p1 is None or not self.p1 >= self.p or not math.isfinite(self.p1):
                raise DomainError("piecewise Young function needs p <= p1 < inf")
        self._check_convex()

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        with np.errstate(over="ignore"):
            if self.family == YOUNG_POWER:
                return t**self.p
            if self.family == YOUNG_LOG_POWER:
                return t**self.p * (np.log(math.e + t) / math.log(math.e + 1)) ** self.s
            return np.where(t <= 1.0, t**self.p, t**self.p1)

    def _check_convex(self):
        grid = np.concatenate(([0.0], np.geomspace(1e-3, 1e3, 400)))
        values = self(grid)
        if values[0] != 0.0 or np.any(np.diff(values) <= 0):
            raise DomainError(f"{self.label()} is not increasing from 0")
        slopes = np.diff(values) / np.diff(grid)
        if np.any(np.diff(slopes) < -1e-9 * np.abs(slopes[1:])):
            raise DomainError(f"{self.label()} is not convex")

    def label(self) -> str:
        if self.family == YOUNG_POWER:
            return f"power,{self.p:g}"
        if self.family == YOUNG_LOG_POWER:
            return f"log_power,{self.p:g},{self.s:g}"
        return f"piecewise,{self.p:g},{self.p1:g}"


@dataclass(frozen=True)
class SpaceSpec:
    """A rearrangement-invariant norm, optionally weighted."""

    kind: str
    p: float = 2.0
    q: Optional[float] = None
    phi: Optional[YoungFunctionSpec] = None
    weight: Optional[Weight] = None

    def __post_init__(self):
        if self.kind == LEBESGUE:
            if not self.p >= 1 or not math.isfinite(self.p):
                raise DomainError(
                    f"Lebesgue exponent must be in [1, inf), got {self.p}"
                )
        elif self.kind == LORENTZ:
            if self.q is None or not 1 <= self.q <= self.p or not math.isfinite(self.p):
                raise DomainError(
                    f"Lorentz space needs 1 <= q <= p < inf, got p={self.p}, q={self.q}"
                )
        elif self.kind == ORLICZ:
            if self.phi is None:
                raise DomainError("Orlicz space needs a Young function")
        else:
            raise DomainError(f"Unknown space kind: {self.kind}")

    @classmethod
    def lebesgue(cls, p: float, weight: Optional[Weight] = None) -> "SpaceSpec":
        return cls(kind=LEBESGUE, p=float(p), weight=weight)

    @classmethod
    def lorentz(
        cls, p: float, q: float, weight: Optional[Weight] = None
    ) -> "SpaceSpec":
        return cls(kind=LORENTZ, p=float(p), q=float(q), weight=weight)

    @classmethod
    def orlicz(
        cls, phi: YoungFunctionSpec, weight: Optional[Weight] = None
    ) -> "SpaceSpec":
        return cls(kind=ORLICZ, p=phi.p, phi=phi, weight=weight)

    def with_weight(self, weight: Optional[Weight]) -> "SpaceSpec":
        return SpaceSpec(
            kind=self.kind, p=self.p, q=self.q, phi=self.phi, weight=weight
        )

    def unweighted(self) -> "SpaceSpec":
        return self.with_weight(None)

    @property
    def is_weighted(self) -> bool:
        return self.weight is not None

    @property
    def exponent(self) -> float:
        """The p the space interpolates like (the small-t exponent for Orlicz)."""
        return self.p

    @property
    def is_reflection_invariant(self) -> bool:
        return self.weight is None or self.weight.symmetric

    def label(self) -> str:
        if self.kind == LEBESGUE:
            text = f"lebesgue({self.p:g})"
        elif self.kind == LORENTZ:
            text = f"lorentz({self.p:g},{self.q:g})"
        else:
            text = f"orlicz({self.phi.label()})"
        if self.weight is not None:
            text = f"{text}[{self.weight.label()}]"
        return text


def dual_spec(spec: SpaceSpec) -> SpaceSpec:
    """Closed-form associate space: (l^p(w))' = l^q(w^{-1})."""
    if spec.kind != LEBESGUE:
        raise UnsupportedError(f"No closed-form associate space for {spec.label()}")
    if spec.p == 1:
        raise UnsupportedError("The associate of l^1 is l^inf, which is not modelled")
    q = spec.p / (spec.p - 1.0)
    weight = spec.weight.pow(-1.0) if spec.weight is not None else None
    return SpaceSpec.lebesgue(q, weight)


# norms


def luxemburg_norm(phi: YoungFunctionSpec, magnitudes: np.ndarray) -> float:
    """inf { lambda > 0 : sum Phi(|f_k| / lambda) <= 1 }."""
    g = np.asarray(magnitudes, dtype=float)
    g = g[g > 0]
    if g.size == 0:
        return 0.0
    top = g.max()
    g = g / top

    def modular(lam: float) -> float:
        return float(np.sum(phi(g / lam)))

    hi = 1.0
    for _ in range(BRACKET_STEPS):
        if modular(hi) <= 1.0:
            break
        hi *= 2.0
    else:
        raise DiagnosticError(
            f"Luxemburg bracket for {phi.label()} did not close above"
        )

    lo = hi
    for _ in range(BRACKET_STEPS):
        if modular(lo) > 1.0:
            break
        lo /= 2.0
    else:
        raise DiagnosticError(
            f"Luxemburg bracket for {phi.label()} did not close below"
        )

    if modular(hi) == 1.0:
        return float(top * hi)

    lam = optimize.bisect(
        lambda x: modular(x) - 1.0,
        lo,
        hi,
        xtol=1e-300,
        rtol=LUXEMBURG_RTOL,
        maxiter=LUXEMBURG_MAXITER,
    )
    # the returned root may sit on the infeasible side by one rtol step
    for _ in range(16):
        if modular(lam) <= 1.0:
            break
        lam *= 1.0 + 4 * LUXEMBURG_RTOL
    return float(top * lam)


def norm_of_magnitudes(spec: SpaceSpec, magnitudes: np.ndarray) -> float:
    """Unweighted rearrangement-invariant norm of a nonnegative array."""
    g = np.asarray(magnitudes, dtype=float)
    g = g[g > 0]
    if g.size == 0:
        return 0.0
    top = g.max()
    if not math.isfinite(top):
        raise DomainError("Cannot take the norm of a non-finite sequence")

    if spec.kind == LEBESGUE:
        return float(top * np.sum((g / top) ** spec.p) ** (1.0 / spec.p))

    if spec.kind == LORENTZ:
        star = np.sort(g)[::-1] / top
        n = np.arange(1, star.size + 1, dtype=float)
        total = np.sum(n ** (spec.q / spec.p - 1.0) * star**spec.q)
        return float(top * total ** (1.0 / spec.q))

    return luxemburg_norm(spec.phi, g)


def weighted_magnitudes(spec: SpaceSpec, f: FiniteSequence) -> np.ndarray:
    """|f_k| w_k over the stored window of f."""
    g = f.magnitudes()
    if spec.weight is not None and not f.is_zero:
        g = g * spec.weight.values(f.indices)
    return g


def space_norm(spec: SpaceSpec, f: FiniteSequence) -> float:
    """||f||_{X(w)} = rho(|f| w)."""
    if f.is_zero:
        return 0.0
    return norm_of_magnitudes(spec, weighted_magnitudes(spec, f))


def decreasing_rearrangement(f: FiniteSequence) -> np.ndarray:
    """Nonincreasing rearrangement of |f| with the zeros dropped."""
    return np.sort(f.magnitudes()[f.magnitudes() > 0])[::-1]


def distribution_function(f: FiniteSequence, lam: float) -> int:
    """#{k : |f_k| > lam}."""
    if lam < 0:
        raise DomainError(f"Distribution level must be >= 0, got {lam}")
    return int(np.count_nonzero(f.magnitudes() > lam))


def reflect(f: FiniteSequence) -> FiniteSequence:
    """(Rf)_k = f_{-k}."""
    if f.is_zero:
        return f
    return FiniteSequence(f.values[::-1], offset=-(f.offset + len(f) - 1))


# associate norms


def _window(spec: SpaceSpec, f: FiniteSequence, radius: int):
    dense = f.to_dense(-radius, radius)
    k = np.arange(-radius, radius + 1)
    w = spec.weight.values(k) if spec.weight is not None else np.ones(k.size)
    return dense, k, w


def _pairing_ratio(spec: SpaceSpec, dense_f: np.ndarray, s: np.ndarray, w: np.ndarray):
    denominator = norm_of_magnitudes(spec, np.abs(s) * w)
    if denominator == 0:
        return 0.0
    return abs(np.sum(dense_f * s)) / denominator


def _associate_search(
    spec: SpaceSpec,
    f: FiniteSequence,
    radius: int,
    budget: int,
    rng: Optional[np.random.Generator],
):
    dense, k, w = _window(spec, f, radius)
    mags = np.abs(dense)
    phase = np.where(mags > 0, np.conj(dense) / np.where(mags > 0, mags, 1.0), 0.0)
    u = mags / w

    best, witness = 0.0, None
    used = 0

    def consider(s: np.ndarray):
        nonlocal best, witness, used
        used += 1
        value = _pairing_ratio(spec, dense, s, w)
        if value > best:
            best, witness = value, s

    for idx in np.flatnonzero(mags):
        if used >= budget:
            break
        s = np.zeros_like(dense)
        s[idx] = phase[idx]
        consider(s)

    def family(r: float) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(mags > 0, phase * u**r / w, 0.0)

    exponents = list(np.linspace(0.0, 4.0, 17))
    if spec.kind == LEBESGUE and spec.p > 1:
        exponents.insert(0, 1.0 / (spec.p - 1.0))
    for r in exponents:
        if used >= budget:
            break
        consider(family(r))

    if used < budget:
        result = optimize.minimize_scalar(
            lambda r: -_pairing_ratio(spec, dense, family(r), w),
            bounds=(0.0, 8.0),
            method="bounded",
            options={"maxiter": max(1, min(64, budget - used)), "xatol": 1e-6},
        )
        consider(family(float(result.x)))

    support = np.flatnonzero(mags)
    while rng is not None and used < budget:
        s = np.zeros_like(dense)
        s[support] = phase[support] * rng.uniform(0.0, 1.0, support.size) / w[support]
        consider(s)

    if witness is None:
        return best, None, used
    return best, FiniteSequence(witness, offset=-radius), used


def associate_norm_estimate(
    spec: SpaceSpec,
    f: FiniteSequence,
    support_radius: int,
    search_budget: int,
    seed: int = 0,
) -> BoundEstimate:
    """Lower estimate of sup{|sum f s| : ||s||_X <= 1, supp s within the radius}.

    Lebesgue spaces also carry the exact value ||f w^{-1}||_q as upper bound.
    """
    if search_budget <= 0:
        raise DomainError(f"Search budget must be positive, got {search_budget}")
    if support_radius < 0:
        raise DomainError(f"Support radius must be >= 0, got {support_radius}")
    if not f.is_zero:
        first, last = f.support
        if first < -support_radius or last > support_radius:
            raise DomainError(
                f"Support radius {support_radius} does not cover "
                f"supp f = [{first}, {last}]"
            )
    if f.is_zero:
        return BoundEstimate(lower=0.0, upper=0.0, upper_method=EXACT)

    rng = np.random.default_rng(seed)
    lower, witness, used = _associate_search(
        spec, f, support_radius, search_budget, rng
    )

    upper, method = None, None
    if spec.kind == LEBESGUE:
        if spec.p == 1:
            g = f.magnitudes()
            if spec.weight is not None:
                g = g / spec.weight.values(f.indices)
            upper = float(g.max())
        else:
            upper = space_norm(dual_spec(spec), f)
        method = HOLDER_DUAL

    return BoundEstimate(
        lower=lower,
        upper=upper,
        upper_method=method,
        witness=witness,
        params={"budget_used": used, "seed": seed},
    )


def norm_by_duality(
    spec: SpaceSpec, f: FiniteSequence, search_budget: int, seed: int = 0
) -> BoundEstimate:
    """||f||_X recovered as the associate norm of f in X' (Lorentz-Luxemburg)."""
    dual = dual_spec(spec)
    radius = 0 if f.is_zero else max(abs(i) for i in f.support)
    estimate = associate_norm_estimate(dual, f, radius, search_budget, seed)
    return BoundEstimate(
        lower=estimate.lower,
        upper=space_norm(spec, f),
        upper_method=EXACT,
        witness=estimate.witness,
        params=estimate.params,
    )


# diagnostics


@dataclass
class ReflectionReport:
    passed: bool
    max_discrepancy: float
    worst: Optional[FiniteSequence]
    samples: int


def _reflection_probes(rng: np.random.Generator, samples: int) -> List[FiniteSequence]:
    probes = [
        FiniteSequence.unit(1),
        FiniteSequence.unit(2),
        FiniteSequence([1.0, 2.0], offset=1),
    ]
    for _ in range(samples):
        length = int(rng.integers(1, 13))
        offset = int(rng.integers(-16, 17 - length))
        values = rng.normal(size=length) + 1j * rng.normal(size=length)
        probes.append(FiniteSequence(values, offset=offset))
    return probes


def _relative_gap(a: float, b: float) -> float:
    scale = max(a, b)
    return 0.0 if scale == 0 else abs(a - b) / scale


def reflection_invariance_check(
    spec: SpaceSpec, samples: int, seed: int = 0, tolerance: float = 1e-9
) -> ReflectionReport:
    """Compare ||f|| and ||Rf|| on sample sequences."""
    if samples < 1:
        raise DomainError(f"Reflection check needs samples >= 1, got {samples}")
    if spec.weight is not None and spec.weight.domain == HALF_LINE:
        raise DomainError("Reflection is undefined for half-line weights")

    rng = np.random.default_rng(seed)
    worst, worst_gap = None, 0.0
    for f in _reflection_probes(rng, samples):
        gap = _relative_gap(space_norm(spec, f), space_norm(spec, reflect(f)))
        if gap > worst_gap:
            worst, worst_gap = f, gap

    passed = worst_gap <= tolerance
    if not passed:
        logger.info(f"Reflection discrepancy {worst_gap:.3e} for {spec.label()}")
    return ReflectionReport(
        passed=passed, max_discrepancy=worst_gap, worst=worst, samples=samples
    )


def associate_reflection_check(
    spec: SpaceSpec,
    samples: int,
    seed: int = 0,
    search_budget: int = 64,
    tolerance: float = 1e-6,
) -> ReflectionReport:
    """Compare associate-norm estimates of f and Rf (deterministic candidates only)."""
    if samples < 1:
        raise DomainError(f"Reflection check needs samples >= 1, got {samples}")
    if spec.weight is not None and spec.weight.domain == HALF_LINE:
        raise DomainError("Reflection is undefined for half-line weights")

    rng = np.random.default_rng(seed)
    worst, worst_gap = None, 0.0
    for f in _reflection_probes(rng, samples):
        radius = max(abs(i) for i in f.support)
        if spec.kind == LEBESGUE and spec.p > 1:
            a = space_norm(dual_spec(spec), f)
            b = space_norm(dual_spec(spec), reflect(f))
        else:
            a = _associate_search(spec, f, radius, search_budget, None)[0]
            b = _associate_search(spec, reflect(f), radius, search_budget, None)[0]
        gap = _relative_gap(a, b)
        if gap > worst_gap:
            worst, worst_gap = f, gap

    return ReflectionReport(
        passed=worst_gap <= tolerance,
        max_discrepancy=worst_gap,
        worst=worst,
        samples=samples,
    )


@dataclass
class MinkowskiReport:
    passed: bool
    max_ratio: float
    samples: int


def minkowski_check(
    spec: SpaceSpec, samples: int, nodes: int = 8, length: int = 16, seed: int = 0
) -> MinkowskiReport:
    """|| sum_x mu_x |F_x| || <= sum_x mu_x ||F_x|| for random probability mu."""
    if samples < 1 or nodes < 1 or length < 1:
        raise DomainError("Minkowski check needs positive samples, nodes and length")

    rng = np.random.default_rng(seed)
    max_ratio = 0.0
    for _ in range(samples):
        mu = rng.dirichlet(np.ones(nodes))
        offset = int(rng.integers(-length, 1))
        family = [
            FiniteSequence(
                rng.normal(size=length) + 1j * rng.normal(size=length), offset
            )
            for _ in range(nodes)
        ]
        lo = min(F.offset for F in family)
        hi = max(F.support[1] for F in family)
        pointwise = sum(m * np.abs(F.to_dense(lo, hi)) for m, F in zip(mu, family))
        lhs = space_norm(spec, FiniteSequence(pointwise, lo))
        rhs = sum(m * space_norm(spec, F) for m, F in zip(mu, family))
        max_ratio = max(max_ratio, lhs / rhs)

    return MinkowskiReport(
        passed=max_ratio <= 1.0 + 1e-12, max_ratio=max_ratio, samples=samples
    )


# Calderon products


def _lebesgue_pair_exponent(spec0: SpaceSpec, spec1: SpaceSpec, theta: float) -> float:
    return 1.0 / ((1.0 - theta) / spec0.p + theta / spec1.p)


def calderon_product_norm_estimate(
    spec0: SpaceSpec,
    spec1: SpaceSpec,
    theta: float,
    f: FiniteSequence,
    search_budget: int,
    seed: int = 0,
) -> BoundEstimate:
    """Bounds for ||f|| in X0(w0)^{1-theta} X1(w1)^theta.

    The upper bound searches factorizations |f| = y^{1-theta} z^theta. In
    weighted coordinates g = |f| w0^{1-theta} w1^theta every factorization
    is Y = y w0, Z = (g / Y^{1-theta})^{1/theta}; the search walks the family
    Y = g^s plus multiplicative perturbations of the best one.
    """
    if not 0 < theta < 1:
        raise DomainError(f"Interpolation parameter must lie in (0, 1), got {theta}")
    if search_budget <= 0:
        raise DomainError(f"Search budget must be positive, got {search_budget}")
    if f.is_zero:
        return BoundEstimate(lower=0.0, upper=0.0, upper_method=FACTORIZATION)

    k = f.indices
    g = f.magnitudes()
    log_w = np.zeros(k.size)
    if spec0.weight is not None:
        log_w += (1.0 - theta) * spec0.weight.log_values(k)
    if spec1.weight is not None:
        log_w += theta * spec1.weight.log_values(k)
    g = g * np.exp(log_w)
    support = g > 0
    g = g[support]
    top = g.max()
    g = g / top

    rho0, rho1 = spec0.unweighted(), spec1.unweighted()

    def split_value(Y: np.ndarray) -> float:
        Z = (g / Y ** (1.0 - theta)) ** (1.0 / theta)
        return norm_of_magnitudes(rho0, Y) ** (1.0 - theta) * norm_of_magnitudes(
            rho1, Z
        ) ** theta

    def family_value(s: float) -> float:
        return split_value(g**s)

    used = 0
    best_value, best_s = math.inf, 1.0

    def consider(s: float):
        nonlocal used, best_value, best_s
        used += 1
        value = family_value(s)
        if value < best_value:
            best_value, best_s = value, s

    s_max = 1.0 / (1.0 - theta)
    candidates = [1.0]
    if spec0.kind == LEBESGUE and spec1.kind == LEBESGUE:
        candidates.insert(0, _lebesgue_pair_exponent(spec0, spec1, theta) / spec0.p)
    candidates.extend(np.linspace(0.0, s_max, 17))
    for s in candidates:
        if used >= search_budget:
            break
        consider(float(s))

    if used < search_budget:
        result = optimize.minimize_scalar(
            family_value,
            bounds=(0.0, s_max),
            method="bounded",
            options={"maxiter": max(1, min(64, search_budget - used)), "xatol": 1e-8},
        )
        consider(float(result.x))

    rng = np.random.default_rng(seed)
    best_Y = g**best_s
    sigma = 0.1
    while used < search_budget:
        used += 1
        trial = best_Y * np.exp(sigma * rng.normal(size=g.size))
        value = split_value(trial)
        if value < best_value:
            best_value, best_Y = value, trial
        else:
            sigma *= 0.97

    upper = top * best_value

    if spec0 == spec1:
        lower = space_norm(spec0, f)
    elif spec0.kind == LEBESGUE and spec1.kind == LEBESGUE:
        p_theta = _lebesgue_pair_exponent(spec0, spec1, theta)
        lower = top * norm_of_magnitudes(SpaceSpec.lebesgue(p_theta), g)
    else:
        # coordinate functionals have norm one in unweighted RI spaces
        lower = float(top)

    return BoundEstimate(
        lower=float(min(lower, upper)),
        upper=float(upper),
        upper_method=FACTORIZATION,
        params={"theta": theta, "s": best_s, "budget_used": used},
    )


def lozanovskii_check(
    spec: SpaceSpec, f: FiniteSequence, search_budget: int = 64, seed: int = 0
) -> float:
    """Relative gap between ||f|| in X^{1/2} (X')^{1/2} and ||f||_{l^2}."""
    if spec.kind != LEBESGUE:
        raise UnsupportedError(
            "Lozanovskii factorization check needs a closed-form associate, "
            f"got {spec.label()}"
        )
    if f.is_zero:
        return 0.0
    estimate = calderon_product_norm_estimate(
        spec, dual_spec(spec), 0.5, f, search_budget, seed
    )
    reference = norm_of_magnitudes(SpaceSpec.lebesgue(2.0), f.magnitudes())
    return abs(estimate.upper - reference) / reference
