"""
Laurent operators on weighted sequence spaces

L(a) acts on finitely supported sequences by convolution with the Fourier
coefficients of the symbol. Lower bounds for ||L(a)||_{X(w)} come from
explicit witnesses: the section P_N on [-N, N] is applied with full output
support, and witnesses are improved by Gram power iteration (weighted l^2),
the nonlinear power method for l^p, or monotone proposal ascent for the other
rearrangement-invariant norms. Upper bounds are routed through closed forms
or a calibrated Stechkin constant.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import linalg, signal

from laurent_lab.bounds import GEOMETRIC_MEAN, LINF_EXACT, STECHKIN, BoundEstimate
from laurent_lab.errors import ConfigError, DiagnosticError, DomainError
from laurent_lab.spaces import (
    LEBESGUE,
    FiniteSequence,
    SpaceSpec,
    norm_of_magnitudes,
)
from laurent_lab.symbols import (
    Symbol,
    TrigPoly,
    conjugate_symbol,
    stechkin_bound,
    sup_norm,
    sup_norm_details,
    total_variation,
)
from laurent_lab.weights import HALF_LINE, Weight

logger = logging.getLogger(__name__)

DEFAULT_RESTARTS = 4
DEFAULT_ITERATIONS = 100
DEFAULT_TOLERANCE = 1e-12
MIN_COEFF_RADIUS = 512
COEFF_RADIUS_FACTOR = 64
BASIS_SAMPLES = 33
PROPOSAL_EXPONENT_RANGE = (1.05, 20.0)

Calibration = Union[float, Mapping[str, float], None]


def default_coeff_radius(a: Symbol, N: int) -> int:
    """Coefficient truncation used for a section of half-width N."""
    if isinstance(a, TrigPoly):
        return a.degree
    return max(MIN_COEFF_RADIUS, COEFF_RADIUS_FACTOR * int(N))


def truncation_tail_bound(a: Symbol, coeff_radius: int) -> float:
    """V(a) / (pi R): bound on the coefficients dropped beyond radius R."""
    if isinstance(a, TrigPoly) and coeff_radius >= a.degree:
        return 0.0
    return total_variation(a) / (math.pi * max(1, coeff_radius))


def _check_radius(a: Symbol, coeff_radius: int):
    if coeff_radius < 0:
        raise DomainError(f"Coefficient radius must be >= 0, got {coeff_radius}")
    if isinstance(a, TrigPoly) and coeff_radius < a.degree:
        raise DomainError(
            f"Coefficient radius {coeff_radius} is below the polynomial "
            f"degree {a.degree}"
        )


def _check_weight(weight: Optional[Weight]):
    if weight is not None and weight.domain == HALF_LINE:
        raise DomainError(
            "Laurent operators act on Z; extend half-line weights with symmetric_extend"
        )


@dataclass
class ConvolutionResult:
    """L(a) x computed from the coefficients a^(m), |m| <= coeff_radius.

    ``tail_bound`` bounds every dropped coefficient and ``entry_error`` bounds
    the resulting error in each output entry (tail_bound * ||x||_1). Both are
    zero when the symbol is a polynomial of degree <= coeff_radius.
    """

    sequence: FiniteSequence
    coeff_radius: int
    tail_bound: float
    entry_error: float

    @property
    def exact(self) -> bool:
        return self.tail_bound == 0.0


def convolve(
    a: Symbol, phi: FiniteSequence, coeff_radius: Optional[int] = None
) -> ConvolutionResult:
    """(L(a) phi)_j = sum_k a^(j - k) phi_k, with full output support."""
    if coeff_radius is None:
        coeff_radius = default_coeff_radius(a, len(phi))
    _check_radius(a, coeff_radius)
    tail = truncation_tail_bound(a, coeff_radius)
    if phi.is_zero:
        return ConvolutionResult(FiniteSequence.zero(), coeff_radius, tail, 0.0)
    kernel = a.coefficients(coeff_radius)
    out = signal.convolve(phi.values, kernel)
    return ConvolutionResult(
        sequence=FiniteSequence(out, offset=phi.offset - coeff_radius),
        coeff_radius=coeff_radius,
        tail_bound=tail,
        entry_error=tail * float(np.abs(phi.values).sum()),
    )


def modulation(x: float, phi: FiniteSequence) -> FiniteSequence:
    """D_x phi = (phi_k e^{ikx})_k."""
    if phi.is_zero:
        return phi
    return FiniteSequence(phi.values * np.exp(1j * x * phi.indices), offset=phi.offset)


def finite_section(a: Symbol, N: int, weight: Optional[Weight] = None) -> np.ndarray:
    """Dense matrix (w_j a^(j - k) w_k^{-1}) for j, k in [-N, N]."""
    if N < 1:
        raise DomainError(f"Section half-width must be >= 1, got {N}")
    _check_weight(weight)
    c = a.coefficients(2 * N)
    column = c[2 * N :]
    row = c[: 2 * N + 1][::-1]
    matrix = linalg.toeplitz(column, row)
    if weight is not None:
        w = weight.values(np.arange(-N, N + 1))
        matrix = (w[:, None] * matrix) / w[None, :]
    return matrix


class SectionOperator:
    """L(a) P_N in weighted coordinates psi = w phi.

    ``apply`` maps C^{2N+1} (indices -N..N) to C^{2N+2R+1} (indices
    -N-R..N+R); the unweighted norm of the output is ||L(a) phi||_{X(w)}.
    """

    def __init__(self, a: Symbol, spec: SpaceSpec, N: int, coeff_radius: int):
        if N < 1:
            raise DomainError(f"Section half-width must be >= 1, got {N}")
        _check_radius(a, coeff_radius)
        _check_weight(spec.weight)

        self.N = int(N)
        self.R = int(coeff_radius)
        self.kernel = a.coefficients(self.R)
        self.norm_spec = spec.unweighted()
        self.is_real = bool(np.all(self.kernel.imag == 0))

        k_in = np.arange(-self.N, self.N + 1)
        k_out = np.arange(-self.N - self.R, self.N + self.R + 1)
        if spec.weight is not None:
            self.w_in = spec.weight.values(k_in)
            self.w_out = spec.weight.values(k_out)
        else:
            self.w_in = np.ones(k_in.size)
            self.w_out = np.ones(k_out.size)

    @property
    def size(self) -> int:
        return 2 * self.N + 1

    def apply(self, psi: np.ndarray) -> np.ndarray:
        return self.w_out * signal.convolve(psi / self.w_in, self.kernel)

    def adjoint(self, y: np.ndarray) -> np.ndarray:
        return (
            signal.convolve(self.w_out * y, np.conj(self.kernel[::-1]), mode="valid")
            / self.w_in
        )

    def norm(self, v: np.ndarray) -> float:
        return norm_of_magnitudes(self.norm_spec, np.abs(v))

    def ratio(self, psi: np.ndarray) -> float:
        base = self.norm(psi)
        if base == 0:
            return 0.0
        return self.norm(self.apply(psi)) / base

    def witness(self, psi: np.ndarray) -> FiniteSequence:
        return FiniteSequence(psi / self.w_in, offset=-self.N)

    def basis_ratios(self) -> Tuple[np.ndarray, np.ndarray]:
        """(indices, ||L(a) e_k|| / ||e_k||) for basis vectors of the section."""
        spec = self.norm_spec
        if spec.kind == LEBESGUE:
            p = spec.p
            mass = signal.convolve(
                self.w_out**p, np.abs(self.kernel[::-1]) ** p, mode="valid"
            )
            ratios = np.maximum(mass, 0.0) ** (1.0 / p) / self.w_in
            return np.arange(self.size), ratios

        idx = np.unique(np.linspace(0, self.size - 1, BASIS_SAMPLES).astype(int))
        ratios = []
        for i in idx:
            psi = np.zeros(self.size, dtype=complex)
            psi[i] = 1.0
            ratios.append(self.ratio(psi))
        return idx, np.asarray(ratios)


def _duality_map(y: np.ndarray, r: float) -> np.ndarray:
    """y |y|^{r-2}: the l^r norming direction of y (up to scale)."""
    mag = np.abs(y)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(mag > 0, y * mag ** (r - 2.0), 0.0)
    return out


def _gram_iteration(
    op: SectionOperator, psi: np.ndarray, iterations: int, tolerance: float
) -> Tuple[float, np.ndarray]:
    best, best_psi = op.ratio(psi), psi
    x = psi / max(np.linalg.norm(psi), 1e-300)
    previous = best
    for _ in range(iterations):
        z = op.adjoint(op.apply(x))
        size = np.linalg.norm(z)
        if size == 0:
            break
        x = z / size
        value = op.ratio(x)
        if value > best:
            best, best_psi = value, x
        if abs(value - previous) <= tolerance * max(value, 1e-300):
            break
        previous = value
    return best, best_psi


def _nonlinear_power_iteration(
    op: SectionOperator,
    psi: np.ndarray,
    p: float,
    iterations: int,
    tolerance: float,
    monotone: bool,
) -> Tuple[float, np.ndarray]:
    """Iterate x <- J_q(A* J_p(A x)) with J_r(y) = y |y|^{r-2}.

    With ``monotone`` the walk stops at the first step that does not improve
    the true ratio (used for norms other than l^p).
    """
    q = p / (p - 1.0)
    best, best_psi = op.ratio(psi), psi
    x = psi
    previous = best
    for _ in range(iterations):
        u = op.adjoint(_duality_map(op.apply(x), p))
        candidate = _duality_map(u, q)
        if not np.any(candidate):
            break
        candidate = candidate / max(np.max(np.abs(candidate)), 1e-300)
        value = op.ratio(candidate)
        if value > best:
            best, best_psi = value, candidate
        elif monotone:
            break
        if abs(value - previous) <= tolerance * max(value, 1e-300):
            break
        x, previous = candidate, value
    return best, best_psi


def _refine(
    op: SectionOperator, psi: np.ndarray, iterations: int, tolerance: float
) -> Tuple[float, np.ndarray]:
    spec = op.norm_spec
    if spec.kind == LEBESGUE and spec.p == 2.0:
        return _gram_iteration(op, psi, iterations, tolerance)
    lo, hi = PROPOSAL_EXPONENT_RANGE
    p = min(max(spec.exponent, lo), hi)
    monotone = spec.kind != LEBESGUE
    return _nonlinear_power_iteration(op, psi, p, iterations, tolerance, monotone)


def _peak_start(a: Symbol, N: int) -> np.ndarray:
    theta0 = sup_norm_details(a)[1]
    k = np.arange(-N, N + 1)
    window = np.hanning(2 * N + 3)[1:-1]
    return window * np.exp(1j * theta0 * k)


def multiplier_norm_lower(
    a: Symbol,
    spec: SpaceSpec,
    N: int,
    restarts: int = DEFAULT_RESTARTS,
    iterations: int = DEFAULT_ITERATIONS,
    seed: int = 0,
    coeff_radius: Optional[int] = None,
    threads: int = 1,
    warm_start: Optional[FiniteSequence] = None,
    tolerance: float = DEFAULT_TOLERANCE,
) -> BoundEstimate:
    """Witness-backed lower bound for ||L(a)||_{X(w)} from the section P_N."""
    if N < 1:
        raise DomainError(f"Section half-width must be >= 1, got {N}")
    if restarts < 1 or iterations < 1:
        raise ConfigError(
            f"Restarts and iterations must be >= 1, got {restarts} and {iterations}"
        )
    if coeff_radius is None:
        coeff_radius = default_coeff_radius(a, N)

    op = SectionOperator(a, spec, N, coeff_radius)

    starts: List[np.ndarray] = []
    idx, ratios = op.basis_ratios()
    best_basis = np.zeros(op.size, dtype=complex)
    best_basis[idx[int(np.argmax(ratios))]] = 1.0
    starts.append(best_basis)

    peak = _peak_start(a, N)
    starts.append(peak)
    if not (spec.kind == LEBESGUE and spec.p == 2.0):
        l2_spec = SpaceSpec.lebesgue(2.0, spec.weight)
        l2_op = SectionOperator(a, l2_spec, N, coeff_radius)
        l2_steps = max(1, iterations // 2)
        starts.append(_gram_iteration(l2_op, peak, l2_steps, tolerance)[1])

    if warm_start is not None and not warm_start.is_zero:
        dense = warm_start.to_dense(-N, N)
        starts.append(dense * op.w_in)

    for r in range(restarts):
        rng = np.random.default_rng(seed + r)
        psi = rng.normal(size=op.size)
        if not op.is_real:
            psi = psi + 1j * rng.normal(size=op.size)
        starts.append(psi)

    def run(start: np.ndarray) -> Tuple[float, np.ndarray]:
        return _refine(op, start.astype(complex), iterations, tolerance)

    if threads > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            results = list(executor.map(run, starts))
    else:
        results = [run(start) for start in starts]

    best_index = max(range(len(results)), key=lambda i: (results[i][0], -i))
    value, psi = results[best_index]
    if not math.isfinite(value):
        raise DiagnosticError(f"Non-finite ratio for {spec.label()} at N={N}")

    logger.debug(
        f"{spec.label()} N={N}: lower={value:.10g} from start {best_index} "
        f"of {len(starts)}"
    )

    return BoundEstimate(
        lower=float(value),
        witness=op.witness(psi),
        params={
            "N": int(N),
            "coeff_radius": int(coeff_radius),
            "tail_bound": truncation_tail_bound(a, coeff_radius),
            "restarts": int(restarts),
            "iterations": int(iterations),
            "seed": int(seed),
            "start": int(best_index),
        },
    )


def multiplier_norm_sweep(
    a: Symbol,
    spec: SpaceSpec,
    N_schedule: Sequence[int],
    restarts: int = DEFAULT_RESTARTS,
    iterations: int = DEFAULT_ITERATIONS,
    seed: int = 0,
    coeff_radius: Optional[int] = None,
    threads: int = 1,
) -> List[BoundEstimate]:
    """Lower bounds along an increasing section schedule, nondecreasing in N."""
    schedule = [int(n) for n in N_schedule]
    if not schedule:
        raise DomainError("Section schedule is empty")
    if any(n2 <= n1 for n1, n2 in zip(schedule, schedule[1:])):
        raise DomainError(f"Section schedule must be strictly increasing: {schedule}")
    if coeff_radius is None:
        coeff_radius = default_coeff_radius(a, schedule[-1])

    estimates: List[BoundEstimate] = []
    previous: Optional[BoundEstimate] = None
    for N in schedule:
        current = multiplier_norm_lower(
            a,
            spec,
            N,
            restarts=restarts,
            iterations=iterations,
            seed=seed,
            coeff_radius=coeff_radius,
            threads=threads,
            warm_start=previous.witness if previous is not None else None,
        )
        if previous is not None and previous.lower > current.lower:
            current.lower = previous.lower
            current.witness = previous.witness
            current.params["carried_from"] = previous.params["N"]
        estimates.append(current)
        previous = current
    return estimates


def calibration_constant(calibration: Calibration, spec: SpaceSpec) -> Optional[float]:
    """Constant for ``spec`` from a float or a mapping keyed by space label."""
    if calibration is None:
        return None
    if isinstance(calibration, (int, float)):
        return float(calibration)
    value = calibration.get(spec.label())
    return float(value) if value is not None else None


def multiplier_norm_upper(
    a: Symbol,
    spec: SpaceSpec,
    calibration: Calibration = None,
    geometric_pair: Optional[Tuple[float, float]] = None,
) -> BoundEstimate:
    """Best available upper bound for ||L(a)||_{X(w)}, tagged by route.

    Routes: linf-exact on (constantly weighted) l^2, stechkin when a
    calibrated constant is known. ``geometric_pair`` adds the advisory
    sqrt(upper_X * upper_X') to ``params`` without using it as the bound.
    """
    routes: Dict[str, float] = {}
    weight = spec.weight
    flat = weight is None or weight.is_constant
    if spec.kind == LEBESGUE and spec.p == 2.0 and flat:
        routes[LINF_EXACT] = sup_norm(a)

    constant = calibration_constant(calibration, spec)
    if constant is not None:
        routes[STECHKIN] = stechkin_bound(a, constant)

    params: Dict[str, object] = {"routes": dict(routes)}
    if geometric_pair is not None:
        upper_x, upper_dual = geometric_pair
        params[GEOMETRIC_MEAN] = math.sqrt(upper_x * upper_dual)

    if not routes:
        logger.info(f"No upper-bound route for {spec.label()}")
        return BoundEstimate(lower=0.0, params=params)

    method = min(routes, key=routes.get)
    return BoundEstimate(
        lower=0.0, upper=routes[method], upper_method=method, params=params
    )


# dense operator norms


@dataclass
class RieszThorinReport:
    norm_2: float
    norm_p: float
    norm_q: float
    bound: float
    holds: bool


def operator_norm_lower(
    matrix: np.ndarray,
    p: float,
    restarts: int = 8,
    iterations: int = 500,
    seed: int = 0,
    tolerance: float = 1e-14,
) -> BoundEstimate:
    """Lower bound for ||T||_{p -> p} of a dense matrix; exact for p in {1, 2}."""
    T = np.asarray(matrix, dtype=complex)
    if T.ndim != 2:
        raise DomainError("Operator norm needs a two-dimensional matrix")
    if not p >= 1:
        raise DomainError(f"Operator norm needs p >= 1, got {p}")

    if p == 2.0:
        value = float(np.linalg.norm(T, 2))
        return BoundEstimate(lower=value, upper=value, upper_method="exact")
    if p == 1.0:
        value = float(np.abs(T).sum(axis=0).max())
        return BoundEstimate(lower=value, upper=value, upper_method="exact")

    q = p / (p - 1.0)
    n = T.shape[1]

    def ratio(x: np.ndarray) -> float:
        base = np.sum(np.abs(x) ** p) ** (1.0 / p)
        if base == 0:
            return 0.0
        return float(np.sum(np.abs(T @ x) ** p) ** (1.0 / p) / base)

    starts = [np.ones(n, dtype=complex)]
    column_mass = np.sum(np.abs(T) ** p, axis=0)
    basis = np.zeros(n, dtype=complex)
    basis[int(np.argmax(column_mass))] = 1.0
    starts.append(basis)
    real = bool(np.all(T.imag == 0))
    for r in range(restarts):
        rng = np.random.default_rng(seed + r)
        x = rng.normal(size=n)
        starts.append(x if real else x + 1j * rng.normal(size=n))

    best, witness = 0.0, None
    for x in starts:
        value = ratio(x)
        if value > best:
            best, witness = value, x
        previous = value
        for _ in range(iterations):
            x = _duality_map(T.conj().T @ _duality_map(T @ x, p), q)
            if not np.any(x):
                break
            x = x / np.max(np.abs(x))
            value = ratio(x)
            if value > best:
                best, witness = value, x
            if abs(value - previous) <= tolerance * max(value, 1e-300):
                break
            previous = value

    return BoundEstimate(lower=best, witness=witness, params={"p": p})


def riesz_thorin_check(
    matrix: np.ndarray,
    p: float,
    restarts: int = 8,
    iterations: int = 500,
    seed: int = 0,
    slack: float = 1e-6,
) -> RieszThorinReport:
    """Check ||T||_2 <= sqrt(||T||_p ||T||_q) with estimated p- and q-norms."""
    if not p > 1:
        raise DomainError(f"Riesz-Thorin check needs p > 1, got {p}")
    q = p / (p - 1.0)
    norm_2 = operator_norm_lower(matrix, 2.0).lower
    norm_p = operator_norm_lower(matrix, p, restarts, iterations, seed).lower
    norm_q = operator_norm_lower(matrix, q, restarts, iterations, seed).lower
    bound = math.sqrt(norm_p * norm_q)
    return RieszThorinReport(
        norm_2=norm_2,
        norm_p=norm_p,
        norm_q=norm_q,
        bound=bound,
        holds=norm_2 <= bound * (1.0 + slack),
    )


# symmetry diagnostics


@dataclass
class SymmetryReport:
    first: float
    second: float

    @property
    def relative_gap(self) -> float:
        scale = max(self.first, self.second)
        return 0.0 if scale == 0 else abs(self.first - self.second) / scale


def conjugate_symmetry_check(
    a: Symbol,
    spec: SpaceSpec,
    N: int,
    restarts: int = DEFAULT_RESTARTS,
    iterations: int = DEFAULT_ITERATIONS,
    seed: int = 0,
) -> SymmetryReport:
    """Compare lower bounds for L(a) and L(a-bar) on a reflection-invariant space."""
    if not spec.is_reflection_invariant:
        raise DomainError(f"{spec.label()} is not reflection invariant")
    first = multiplier_norm_lower(a, spec, N, restarts, iterations, seed).lower
    second = multiplier_norm_lower(
        conjugate_symbol(a), spec, N, restarts, iterations, seed
    ).lower
    return SymmetryReport(first=first, second=second)


def duality_check(
    a: Symbol,
    p: float,
    N: int,
    restarts: int = DEFAULT_RESTARTS,
    iterations: int = DEFAULT_ITERATIONS,
    seed: int = 0,
) -> SymmetryReport:
    """Compare lower bounds for L(a) on l^p and L(a-bar) on l^q."""
    if not p > 1:
        raise DomainError(f"Duality check needs p > 1, got {p}")
    q = p / (p - 1.0)
    first = multiplier_norm_lower(
        a, SpaceSpec.lebesgue(p), N, restarts, iterations, seed
    )
    second = multiplier_norm_lower(
        conjugate_symbol(a), SpaceSpec.lebesgue(q), N, restarts, iterations, seed
    )
    return SymmetryReport(first=first.lower, second=second.lower)


def boyd_constant_estimate(
    spec: SpaceSpec,
    p_low: float,
    p_high: float,
    symbols: Sequence[Symbol],
    N: int,
    restarts: int = DEFAULT_RESTARTS,
    iterations: int = DEFAULT_ITERATIONS,
    seed: int = 0,
) -> Tuple[float, List[float]]:
    """Empirical lower bound for the interpolation constant of X between
    l^{p_low} and l^{p_high}, over Laurent operators with the given symbols."""
    if spec.is_weighted:
        raise DomainError("Interpolation constants are estimated on unweighted spaces")
    if not 1 <= p_low < p_high:
        raise DomainError(f"Need 1 <= p_low < p_high, got {p_low}, {p_high}")
    if not symbols:
        raise DomainError("Interpolation constant estimate needs at least one symbol")

    ratios = []
    for a in symbols:
        inside = multiplier_norm_lower(a, spec, N, restarts, iterations, seed).lower
        ends = max(
            multiplier_norm_lower(
                a, SpaceSpec.lebesgue(p_low), N, restarts, iterations, seed
            ).lower,
            multiplier_norm_lower(
                a, SpaceSpec.lebesgue(p_high), N, restarts, iterations, seed
            ).lower,
        )
        ratios.append(inside / ends if ends > 0 else 0.0)
    return max(ratios), ratios
