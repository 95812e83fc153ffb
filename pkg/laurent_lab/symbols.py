"""
Symbols on the unit circle

Trigonometric polynomials, continuous piecewise-linear and piecewise-constant
symbols, and finite linear combinations of them. Fourier coefficients of the
piecewise kinds come from closed-form integrals; sup-norms are grid maxima
refined by a bounded 1-D search; variations are exact for piecewise kinds and
adaptive quadratures of |a'| for polynomials.
"""

import logging
import math
import re
from abc import ABC, abstractmethod
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate, optimize

from laurent_lab.errors import ConfigError, DomainError, UnsupportedError

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
DEFAULT_GRID = 2**14
VARIATION_GRID = 2**16
REFINE_CANDIDATES = 4
KERNEL_NEAR_ZERO = 1e-6
TRIM_TOLERANCE = 0.0


def reduce_angle(theta):
    """Map angles into [-pi, pi)."""
    return np.mod(np.asarray(theta, dtype=float) + math.pi, TWO_PI) - math.pi


def circle_grid(size: int) -> np.ndarray:
    """theta_m = -pi + 2 pi m / size."""
    return -math.pi + TWO_PI * np.arange(size) / size


class Symbol(ABC):
    """Function a: T -> C, identified with a 2pi-periodic function of theta."""

    kind = "symbol"

    @abstractmethod
    def evaluate(self, theta) -> np.ndarray:
        """a(theta) for an array of angles."""

    @abstractmethod
    def coefficients(self, n: int) -> np.ndarray:
        """Fourier coefficients a^(k) for k = -n..n."""

    @abstractmethod
    def scale(self, c: complex) -> "Symbol":
        """c * a."""

    @abstractmethod
    def conjugate(self) -> "Symbol":
        """The pointwise conjugate of a."""

    @abstractmethod
    def translate(self, x: float) -> "Symbol":
        """theta -> a(theta - x)."""

    def breakpoints(self) -> np.ndarray:
        return np.zeros(0)

    @property
    def is_continuous(self) -> bool:
        return True

    def __call__(self, theta):
        values = self.evaluate(np.atleast_1d(theta))
        return complex(values[0]) if np.ndim(theta) == 0 else values

    def __add__(self, other: "Symbol") -> "Symbol":
        if not isinstance(other, Symbol):
            return NotImplemented
        return combine([(1.0, self), (1.0, other)])

    def __sub__(self, other: "Symbol") -> "Symbol":
        if not isinstance(other, Symbol):
            return NotImplemented
        return combine([(1.0, self), (-1.0, other)])

    def __neg__(self) -> "Symbol":
        return self.scale(-1.0)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return self.scale(complex(other))
        if isinstance(self, TrigPoly) and isinstance(other, TrigPoly):
            return TrigPoly(np.convolve(self.coeffs, other.coeffs))
        if isinstance(other, Symbol):
            raise UnsupportedError(
                f"Product of {self.kind} and {other.kind} symbols is not representable"
            )
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return self.scale(complex(other))
        return NotImplemented


class TrigPoly(Symbol):
    """sum_{|k| <= n} c_k e^{ik theta}; ``coeffs`` holds c_{-n}..c_n."""

    kind = "trigpoly"

    def __init__(self, coeffs: Sequence[complex]):
        c = np.asarray(coeffs, dtype=complex).ravel()
        if c.size % 2 == 0:
            raise DomainError(
                "Trigonometric polynomial needs 2n+1 centred coefficients"
            )
        if not np.all(np.isfinite(c)):
            raise DomainError("Trigonometric polynomial coefficients must be finite")
        n = (c.size - 1) // 2
        while n > 0 and abs(c[0]) <= TRIM_TOLERANCE and abs(c[-1]) <= TRIM_TOLERANCE:
            c = c[1:-1]
            n -= 1
        self.coeffs = c
        self.coeffs.setflags(write=False)

    @classmethod
    def from_mapping(cls, entries) -> "TrigPoly":
        n = max((abs(int(k)) for k in entries), default=0)
        c = np.zeros(2 * n + 1, dtype=complex)
        for k, v in entries.items():
            c[int(k) + n] += v
        return cls(c)

    @property
    def degree(self) -> int:
        return (self.coeffs.size - 1) // 2

    def coefficient(self, k: int) -> complex:
        n = self.degree
        return complex(self.coeffs[k + n]) if abs(k) <= n else 0j

    def coefficients(self, n: int) -> np.ndarray:
        if n < 0:
            raise DomainError(f"Coefficient radius must be >= 0, got {n}")
        d = self.degree
        if n >= d:
            return np.pad(self.coeffs, (n - d, n - d))
        return self.coeffs[d - n : d + n + 1].copy()

    def evaluate(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        k = np.arange(-self.degree, self.degree + 1)
        out = np.empty(theta.shape, dtype=complex)
        flat, res = theta.ravel(), out.reshape(-1)
        # chunks keep the phase matrix small
        for start in range(0, flat.size, 4096):
            block = flat[start : start + 4096]
            phases = np.exp(1j * np.outer(block, k))
            res[start : start + block.size] = phases @ self.coeffs
        return out

    def derivative(self) -> "TrigPoly":
        k = np.arange(-self.degree, self.degree + 1)
        return TrigPoly(1j * k * self.coeffs)

    def scale(self, c: complex) -> "TrigPoly":
        return TrigPoly(self.coeffs * c)

    def conjugate(self) -> "TrigPoly":
        return TrigPoly(np.conj(self.coeffs[::-1]))

    def translate(self, x: float) -> "TrigPoly":
        k = np.arange(-self.degree, self.degree + 1)
        return TrigPoly(self.coeffs * np.exp(-1j * k * x))

    def __eq__(self, other) -> bool:
        if not isinstance(other, TrigPoly):
            return NotImplemented
        return np.array_equal(self.coeffs, other.coeffs)

    __hash__ = None

    def __repr__(self) -> str:
        return f"TrigPoly(degree={self.degree})"


def _normalize_breakpoints(breakpoints, values, merge_equal: bool):
    t = reduce_angle(np.asarray(breakpoints, dtype=float).ravel())
    v = np.asarray(values, dtype=complex).ravel()
    if t.size == 0 or t.size != v.size:
        raise DomainError(
            "Piecewise symbol needs matching nonempty breakpoints and values"
        )
    if not np.all(np.isfinite(v)):
        raise DomainError("Piecewise symbol values must be finite")
    order = np.argsort(t, kind="stable")
    t, v = t[order], v[order]
    if np.any(np.diff(t) <= 0):
        raise DomainError("Breakpoints must be distinct modulo 2pi")
    if merge_equal and t.size > 1:
        keep = np.concatenate(([True], v[1:] != v[:-1]))
        if not keep.any():
            keep[0] = True
        t, v = t[keep], v[keep]
    return t, v


def _cyclic_segments(t: np.ndarray):
    """Segment starts and ends with the last one wrapping through 2pi."""
    ends = np.concatenate((t[1:], [t[0] + TWO_PI]))
    return t, ends


def _check_radius(n: int):
    if n < 0:
        raise DomainError(f"Coefficient radius must be >= 0, got {n}")


class PiecewiseLinear(Symbol):
    """Continuous periodic symbol, linear between breakpoints."""

    kind = "piecewise_linear"

    def __init__(self, breakpoints: Sequence[float], values: Sequence[complex]):
        self.t, self.v = _normalize_breakpoints(breakpoints, values, merge_equal=False)

    def breakpoints(self) -> np.ndarray:
        return self.t.copy()

    def evaluate(self, theta) -> np.ndarray:
        x = reduce_angle(theta)
        if self.t.size == 1:
            return np.full(x.shape, self.v[0], dtype=complex)
        xp = np.concatenate((self.t, [self.t[0] + TWO_PI]))
        fp = np.concatenate((self.v, [self.v[0]]))
        # shift angles below the first breakpoint into the wrapped segment
        x = np.where(x < self.t[0], x + TWO_PI, x)
        return np.interp(x, xp, fp.real) + 1j * np.interp(x, xp, fp.imag)

    def coefficients(self, n: int) -> np.ndarray:
        _check_radius(n)
        starts, ends = _cyclic_segments(self.t)
        A = self.v
        B = (np.roll(self.v, -1) - self.v) / (ends - starts)
        k = np.arange(-n, n + 1)
        out = np.empty(k.size, dtype=complex)

        zero = k == 0
        out[zero] = np.sum((A + np.roll(self.v, -1)) / 2.0 * (ends - starts)) / TWO_PI

        kk = k[~zero].astype(float)[:, None]

        def antiderivative(theta, local):
            return np.exp(-1j * kk * theta) * ((A + B * local) * (1j / kk) + B / kk**2)

        upper = antiderivative(ends[None, :], (ends - starts)[None, :])
        values = upper - antiderivative(starts[None, :], 0.0)
        out[~zero] = values.sum(axis=1) / TWO_PI
        return out

    def scale(self, c: complex) -> "PiecewiseLinear":
        return PiecewiseLinear(self.t, self.v * c)

    def conjugate(self) -> "PiecewiseLinear":
        return PiecewiseLinear(self.t, np.conj(self.v))

    def translate(self, x: float) -> "PiecewiseLinear":
        return PiecewiseLinear(self.t + x, self.v)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PiecewiseLinear):
            return NotImplemented
        return np.array_equal(self.t, other.t) and np.array_equal(self.v, other.v)

    __hash__ = None

    def __repr__(self) -> str:
        return f"PiecewiseLinear(pieces={self.t.size})"


class Step(Symbol):
    """Piecewise-constant symbol; ``values[i]`` holds on [t_i, t_{i+1})."""

    kind = "step"

    def __init__(self, breakpoints: Sequence[float], values: Sequence[complex]):
        self.t, self.v = _normalize_breakpoints(breakpoints, values, merge_equal=True)

    def breakpoints(self) -> np.ndarray:
        return self.t.copy()

    @property
    def is_continuous(self) -> bool:
        return self.t.size == 1

    def evaluate(self, theta) -> np.ndarray:
        x = reduce_angle(theta)
        idx = np.searchsorted(self.t, x, side="right") - 1
        # angles before t_0 belong to the last (wrapping) piece
        return self.v[np.mod(idx, self.t.size)]

    def coefficients(self, n: int) -> np.ndarray:
        _check_radius(n)
        starts, ends = _cyclic_segments(self.t)
        k = np.arange(-n, n + 1)
        out = np.empty(k.size, dtype=complex)

        zero = k == 0
        out[zero] = np.sum(self.v * (ends - starts)) / TWO_PI

        kk = k[~zero].astype(float)[:, None]
        jumps = (np.exp(-1j * kk * ends) - np.exp(-1j * kk * starts)) / (-1j * kk)
        out[~zero] = (jumps * self.v).sum(axis=1) / TWO_PI
        return out

    def scale(self, c: complex) -> "Step":
        return Step(self.t, self.v * c)

    def conjugate(self) -> "Step":
        return Step(self.t, np.conj(self.v))

    def translate(self, x: float) -> "Step":
        return Step(self.t + x, self.v)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Step):
            return NotImplemented
        return np.array_equal(self.t, other.t) and np.array_equal(self.v, other.v)

    __hash__ = None

    def __repr__(self) -> str:
        return f"Step(pieces={self.t.size})"


class Combination(Symbol):
    """Finite linear combination sum c_i a_i of non-polynomial symbols and at
    most one trigonometric polynomial."""

    kind = "combination"

    def __init__(self, terms: List[Tuple[complex, Symbol]]):
        self.terms = [(complex(c), s) for c, s in terms]

    def breakpoints(self) -> np.ndarray:
        parts = [s.breakpoints() for _, s in self.terms]
        return np.unique(np.concatenate(parts)) if parts else np.zeros(0)

    @property
    def is_continuous(self) -> bool:
        return all(s.is_continuous for _, s in self.terms)

    def evaluate(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        out = np.zeros(theta.shape, dtype=complex)
        for c, s in self.terms:
            out += c * s.evaluate(theta)
        return out

    def coefficients(self, n: int) -> np.ndarray:
        _check_radius(n)
        out = np.zeros(2 * n + 1, dtype=complex)
        for c, s in self.terms:
            out += c * s.coefficients(n)
        return out

    def scale(self, c: complex) -> Symbol:
        return combine([(c * ci, s) for ci, s in self.terms])

    def conjugate(self) -> Symbol:
        return combine([(np.conj(c), s.conjugate()) for c, s in self.terms])

    def translate(self, x: float) -> Symbol:
        return combine([(c, s.translate(x)) for c, s in self.terms])

    def __repr__(self) -> str:
        return f"Combination(terms={len(self.terms)})"


def combine(terms: Sequence[Tuple[complex, Symbol]]) -> Symbol:
    """Flatten and simplify a linear combination of symbols."""
    flat: List[Tuple[complex, Symbol]] = []
    for c, s in terms:
        if isinstance(s, Combination):
            flat.extend((c * ci, si) for ci, si in s.terms)
        else:
            flat.append((complex(c), s))

    poly: Optional[TrigPoly] = None
    rest: List[Tuple[complex, Symbol]] = []
    for c, s in flat:
        if isinstance(s, TrigPoly):
            scaled = s.scale(c)
            if poly is None:
                poly = scaled
            else:
                n = max(poly.degree, scaled.degree)
                poly = TrigPoly(poly.coefficients(n) + scaled.coefficients(n))
        elif c != 0:
            rest.append((c, s))

    if not rest:
        return poly if poly is not None else TrigPoly([0.0])
    if poly is not None and np.any(poly.coeffs != 0):
        rest.append((1.0, poly))
    if len(rest) == 1 and rest[0][0] == 1.0:
        return rest[0][1]
    return Combination(rest)


# operations


def eval_symbol(a: Symbol, theta: float) -> complex:
    """a(e^{i theta})."""
    return complex(a.evaluate(np.array([float(theta)]))[0])


def fourier_coefficient(a: Symbol, n: int) -> complex:
    """a^(n) = (1/2pi) int a(theta) e^{-in theta} d theta."""
    return complex(a.coefficients(abs(int(n)))[int(n) + abs(int(n))])


def grid_values(a: Symbol, size: int = DEFAULT_GRID) -> np.ndarray:
    """Values of a on :func:`circle_grid` (FFT for polynomials)."""
    if isinstance(a, TrigPoly) and size > 2 * a.degree:
        k = np.arange(-a.degree, a.degree + 1)
        folded = np.zeros(size, dtype=complex)
        np.add.at(folded, np.mod(k, size), a.coeffs * (-1.0) ** k)
        return size * np.fft.ifft(folded)
    return a.evaluate(circle_grid(size))


def _local_maxima(magnitudes: np.ndarray, count: int) -> np.ndarray:
    left = np.roll(magnitudes, 1)
    right = np.roll(magnitudes, -1)
    peaks = np.flatnonzero((magnitudes >= left) & (magnitudes >= right))
    if peaks.size == 0:
        peaks = np.array([int(np.argmax(magnitudes))])
    order = np.argsort(magnitudes[peaks])[::-1]
    return peaks[order[:count]]


def sup_norm_details(a: Symbol, grid: int = DEFAULT_GRID) -> Tuple[float, float, int]:
    """(||a||_inf, angle of the maximum, grid size)."""
    if isinstance(a, (Step, PiecewiseLinear)):
        i = int(np.argmax(np.abs(a.v)))
        return float(abs(a.v[i])), float(a.t[i]), int(a.t.size)

    theta = circle_grid(grid)
    magnitudes = np.abs(grid_values(a, grid))
    best = int(np.argmax(magnitudes))
    value, where = float(magnitudes[best]), float(theta[best])

    candidates = list(a.breakpoints())
    for theta_b in candidates:
        m = abs(eval_symbol(a, theta_b))
        if m > value:
            value, where = m, float(theta_b)

    if a.is_continuous:
        h = TWO_PI / grid
        for idx in _local_maxima(magnitudes, REFINE_CANDIDATES):
            centre = theta[idx]
            result = optimize.minimize_scalar(
                lambda x: -abs(eval_symbol(a, x)),
                bounds=(centre - h, centre + h),
                method="bounded",
                options={"xatol": 1e-13},
            )
            if -result.fun > value:
                value, where = float(-result.fun), float(reduce_angle(result.x))
    return value, where, grid


def sup_norm(a: Symbol, grid: int = DEFAULT_GRID) -> float:
    """||a||_inf over the circle."""
    return sup_norm_details(a, grid)[0]


def _polynomial_variation(a: TrigPoly) -> float:
    if a.degree == 0:
        return 0.0
    d = a.derivative()
    k = np.arange(-d.degree, d.degree + 1)

    def speed(theta: float) -> float:
        return abs(np.dot(d.coeffs, np.exp(1j * k * theta)))

    pieces = max(8, 4 * a.degree)
    edges = np.linspace(-math.pi, math.pi, pieces + 1)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        value, _ = integrate.quad(speed, lo, hi, epsabs=1e-13, epsrel=1e-10, limit=100)
        total += value
    return total


def total_variation(a: Symbol) -> float:
    """V(a) = sup over partitions of sum |a(t_i) - a(t_{i-1})|."""
    if isinstance(a, TrigPoly):
        return _polynomial_variation(a)
    if isinstance(a, (Step, PiecewiseLinear)):
        if a.v.size == 1:
            return 0.0
        return float(np.sum(np.abs(np.roll(a.v, -1) - a.v)))

    grid = np.union1d(circle_grid(VARIATION_GRID), a.breakpoints())
    values = a.evaluate(grid)
    closed = np.concatenate((values, values[:1]))
    return float(np.sum(np.abs(np.diff(closed))))


def partial_sum(a: Symbol, n: int) -> TrigPoly:
    """S_n a = sum_{|k| <= n} a^(k) e^{ik theta}."""
    if n < 0:
        raise DomainError(f"Partial sum degree must be >= 0, got {n}")
    return TrigPoly(a.coefficients(int(n)))


def fejer_mean(a: Symbol, n: int) -> TrigPoly:
    """sigma_n a = sum_{|k| <= n} (1 - |k|/(n+1)) a^(k) e^{ik theta}."""
    if n < 0:
        raise DomainError(f"Fejer degree must be >= 0, got {n}")
    k = np.arange(-n, n + 1)
    return TrigPoly((1.0 - np.abs(k) / (n + 1.0)) * a.coefficients(int(n)))


def fejer_kernel(n: int, theta):
    """K_n(theta) = (1/(n+1)) (sin((n+1) theta/2) / sin(theta/2))^2."""
    if n < 0:
        raise DomainError(f"Fejer degree must be >= 0, got {n}")
    x = reduce_angle(theta)
    half = np.sin(x / 2.0)
    near = np.abs(half) < KERNEL_NEAR_ZERO

    with np.errstate(divide="ignore", invalid="ignore"):
        closed = (np.sin((n + 1) * x / 2.0) / half) ** 2 / (n + 1)

    if np.any(near):
        k = np.arange(1, n + 1)
        direct = 1.0 + 2.0 * np.sum(
            (1.0 - k / (n + 1.0)) * np.cos(np.multiply.outer(np.atleast_1d(x), k)),
            axis=-1,
        )
        closed = np.where(near, direct.reshape(np.shape(x)), closed)

    return float(closed) if np.ndim(theta) == 0 else closed


def conjugate_symbol(a: Symbol) -> Symbol:
    """The pointwise conjugate a-bar, with a-bar^(k) = conj(a^(-k))."""
    return a.conjugate()


def translate_symbol(a: Symbol, x: float) -> Symbol:
    """a_x(theta) = a(theta - x), with a_x^(k) = e^{-ikx} a^(k)."""
    return a.translate(float(x))


def analytic_project(a: Symbol, sign: str) -> TrigPoly:
    """Keep the coefficients with k >= 0 (``"+"``) or k < 0 (``"-"``)."""
    if not isinstance(a, TrigPoly):
        raise UnsupportedError("Analytic projection is only available for polynomials")
    if sign not in ("+", "-"):
        raise DomainError(f"Projection sign must be '+' or '-', got {sign!r}")
    k = np.arange(-a.degree, a.degree + 1)
    mask = k >= 0 if sign == "+" else k < 0
    return TrigPoly(np.where(mask, a.coeffs, 0.0))


def stechkin_bound(a: Symbol, constant: float) -> float:
    """c (||a||_inf + V(a)), a calibrated upper bound for ||L(a)||."""
    if not constant > 0:
        raise DomainError(f"Stechkin constant must be positive, got {constant}")
    return constant * (sup_norm(a) + total_variation(a))


# constructors


def hat(peak: float, width: float) -> PiecewiseLinear:
    """Triangle of height ``peak`` supported on (-width, width)."""
    if not 0 < width <= math.pi:
        raise DomainError(f"Hat width must lie in (0, pi], got {width}")
    if width == math.pi:
        return PiecewiseLinear([-math.pi, 0.0], [0.0, peak])
    return PiecewiseLinear([-width, 0.0, width], [0.0, peak, 0.0])


def step(a: float, b: float, h: complex) -> Step:
    """h times the indicator of [a, b)."""
    if not b > a:
        raise DomainError(f"Step interval needs a < b, got [{a}, {b})")
    if b - a >= TWO_PI:
        return Step([0.0], [h])
    return Step([a, b], [h, 0.0])


def const(c: complex) -> TrigPoly:
    return TrigPoly([c])


# literal parsing

_PI_LITERAL = re.compile(
    r"^([+-]?)(?:(\d*\.?\d+(?:[eE][+-]?\d+)?)\*?)?pi(?:/(\d*\.?\d+))?$"
)
_CALL = re.compile(r"^\s*([a-z_]+)\s*\((.*)\)\s*$", re.DOTALL)


def parse_real(token: str) -> float:
    """Parse a real literal; accepts multiples and fractions of ``pi``."""
    text = token.strip().replace(" ", "")
    match = _PI_LITERAL.match(text)
    if match:
        sign, factor, divisor = match.groups()
        value = math.pi * (float(factor) if factor else 1.0)
        if divisor:
            value /= float(divisor)
        return -value if sign == "-" else value
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"Cannot parse real number: {token!r}")


def parse_complex(token: str) -> complex:
    text = token.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(text)
    except ValueError:
        try:
            return complex(parse_real(token))
        except ConfigError:
            raise ConfigError(f"Cannot parse complex number: {token!r}")


def split_arguments(text: str) -> List[str]:
    """Split on top-level commas."""
    parts, depth, current = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(current).strip())
            current = []
        else:
            current.append(ch)
    parts.append("".join(current).strip())
    return parts


def parse_symbol(text: str) -> Symbol:
    """Build a symbol from its literal form.

    trigpoly: c_{-n}, ..., c_n | hat(peak, width) | step(a, b, h) | const(c)
    | fejer(<symbol>, n) | partial(<symbol>, n)
    """
    literal = text.strip()
    if literal.startswith("trigpoly:"):
        body = literal[len("trigpoly:") :]
        return TrigPoly([parse_complex(tok) for tok in body.split(",")])

    match = _CALL.match(literal)
    if not match:
        raise ConfigError(f"Unrecognised symbol literal: {text!r}")
    name, body = match.groups()
    args = split_arguments(body)

    try:
        if name == "hat" and len(args) == 2:
            return hat(parse_real(args[0]), parse_real(args[1]))
        if name == "step" and len(args) == 3:
            lo, hi = parse_real(args[0]), parse_real(args[1])
            return step(lo, hi, parse_complex(args[2]))
        if name == "const" and len(args) == 1:
            return const(parse_complex(args[0]))
        if name in ("fejer", "partial") and len(args) == 2:
            inner = parse_symbol(args[0])
            degree = int(args[1])
            if name == "fejer":
                return fejer_mean(inner, degree)
            return partial_sum(inner, degree)
    except DomainError as e:
        raise ConfigError(f"Invalid symbol literal {text!r}: {str(e)}")

    raise ConfigError(f"Unrecognised symbol literal: {text!r}")
