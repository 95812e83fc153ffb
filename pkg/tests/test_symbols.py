"""
Unit tests for symbols, Fourier coefficients and Fejer means
"""

import math

import numpy as np
import pytest
from scipy import integrate

from laurent_lab.errors import ConfigError, DomainError, UnsupportedError
from laurent_lab.symbols import (
    Combination,
    PiecewiseLinear,
    Step,
    TrigPoly,
    analytic_project,
    conjugate_symbol,
    const,
    eval_symbol,
    fejer_kernel,
    fejer_mean,
    fourier_coefficient,
    hat,
    parse_real,
    parse_symbol,
    partial_sum,
    stechkin_bound,
    step,
    sup_norm,
    total_variation,
    translate_symbol,
)


def numeric_coefficient(a, k, points=1 << 16):
    """Riemann sum of (1/2pi) int a(theta) e^{-ik theta}, exact for polynomials."""
    theta = np.linspace(-math.pi, math.pi, points, endpoint=False)
    return complex(np.mean(a.evaluate(theta) * np.exp(-1j * k * theta)))


def adaptive_coefficient(a, k):
    """(1/2pi) int a(theta) e^{-ik theta} by adaptive quadrature split at the kinks."""
    kinks = [t for t in a.breakpoints() if -math.pi < t < math.pi]

    def part(f):
        value, _ = integrate.quad(
            f, -math.pi, math.pi, points=kinks, limit=200, epsabs=1e-14, epsrel=1e-12
        )
        return value

    real = part(lambda t: (a.evaluate(np.array([t]))[0] * np.exp(-1j * k * t)).real)
    imag = part(lambda t: (a.evaluate(np.array([t]))[0] * np.exp(-1j * k * t)).imag)
    return complex(real, imag) / (2 * math.pi)


class TestRepresentations:
    """Test cases for symbol representations"""

    def test_trigpoly_evaluation(self):
        """Coefficients c_{-n}..c_n evaluate as sum c_k e^{ik theta}"""
        a = TrigPoly([0.5, 0.0, 0.5])
        assert eval_symbol(a, 0.0) == pytest.approx(1.0)
        assert eval_symbol(a, math.pi / 2) == pytest.approx(0.0, abs=1e-15)
        assert a.degree == 1

    def test_trigpoly_trimmed(self):
        """Zero outer coefficients are dropped"""
        assert TrigPoly([0, 0, 2, 0, 0]).degree == 0
        with pytest.raises(DomainError):
            TrigPoly([1.0, 2.0])

    def test_hat_coefficients(self):
        """The wide hat 1 - |theta|/pi has a^(k) = 2/(pi^2 k^2) for odd k"""
        a = hat(1.0, math.pi)
        assert fourier_coefficient(a, 0) == pytest.approx(0.5)
        assert fourier_coefficient(a, 1) == pytest.approx(2 / math.pi**2)
        assert fourier_coefficient(a, 2) == pytest.approx(0.0, abs=1e-15)
        assert fourier_coefficient(a, -3) == pytest.approx(2 / (9 * math.pi**2))

    def test_step_coefficients(self):
        """Indicator of [0, pi) has a^(1) = -i/pi"""
        a = step(0.0, math.pi, 1.0)
        assert fourier_coefficient(a, 0) == pytest.approx(0.5)
        assert fourier_coefficient(a, 1) == pytest.approx(-1j / math.pi)
        assert not a.is_continuous

    def test_closed_form_matches_quadrature(self):
        """Closed-form coefficients agree with a fine Riemann sum"""
        a = hat(2.0, math.pi / 3).translate(0.4)
        for k in (-5, 0, 2, 7):
            assert fourier_coefficient(a, k) == pytest.approx(
                numeric_coefficient(a, k), abs=1e-6
            )

    @pytest.mark.parametrize(
        "a",
        [hat(1.0, math.pi / 2), hat(2.0, math.pi / 3).translate(0.4)],
        ids=["hat", "shifted-hat"],
    )
    def test_closed_form_to_quadrature_accuracy(self, a):
        """Closed-form coefficients match adaptive quadrature to 1e-10"""
        for k in (-9, -2, 0, 1, 4, 9):
            assert abs(fourier_coefficient(a, k) - adaptive_coefficient(a, k)) < 1e-10

    def test_invalid_constructors(self):
        """Hat widths and step intervals are validated"""
        with pytest.raises(DomainError):
            hat(1.0, 4.0)
        with pytest.raises(DomainError):
            step(1.0, 0.5, 1.0)


class TestArithmetic:
    """Test cases for symbol arithmetic"""

    def test_polynomial_sum(self):
        """Polynomial terms merge into a single polynomial"""
        total = TrigPoly([1.0, 0.0, 1.0]) + const(2.0)
        assert isinstance(total, TrigPoly)
        assert total.coefficient(0) == pytest.approx(2.0)

    def test_mixed_combination(self):
        """Mixed sums evaluate pointwise"""
        a = hat(1.0, math.pi / 2) + const(1.0)
        assert isinstance(a, Combination)
        assert eval_symbol(a, 0.0) == pytest.approx(2.0)
        assert sup_norm(a) == pytest.approx(2.0)

    def test_difference_cancels(self):
        """a - a vanishes everywhere"""
        a = hat(1.0, 1.0)
        zero = a - a
        assert sup_norm(zero) == pytest.approx(0.0, abs=1e-15)
        assert np.allclose(zero.coefficients(3), 0.0)

    def test_products(self):
        """Polynomials multiply; other products are unsupported"""
        a = TrigPoly([1.0, 0.0, 1.0])
        square = a * a
        assert square.degree == 2
        assert square.coefficient(0) == pytest.approx(2.0)
        with pytest.raises(UnsupportedError):
            hat(1.0, 1.0) * hat(1.0, 1.0)

    def test_conjugate_and_translate(self):
        """conj(a)^(k) = conj(a^(-k)); a_x^(k) = e^{-ikx} a^(k)"""
        a = TrigPoly([1j, 2.0, 0.0, 3.0 - 1j, 0.5])
        conj = conjugate_symbol(a)
        moved = translate_symbol(a, 0.3)
        for k in range(-2, 3):
            assert fourier_coefficient(conj, k) == pytest.approx(
                np.conj(fourier_coefficient(a, -k))
            )
            assert fourier_coefficient(moved, k) == pytest.approx(
                np.exp(-0.3j * k) * fourier_coefficient(a, k)
            )

    def test_analytic_projection(self):
        """P+ keeps k >= 0 and P- keeps k < 0"""
        a = TrigPoly([1.0, 2.0, 3.0])
        assert analytic_project(a, "+").coefficient(-1) == 0
        assert analytic_project(a, "-").coefficient(-1) == pytest.approx(1.0)
        with pytest.raises(UnsupportedError):
            analytic_project(hat(1.0, 1.0), "+")


class TestNormsAndVariation:
    """Test cases for sup norm and total variation"""

    def test_sup_norm(self):
        """Nonnegative coefficients peak at theta = 0"""
        a = parse_symbol("trigpoly: 0.5,1,0,1,0")
        assert sup_norm(a) == pytest.approx(2.5, rel=1e-12)

    def test_sup_norm_refined_off_grid(self):
        """The maximum of a shifted polynomial is found between grid points"""
        a = TrigPoly([0.5, 0.0, 0.5]).translate(1e-5)
        assert sup_norm(a, grid=64) == pytest.approx(1.0, abs=1e-12)

    def test_total_variation(self):
        """V(cos) = 4, V(hat) = 2 peak, V(step) = 2 h"""
        assert total_variation(TrigPoly([0.5, 0.0, 0.5])) == pytest.approx(4.0)
        assert total_variation(hat(1.5, 1.0)) == pytest.approx(3.0)
        assert total_variation(step(0.0, 1.0, 2.0)) == pytest.approx(4.0)
        assert total_variation(const(3.0)) == 0.0

    def test_stechkin_bound(self):
        """c (||a||_inf + V(a))"""
        assert stechkin_bound(hat(1.0, 1.0), 2.0) == pytest.approx(6.0)
        with pytest.raises(DomainError):
            stechkin_bound(hat(1.0, 1.0), 0.0)


class TestFejer:
    """Test cases for partial sums, Fejer means and the Fejer kernel"""

    def test_kernel(self):
        """K_n(0) = n + 1, K_n >= 0, mean one"""
        assert fejer_kernel(7, 0.0) == pytest.approx(8.0)
        theta = np.linspace(-math.pi, math.pi, 1024, endpoint=False)
        values = fejer_kernel(7, theta)
        assert values.min() >= -1e-12
        assert values.mean() == pytest.approx(1.0)

    def test_kernel_coefficients(self):
        """K_n^(k) = 1 - |k|/(n+1), exact on a grid of 2n + 2 or more points"""
        n = 6
        theta = np.linspace(-math.pi, math.pi, 64, endpoint=False)
        values = fejer_kernel(n, theta)
        for k in range(-n - 2, n + 3):
            coefficient = np.mean(values * np.exp(-1j * k * theta))
            expected = max(0.0, 1.0 - abs(k) / (n + 1.0))
            assert abs(coefficient - expected) < 1e-10

    def test_kernel_near_zero(self):
        """The direct sum takes over near theta = 0"""
        assert fejer_kernel(4, 1e-9) == pytest.approx(5.0)

    def test_fejer_is_average_of_partial_sums(self):
        """sigma_n = (1/(n+1)) sum_{k <= n} S_k"""
        a = hat(1.0, math.pi / 2)
        n = 6
        partials = [partial_sum(a, k).coefficients(n) for k in range(n + 1)]
        np.testing.assert_allclose(
            fejer_mean(a, n).coefficients(n), sum(partials) / (n + 1), atol=1e-15
        )

    def test_fejer_contraction(self):
        """||sigma_n a||_inf <= ||a||_inf"""
        a = hat(1.0, math.pi / 2)
        for n in (1, 8, 64):
            assert sup_norm(fejer_mean(a, n)) <= 1.0 + 1e-12

    def test_hat_convergence(self):
        """sigma_n(hat) converges uniformly"""
        a = hat(1.0, math.pi)
        errors = [sup_norm(fejer_mean(a, n) - a) for n in (16, 64, 256)]
        assert errors[0] > errors[1] > errors[2]
        assert errors[2] == pytest.approx(0.0067, abs=0.002)

    def test_fejer_commutes_with_translation(self):
        """sigma_n(a_x) = (sigma_n a)_x"""
        a = hat(1.0, math.pi / 2) + step(0.0, math.pi, 0.5)
        for x in (0.3, -1.1):
            for n in (0, 3, 16):
                left = fejer_mean(translate_symbol(a, x), n).coefficients(n)
                right = translate_symbol(fejer_mean(a, n), x).coefficients(n)
                np.testing.assert_allclose(left, right, atol=1e-14)

    def test_negative_degree(self):
        """Degrees are nonnegative"""
        with pytest.raises(DomainError):
            fejer_mean(const(1.0), -1)


class TestParsing:
    """Test cases for the literal grammar"""

    def test_parse_real(self):
        """Multiples and fractions of pi"""
        assert parse_real("pi") == pytest.approx(math.pi)
        assert parse_real("-pi/2") == pytest.approx(-math.pi / 2)
        assert parse_real("3*pi/4") == pytest.approx(3 * math.pi / 4)
        assert parse_real("0.25") == 0.25

    def test_parse_symbols(self):
        """Each literal form builds the matching representation"""
        assert isinstance(parse_symbol("hat(1,pi/2)"), PiecewiseLinear)
        assert isinstance(parse_symbol("step(0,pi,1)"), Step)
        assert parse_symbol("const(2)") == const(2.0)
        assert parse_symbol("trigpoly: 0,0,1").coefficient(1) == 1.0
        assert parse_symbol("fejer(hat(1,pi),5)").degree == 5
        assert parse_symbol("partial(const(1),3)").degree == 0

    def test_malformed(self):
        """Unknown or malformed literals raise ConfigError"""
        with pytest.raises(ConfigError):
            parse_symbol("triangle(1)")
        with pytest.raises(ConfigError):
            parse_symbol("hat(1,10)")
        with pytest.raises(ConfigError):
            parse_real("tau")


if __name__ == "__main__":
    pytest.main([__file__])
