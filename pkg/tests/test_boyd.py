"""
Unit tests for dilation operators and Boyd index estimates
"""

import numpy as np
import pytest

from laurent_lab.boyd import (
    MIN_FIT_POINTS,
    DecreasingSequence,
    boyd_indices,
    candidate_family,
    dilate_down,
    dilate_up,
    dilation_ratios,
    duality_pairs,
    estimate_H,
    estimate_K,
    expected_lebesgue_index,
    lebesgue_dilation_bound,
)
from laurent_lab.errors import DomainError
from laurent_lab.spaces import SpaceSpec
from laurent_lab.weights import Weight


class TestDilations:
    """Test cases for the dilation operators E_j and D_j"""

    def test_dilate_down(self):
        """(E_j g)_k = g_{jk}"""
        g = DecreasingSequence([6, 5, 4, 3, 2, 1])
        assert dilate_down(2, g) == DecreasingSequence([5, 3, 1])
        assert dilate_down(4, g) == DecreasingSequence([3])

    def test_dilate_up(self):
        """(D_j g)_k = g_{ceil(k/j)}"""
        g = DecreasingSequence([2, 1])
        assert dilate_up(3, g) == DecreasingSequence([2, 2, 2, 1, 1, 1])

    def test_left_inverse(self):
        """E_j D_j is the identity"""
        g = DecreasingSequence([9, 4, 4, 1, 0.5])
        for j in (1, 2, 5):
            assert dilate_down(j, dilate_up(j, g)) == g

    def test_invalid_inputs(self):
        """Increasing sequences and non-positive factors are rejected"""
        with pytest.raises(DomainError):
            DecreasingSequence([1, 2])
        with pytest.raises(DomainError):
            dilate_down(0, DecreasingSequence([1]))

    def test_candidates_are_decreasing(self):
        """Every candidate is a valid decreasing sequence within the budget"""
        family = candidate_family(256, seed=3, j=4)
        assert all(0 < len(g) <= 256 for g in family)
        assert all(np.all(np.diff(g.values) <= 0) for g in family)


class TestDilationNorms:
    """Test cases for H(j) and K(j)"""

    @pytest.mark.parametrize("p", [1.0, 1.5, 3.0])
    def test_lebesgue_H(self, p):
        """H(j) = j^{-1/p} on l^p"""
        spec = SpaceSpec.lebesgue(p)
        for j in (2, 8, 32):
            value = estimate_H(spec, j, budget=1024)
            assert value == pytest.approx(lebesgue_dilation_bound(p, j), rel=1e-12)

    def test_lebesgue_K(self):
        """D_j scales every l^p norm by j^{1/p}"""
        spec = SpaceSpec.lebesgue(2.0)
        ratios = dilation_ratios(spec, 4, candidate_family(64), up=True)
        np.testing.assert_allclose(ratios, 2.0, rtol=1e-12)
        assert estimate_K(spec, 4, budget=64) == pytest.approx(2.0)

    def test_weighted_rejected(self):
        """Boyd indices are defined for unweighted spaces"""
        spec = SpaceSpec.lebesgue(2.0, Weight.power(0.2))
        with pytest.raises(DomainError):
            estimate_H(spec, 2, budget=64)
        with pytest.raises(DomainError):
            boyd_indices(spec, j_max=16, budget=64)

    @pytest.mark.parametrize(
        "spec",
        [SpaceSpec.lebesgue(1.5), SpaceSpec.lorentz(3.0, 1.5)],
        ids=lambda s: s.label(),
    )
    def test_submultiplicative(self, spec):
        """H(8) <= H(2) H(4) and K(8) <= K(2) K(4) up to sampling error"""
        H = {j: estimate_H(spec, j, budget=1024) for j in (2, 4, 8)}
        K = {j: estimate_K(spec, j, budget=1024) for j in (2, 4, 8)}
        assert H[8] <= H[2] * H[4] * (1 + 1e-2)
        assert K[8] <= K[2] * K[4] * (1 + 1e-2)
        assert H[2] <= 1.0 + 1e-12
        assert K[2] >= 1.0 - 1e-12


class TestBoydIndices:
    """Test cases for the index regression"""

    @pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
    def test_lebesgue_indices(self, p):
        """alpha = beta = 1/p with a vanishing duality residual"""
        estimate = boyd_indices(SpaceSpec.lebesgue(p), j_max=256, budget=2048)
        assert estimate.alpha_hat == pytest.approx(expected_lebesgue_index(p), abs=1e-9)
        assert estimate.beta_hat == pytest.approx(1.0 / p, abs=1e-9)
        assert estimate.duality_residual == pytest.approx(0.0, abs=1e-9)
        assert estimate.fit["js_used"] == [32, 64, 128, 256]

    def test_short_schedule(self):
        """j_max below 4 leaves nothing to fit"""
        with pytest.raises(DomainError):
            boyd_indices(SpaceSpec.lebesgue(2.0), j_max=2, budget=64)

    def test_fit_needs_three_points(self):
        """Two points would fit any line exactly"""
        with pytest.raises(DomainError):
            boyd_indices(SpaceSpec.lebesgue(2.0), j_max=64, budget=256, fit_points=2)
        estimate = boyd_indices(
            SpaceSpec.lebesgue(2.0), j_max=64, budget=256, fit_points=MIN_FIT_POINTS
        )
        assert estimate.fit["js_used"] == [16, 32, 64]

    @pytest.mark.slow
    def test_lorentz_indices(self):
        """Both indices of L^{3,1.5} are close to 1/3"""
        estimate = boyd_indices(SpaceSpec.lorentz(3.0, 1.5), j_max=1024, budget=2**16)
        assert estimate.alpha_hat == pytest.approx(1.0 / 3.0, abs=0.05)
        assert estimate.beta_hat == pytest.approx(1.0 / 3.0, abs=0.05)
        assert estimate.duality_residual is None

    def test_duality_pairs(self):
        """l^{3/2} and l^3 are paired in both directions"""
        specs = [
            SpaceSpec.lebesgue(1.5),
            SpaceSpec.lebesgue(2.0),
            SpaceSpec.lebesgue(3.0),
            SpaceSpec.lorentz(3.0, 1.5),
        ]
        assert duality_pairs(specs) == [(0, 2), (1, 1), (2, 0)]


if __name__ == "__main__":
    pytest.main([__file__])
