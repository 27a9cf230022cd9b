"""Unit tests for the kernel ingredients."""
import math

import numpy as np
import pytest
from hypothesis import given, settings as hsettings, strategies as st

from app.core.errors import ParameterWindowError
from app.schemas.frame import ScalingFrame
from app.services.kernels import (
    f_step,
    fstar,
    g_step,
    k_conj,
    k_conj_matrix,
    kdelta_block,
    kdelta_entry,
    r_delta,
    stationary_g,
    stationary_ingredients,
    v_heat,
    v_heat_airy,
    v_heat_matrix,
)
from app.services.quadrature import build_rule, gauss_panels

AI_PRIME_0 = -0.258819403792806798


class TestHeatKernel:
    """Test cases for the Gaussian heat kernel V."""

    def test_peak(self):
        assert v_heat(0.0, 0.0, 1.0, 0.0) == pytest.approx(1.0 / math.sqrt(4.0 * math.pi), rel=1e-15)

    def test_needs_increasing_labels(self):
        with pytest.raises(ParameterWindowError):
            v_heat(1.0, 0.0, 1.0, 0.0)
        with pytest.raises(ParameterWindowError):
            v_heat(1.0, 0.0, 0.5, 0.0)

    @hsettings(max_examples=30, deadline=None)
    @given(st.floats(0.05, 3.0), st.floats(-5.0, 5.0))
    def test_normalized(self, gap, s1):
        half_width = 12.0 * math.sqrt(gap)
        rule = build_rule(s1 - half_width, s1 + half_width, 200, grading=1.0)
        assert rule.integrate(v_heat(0.0, s1, gap, rule.nodes)) == pytest.approx(1.0, abs=1e-10)

    def test_chapman_kolmogorov(self):
        rule = gauss_panels(np.linspace(-30.0, 30.0, 61), [20] * 60)
        composed = rule.integrate(v_heat(-0.5, 0.4, 0.3, rule.nodes) * v_heat(0.3, rule.nodes, 1.0, -1.1))
        assert composed == pytest.approx(v_heat(-0.5, 0.4, 1.0, -1.1), rel=1e-10)

    def test_matrix_with_gauges(self):
        x = np.array([-1.0, 0.0, 2.0])
        y = np.array([0.5, 1.5])
        row_log, col_log = 0.3 * x, -0.2 * y
        expected = v_heat(0.0, x[:, None], 0.7, y[None, :]) * np.exp(row_log[:, None] - col_log[None, :])
        np.testing.assert_allclose(v_heat_matrix(0.0, x, 0.7, y, row_log, col_log), expected, rtol=1e-13)

    def test_airy_representation(self):
        assert v_heat_airy(-0.2, 0.5, 0.8, -0.1) == pytest.approx(v_heat(-0.2, 0.5, 0.8, -0.1), rel=1e-8)


class TestAiryKernel:
    """Test cases for k_conj and k_conj_matrix."""

    def test_origin(self):
        assert k_conj(0.0, 0.0, 0.0, 0.0) == pytest.approx(AI_PRIME_0 ** 2, rel=1e-10)

    def test_matrix_matches_entries(self):
        x = np.array([-1.5, 0.0, 1.0])
        y = np.array([-0.5, 0.7])
        matrix = k_conj_matrix(0.0, x, 0.5, y)
        expected = np.array([[k_conj(0.0, a, 0.5, b) for b in y] for a in x])
        np.testing.assert_allclose(matrix, expected, rtol=1e-8, atol=1e-12)

    def test_label_window(self):
        with pytest.raises(ParameterWindowError):
            k_conj(3.5, 0.0, 0.0, 0.0)
        with pytest.raises(ParameterWindowError):
            k_conj_matrix(0.0, np.zeros(2), -3.1, np.zeros(2))


class TestStepFunctions:
    """Test cases for f, f*, g and the stationary g."""

    def test_f_is_one_plus_fstar(self):
        s = np.linspace(-4.0, 6.0, 11)
        for r in (-1.0, 0.0, 0.75):
            np.testing.assert_array_equal(f_step(r, s), 1.0 + fstar(r, s))

    def test_f_tends_to_one(self):
        assert abs(f_step(0.0, 12.0) - 1.0) < 1e-10

    def test_f_at_zero_label(self):
        """f*_0(0) = -int_0^inf Ai = -1/3."""
        assert fstar(0.0, 0.0) == pytest.approx(-1.0 / 3.0, abs=1e-10)

    def test_g_continuous_at_zero_delta(self):
        s = np.linspace(-3.0, 3.0, 7)
        for r in (-0.5, 0.0, 1.0):
            np.testing.assert_allclose(g_step(r, s, 0.0), stationary_g(r, s), atol=1e-14)
            np.testing.assert_allclose(g_step(r, s, 1e-7), stationary_g(r, s), atol=1e-5)

    def test_negative_delta(self):
        with pytest.raises(ParameterWindowError):
            g_step(0.0, 0.0, -0.1)


class TestStationaryIngredients:
    """Test cases for R and R_delta."""

    def test_r_at_origin(self):
        assert stationary_ingredients(0.0, 0.0).R == pytest.approx(-AI_PRIME_0, abs=1e-9)

    def test_bound_to_first_label(self):
        ingredients = stationary_ingredients(0.5, -1.0)
        assert ingredients.r1 == 0.5
        assert ingredients.fstar(0.3) == pytest.approx(fstar(0.5, 0.3))
        assert ingredients.g(0.3) == pytest.approx(stationary_g(0.5, 0.3))

    def test_r_delta_matches_stationary(self):
        for r, s1 in ((0.0, 0.0), (0.5, -1.0), (-1.0, 1.5)):
            assert r_delta(r, s1, 0.0) == pytest.approx(stationary_ingredients(r, s1).R, abs=1e-8)

    def test_r_delta_continuous(self):
        assert r_delta(0.5, -1.0, 1e-6) == pytest.approx(r_delta(0.5, -1.0, 0.0), abs=1e-4)

    def test_r_delta_approaches_stationary_value(self):
        """The gap to R shrinks along delta = 0.4, 0.2, 0.1, 0.05, roughly linearly."""
        stationary = r_delta(0.5, -0.5, 0.0)
        gaps = [abs(r_delta(0.5, -0.5, delta) - stationary) for delta in (0.4, 0.2, 0.1, 0.05)]
        assert all(fine < coarse for coarse, fine in zip(gaps, gaps[1:]))
        assert gaps[-1] < 0.25 * gaps[0]


class TestExtendedEntries:
    """Test cases for kdelta_entry and kdelta_block."""

    def test_diagonal_block(self):
        frame = ScalingFrame(t=1e6, delta=0.0, r_list=[0.0, 1.0])
        assert kdelta_entry(0, 0.2, 0, -0.3, frame, 0.0) == pytest.approx(k_conj(0.0, 0.2, 0.0, -0.3))

    def test_upper_block_subtracts_heat_kernel(self):
        frame = ScalingFrame(t=1e6, delta=0.0, r_list=[0.0, 1.0])
        expected = k_conj(0.0, 0.2, 1.0, -0.3) - v_heat(0.0, 0.2, 1.0, -0.3)
        assert kdelta_entry(0, 0.2, 1, -0.3, frame, 0.0) == pytest.approx(expected)

    def test_rank_one_term(self):
        frame = ScalingFrame(t=1e6, delta=0.5, r_list=[0.0, 1.0])
        expected = k_conj(1.0, 0.4, 0.0, 0.1) + 0.5 * f_step(1.0, 0.4) * g_step(0.0, 0.1, 0.5)
        assert kdelta_entry(1, 0.4, 0, 0.1, frame, 0.5) == pytest.approx(expected)

    def test_block_matches_entries(self):
        frame = ScalingFrame(t=1e6, delta=0.5, r_list=[0.0, 1.0])
        x = np.array([-1.0, 0.5])
        y = np.array([0.0, 1.0, 2.0])
        block = kdelta_block(0.0, x, 1.0, y, 0.5)
        expected = np.array([[kdelta_entry(0, a, 1, b, frame, 0.5) for b in y] for a in x])
        np.testing.assert_allclose(block, expected, rtol=1e-8, atol=1e-12)

    def test_block_index(self):
        frame = ScalingFrame(t=1e6, delta=0.0, r_list=[0.0])
        with pytest.raises(ParameterWindowError):
            kdelta_entry(0, 0.0, 1, 0.0, frame, 0.0)
