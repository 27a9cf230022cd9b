"""Unit tests for the composite Gauss-Legendre rules."""
import math

import numpy as np
import pytest

from app.core.errors import QuadratureError
from app.services.quadrature import (
    block_rule,
    build_rule,
    gauss_panels,
    heat_tail_width,
    line_layout,
    line_rule,
    merge,
    tail_length,
)


class TestBuildRule:
    """Test cases for build_rule and gauss_panels."""

    def test_exact_node_count(self):
        for n in (8, 37, 60, 101):
            assert build_rule(-3.0, 11.0, n).size == n

    def test_integrates(self):
        rule = build_rule(0.0, 40.0, 60)
        assert rule.integrate(np.ones(rule.size)) == pytest.approx(40.0, rel=1e-14)
        assert rule.integrate(np.exp(-rule.nodes)) == pytest.approx(1.0 - math.exp(-40.0), abs=1e-10)

    def test_nodes_inside_domain(self):
        rule = build_rule(-2.0, 5.0, 30)
        assert rule.domain == (-2.0, 5.0)
        assert np.all((rule.nodes > -2.0) & (rule.nodes < 5.0))
        assert np.all(rule.weights > 0)

    def test_invalid_bounds(self):
        with pytest.raises(QuadratureError):
            build_rule(1.0, 1.0, 20)
        with pytest.raises(QuadratureError):
            build_rule(0.0, math.inf, 20)

    def test_too_few_nodes(self):
        with pytest.raises(QuadratureError):
            build_rule(0.0, 1.0, 4)

    def test_panel_orders_must_match(self):
        with pytest.raises(QuadratureError):
            gauss_panels([0.0, 1.0, 2.0], [5])


class TestTails:
    """Test cases for tail_length, block_rule and merge."""

    def test_tail_length(self):
        assert tail_length(1.0) == pytest.approx(23.0)
        assert tail_length(0.5) == pytest.approx((23.0 + math.log(2.0)) / 0.5)

    def test_tail_needs_delta(self):
        with pytest.raises(QuadratureError):
            tail_length(0.0)

    def test_stationary_block_is_core_window(self):
        rule = block_rule(-2.0, nodes=60, window=14.0)
        assert rule.size == 60
        assert rule.domain == (-2.0, 12.0)

    def test_step_block_reaches_tail(self):
        rule = block_rule(-2.0, delta=0.5, nodes=60, window=14.0)
        assert rule.domain[1] == pytest.approx(-2.0 + tail_length(0.5))
        assert rule.size > 60

    def test_block_translates_with_cut(self):
        a = block_rule(0.0, delta=0.5)
        b = block_rule(1.5, delta=0.5)
        np.testing.assert_allclose(b.nodes - a.nodes, 1.5, atol=1e-12)
        np.testing.assert_allclose(a.weights, b.weights, rtol=1e-12)

    def test_merge_needs_adjacent_rules(self):
        with pytest.raises(QuadratureError):
            merge([build_rule(0.0, 1.0, 10), build_rule(2.0, 3.0, 10)])

    def test_heat_tail_width(self):
        assert heat_tail_width([0.0]) is None
        assert heat_tail_width([0.0, 1.0]) == pytest.approx(2.0)
        assert heat_tail_width([0.0, 0.02, 1.0]) == pytest.approx(0.4)


class TestLineRule:
    """Test cases for line_rule and line_layout."""

    def test_single_label_starts_at_s(self):
        rule = line_rule([0.0], [1.5], nodes=40, window=14.0)
        assert rule.domain == (1.5, 15.5)

    def test_chain_rule_reaches_below(self):
        rule = line_rule([0.0, 1.0], [0.0, 0.5])
        assert rule.domain[0] < -10.0

    def test_layout_reuse_keeps_node_count(self):
        layout = line_layout([0.0, 1.0], [0.0, 0.5])
        moved = line_rule([0.0, 1.0], [1e-3, 0.5 - 1e-3], layout=layout)
        assert moved.size == line_rule([0.0, 1.0], [0.0, 0.5]).size == sum(layout)

    def test_layout_must_match(self):
        with pytest.raises(QuadratureError):
            line_rule([0.0, 1.0], [0.0, 0.5], layout=(10, 10))

    def test_label_count_mismatch(self):
        with pytest.raises(QuadratureError):
            line_rule([0.0, 1.0], [0.0])
