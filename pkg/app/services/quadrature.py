"""Composite Gauss-Legendre rules for the Nystrom discretizations."""
import logging
import math
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np

from app.config import settings
from app.core.errors import QuadratureError
from app.schemas.numerics import QuadratureRule

logger = logging.getLogger(__name__)

# nodes per unit length on L2(R) rules, relative to the core-window density
LINE_DENSITY_FACTOR = 1.5
GEOMETRIC_GROWTH = 1.5
GEOMETRIC_ORDER = 12


@lru_cache(maxsize=64)
def gauss_legendre(order: int) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [-1, 1]."""
    return np.polynomial.legendre.leggauss(order)


def gauss_panels(edges: Sequence[float], orders: Sequence[int]) -> QuadratureRule:
    """One Gauss-Legendre panel of orders[i] nodes on [edges[i], edges[i+1]]."""
    edges = np.asarray(edges, dtype=float)
    if len(orders) != edges.size - 1:
        raise QuadratureError("one order per panel is required")
    if np.any(np.diff(edges) <= 0):
        raise QuadratureError("panel edges must be strictly increasing")
    nodes, weights = [], []
    for a, b, order in zip(edges[:-1], edges[1:], orders):
        x, w = gauss_legendre(int(order))
        half = 0.5 * (b - a)
        nodes.append(0.5 * (a + b) + half * x)
        weights.append(half * w)
    return QuadratureRule(
        nodes=np.concatenate(nodes),
        weights=np.concatenate(weights),
        domain=(float(edges[0]), float(edges[-1])),
    )


def _split(n_nodes: int, n_panels: int) -> List[int]:
    base, extra = divmod(n_nodes, n_panels)
    return [base + (1 if i < extra else 0) for i in range(n_panels)]


def build_rule(cut: float, s_max: float, n_nodes: int, grading: float = 1.5) -> QuadratureRule:
    """Exactly n_nodes Gauss-Legendre nodes on [cut, s_max], panels denser near cut.

    Panel edges are cut + (s_max - cut) * u^grading for uniform u.
    """
    if not (np.isfinite(cut) and np.isfinite(s_max)) or cut >= s_max:
        raise QuadratureError(f"invalid rule bounds [{cut}, {s_max}]")
    if n_nodes < settings.min_nodes:
        raise QuadratureError(f"a rule needs at least {settings.min_nodes} nodes, got {n_nodes}")
    n_panels = max(1, round(n_nodes / settings.gl_order))
    u = np.linspace(0.0, 1.0, n_panels + 1)
    edges = cut + (s_max - cut) * u ** grading
    return gauss_panels(edges, _split(n_nodes, n_panels))


def merge(rules: Sequence[QuadratureRule]) -> QuadratureRule:
    """Concatenate rules on adjacent intervals."""
    rules = [rule for rule in rules if rule.size]
    for left, right in zip(rules, rules[1:]):
        if not math.isclose(left.domain[1], right.domain[0], rel_tol=0.0, abs_tol=1e-12):
            raise QuadratureError("merged rules must share their end points")
    return QuadratureRule(
        nodes=np.concatenate([rule.nodes for rule in rules]),
        weights=np.concatenate([rule.weights for rule in rules]),
        domain=(rules[0].domain[0], rules[-1].domain[1]),
    )


def tail_length(delta: float) -> float:
    """Distance past the cut after which e^{-delta s} is below the tail tolerance."""
    if delta <= 0:
        raise QuadratureError("a tail extension needs delta > 0")
    return (settings.tail_log_tolerance + math.log(max(1.0, 1.0 / delta))) / delta


def tail_rule(start: float, end: float, width: Optional[float] = None) -> QuadratureRule:
    """Tail panels on [start, end].

    With a width the panels are uniform (order tail_panel_order) so heat kernels
    between blocks stay resolved; without one they grow geometrically.
    """
    if end <= start:
        raise QuadratureError("tail must extend past the core window")
    if width is not None:
        n_panels = max(1, math.ceil((end - start) / width))
        edges = np.linspace(start, end, n_panels + 1)
        return gauss_panels(edges, [settings.tail_panel_order] * n_panels)
    edges = [start]
    step = settings.tail_panel_width
    while edges[-1] < end:
        edges.append(min(end, edges[-1] + step))
        step *= GEOMETRIC_GROWTH
    return gauss_panels(edges, [GEOMETRIC_ORDER] * (len(edges) - 1))


def heat_tail_width(r_list: Sequence[float]) -> Optional[float]:
    """Uniform tail width resolving the narrowest heat kernel; None for a single label."""
    if len(r_list) < 2:
        return None
    gap = min(b - a for a, b in zip(r_list, r_list[1:]))
    return min(settings.tail_panel_width, 2.0 * math.sqrt(2.0 * gap))


def block_rule(
    cut: float,
    delta: float = 0.0,
    nodes: Optional[int] = None,
    window: Optional[float] = None,
    tail_width: Optional[float] = None,
) -> QuadratureRule:
    """Rule for one block of the extended kernel, translating rigidly with the cut."""
    nodes = nodes or settings.quadrature_nodes
    window = window or settings.core_window
    core = build_rule(cut, cut + window, nodes)
    if delta <= 0:
        return core
    end = cut + max(window + 1.0, tail_length(delta))
    return merge([core, tail_rule(cut + window, end, tail_width)])


def chain_pad(r_list: Sequence[float]) -> float:
    """How far below min(s) the L2(R) rule must reach for the heat-kernel chain."""
    if len(r_list) < 2:
        return 0.0
    spread = r_list[-1] - r_list[0]
    return max(settings.lower_margin, math.sqrt(4.0 * spread * 40.0) + 2.0)


def line_layout(
    r_list: Sequence[float],
    s_list: Sequence[float],
    nodes: Optional[int] = None,
    window: Optional[float] = None,
) -> Tuple[int, ...]:
    """Node counts per segment of the L2(R) rule.

    Computing the layout once and reusing it keeps node counts fixed while a
    finite-difference stencil moves the breakpoints.
    """
    nodes = nodes or settings.quadrature_nodes
    window = window or settings.core_window
    density = LINE_DENSITY_FACTOR * nodes / window
    edges = _line_edges(r_list, s_list, window)
    counts = [
        max(settings.min_nodes, math.ceil(density * (b - a)))
        for a, b in zip(edges[:-1], edges[1:])
    ]
    counts[-1] = max(counts[-1], nodes)
    return tuple(counts)


def _line_edges(r_list: Sequence[float], s_list: Sequence[float], window: float) -> List[float]:
    s_sorted = sorted(s_list)
    if len(r_list) == 1:
        return [s_sorted[0], s_sorted[0] + window]
    edges = [s_sorted[0] - chain_pad(r_list)] + s_sorted
    edges.append(s_sorted[-1] + window)
    return edges


def line_rule(
    r_list: Sequence[float],
    s_list: Sequence[float],
    delta: float = 0.0,
    nodes: Optional[int] = None,
    window: Optional[float] = None,
    layout: Optional[Tuple[int, ...]] = None,
) -> QuadratureRule:
    """Rule on L2(R) for the chain form, with breakpoints at every s_k.

    For a single label the rule starts at s_1, since only P_{s1} acts.
    """
    if len(r_list) != len(s_list):
        raise QuadratureError("r_list and s_list must have equal length")
    window = window or settings.core_window
    layout = layout or line_layout(r_list, s_list, nodes, window)
    edges = _line_edges(r_list, s_list, window)
    if len(layout) != len(edges) - 1:
        raise QuadratureError("layout does not match the breakpoints of this s-vector")
    # coinciding s_k leave an empty segment that keeps its slot in the layout
    pieces = [
        build_rule(a, b, count, grading=1.0)
        for a, b, count in zip(edges[:-1], edges[1:], layout)
        if b - a > 1e-12
    ]
    if delta > 0:
        end = max(s_list) + max(window + 1.0, tail_length(delta))
        pieces.append(tail_rule(edges[-1], end))
    rule = merge(pieces)
    logger.debug("line rule: %d nodes on [%.3f, %.3f]", rule.size, *rule.domain)
    return rule
