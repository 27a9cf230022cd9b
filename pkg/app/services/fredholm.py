"""Nystrom determinants, the chain operator and the Airy-law distribution functions.

Two discretizations of the same distributions live here: the extended
(block) kernel K^delta on L2({r_1..r_m} x R), and the chain form on a single
L2(R) built from the chain operator. Their agreement is one of the checks of
the verification suite.
"""
import itertools
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg, special

from app.config import settings
from app.core.errors import (
    DimensionMismatchError,
    NumericalConsistencyError,
    ParameterWindowError,
    PoleError,
    QuadratureError,
    SingularSystemError,
)
from app.schemas.frame import ScalingFrame
from app.schemas.numerics import ChainOperator, DetResult, DiscretizedOperator, QuadratureRule
from app.services.kernels import (
    f_step,
    fstar,
    g_step,
    k_conj_matrix,
    kdelta_block,
    r_delta,
    stationary_ingredients,
    v_heat_matrix,
)
from app.services.quadrature import block_rule, build_rule, heat_tail_width, line_layout, line_rule

logger = logging.getLogger(__name__)

CDF_SLACK = 1e-3
CONDITION_CEILING = 1e8
MAX_LOG_RATIO = 700.0


# -- determinants -----------------------------------------------------------------

def _lu_det(matrix: np.ndarray) -> float:
    """Determinant through a partially pivoted LU factorization."""
    lu, piv = linalg.lu_factor(matrix, check_finite=True)
    swaps = np.count_nonzero(piv != np.arange(piv.size))
    return float((-1.0) ** swaps * np.prod(np.diag(lu)))


def operator_det(operator: DiscretizedOperator) -> float:
    """det(I - A) for a discretized operator A."""
    matrix = np.eye(operator.rule.size) - operator.symmetrized()
    return _lu_det(matrix)


def nystrom_det(kernel: Callable[[np.ndarray, np.ndarray], np.ndarray], rule: QuadratureRule) -> DetResult:
    """det(I - [sqrt(w_i) kernel(x_i, x_j) sqrt(w_j)]) on the rule's nodes."""
    x = rule.nodes
    matrix = np.asarray(kernel(x[:, None], x[None, :]), dtype=float)
    matrix = np.broadcast_to(matrix, (rule.size, rule.size)).copy()
    if not np.all(np.isfinite(matrix)):
        raise QuadratureError("non-finite kernel entry on the node grid")
    value = operator_det(DiscretizedOperator(matrix=matrix, rule=rule))
    return DetResult(value=value, order=rule.size)


def airy_kernel(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """(Ai(x) Ai'(y) - Ai'(x) Ai(y)) / (x - y), with Ai'(x)^2 - x Ai(x)^2 on the diagonal."""
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    ai_x, aip_x, _, _ = special.airy(x)
    ai_y, aip_y, _, _ = special.airy(y)
    diff = x - y
    diagonal = np.abs(diff) < 1e-12
    safe = np.where(diagonal, 1.0, diff)
    off = (ai_x * aip_y - aip_x * ai_y) / safe
    return np.where(diagonal, aip_x * aip_x - x * ai_x * ai_x, off)


def gue_cdf(s: float, nodes: Optional[int] = None, window: Optional[float] = None) -> DetResult:
    """GUE Tracy-Widom distribution det(1 - K_Ai)_{L2(s, inf)}."""
    nodes = nodes or settings.quadrature_nodes
    window = window or settings.core_window
    return nystrom_det(airy_kernel, build_rule(s, s + window, nodes))


def conjugated_airy_det(r: float, s: float, nodes: Optional[int] = None, window: Optional[float] = None) -> DetResult:
    """det(1 - P_s K_{r,r} P_s); equals the GUE distribution at r^2 + s."""
    rule = block_rule(s, 0.0, nodes, window)
    matrix = k_conj_matrix(r, rule.nodes, r, rule.nodes)
    value = operator_det(DiscretizedOperator(matrix=matrix, rule=rule))
    return DetResult(value=value, order=rule.size)


def self_convergence(
    evaluate: Callable[[int, float], float],
    nodes: Optional[int] = None,
    window: Optional[float] = None,
) -> DetResult:
    """Value at (nodes, window) with the change under doubled nodes and window + 4 as estimate."""
    nodes = nodes or settings.quadrature_nodes
    window = window or settings.core_window
    value = evaluate(nodes, window)
    refined = evaluate(2 * nodes, window + 4.0)
    estimate = abs(refined - value)
    if estimate > 1e-8:
        logger.warning("self-convergence estimate %.3e at %d nodes", estimate, nodes)
    return DetResult(value=value, order=nodes, richardson_estimate=estimate)


# -- extended kernel ---------------------------------------------------------------

def _check_lengths(frame: ScalingFrame, s_list: Sequence[float]) -> None:
    if len(s_list) != frame.m:
        raise DimensionMismatchError(f"{frame.m} labels but {len(s_list)} positions")


def extended_operator(
    frame: ScalingFrame,
    s_list: Sequence[float],
    delta: Optional[float] = None,
    nodes: Optional[int] = None,
    window: Optional[float] = None,
) -> DiscretizedOperator:
    """K^delta restricted block-wise to [s_k, inf), one block rule per label."""
    _check_lengths(frame, s_list)
    delta = frame.delta if delta is None else delta
    tail_width = heat_tail_width(frame.r_list)
    rules = [block_rule(s, delta, nodes, window, tail_width) for s in s_list]
    offsets = np.cumsum([0] + [rule.size for rule in rules])
    block_map: Dict[int, slice] = {k: slice(offsets[k], offsets[k + 1]) for k in range(frame.m)}
    matrix = np.empty((offsets[-1], offsets[-1]))
    for i, ri in enumerate(frame.r_list):
        for j, rj in enumerate(frame.r_list):
            matrix[block_map[i], block_map[j]] = kdelta_block(ri, rules[i].nodes, rj, rules[j].nodes, delta)
    rule = QuadratureRule(
        nodes=np.concatenate([rule.nodes for rule in rules]),
        weights=np.concatenate([rule.weights for rule in rules]),
        domain=(min(rule.domain[0] for rule in rules), max(rule.domain[1] for rule in rules)),
    )
    logger.debug("extended kernel: %d blocks, %d nodes", frame.m, rule.size)
    return DiscretizedOperator(matrix=matrix, rule=rule, block_map=block_map)


def extended_det(
    frame: ScalingFrame,
    s_list: Sequence[float],
    delta: Optional[float] = None,
    nodes: Optional[int] = None,
    window: Optional[float] = None,
) -> DetResult:
    """det(1 - chi_s K^delta chi_s) on L2({r_1..r_m} x R)."""
    operator = extended_operator(frame, s_list, delta, nodes, window)
    return DetResult(value=operator_det(operator), order=operator.rule.size)


# -- chain form ----------------------------------------------------------------------

def _gauge(rule: QuadratureRule, r1: float, s_list: Sequence[float]) -> np.ndarray:
    """log of the conjugation e^{r1 x}, frozen past the core window."""
    return r1 * np.minimum(rule.nodes, max(s_list) + settings.core_window)


def chain_operator(frame: ScalingFrame, s_list: Sequence[float], rule: QuadratureRule) -> ChainOperator:
    """Legs Pbar_{s1} V_{r1 r2} ... Pbar_{s_{k-1}} V_{r_{k-1} r_k} P_{s_k} on the rule's nodes.

    The legs are weighted matrices in the e^{r1 x} gauge; leg 1 is P_{s1}.
    """
    _check_lengths(frame, s_list)
    x, w = rule.nodes, rule.weights
    r = frame.r_list
    log_gauge = _gauge(rule, r[0], s_list)
    above = [(x >= s).astype(float) for s in s_list]
    legs = [np.diag(above[0])]
    prefix = np.diag(1.0 - above[0])
    for k in range(1, frame.m):
        heat = v_heat_matrix(r[k - 1], x, r[k], x, log_gauge, log_gauge) * w[None, :]
        prefix = prefix @ heat
        legs.append(prefix * above[k][None, :])
        prefix = prefix * (1.0 - above[k])[None, :]
    return ChainOperator(rule=rule, r_list=list(r), s_list=list(s_list), legs=legs, log_gauge=log_gauge)


@dataclass
class ChainSystem:
    """1 - P K on L2(R) in the e^{r1 x} gauge, with the vectors the distribution functions need."""
    chain: ChainOperator
    kernel: np.ndarray
    delta: float
    _lu: Optional[Tuple[np.ndarray, np.ndarray]] = field(default=None, repr=False)

    @property
    def rule(self) -> QuadratureRule:
        return self.chain.rule

    @property
    def r1(self) -> float:
        return self.chain.r_list[0]

    @property
    def s1(self) -> float:
        return self.chain.s_list[0]

    @property
    def gauge(self) -> np.ndarray:
        return np.exp(self.chain.log_gauge)

    def resolvent_matrix(self) -> np.ndarray:
        sw = self.rule.sqrt_weights
        return np.eye(self.rule.size) - sw[:, None] * self.kernel * sw[None, :]

    def det(self) -> float:
        lu, piv = self._factor()
        swaps = np.count_nonzero(piv != np.arange(piv.size))
        return float((-1.0) ** swaps * np.prod(np.diag(lu)))

    def condition(self) -> float:
        return float(np.linalg.cond(self.resolvent_matrix()))

    def _factor(self) -> Tuple[np.ndarray, np.ndarray]:
        if self._lu is None:
            lu, piv = linalg.lu_factor(self.resolvent_matrix(), check_finite=True)
            if np.any(np.diag(lu) == 0.0):
                raise SingularSystemError("1 - P K is singular on the node grid")
            self._lu = (lu, piv)
        return self._lu

    def solve_inner(self, vector: np.ndarray, g: np.ndarray) -> float:
        """<(1 - P K)^{-1} vector, g> with vector in the gauge and g in the inverse gauge."""
        sw = self.rule.sqrt_weights
        solution = linalg.lu_solve(self._factor(), sw * vector)
        return float(np.dot(solution * sw, g))

    def images(self, function: Callable[[float, np.ndarray], np.ndarray]) -> List[np.ndarray]:
        """function(r_k, x) on nodes x >= s_k, in the gauge, zero elsewhere."""
        x = self.rule.nodes
        out = []
        for rk, sk in zip(self.chain.r_list, self.chain.s_list):
            image = np.zeros_like(x)
            rows = x >= sk
            if np.any(rows):
                image[rows] = function(rk, x[rows]) * self.gauge[rows]
            out.append(image)
        return out

    def applied(self, function: Callable[[float, np.ndarray], np.ndarray]) -> np.ndarray:
        """P u for u_{r1} = function(r1, .), using V_{r_k r_1} u_{r1} = function(r_k, .)."""
        return self.chain.apply(self.images(function))

    def pf(self) -> np.ndarray:
        return self.applied(f_step)

    def stationary_numerator(self) -> np.ndarray:
        """P f* + P K P_{s1} 1 + (P - P_{s1}) 1, all in the gauge."""
        x, w = self.rule.nodes, self.rule.weights
        p_fstar = self.applied(fstar)
        projected_one = (x >= self.s1) * w * self.gauge
        k_images = _kernel_images(self.chain, self.r1)
        pk1 = self.chain.apply([image @ projected_one for image in k_images])
        ones = [np.zeros_like(x)] + [self.gauge.copy() for _ in self.chain.legs[1:]]
        rest = self.chain.apply(ones) if len(ones) > 1 else np.zeros_like(x)
        return p_fstar + pk1 + rest

    def g(self, delta: float) -> np.ndarray:
        """g_{r1}(.; delta) in the inverse gauge."""
        return g_step(self.r1, self.rule.nodes, delta) / self.gauge


def _kernel_images(chain: ChainOperator, r1: float) -> List[np.ndarray]:
    """K_{r_k, r_1}(x, y) in the gauge, on rows x >= s_k."""
    x = chain.rule.nodes
    images = []
    for rk, sk in zip(chain.r_list, chain.s_list):
        image = np.zeros((x.size, x.size))
        rows = x >= sk
        if np.any(rows):
            image[rows] = k_conj_matrix(rk, x[rows], r1, x, chain.log_gauge[rows], chain.log_gauge)
        images.append(image)
    return images


def assemble_chain(
    frame: ScalingFrame,
    s_list: Sequence[float],
    delta: float = 0.0,
    nodes: Optional[int] = None,
    window: Optional[float] = None,
    layout: Optional[Tuple[int, ...]] = None,
) -> ChainSystem:
    """P K with K = K_{r1, r1} on an L2(R) rule; a delta > 0 adds the tail for g."""
    _check_lengths(frame, s_list)
    rule = line_rule(frame.r_list, s_list, delta, nodes, window, layout)
    chain = chain_operator(frame, s_list, rule)
    kernel = chain.apply(_kernel_images(chain, frame.r_list[0]))
    if not np.all(np.isfinite(kernel)):
        raise ParameterWindowError("chain kernel entries overflow")
    return ChainSystem(chain=chain, kernel=kernel, delta=delta)


# -- distribution functions ----------------------------------------------------------

def gm_functional(
    frame: ScalingFrame,
    s_list: Sequence[float],
    nodes: Optional[int] = None,
    window: Optional[float] = None,
    layout: Optional[Tuple[int, ...]] = None,
    system: Optional[ChainSystem] = None,
) -> float:
    """G_m = R - <(1 - P K)^{-1}(P f* + P K P_{s1} 1 + (P - P_{s1}) 1), g>."""
    system = system or assemble_chain(frame, s_list, 0.0, nodes, window, layout)
    ingredients = stationary_ingredients(frame.r_list[0], s_list[0])
    g = ingredients.g(system.rule.nodes) / system.gauge
    return ingredients.R - system.solve_inner(system.stationary_numerator(), g)


def stationary_lambda(
    frame: ScalingFrame,
    s_list: Sequence[float],
    nodes: Optional[int] = None,
    window: Optional[float] = None,
    layout: Optional[Tuple[int, ...]] = None,
) -> float:
    """G_m det(1 - P K); its derivative along (1, ..., 1) is the stationary joint CDF."""
    system = assemble_chain(frame, s_list, 0.0, nodes, window, layout)
    return gm_functional(frame, s_list, system=system) * system.det()


def _directional_derivative(function: Callable[[float], float], step: float) -> float:
    """Central difference along the shift, refined by one Richardson level."""
    coarse = (function(step) - function(-step)) / (2.0 * step)
    half = 0.5 * step
    fine = (function(half) - function(-half)) / (2.0 * half)
    return (4.0 * fine - coarse) / 3.0


def _check_probability(value: float) -> float:
    if not -CDF_SLACK <= value <= 1.0 + CDF_SLACK:
        raise NumericalConsistencyError(f"distribution value {value:.6g} outside [0, 1]")
    return value


def airy_stat_fdd(
    frame: ScalingFrame,
    s_list: Sequence[float],
    fd_step: Optional[float] = None,
    nodes: Optional[int] = None,
    window: Optional[float] = None,
) -> float:
    """Joint CDF of the stationary process at (r_k, s_k): sum_i d/ds_i of G_m det(1 - P K)."""
    _check_lengths(frame, s_list)
    step = fd_step or settings.fd_step
    base = np.asarray(s_list, dtype=float)
    layout = line_layout(frame.r_list, list(base), nodes, window)

    def shifted(eps: float) -> float:
        return stationary_lambda(frame, list(base + eps), nodes, window, layout)

    return _check_probability(_directional_derivative(shifted, step))


def finite_step_fdd(
    frame: ScalingFrame,
    s_list: Sequence[float],
    delta: Optional[float] = None,
    fd_step: Optional[float] = None,
    nodes: Optional[int] = None,
    window: Optional[float] = None,
) -> float:
    """(1 + delta^{-1} sum_i d/ds_i) det(1 - chi_s K^delta chi_s)."""
    _check_lengths(frame, s_list)
    delta = frame.delta if delta is None else delta
    if delta <= 0:
        raise ParameterWindowError("the finite-step law needs delta > 0")
    step = fd_step or settings.fd_step
    base = np.asarray(s_list, dtype=float)

    def shifted(eps: float) -> float:
        return extended_det(frame, list(base + eps), delta, nodes, window).value

    value = shifted(0.0) + _directional_derivative(shifted, step) / delta
    return _check_probability(value)


def default_chi(r_list: Sequence[float], delta: float) -> List[float]:
    """chi_k = 0.9 B (m + 1 - k) / (m + 1), B = min(delta, smallest label gap, 1)."""
    m = len(r_list)
    gaps = [b - a for a, b in zip(r_list, r_list[1:])]
    bound = min([delta, 1.0] + gaps)
    return [0.9 * bound * (m + 1 - k) / (m + 1) for k in range(1, m + 1)]


def _check_chi(chi_list: Sequence[float], r_list: Sequence[float], delta: float) -> None:
    if len(chi_list) != len(r_list):
        raise DimensionMismatchError("one chi per label is required")
    if chi_list[-1] <= 0 or any(b >= a for a, b in zip(chi_list, chi_list[1:])):
        raise ParameterWindowError("chi must satisfy 0 < chi_m < ... < chi_1")
    gaps = [rj - ri for ri, rj in itertools.combinations(r_list, 2)]
    if chi_list[0] >= max([delta] + gaps):
        raise ParameterWindowError("chi_1 exceeds the admissible bound")


def pathintegral_det(
    frame: ScalingFrame,
    s_list: Sequence[float],
    delta: Optional[float] = None,
    chi_list: Optional[Sequence[float]] = None,
    nodes: Optional[int] = None,
    window: Optional[float] = None,
) -> DetResult:
    """det(1 + M Q M^{-1}) with Q = -P K^delta on L2(R).

    M multiplies by e^{-chi_1 x} for x >= 0 and by e^{x^2} for x < 0.
    """
    _check_lengths(frame, s_list)
    delta = frame.delta if delta is None else delta
    if delta <= 0:
        raise ParameterWindowError("the path-integral form needs delta > 0")
    chi_list = list(chi_list) if chi_list is not None else default_chi(frame.r_list, delta)
    _check_chi(chi_list, frame.r_list, delta)
    system = assemble_chain(frame, s_list, delta, nodes, window)
    x = system.rule.nodes
    q = -(system.kernel + delta * np.outer(system.pf(), system.g(delta)))
    log_m = np.where(x >= 0, -chi_list[0] * x, x * x)
    if log_m.max() - log_m.min() > MAX_LOG_RATIO:
        raise ParameterWindowError("conjugation weights overflow on this rule")
    sw = system.rule.sqrt_weights
    conjugated = np.exp(log_m[:, None] - log_m[None, :]) * q
    matrix = np.eye(x.size) + sw[:, None] * conjugated * sw[None, :]
    balanced, _ = linalg.matrix_balance(matrix, permute=False)
    return DetResult(value=_lu_det(balanced), order=x.size)


def factorization_check(
    frame: ScalingFrame,
    s_list: Sequence[float],
    delta: Optional[float] = None,
    nodes: Optional[int] = None,
    window: Optional[float] = None,
) -> Tuple[float, float]:
    """delta^{-1} det(1 - chi K^delta chi) against (delta^{-1} - <(1 - P K)^{-1} P f, g>) det(1 - P K)."""
    delta = frame.delta if delta is None else delta
    if delta <= 0:
        raise ParameterWindowError("factorization needs delta > 0")
    lhs = extended_det(frame, s_list, delta, nodes, window).value / delta
    system = assemble_chain(frame, s_list, delta, nodes, window)
    first = 1.0 / delta - system.solve_inner(system.pf(), system.g(delta))
    return lhs, first * system.det()


def first_factor(
    frame: ScalingFrame,
    s_list: Sequence[float],
    delta: float,
    nodes: Optional[int] = None,
    window: Optional[float] = None,
) -> Tuple[float, float]:
    """Both forms of delta^{-1} - <(1 - P K)^{-1} P f, g^delta>.

    The first is the direct one; the second is R_delta minus the stationary
    numerator, which stays finite as delta -> 0.
    """
    if delta <= 0:
        raise ParameterWindowError("the direct form needs delta > 0")
    system = assemble_chain(frame, s_list, delta, nodes, window)
    g = system.g(delta)
    direct = 1.0 / delta - system.solve_inner(system.pf(), g)
    rearranged = r_delta(frame.r_list[0], s_list[0], delta) - system.solve_inner(
        system.stationary_numerator(), g
    )
    return direct, rearranged


def resolvent_condition(
    frame: ScalingFrame,
    s_list: Sequence[float],
    nodes: Optional[int] = None,
    window: Optional[float] = None,
) -> float:
    """Condition number of 1 - P K on the grid."""
    condition = assemble_chain(frame, s_list, 0.0, nodes, window).condition()
    if condition > CONDITION_CEILING:
        logger.warning("1 - P K badly conditioned: %.3e", condition)
    return condition


def increment_density(
    r2: float,
    sigma: Sequence[float],
    level: Optional[float] = None,
    fd_step: Optional[float] = None,
    nodes: Optional[int] = None,
    window: Optional[float] = None,
) -> np.ndarray:
    """Density of X(r2) - X(0) from d^2/ds1 ds2 of G_2 det(1 - P K) at (S, S + sigma)."""
    level = settings.increment_level if level is None else level
    h = fd_step or settings.increment_fd_step
    frame = ScalingFrame(t=1e6, delta=0.0, r_list=[0.0, r2])
    values = []
    for offset in np.atleast_1d(np.asarray(sigma, dtype=float)):
        base = [level, level + offset]
        layout = line_layout(frame.r_list, base, nodes, window)

        def at(e1: float, e2: float) -> float:
            return stationary_lambda(frame, [base[0] + e1, base[1] + e2], nodes, window, layout)

        mixed = (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4.0 * h * h)
        values.append(mixed)
    return np.asarray(values)


def det_identity_smallN(w_list: Sequence[complex], lam: float) -> Tuple[complex, complex]:
    """Permutation sum against det[w_l^k / (w_l + lam)] for k, l = 1..N."""
    w = np.asarray(w_list, dtype=complex)
    n = w.size
    if not 1 <= n <= 8:
        raise ParameterWindowError("the permutation sum is limited to N <= 8")
    if lam <= 0:
        raise ParameterWindowError("lambda must be positive")
    if np.any((w.imag == 0) & (w.real <= 0)):
        raise ParameterWindowError("w_k must avoid the closed negative half-line")
    lhs = 0j
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
        term = 1.0 + 0j
        partial = lam + 0j
        for k, index in enumerate(perm, start=1):
            partial += w[index]
            if abs(partial) < 1e-14:
                raise PoleError("a partial sum hits -lambda")
            term *= w[index] ** k / partial
        lhs += (-1) ** inversions * term
    if np.any(np.abs(w + lam) < 1e-14):
        raise PoleError("w_l + lambda vanishes")
    powers = np.arange(1, n + 1)[:, None]
    rhs = np.linalg.det(w[None, :] ** powers / (w[None, :] + lam))
    return complex(lhs), complex(rhs)
