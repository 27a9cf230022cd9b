"""Kernel ingredients of the finite-step and stationary Airy laws."""
import logging
import math
from typing import Optional, Union

import numpy as np

from app.config import settings
from app.core.errors import ParameterWindowError, QuadratureError
from app.schemas.frame import ScalingFrame
from app.schemas.numerics import StationaryIngredients
from app.services.quadrature import gauss_panels
from app.services.specfun import (
    airy_product_line,
    airy_product_tail,
    airy_tail,
    airy_weighted_moment,
    weighted_airy,
)

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

R_WINDOW = 3.0
KERNEL_PANEL_ORDER = 16


def _check_labels(*labels: float) -> None:
    for r in labels:
        if abs(r) > R_WINDOW:
            raise ParameterWindowError(f"|r| <= {R_WINDOW} required, got {r}")


def _conjugation(r1: ArrayLike, s1: ArrayLike, r2: ArrayLike, s2: ArrayLike) -> np.ndarray:
    """Exponent (2/3) r2^3 + r2 s2 - (2/3) r1^3 - r1 s1."""
    return (2.0 / 3.0) * (r2 ** 3 - r1 ** 3) + r2 * s2 - r1 * s1


def log_v_heat(r1: float, s1: ArrayLike, r2: float, s2: ArrayLike) -> np.ndarray:
    gap = r2 - r1
    if gap <= 0:
        raise ParameterWindowError("the heat kernel V_{r1,r2} needs r2 > r1")
    diff = np.asarray(s2, dtype=float) - np.asarray(s1, dtype=float)
    return -diff * diff / (4.0 * gap) - 0.5 * math.log(4.0 * math.pi * gap)


def v_heat(r1: float, s1: ArrayLike, r2: float, s2: ArrayLike) -> ArrayLike:
    """Gaussian heat kernel exp(-(s2-s1)^2 / (4(r2-r1))) / sqrt(4 pi (r2-r1))."""
    value = np.exp(log_v_heat(r1, s1, r2, s2))
    return float(value) if np.ndim(value) == 0 else value


def v_heat_matrix(
    r1: float,
    x: np.ndarray,
    r2: float,
    y: np.ndarray,
    row_log: Optional[np.ndarray] = None,
    col_log: Optional[np.ndarray] = None,
) -> np.ndarray:
    """V_{r1,r2}(x_i, y_j) exp(row_log_i - col_log_j)."""
    log_v = log_v_heat(r1, np.asarray(x, dtype=float)[:, None], r2, np.asarray(y, dtype=float)[None, :])
    if row_log is not None:
        log_v = log_v + np.asarray(row_log)[:, None]
    if col_log is not None:
        log_v = log_v - np.asarray(col_log)[None, :]
    return np.exp(log_v)


def v_heat_airy(r1: float, s1: float, r2: float, s2: float) -> float:
    """The heat kernel through its Airy-product representation over the whole line."""
    _check_labels(r1, r2)
    return math.exp(_conjugation(r1, s1, r2, s2)) * airy_product_line(s1, s2, r1, r2)


def k_conj(r1: float, s1: float, r2: float, s2: float) -> float:
    """Conjugated Airy kernel e^{(2/3)r2^3 + r2 s2 - (2/3)r1^3 - r1 s1} times the product tail."""
    _check_labels(r1, r2)
    return math.exp(_conjugation(r1, s1, r2, s2)) * airy_product_tail(s1, s2, r1, r2)


def _z_rule(zmin: float, gap: float):
    z_max = max(4.0, 30.0 + 4.0 * abs(gap) - zmin)
    n_panels = max(1, math.ceil(z_max / settings.airy_panel_width))
    edges = np.linspace(0.0, z_max, n_panels + 1)
    return gauss_panels(edges, [KERNEL_PANEL_ORDER] * n_panels)


def k_conj_matrix(
    r1: float,
    x: np.ndarray,
    r2: float,
    y: np.ndarray,
    row_log: Optional[np.ndarray] = None,
    col_log: Optional[np.ndarray] = None,
) -> np.ndarray:
    """K_{r1,r2}(x_i, y_j) exp(row_log_i - col_log_j) on node sets.

    The z-integral is a product of exponentially weighted Airy factors, each
    evaluated in log space, so large conjugation weights never overflow alone.
    """
    _check_labels(r1, r2)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    zrule = _z_rule(min(r1 * r1 + x.min(), r2 * r2 + y.min()), r2 - r1)
    z = zrule.nodes[None, :]
    row_offset = np.zeros_like(x) if row_log is None else np.asarray(row_log, dtype=float)
    col_offset = np.zeros_like(y) if col_log is None else np.asarray(col_log, dtype=float)
    left = weighted_airy(
        r1 * r1 + x[:, None] + z,
        row_offset[:, None] - ((2.0 / 3.0) * r1 ** 3 + r1 * x[:, None] + r1 * z),
    )
    right = weighted_airy(
        r2 * r2 + y[:, None] + z,
        (2.0 / 3.0) * r2 ** 3 + r2 * y[:, None] + r2 * z - col_offset[:, None],
    )
    matrix = (left * zrule.weights[None, :]) @ right.T
    if not np.all(np.isfinite(matrix)):
        raise ParameterWindowError("conjugated kernel entries overflow; (r, s) outside the window")
    return matrix


def fstar(r: float, s: ArrayLike) -> ArrayLike:
    """f*(s) = -e^{-(2/3) r^3} int_s^inf Ai(r^2 + x) e^{-r x} dx."""
    return -math.exp(-(2.0 / 3.0) * r ** 3) * airy_tail(s, -r, r * r)


def f_step(r: float, s: ArrayLike) -> ArrayLike:
    """f_r(s) = 1 + f*(s); the Airy part shares the f* code path."""
    _check_labels(r)
    return 1.0 + fstar(r, s)


def g_step(r: float, s: ArrayLike, delta: float) -> ArrayLike:
    """g_r(s) = e^{delta^3/3 + r delta^2 - s delta} - e^{(2/3) r^3 - delta s} int_s^inf Ai(r^2+x) e^{(delta+r) x} dx."""
    _check_labels(r)
    if delta < 0:
        raise ParameterWindowError("delta must be non-negative")
    s_arr = np.asarray(s, dtype=float)
    tail = airy_tail(s, delta + r, r * r)
    value = (
        np.exp(delta ** 3 / 3.0 + r * delta ** 2 - s_arr * delta)
        - np.exp((2.0 / 3.0) * r ** 3 - delta * s_arr) * tail
    )
    return float(value) if np.ndim(value) == 0 else value


def stationary_g(r: float, s: ArrayLike) -> ArrayLike:
    """g(s) = 1 - e^{(2/3) r^3} int_s^inf Ai(r^2 + x) e^{r x} dx."""
    return 1.0 - math.exp((2.0 / 3.0) * r ** 3) * airy_tail(s, r, r * r)


def _iterated_tail(r: float, s1: float) -> float:
    """int_{s1}^inf airy_tail(x, r, r^2) dx by outer Gauss-Legendre panels."""
    upper = max(s1, r * abs(r) - r * r) + 40.0
    n_panels = max(1, math.ceil(upper - s1))
    outer = gauss_panels(np.linspace(s1, upper, n_panels + 1), [settings.airy_panel_order] * n_panels)
    return outer.integrate(airy_tail(outer.nodes, r, r * r))


def stationary_ingredients(r1: float, s1: float) -> StationaryIngredients:
    """f*, g and R bound to the first label r1; R additionally depends on s1."""
    _check_labels(r1)
    R = s1 + math.exp((2.0 / 3.0) * r1 ** 3) * _iterated_tail(r1, s1)
    return StationaryIngredients(
        r1=r1,
        s1=s1,
        fstar=lambda s: fstar(r1, s),
        g=lambda s: stationary_g(r1, s),
        R=R,
    )


def r_delta(r: float, s1: float, delta: float) -> float:
    """R_delta = 1/delta - int_{s1}^inf g_r(s; delta) ds in a form analytic at delta = 0.

    At delta = 0 it equals R of the stationary law.
    """
    _check_labels(r)
    if delta < 0:
        raise ParameterWindowError("delta must be non-negative")
    if delta == 0:
        head = s1
        weight = lambda v: v
    else:
        head = -math.expm1(delta ** 3 / 3.0 + r * delta ** 2 - delta * s1) / delta
        weight = lambda v: -np.expm1(-delta * v) / delta
    body = airy_weighted_moment(s1, delta + r, r * r, weight)
    return head + math.exp((2.0 / 3.0) * r ** 3 - delta * s1) * body


def kdelta_entry(i: int, s1: float, j: int, s2: float, frame: ScalingFrame, delta: float) -> float:
    """-V 1(r_i < r_j) + K_{r_i, r_j} + delta f_{r_i}(s1) g_{r_j}(s2)."""
    try:
        ri, rj = frame.r_list[i], frame.r_list[j]
    except IndexError as exc:
        raise ParameterWindowError(f"block index outside 0..{frame.m - 1}") from exc
    value = k_conj(ri, s1, rj, s2)
    if ri < rj:
        value -= v_heat(ri, s1, rj, s2)
    if delta:
        value += delta * f_step(ri, s1) * g_step(rj, s2, delta)
    return value


def kdelta_block(ri: float, x: np.ndarray, rj: float, y: np.ndarray, delta: float) -> np.ndarray:
    """kdelta_entry on the node sets x (label ri) and y (label rj)."""
    block = k_conj_matrix(ri, x, rj, y)
    if ri < rj:
        block -= v_heat_matrix(ri, x, rj, y)
    if delta:
        block += delta * np.outer(f_step(ri, x), g_step(rj, y, delta))
    if not np.all(np.isfinite(block)):
        raise QuadratureError("non-finite kernel entry")
    return block
