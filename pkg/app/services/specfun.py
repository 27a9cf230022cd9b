"""Airy functions, exponentially weighted Airy integrals and Hermite edge asymptotics."""
import logging
import math
from typing import Callable, Tuple, Union

import numpy as np
from scipy import special

from app.config import settings
from app.core.errors import ParameterWindowError, QuadratureError
from app.schemas.numerics import AiryValue, HermitePoint
from app.services.quadrature import gauss_legendre

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

AIRY_WINDOW = (-40.0, 200.0)
HERMITE_T_MAX = 1e5
_RESCALE = 1e150


def airy_ai(x: float) -> AiryValue:
    """Ai(x) and Ai'(x) inside the documented window [-40, 200]."""
    lo, hi = AIRY_WINDOW
    if not lo <= x <= hi:
        raise ParameterWindowError(f"Airy argument {x} outside [{lo}, {hi}]")
    ai, aip, _, _ = special.airy(x)
    return AiryValue(x=x, ai=float(ai), ai_prime=float(aip))


def weighted_airy(z: np.ndarray, log_weight: np.ndarray) -> np.ndarray:
    """Ai(z) * exp(log_weight) without intermediate overflow or underflow.

    For z > 0 the scaled Airy function absorbs exp(-(2/3) z^{3/2}) into the exponent.
    """
    z = np.asarray(z, dtype=float)
    log_weight = np.broadcast_to(np.asarray(log_weight, dtype=float), z.shape)
    out = np.empty(z.shape)
    positive = z > 0
    if np.any(positive):
        zp = z[positive]
        scaled = special.airye(zp)[0]
        exponent = log_weight[positive] - (2.0 / 3.0) * zp * np.sqrt(zp)
        out[positive] = scaled * np.exp(exponent)
    rest = ~positive
    if np.any(rest):
        out[rest] = special.airy(z[rest])[0] * np.exp(log_weight[rest])
    return out


def _panel(integrand: Callable[[np.ndarray], np.ndarray], a: float, b: float, order: int) -> float:
    nodes, weights = gauss_legendre(order)
    half = 0.5 * (b - a)
    x = a + half * (nodes + 1.0)
    return half * float(np.dot(weights, integrand(x)))


def _march(integrand: Callable[[np.ndarray], np.ndarray], start: float, x_star: float) -> float:
    """Integral of `integrand` over [start, infinity).

    Panels of fixed width are added until the panel lies beyond x_star and
    contributes less than the truncation threshold.
    """
    width = settings.airy_panel_width
    order = settings.airy_panel_order
    total = 0.0
    a = start
    for _ in range(settings.airy_max_panels):
        piece = _panel(integrand, a, a + width, order)
        total += piece
        a += width
        if a >= x_star and abs(piece) < settings.airy_truncation:
            return total
    raise QuadratureError(f"Airy tail integral from {start} did not reach its truncation bound")


def _segments(integrand: Callable[[np.ndarray], np.ndarray], edges: np.ndarray) -> np.ndarray:
    """Integrals over [edges[i], edges[i+1]] for all i at once."""
    lengths = np.diff(edges)
    if lengths.size == 0:
        return lengths
    width = settings.airy_panel_width
    n_sub = max(1, int(np.ceil(lengths.max() / width)))
    nodes, weights = gauss_legendre(settings.airy_panel_order)
    sub = lengths / n_sub
    starts = edges[:-1, None] + sub[:, None] * np.arange(n_sub)[None, :]
    x = starts[..., None] + 0.5 * sub[:, None, None] * (nodes + 1.0)[None, None, :]
    values = integrand(x.ravel()).reshape(x.shape)
    return 0.5 * sub * np.einsum("ijk,k->i", values, weights)


def _tail_integral(integrand: Callable[[np.ndarray], np.ndarray], s: ArrayLike, x_star: float):
    """Integral over [s, infinity) for scalar or array s, sharing one far-tail march."""
    s_arr = np.atleast_1d(np.asarray(s, dtype=float))
    if not np.all(np.isfinite(s_arr)):
        raise QuadratureError("lower limits must be finite")
    order = np.argsort(s_arr)
    ordered = s_arr[order]
    far = _march(integrand, float(ordered[-1]), x_star)
    pieces = _segments(integrand, ordered)
    tails = np.empty_like(ordered)
    tails[-1] = far
    if pieces.size:
        tails[:-1] = far + np.cumsum(pieces[::-1])[::-1]
    out = np.empty_like(tails)
    out[order] = tails
    if np.ndim(s) == 0:
        return float(out[0])
    return out.reshape(np.shape(s))


def airy_tail(s: ArrayLike, c: float, shift: float) -> ArrayLike:
    """Integral of Ai(shift + x) e^{c x} over [s, infinity)."""
    x_star = max(-shift, c * abs(c) - shift)

    def integrand(x: np.ndarray) -> np.ndarray:
        return weighted_airy(shift + x, c * x)

    return _tail_integral(integrand, s, x_star)


def airy_weighted_moment(s: float, c: float, shift: float, weight: Callable[[np.ndarray], np.ndarray]) -> float:
    """Integral of weight(x - s) Ai(shift + x) e^{c x} over [s, infinity)."""
    x_star = max(-shift, c * abs(c) - shift) + 2.0

    def integrand(x: np.ndarray) -> np.ndarray:
        return weight(x - s) * weighted_airy(shift + x, c * x)

    return _march(integrand, s, x_star)


def airy_product_tail(s1: float, s2: float, r1: float, r2: float) -> float:
    """Integral of e^{-x (r1 - r2)} Ai(r1^2 + s1 + x) Ai(r2^2 + s2 + x) over [0, infinity)."""
    a = r1 * r1 + s1
    b = r2 * r2 + s2
    gap = r2 - r1
    x_star = max(0.0, -a, -b, 0.25 * gap * abs(gap) - min(a, b))

    def integrand(x: np.ndarray) -> np.ndarray:
        return weighted_airy(a + x, 0.0) * weighted_airy(b + x, gap * x)

    return _march(integrand, 0.0, x_star)


def airy_product_line(s1: float, s2: float, r1: float, r2: float) -> float:
    """Same integrand as airy_product_tail over the whole real line; needs r2 > r1."""
    gap = r2 - r1
    if gap <= 0:
        raise ParameterWindowError("the full-line Airy product integral needs r2 > r1")
    a = r1 * r1 + s1
    b = r2 * r2 + s2

    def integrand(x: np.ndarray) -> np.ndarray:
        return weighted_airy(a + x, 0.0) * weighted_airy(b + x, gap * x)

    # |Ai Ai| <= 1/(pi sqrt|x|) on the left, so e^{gap x} sets the cutoff
    lower = min(-a, -b) - (40.0 + math.log(1.0 + 1.0 / gap)) / gap
    if -lower > settings.airy_max_panels * settings.airy_panel_width:
        raise ParameterWindowError("heat-kernel gap too small for the Airy representation")
    positive = airy_product_tail(s1, s2, r1, r2)
    negative = float(_segments(integrand, np.array([lower, 0.0]))[0])
    return positive + negative


def _hermite_log(n: int, x: float) -> Tuple[float, float]:
    """log |h_n(x)| and sign of h_n for h_{k+1} = (x h_k - sqrt(k) h_{k-1}) / sqrt(k + 1)."""
    previous, current = 0.0, 1.0
    log_scale = 0.0
    for k in range(n):
        previous, current = current, (x * current - math.sqrt(k) * previous) / math.sqrt(k + 1)
        magnitude = abs(current)
        if magnitude > _RESCALE or (0 < magnitude < 1.0 / _RESCALE):
            previous /= magnitude
            current /= magnitude
            log_scale += math.log(magnitude)
    if current == 0.0:
        return -math.inf, 0.0
    return log_scale + math.log(abs(current)), math.copysign(1.0, current)


def hermite_alpha_beta(t: float, r: float, s: float) -> HermitePoint:
    """alpha_t(r, s) and beta_t(r, s) from the orthonormal Hermite recurrence.

    n = round(t + 2 t^{2/3} r); the label actually used in x is the one
    matching the rounded n, r_eff = (n - t) / (2 t^{2/3}).
    """
    if t <= 0 or t > HERMITE_T_MAX:
        raise ParameterWindowError(f"Hermite recurrence needs 0 < t <= {HERMITE_T_MAX:g}")
    c = float(np.cbrt(t))
    n = int(round(t + 2.0 * c * c * r))
    if n < 0:
        raise ParameterWindowError("Hermite index must be non-negative")
    r_eff = (n - t) / (2.0 * c * c)
    root_t = math.sqrt(t)
    x = 2.0 * root_t + 2.0 * math.sqrt(c) * r_eff + s / math.sqrt(c)
    log_h, sign = _hermite_log(n, x)
    half_log_factorial = 0.5 * special.gammaln(n + 1)
    log_t = math.log(t)
    alpha_log = (
        -t / 2 + root_t * x - 0.5 * (n + 1) * log_t + half_log_factorial - 0.5 * x * x + log_h
    )
    beta_log = t / 2 - root_t * x + 0.5 * n * log_t - half_log_factorial + log_h
    if max(alpha_log, beta_log) > 700:
        raise ParameterWindowError("log-domain accumulator overflow; t too large for this (r, s)")
    alpha = sign * c * math.exp(alpha_log) / math.sqrt(2.0 * math.pi)
    beta = -sign * c * math.exp(beta_log)
    return HermitePoint(t=t, n=n, x=x, alpha=alpha, beta=beta, log_abs_h=log_h, sign=sign)
