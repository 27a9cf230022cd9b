"""KPZ 1:2:3 scaling maps between particle labels/positions and rescaled coordinates."""
import math

import numpy as np

from app.core.errors import ParameterWindowError
from app.schemas.frame import T_MAX


def _check_time(t: float) -> None:
    if not 0 < t <= T_MAX:
        raise ParameterWindowError(f"t must lie in (0, {T_MAX:g}], got {t}")


def lattice_index(t: float, r: float) -> int:
    """Particle label floor(t + 2 r t^{2/3}) observed at rescaled label r.

    Negative results are returned as they are; callers decide whether they are valid.
    """
    _check_time(t)
    c = float(np.cbrt(t))
    return math.floor(t + 2.0 * r * c * c)


def rescale_position(x: float, t: float, r: float) -> float:
    """t^{-1/3} (x - 2t - 2 r t^{2/3})."""
    _check_time(t)
    c = float(np.cbrt(t))
    return (x - 2.0 * t - 2.0 * r * c * c) / c


def rho_from_delta(t: float, delta: float) -> float:
    """Boundary intensity 1 - t^{-1/3} delta of the finite-step frame."""
    _check_time(t)
    if delta < 0:
        raise ParameterWindowError("delta must be non-negative")
    rho = 1.0 - delta / float(np.cbrt(t))
    if rho <= 0:
        raise ParameterWindowError(
            f"frame outside model validity: rho = {rho:.6g} for t={t}, delta={delta}"
        )
    return rho
