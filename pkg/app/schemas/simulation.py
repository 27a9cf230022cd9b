"""Containers for the particle system and its driving noise."""
from dataclasses import dataclass
from typing import Optional

import numpy as np
from pydantic import BaseModel, Field

from app.core.errors import DimensionMismatchError


@dataclass(frozen=True)
class InitialConfig:
    """Initial positions zeta_0 = 0 <= zeta_1 <= ... and the boundary drift rho.

    Sampled configurations are strictly increasing; equal entries are accepted so
    that degenerate deterministic configurations can be evolved as well.
    """
    zeta: np.ndarray
    lam: float
    rho: float

    def __post_init__(self):
        zeta = np.asarray(self.zeta, dtype=float)
        if zeta.ndim != 1 or zeta.size == 0:
            raise DimensionMismatchError("zeta must be a non-empty vector")
        if zeta[0] != 0.0:
            raise ValueError("zeta_0 must be 0")
        if np.any(np.diff(zeta) < 0):
            raise ValueError("zeta must be nondecreasing")
        if self.rho < 0:
            raise ValueError("rho must be non-negative")
        object.__setattr__(self, "zeta", zeta)

    @property
    def n_particles(self) -> int:
        return self.zeta.size

    def with_rho(self, rho: float) -> "InitialConfig":
        return InitialConfig(zeta=self.zeta, lam=self.lam, rho=rho)


@dataclass(frozen=True)
class NoiseGrid:
    """Brownian increments on the grid t_j = j h, j = 0..J.

    dB has shape (N + 1, J): row n drives particle n, and row 0 drives the
    boundary particle (exposed as dB0).
    """
    h: float
    dB: np.ndarray

    def __post_init__(self):
        dB = np.asarray(self.dB, dtype=float)
        if dB.ndim != 2 or dB.shape[0] == 0:
            raise DimensionMismatchError("dB must have shape (N + 1, J)")
        if self.h <= 0:
            raise ValueError("h must be positive")
        object.__setattr__(self, "dB", dB)

    @property
    def dB0(self) -> np.ndarray:
        return self.dB[0]

    @property
    def n_particles(self) -> int:
        return self.dB.shape[0]

    @property
    def J(self) -> int:
        return self.dB.shape[1]

    @property
    def T(self) -> float:
        return self.h * self.J

    @property
    def times(self) -> np.ndarray:
        return self.h * np.arange(self.J + 1)

    @classmethod
    def zeros(cls, n_particles: int, h: float, J: int) -> "NoiseGrid":
        return cls(h=h, dB=np.zeros((n_particles, J)))


@dataclass(frozen=True)
class TrajectorySet:
    """Positions x[n, j] of particles n = 0..N at t_j."""
    x: np.ndarray
    times: np.ndarray

    @property
    def final(self) -> np.ndarray:
        return self.x[:, -1]

    def is_ordered(self, slack: float = 0.0) -> bool:
        return bool(np.all(np.diff(self.x, axis=0) >= -slack))


@dataclass(frozen=True)
class ExitRecord:
    """Time the maximizing path leaves the boundary line, and where it started."""
    z: float
    argmax_k: int


@dataclass
class TruncationProfile:
    """x_n(T) of the half-infinite system as the left truncation M grows."""
    n: int
    m_values: np.ndarray
    values: np.ndarray
    stabilized_at: Optional[int] = None


class SimulationConfig(BaseModel):
    """Time grid for one simulated trajectory ensemble."""
    time_steps: Optional[int] = Field(None, ge=1, description="J; derived from t when omitted")
    min_time_steps: int = Field(2000, ge=1)
    steps_per_scale: int = Field(200, ge=1, description="h <= t^{1/3} / steps_per_scale")
    batch_size: int = Field(64, ge=1)

    def steps_for(self, t: float) -> int:
        if self.time_steps is not None:
            return self.time_steps
        h_max = t ** (1.0 / 3.0) / self.steps_per_scale
        return max(self.min_time_steps, int(np.ceil(t / h_max)))
