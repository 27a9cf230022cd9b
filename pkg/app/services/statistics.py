"""Empirical distribution functions and the statistical budgets used to compare them."""
import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from app.config import settings
from app.core.errors import DimensionMismatchError, EmptySampleError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EmpiricalCDF:
    """Sorted sample and its right-continuous step function."""
    samples: np.ndarray

    @classmethod
    def from_samples(cls, samples: Sequence[float]) -> "EmpiricalCDF":
        data = np.asarray(samples, dtype=float).ravel()
        if data.size == 0:
            raise EmptySampleError("an empirical CDF needs at least one sample")
        if not np.all(np.isfinite(data)):
            raise ValueError("samples must be finite")
        return cls(samples=np.sort(data))

    @property
    def n(self) -> int:
        return self.samples.size

    def __call__(self, s: np.ndarray) -> np.ndarray:
        return np.searchsorted(self.samples, s, side="right") / float(self.n)

    def left_limit(self, s: np.ndarray) -> np.ndarray:
        return np.searchsorted(self.samples, s, side="left") / float(self.n)


def ks_distance(
    ecdf: EmpiricalCDF,
    cdf: Callable[[np.ndarray], np.ndarray],
    grid: Optional[Sequence[float]] = None,
    at_samples: bool = True,
) -> float:
    """sup |F_n - F| over the sample points (both one-sided limits) and the grid.

    With at_samples=False only the grid is used, for reference CDFs that are
    expensive to evaluate.
    """
    if ecdf.n == 0:
        raise EmptySampleError("empty sample")
    distance = 0.0
    if at_samples:
        points = ecdf.samples
        reference = np.asarray(cdf(points), dtype=float)
        distance = max(
            float(np.max(np.abs(ecdf(points) - reference))),
            float(np.max(np.abs(ecdf.left_limit(points) - reference))),
        )
    if grid is not None and len(grid):
        grid = np.asarray(grid, dtype=float)
        reference = np.asarray(cdf(grid), dtype=float)
        distance = max(distance, float(np.max(np.abs(ecdf(grid) - reference))))
    return distance


def ks_tolerance(t: float, trials: int, c1: Optional[float] = None, c2: Optional[float] = None) -> float:
    """c1 t^{-1/3} + c2 / sqrt(trials): finite-time bias plus the KS fluctuation band."""
    c1 = settings.ks_c1 if c1 is None else c1
    c2 = settings.ks_c2 if c2 is None else c2
    return c1 / float(np.cbrt(t)) + c2 / math.sqrt(trials)


def exponential_ks(samples: Sequence[float], rate: float) -> float:
    """KS statistic of samples against Exp(rate)."""
    data = np.asarray(samples, dtype=float).ravel()
    if data.size == 0:
        raise EmptySampleError("empty sample")
    return float(stats.kstest(data, "expon", args=(0.0, 1.0 / rate)).statistic)


def normal_ks(samples: Sequence[float], mean: float = 0.0, std: float = 1.0) -> float:
    data = np.asarray(samples, dtype=float).ravel()
    if data.size == 0:
        raise EmptySampleError("empty sample")
    return float(stats.kstest(data, "norm", args=(mean, std)).statistic)


def moment_zscores(samples: Sequence[float], mean: float, variance: float) -> Tuple[float, float]:
    """Standardized deviations of the sample mean and variance from their targets.

    The variance standard error uses the fourth central moment of the sample.
    """
    data = np.asarray(samples, dtype=float).ravel()
    n = data.size
    if n < 2:
        raise EmptySampleError("moment checks need at least two samples")
    sample_mean = float(data.mean())
    sample_var = float(data.var(ddof=1))
    z_mean = (sample_mean - mean) / math.sqrt(variance / n)
    centered = data - sample_mean
    m4 = float(np.mean(centered ** 4))
    se_var = math.sqrt(max(m4 - sample_var ** 2, 1e-300) / n)
    return z_mean, (sample_var - variance) / se_var


def rectangle_probability(samples: np.ndarray, thresholds: Sequence[float]) -> float:
    """Fraction of rows with X(r_k) <= s_k for every k."""
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    thresholds = np.asarray(thresholds, dtype=float)
    if samples.shape[1] != thresholds.size:
        raise DimensionMismatchError("one threshold per label is required")
    if samples.shape[0] == 0:
        raise EmptySampleError("empty sample")
    return float(np.mean(np.all(samples <= thresholds[None, :], axis=1)))


def binomial_band(p: float, n: int, sigmas: float = 3.0) -> float:
    return sigmas * math.sqrt(max(p * (1.0 - p), 0.0) / n)
