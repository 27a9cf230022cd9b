"""Monte Carlo runs against the limit laws."""
import functools
import logging
import platform
import time
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy

from app.core.errors import DimensionMismatchError
from app.core.executor import run_batches
from app.schemas.experiment import CdfRow, ComparisonReport, ExperimentConfig
from app.schemas.frame import ScalingFrame
from app.services.fredholm import airy_stat_fdd, finite_step_fdd
from app.services.simulator import simulate_batch
from app.services.statistics import binomial_band, ks_tolerance, rectangle_probability

logger = logging.getLogger(__name__)

# model error allowed on top of the binomial band for joint rectangle probabilities
MULTI_POINT_BUDGET = 0.02


def law_name(delta: float) -> str:
    return "finite-step" if delta > 0 else "stationary"


def limit_cdf(
    frame: ScalingFrame,
    s_list: Sequence[float],
    nodes: Optional[int] = None,
    window: Optional[float] = None,
) -> Tuple[float, str]:
    """Joint distribution function of the limit process at (r_k, s_k) and the law used."""
    if len(s_list) != frame.m:
        raise DimensionMismatchError(f"{frame.m} labels but {len(s_list)} positions")
    if frame.delta > 0:
        value = finite_step_fdd(frame, s_list, frame.delta, nodes=nodes, window=window)
    else:
        value = airy_stat_fdd(frame, s_list, nodes=nodes, window=window)
    return value, law_name(frame.delta)


def environment_metadata() -> Dict[str, str]:
    return {
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
    }


class ExperimentService:
    """Simulation, formula evaluation and their comparison for one ExperimentConfig."""

    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.frame = config.frame

    def simulate(self) -> np.ndarray:
        """Rescaled samples, one row per trial and one column per label."""
        config = self.config
        logger.info(
            "simulating %d trials at t=%g, delta=%g, r=%s",
            config.trials, config.t, config.delta, config.r_list,
        )
        batch = functools.partial(simulate_batch, self.frame, config.simulation, config.seed)
        return run_batches(batch, config.trials, config.batch_size, config.workers)

    def limit_cdf(self, s_list: Sequence[float]) -> Tuple[float, str]:
        return limit_cdf(self.frame, s_list, self.config.nodes, self.config.window)

    def formula_row(self, s: float) -> float:
        """Formula side of one table row: every label thresholded at s."""
        value, _ = self.limit_cdf([s] * self.frame.m)
        return value

    def tolerance(self, rows: List[CdfRow]) -> float:
        if self.frame.m == 1:
            return ks_tolerance(self.config.t, self.config.trials)
        band = max(binomial_band(row.F_formula, self.config.trials) for row in rows)
        return band + MULTI_POINT_BUDGET

    def run_compare(self, samples: Optional[np.ndarray] = None) -> ComparisonReport:
        """Empirical against formula distribution on the configured s-grid.

        For several labels the table holds joint rectangle probabilities
        P(X(r_k) <= s for all k).
        """
        started = time.perf_counter()
        if samples is None:
            samples = self.simulate()
        rows = []
        for s in self.config.s_grid:
            empirical = rectangle_probability(samples, [s] * self.frame.m)
            formula = self.formula_row(s)
            rows.append(
                CdfRow(s=s, F_empirical=empirical, F_formula=formula, abs_diff=abs(empirical - formula))
            )
        ks = max(row.abs_diff for row in rows)
        report = ComparisonReport(
            ks=ks,
            n_samples=int(samples.shape[0]),
            rows=rows,
            tolerance=self.tolerance(rows),
            runtime=time.perf_counter() - started,
            seed=self.config.seed,
            config_hash=self.config.config_hash(),
            law=law_name(self.config.delta),
            r_list=list(self.config.r_list),
            metadata=environment_metadata(),
        )
        logger.info(
            "compare finished: ks=%.4f tolerance=%.4f (%d samples, %.1fs)",
            report.ks, report.tolerance, report.n_samples, report.runtime,
        )
        return report
