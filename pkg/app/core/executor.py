"""Local fan-out of independent trial batches.

A batch is a tuple of consecutive trial ids. The batch function must be a
picklable module-level callable returning one row per trial id; rows are
scattered into the output by trial id, so the result does not depend on the
worker count or on completion order.
"""
import concurrent.futures as cf
import logging
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from app.config import settings

logger = logging.getLogger(__name__)

BatchFunction = Callable[[Sequence[int]], np.ndarray]


def make_batches(n_trials: int, batch_size: int, first: int = 0) -> List[Tuple[int, ...]]:
    if n_trials < 1:
        raise ValueError("at least one trial is required")
    if batch_size < 1:
        raise ValueError("batch_size must be positive")
    return [
        tuple(range(start, min(start + batch_size, first + n_trials)))
        for start in range(first, first + n_trials, batch_size)
    ]


def run_batches(
    function: BatchFunction,
    n_trials: int,
    batch_size: Optional[int] = None,
    workers: Optional[int] = None,
    first: int = 0,
) -> np.ndarray:
    """Evaluate `function` over all trial batches and stack rows in trial order."""
    batch_size = batch_size or settings.batch_size
    workers = workers or settings.workers
    batches = make_batches(n_trials, batch_size, first)
    results = {}
    if workers == 1:
        for batch in batches:
            results[batch] = np.asarray(function(batch))
    else:
        logger.info("running %d batches on %d processes", len(batches), workers)
        with cf.ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {pool.submit(function, batch): batch for batch in batches}
            for future in cf.as_completed(futures):
                results[futures[future]] = np.asarray(future.result())
    sample = next(iter(results.values()))
    out = np.empty((n_trials,) + sample.shape[1:], dtype=sample.dtype)
    for batch, rows in results.items():
        if rows.shape[0] != len(batch):
            raise ValueError(f"batch of {len(batch)} trials returned {rows.shape[0]} rows")
        out[batch[0] - first: batch[-1] - first + 1] = rows
    return out
