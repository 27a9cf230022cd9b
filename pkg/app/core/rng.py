"""Counter-based random substreams.

Every (trial, particle) pair owns a Philox stream. The key is derived from the
master seed, the trial id and a purpose tag; the particle index is written into
the high word of the 256-bit counter, so streams never overlap and a trial's
numbers do not depend on which worker ran it or in what order.
"""
from typing import Dict

import numpy as np

NOISE = 0
INITIAL = 1
AUXILIARY = 2

_COUNTER_SHIFT = 192


def _key(seed: int, trial: int, purpose: int) -> np.ndarray:
    return np.random.SeedSequence([seed, trial, purpose]).generate_state(2, np.uint64)


def substream(seed: int, trial: int, particle: int = 0, purpose: int = NOISE) -> np.random.Generator:
    """Generator for one (trial, particle) pair."""
    if seed < 0 or trial < 0 or particle < 0:
        raise ValueError("seed, trial and particle must be non-negative")
    bit_generator = np.random.Philox(
        key=_key(seed, trial, purpose),
        counter=particle << _COUNTER_SHIFT,
    )
    return np.random.Generator(bit_generator)


class TrialStreams:
    """Substream factory bound to one trial.

    Keys are cached per purpose, so asking for many particles of the same trial
    only pays for the Philox construction.
    """

    def __init__(self, seed: int, trial: int):
        self.seed = seed
        self.trial = trial
        self._keys: Dict[int, np.ndarray] = {}

    def generator(self, particle: int, purpose: int = NOISE) -> np.random.Generator:
        key = self._keys.get(purpose)
        if key is None:
            key = _key(self.seed, self.trial, purpose)
            self._keys[purpose] = key
        return np.random.Generator(
            np.random.Philox(key=key, counter=particle << _COUNTER_SHIFT)
        )

    def normals(self, particle: int, size: int, scale: float, purpose: int = NOISE) -> np.ndarray:
        return self.generator(particle, purpose).normal(0.0, scale, size)
