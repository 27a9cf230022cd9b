"""One-sided reflected Brownian motions with Poisson initial data.

The left half of the infinite system is replaced by a single drifted Brownian
motion x_0(t) = rho t + B_0(t) (Burke boundary). Particle n >= 1 is pushed by
particle n - 1 through the discrete Skorokhod map

    x_n(t_j) = max(x_n(t_{j-1}) + dB_n(j), x_{n-1}(t_j)),

which is applied in closed form along the whole time axis:
x_n = S_n + running_max(max(zeta_n, x_{n-1} - S_n)) with S_n the partial sums of dB_n.
"""
import logging
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from app.config import settings
from app.core.errors import DimensionMismatchError, LatticeRangeError, ParameterWindowError
from app.core.rng import AUXILIARY, INITIAL, TrialStreams
from app.schemas.frame import ModelParams, ScalingFrame
from app.schemas.simulation import (
    ExitRecord,
    InitialConfig,
    NoiseGrid,
    SimulationConfig,
    TrajectorySet,
    TruncationProfile,
)
from app.services.scaling import lattice_index, rescale_position

logger = logging.getLogger(__name__)

_SUP_CHUNK = 1 << 16


def _partial_sums(increments: np.ndarray) -> np.ndarray:
    sums = np.zeros(increments.shape[:-1] + (increments.shape[-1] + 1,))
    np.cumsum(increments, axis=-1, out=sums[..., 1:])
    return sums


def reflect(lower: np.ndarray, start, increments: np.ndarray) -> np.ndarray:
    """Path started at `start`, driven by `increments` and pushed up by `lower`.

    Works on any leading batch axes; the time axis is last.
    """
    sums = _partial_sums(increments)
    pushed = np.maximum.accumulate(lower - sums, axis=-1)
    start = np.asarray(start, dtype=float)[..., None]
    # sums + (lower - sums) may round one ulp below lower
    return np.maximum(sums + np.maximum(pushed, start), lower)


def sample_initial(params: ModelParams, N: int, rng: np.random.Generator) -> InitialConfig:
    """zeta_0 = 0 followed by N i.i.d. Exp(lambda) gaps."""
    if N < 1:
        raise ValueError("N must be at least 1")
    zeta = np.zeros(N + 1)
    np.cumsum(rng.exponential(1.0 / params.lam, N), out=zeta[1:])
    return InitialConfig(zeta=zeta, lam=params.lam, rho=params.rho)


def sample_noise(N: int, h: float, J: int, rng: np.random.Generator) -> NoiseGrid:
    """Normal(0, h) increments for the boundary and particles 1..N."""
    return NoiseGrid(h=h, dB=rng.normal(0.0, np.sqrt(h), (N + 1, J)))


def _check_dimensions(init: InitialConfig, noise: NoiseGrid) -> None:
    if init.n_particles != noise.n_particles:
        raise DimensionMismatchError(
            f"initial config has {init.n_particles} particles, noise grid {noise.n_particles}"
        )


def evolve(init: InitialConfig, noise: NoiseGrid) -> TrajectorySet:
    """Trajectories of particles 0..N on the noise grid."""
    _check_dimensions(init, noise)
    times = noise.times
    x = np.empty((init.n_particles, noise.J + 1))
    x[0] = init.rho * times + _partial_sums(noise.dB0)
    for n in range(1, init.n_particles):
        x[n] = reflect(x[n - 1], init.zeta[n], noise.dB[n])
    return TrajectorySet(x=x, times=times)


def coupled_rho_run(
    init: InitialConfig, noise: NoiseGrid, rho_list: Sequence[float]
) -> List[TrajectorySet]:
    """Same initial data and noise, one trajectory set per boundary drift."""
    return [evolve(init.with_rho(rho), noise) for rho in rho_list]


def _lpp_table(init: InitialConfig, noise: NoiseGrid, n: int):
    """Last passage values by line and leaving time, with tie data for backtracking.

    best[i][a] is the maximal weight of a path that leaves line i at grid time a.
    Among maximizers the one with the smallest boundary exit is kept.
    """
    _check_dimensions(init, noise)
    if not 0 <= n < init.n_particles:
        raise LatticeRangeError(f"particle {n} outside 0..{init.n_particles - 1}")
    sums = _partial_sums(noise.dB)
    J = noise.J
    best = init.rho * noise.times + sums[0]
    exit_index = np.arange(J + 1)
    start_line = np.zeros(J + 1, dtype=int)
    for i in range(1, n + 1):
        jump = init.zeta[i] - init.zeta[i - 1]
        previous = best + np.where(np.arange(J + 1) == 0, jump, 0.0) - sums[i]
        new_best = np.empty(J + 1)
        new_exit = np.empty(J + 1, dtype=int)
        new_start = np.empty(J + 1, dtype=int)
        for a in range(J + 1):
            window = previous[: a + 1]
            top = window.max()
            tied = np.flatnonzero(window == top)
            b = tied[np.argmin(exit_index[tied])]
            new_best[a] = sums[i][a] + top
            new_exit[a] = exit_index[b]
            new_start[a] = i if b == 0 else start_line[b]
        best, exit_index, start_line = new_best, new_exit, new_start
    return best, exit_index, start_line


def lpp_oracle(init: InitialConfig, noise: NoiseGrid, n: int) -> float:
    """Last passage value to (T, n) by dynamic programming over leaving times."""
    best, _, _ = _lpp_table(init, noise, n)
    return float(best[-1])


def exit_point(init: InitialConfig, noise: NoiseGrid, n: int) -> ExitRecord:
    """Exit time of the maximizing path from the boundary line.

    Meaningful as the coupling control Z_n when init.rho == 1.
    """
    _, exit_index, start_line = _lpp_table(init, noise, n)
    if n == 0:
        return ExitRecord(z=noise.T, argmax_k=0)
    return ExitRecord(z=float(exit_index[-1] * noise.h), argmax_k=int(start_line[-1]))


def _endpoints(
    zeta: np.ndarray,
    rho: float,
    h: float,
    J: int,
    streams: List[TrialStreams],
    wanted: Iterable[int],
) -> Dict[int, np.ndarray]:
    """x_n(T) for the wanted labels, for a batch of trials with their own substreams."""
    wanted = sorted(set(wanted))
    top = wanted[-1]
    scale = np.sqrt(h)
    times = h * np.arange(J + 1)
    boundary = np.stack([s.normals(0, J, scale) for s in streams])
    path = rho * times + _partial_sums(boundary)
    out: Dict[int, np.ndarray] = {}
    if 0 in wanted:
        out[0] = path[:, -1].copy()
    for n in range(1, top + 1):
        increments = np.stack([s.normals(n, J, scale) for s in streams])
        path = reflect(path, zeta[:, n], increments)
        if n in wanted:
            out[n] = path[:, -1].copy()
    return out


def _batch_initial(streams: List[TrialStreams], lam: float, N: int) -> np.ndarray:
    zeta = np.zeros((len(streams), N + 1))
    for row, s in zip(zeta, streams):
        np.cumsum(s.generator(0, INITIAL).exponential(1.0 / lam, N), out=row[1:])
    return zeta


def simulate_batch(
    frame: ScalingFrame, sim: SimulationConfig, seed: int, trial_ids: Sequence[int]
) -> np.ndarray:
    """Rescaled samples X_t(r_k), one row per trial, one column per label."""
    t = frame.t
    indices = [lattice_index(t, r) for r in frame.r_list]
    if min(indices) < 0:
        raise LatticeRangeError(f"negative lattice index for r_list={frame.r_list} at t={t}")
    N = max(max(indices), 1)
    J = sim.steps_for(t)
    h = t / J
    streams = [TrialStreams(seed, trial) for trial in trial_ids]
    zeta = _batch_initial(streams, 1.0, N)
    positions = _endpoints(zeta, frame.rho, h, J, streams, indices)
    samples = np.empty((len(streams), frame.m))
    for k, (r, n) in enumerate(zip(frame.r_list, indices)):
        samples[:, k] = [rescale_position(x, t, r) for x in positions[n]]
    return samples


def sample_scaled(
    frame: ScalingFrame, sim: SimulationConfig, seed: int, trial: int = 0
) -> List[float]:
    """X_t^{(delta)}(r_k) for every label of the frame, from one trial."""
    return simulate_batch(frame, sim, seed, [trial])[0].tolist()


def scaled_from_trajectories(traj: TrajectorySet, frame: ScalingFrame) -> List[float]:
    """Rescaled samples read off given trajectories at their final time."""
    values = []
    for r in frame.r_list:
        n = lattice_index(frame.t, r)
        if not 0 <= n < traj.x.shape[0]:
            raise LatticeRangeError(f"lattice index {n} exceeds {traj.x.shape[0] - 1} particles")
        values.append(rescale_position(float(traj.final[n]), frame.t, r))
    return values


def stationary_gap_sample(
    params: ModelParams, t: float, n: int, J: int, seed: int, trial_ids: Sequence[int]
) -> np.ndarray:
    """x_n(t) - x_{n-1}(t) for each trial."""
    if n < 1:
        raise ValueError("gap label must be at least 1")
    streams = [TrialStreams(seed, trial) for trial in trial_ids]
    zeta = _batch_initial(streams, params.lam, n)
    ends = _endpoints(zeta, params.rho, t / J, J, streams, [n - 1, n])
    return ends[n] - ends[n - 1]


def boundary_displacement_sample(
    params: ModelParams, t: float, J: int, seed: int, trial_ids: Sequence[int]
) -> np.ndarray:
    """x_0(t) - rho t for each trial."""
    streams = [TrialStreams(seed, trial) for trial in trial_ids]
    zeta = np.zeros((len(streams), 1))
    ends = _endpoints(zeta, params.rho, t / J, J, streams, [0])
    return ends[0] - params.rho * t


def sup_drifted_bm(
    rho: float,
    T: float,
    rng: np.random.Generator,
    n_steps: Optional[int] = None,
    h: Optional[float] = None,
) -> float:
    """Grid maximum of B(s) - rho s over [0, T].

    Either the step count or the step length fixes the grid; with a fixed step
    length, a longer horizon extends the same path.
    """
    if rho <= 0 or T < 0:
        raise ParameterWindowError("sup_drifted_bm needs rho > 0 and T >= 0")
    if T == 0:
        return 0.0
    if h is None:
        n_steps = n_steps or settings.sup_time_steps
        h = T / n_steps
    else:
        n_steps = max(1, int(round(T / h)))
    best = 0.0
    level = 0.0
    scale = np.sqrt(h)
    remaining = n_steps
    while remaining > 0:
        size = min(_SUP_CHUNK, remaining)
        walk = level + np.cumsum(scale * rng.standard_normal(size) - rho * h)
        best = max(best, float(walk.max()))
        level = float(walk[-1])
        remaining -= size
    return best


def point_to_point_lpp(m: int, T: float, J: int, rng: np.random.Generator) -> float:
    """Y_{0,m}(T): last passage through m + 1 Brownian lines without boundary data."""
    init = InitialConfig(zeta=np.zeros(m + 1), lam=1.0, rho=0.0)
    return float(evolve(init, sample_noise(m, T / J, J, rng)).final[m])


def default_truncation(rho: float, T: float) -> int:
    return 4 * int(np.ceil(rho * T)) + 20


def simulate_half_infinite(
    params: ModelParams, n: int, M: int, T: float, J: int, streams: TrialStreams
) -> np.ndarray:
    """Literal system of particles -M..n; returns x_k(T) for k = -M..n.

    Gaps left of 0 are Exp(rho), gaps right of 0 are Exp(lambda), and the leftmost
    particle is a free Brownian motion. Particle -k draws from substream k of the
    auxiliary family and particle k >= 0 from noise substream k, so enlarging M
    keeps every existing particle's noise.
    """
    if M < 0 or n < 0:
        raise ValueError("M and n must be non-negative")
    h = T / J
    scale = np.sqrt(h)
    left_gaps = streams.generator(1, INITIAL).exponential(1.0 / params.rho, M)
    right_gaps = streams.generator(0, INITIAL).exponential(1.0 / params.lam, n)
    zeta = np.concatenate([-np.cumsum(left_gaps)[::-1], [0.0], np.cumsum(right_gaps)])

    def increments(k: int) -> np.ndarray:
        if k < 0:
            return streams.normals(-k, J, scale, purpose=AUXILIARY)
        return streams.normals(k, J, scale)

    path = zeta[0] + _partial_sums(increments(-M))
    finals = [path[-1]]
    for position, k in enumerate(range(-M + 1, n + 1), start=1):
        path = reflect(path, zeta[position], increments(k))
        finals.append(path[-1])
    return np.asarray(finals)


def truncation_profile(
    params: ModelParams,
    n: int,
    T: float,
    J: int,
    seed: int,
    trial: int = 0,
    m_values: Optional[Sequence[int]] = None,
    tol: float = 1e-12,
) -> TruncationProfile:
    """x_n(T) of the half-infinite system for growing M on shared noise."""
    if m_values is None:
        m_max = default_truncation(params.rho, T)
        m_values = sorted({0, 1, 2, 5, 10, m_max // 4, m_max // 2, m_max})
    streams = TrialStreams(seed, trial)
    values = np.array(
        [simulate_half_infinite(params, n, M, T, J, streams)[-1] for M in m_values]
    )
    stabilized_at = None
    for i in range(len(values)):
        if np.all(np.abs(values[i:] - values[-1]) <= tol):
            stabilized_at = int(m_values[i])
            break
    logger.debug("truncation profile n=%d: stabilized at M=%s", n, stabilized_at)
    return TruncationProfile(
        n=n, m_values=np.asarray(m_values), values=values, stabilized_at=stabilized_at
    )
