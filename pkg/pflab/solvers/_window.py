"""Backward windows [t_start, t_end] and the trajectories they produce."""
from dataclasses import dataclass
from os import PathLike
from pathlib import Path
from typing import Final, Iterator, Optional, Tuple, Union
import itertools
import logging
import math

import numpy as np

from .._errors import SolverError
from .._typing import Array, Sampler, Seed
from ..grid import Field, Grid, grad_norm_sq, write_field_binary
from ..nonlinearity import Nonlinearity
from ._profile import QuasilinearProfile
from ._stepper import Scheme, cfl_max_dt, step_quasilinear, step_semilinear


GRADIENT_HEADROOM: Final[float] = 2.0
"""Factor applied to the initial sup |Du|^2 when sizing quasilinear steps."""

NOISE_MODES: Final[int] = 8
"""Fourier modes per axis of the random initial data."""

NOISE_AMPLITUDE: Final[float] = 0.9
"""Cap on max |u| of the random initial data."""

NOISE_DECAY: Final[float] = 5.0
"""Power law of the mode magnitudes, max(|k|, 1)^-decay."""


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Snapshots of one run with uniform step `dt`.

    Besides every `snapshot_every`-th step the run keeps the step right
    after it and the last two steps, so `step_pairs` always has
    consecutive states to difference, the final state included.
    """

    snapshots: Tuple[Field, ...]
    dt: float
    scheme: str
    cfl_ratio: float
    """dt divided by the stability limit at safety 1."""

    @property
    def grid(self) -> Grid:
        return self.snapshots[0].grid

    @property
    def times(self) -> Array:
        return np.array([f.time for f in self.snapshots])

    @property
    def initial(self) -> Field:
        return self.snapshots[0]

    @property
    def final(self) -> Field:
        return self.snapshots[-1]

    def __len__(self) -> int:
        return len(self.snapshots)

    def __iter__(self) -> Iterator[Field]:
        return iter(self.snapshots)

    def step_pairs(self) -> Iterator[Tuple[Field, Field]]:
        """Yield consecutive snapshots exactly one step apart."""
        for before, after in zip(self.snapshots, self.snapshots[1:]):
            if math.isclose(after.time - before.time, self.dt,
                            rel_tol=1e-6):
                yield before, after


def run_window(init: Sampler, grid: Grid, nl: Nonlinearity,
               profile: Optional[QuasilinearProfile] = None,
               t_start: float = -1.0, t_end: float = 0.0,
               snapshot_every: int = 1,
               scheme: Scheme = Scheme.EXPLICIT,
               dt: Optional[float] = None,
               snapshot_dir: Union[str, PathLike, None] = None
               ) -> Trajectory:
    """Evolve `init` from `t_start` to `t_end`.

    Parameters
    ----------
    init : callable
        Sampler for the initial data at `t_start`.
    grid : Grid
        The lattice, carrying the boundary policy and data.
    nl : Nonlinearity
        The potential.
    profile : QuasilinearProfile, optional
        Quasilinear integrand; the semilinear flow when omitted.
    t_start, t_end : float
        The window. The step is the CFL limit shrunk so that a whole
        number of steps fills the window.
    snapshot_every : int
        Snapshot stride in steps. Both ends are always kept, the end
        together with the step before it.
    scheme : Scheme
        Semilinear scheme; quasilinear runs are always explicit.
    dt : float, optional
        Step override, still subject to the stability check.
    snapshot_dir : path, optional
        Directory receiving every snapshot in the binary field format.

    Raises
    ------
    SolverError
        If the window is empty, the stride is not positive or the state
        becomes non-finite.
    StabilityError, SchemeError, WorkingRangeError
        Propagated from the steppers.

    """
    if not t_start < t_end:
        raise SolverError(f'empty window [{t_start:g}, {t_end:g}]')
    if snapshot_every < 1:
        raise SolverError(f'snapshot_every must be positive, got '
                          f'{snapshot_every}')
    state = Field.sample(grid, init, time=t_start)
    if not state.is_finite():
        raise SolverError('initial data is not finite')

    s_bound = GRADIENT_HEADROOM * _sup_grad_sq(state)
    limit = cfl_max_dt(grid, nl, s_bound, profile)
    span = t_end - t_start
    steps = max(1, math.ceil(span / (limit if dt is None else dt)
                             * (1.0 - 1e-12)))
    step = span / steps
    ratio = step / cfl_max_dt(grid, nl, s_bound, profile, safety=1.0)
    _LOGGER.debug('window [%g, %g]: %d steps of %.6g (CFL ratio %.3f)',
                  t_start, t_end, steps, step, ratio)

    directory = None if snapshot_dir is None else Path(snapshot_dir)
    if directory is not None:
        directory.mkdir(parents=True, exist_ok=True)
    snapshots = []
    warned = False

    def keep(index: int, f: Field) -> None:
        snapshots.append(f)
        if directory is not None:
            write_field_binary(f, directory / f'snapshot_{index:07d}.bin')

    keep(0, state)
    for index in range(1, steps + 1):
        if profile is None:
            state = step_semilinear(state, nl, step, scheme)
        else:
            state = step_quasilinear(state, nl, profile, step)
        if index == steps:
            # Land exactly on the window end.
            state = state.with_values(state.values, t_end)
        if not state.is_finite():
            raise SolverError(
                f'non-finite state at t = {state.time:.6g} after {index} '
                f'steps of {step:.3g}')
        if index % snapshot_every in (0, 1 % snapshot_every) \
                or index >= steps - 1:
            keep(index, state)
            if not warned and _sup_grad_sq(state) > max(s_bound, 1.0):
                warned = True
                _LOGGER.warning(
                    'sup |Du|^2 grew to %.4g at t = %.4g, above the bound '
                    '%.4g used for the step size', _sup_grad_sq(state),
                    state.time, s_bound)
    return Trajectory(tuple(snapshots), step, _scheme_name(scheme, profile),
                      ratio)


def _sup_grad_sq(f: Field) -> float:
    s = grad_norm_sq(f)[f.grid.active]
    return float(np.max(s)) if s.size else 0.0


def _scheme_name(scheme: Scheme, profile: Optional[QuasilinearProfile]
                 ) -> str:
    if profile is None:
        return scheme.name.lower()
    return f'explicit/{profile.name}'


def band_limited_noise(grid: Grid, seed: Seed, modes: int = NOISE_MODES,
                       amplitude: float = NOISE_AMPLITUDE,
                       decay: float = NOISE_DECAY) -> Sampler:
    """Return smooth periodic random data with max |u| <= `amplitude`.

    The data sums c_k cos(2 pi <k, x / L> + theta_k) over wavevectors
    with entries in 0..modes-1. The magnitudes c_k = max(|k|, 1)^-decay
    are fixed and the phases are uniform draws from a generator seeded
    by `seed`. Dividing by the sum of the c_k caps every derivative
    independently of the seed.
    """
    rng = np.random.default_rng(seed)
    waves = np.array(list(itertools.product(range(modes),
                                            repeat=grid.dim)), dtype=float)
    sizes = np.maximum(np.linalg.norm(waves, axis=-1), 1.0)
    weights = amplitude * sizes ** -decay
    weights /= np.sum(sizes ** -decay)
    phases = rng.uniform(0.0, 2.0 * np.pi, len(waves))
    frequencies = 2.0 * np.pi * waves / np.asarray(grid.extents)
    origin = np.asarray(grid.origin)

    def sampler(x: Array) -> Array:
        arguments = (np.asarray(x) - origin) @ frequencies.T + phases
        return np.cos(arguments) @ weights

    return sampler


_LOGGER = logging.getLogger(__name__)
