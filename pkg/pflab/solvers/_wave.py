"""Traveling waves u(x - ct) joining the two wells of a bistable potential.

The profile solves u'' + c u' = F'(u). It leaves the behind well, the one
with the larger F (the smaller well on ties), and settles on the ahead
well, where F vanishes. The speed is found by shooting along the unstable
manifold of the behind well and bisecting on c between trajectories that
overshoot the ahead well and trajectories that turn back before it.
"""
from dataclasses import dataclass
from enum import Enum, auto
from typing import Callable, Final, Tuple
import logging
import math

import numpy as np
from scipy import integrate, optimize

from .._errors import NonlinearityError, ShootingError
from .._typing import Array
from ..grid import BoundaryPolicy, DomainSpec, build_grid
from ..nonlinearity import Nonlinearity
from ._stepper import cfl_max_dt
from ._window import run_window


DEPARTURE: Final[float] = 1e-8
"""Initial distance from the behind well along its unstable direction."""

ARRIVAL: Final[float] = 1e-5
"""Distance from the ahead well where the linearized tail takes over."""

XI_MAX: Final[float] = 400.0

BRACKET_START: Final[float] = 1.0

BRACKET_LIMIT: Final[float] = 64.0

MAX_BISECTIONS: Final[int] = 200

SPEED_RESOLUTION: Final[float] = 1e-14
"""Bisection on the speed stops at this relative bracket width."""

TAIL_TOLERANCE: Final[float] = 1e-6

FRONT_SNAPSHOTS: Final[int] = 200

_ODE_OPTIONS: Final = dict(method='DOP853', rtol=1e-12, atol=1e-14)

_Event = Callable[[float, Array], float]


class _Shot(Enum):
    OVERSHOOT = auto()
    TURNBACK = auto()


@dataclass(frozen=True, eq=False)
class TravelingWave:
    """Sampled profile centered at its midpoint crossing."""

    xi: Array
    """Uniform samples of [-halfwidth, halfwidth]."""

    profile: Array
    """u(xi)."""

    slope: Array
    """u'(xi)."""

    speed: float

    wells: Tuple[float, float]
    """(behind, ahead): the limits of u at -infinity and +infinity."""

    residual: float
    """Max norm of u'' + c u' - F'(u) on the samples."""

    @property
    def halfwidth(self) -> float:
        return float(self.xi[-1])

    @property
    def orientation(self) -> float:
        """+1 for an increasing profile, -1 for a decreasing one."""
        return math.copysign(1.0, self.wells[1] - self.wells[0])

    @property
    def is_monotone(self) -> bool:
        return bool(np.all(self.orientation * np.diff(self.profile) >= 0.0))

    def __call__(self, xi: Array) -> Array:
        """Interpolate the profile, holding the end values outside."""
        return np.interp(xi, self.xi, self.profile)


def orient_wells(nl: Nonlinearity) -> Tuple[float, float]:
    """Return (behind, ahead) for a bistable potential.

    Raises
    ------
    NonlinearityError
        If `nl` does not have exactly two wells.

    """
    if not nl.is_bistable:
        raise NonlinearityError(
            f'{nl.name} has wells {nl.wells}, a traveling wave needs two')
    low, high = nl.wells
    f_low, f_high = (float(nl.eval_f(w)) for w in nl.wells)
    if f_high > f_low:
        return high, low
    return low, high


def _rates(nl: Nonlinearity, well: float,
           speed: float) -> Tuple[float, float]:
    curvature = float(nl.eval_f2(well))
    if curvature <= 0.0:
        raise ShootingError(f'{nl.name}: degenerate well at {well:g}')
    root = math.sqrt(speed * speed + 4.0 * curvature)
    return (-speed + root) / 2.0, (-speed - root) / 2.0


class _Shooter:
    """Integrates the profile equation from the behind well."""

    def __init__(self, nl: Nonlinearity, behind: float, ahead: float):
        self.nl = nl
        self.behind = behind
        self.ahead = ahead
        self.sign = math.copysign(1.0, ahead - behind)

    def start(self, speed: float) -> Array:
        unstable, _ = _rates(self.nl, self.behind, speed)
        return np.array([self.behind + self.sign * DEPARTURE,
                         self.sign * DEPARTURE * unstable])

    def rhs(self, speed: float) -> Callable[[float, Array], Array]:
        f1 = self.nl.eval_f1

        def field(_: float, y: Array) -> Array:
            return np.array([y[1], float(f1(y[0])) - speed * y[1]])

        return field

    def events(self) -> Tuple[_Event, _Event, _Event]:
        """Return the overshoot, turnback and arrival events."""
        sign, ahead = self.sign, self.ahead

        def overshoot(_: float, y: Array) -> float:
            return sign * (y[0] - ahead)

        def turnback(_: float, y: Array) -> float:
            return sign * y[1]

        def arrival(_: float, y: Array) -> float:
            return sign * (ahead - y[0]) - ARRIVAL

        overshoot.terminal, overshoot.direction = True, 1.0
        turnback.terminal, turnback.direction = True, -1.0
        arrival.terminal, arrival.direction = True, -1.0
        return overshoot, turnback, arrival

    def classify(self, speed: float) -> _Shot:
        overshoot, turnback, _ = self.events()
        solution = integrate.solve_ivp(
            self.rhs(speed), (0.0, XI_MAX), self.start(speed),
            events=(overshoot, turnback), **_ODE_OPTIONS)
        if solution.t_events[0].size:
            return _Shot.OVERSHOOT
        if solution.t_events[1].size:
            return _Shot.TURNBACK
        # Neither happened: the trajectory hugs the ahead well.
        if self.sign * (solution.y[0, -1] - self.ahead) >= 0.0:
            return _Shot.OVERSHOOT
        return _Shot.TURNBACK


def solve_traveling_wave(nl: Nonlinearity, halfwidth: float = 20.0,
                         tol: float = 1e-6,
                         samples: int = 8001) -> TravelingWave:
    """Find the speed and profile of the wave joining the wells of `nl`.

    Parameters
    ----------
    nl : Nonlinearity
        A bistable potential with nondegenerate wells.
    halfwidth : float
        The profile is sampled on [-halfwidth, halfwidth] around its
        midpoint crossing.
    tol : float
        Bound for the sampled residual u'' + c u' - F'(u).
    samples : int
        Sample count, at least 5.

    Raises
    ------
    NonlinearityError
        If `nl` is not bistable.
    ShootingError
        If no speed bracket exists in [-64, 64], the residual exceeds
        `tol`, or the tails miss the wells by more than 1e-6.

    """
    behind, ahead = orient_wells(nl)
    shooter = _Shooter(nl, behind, ahead)
    speed = _bisect_speed(shooter)
    xi, profile, slope = _profile(shooter, speed, halfwidth, samples)

    residual = _residual(nl, xi, profile, speed)
    if not residual <= tol:
        raise ShootingError(
            f'profile residual {residual:.3g} exceeds {tol:g} at c = '
            f'{speed:.12g}')
    misses = (abs(profile[0] - behind), abs(profile[-1] - ahead))
    if max(misses) > TAIL_TOLERANCE:
        raise ShootingError(
            f'tails miss the wells by {misses[0]:.3g} and {misses[1]:.3g}; '
            f'increase the halfwidth {halfwidth:g}')
    _LOGGER.info('%s: wave speed %.12g, residual %.3g', nl.name, speed,
                 residual)
    return TravelingWave(xi=xi, profile=profile, slope=slope, speed=speed,
                         wells=(behind, ahead), residual=residual)


def _bisect_speed(shooter: _Shooter) -> float:
    # Small speeds overshoot, large speeds turn back.
    reach = BRACKET_START
    while True:
        low, high = -reach, reach
        if (shooter.classify(low) == _Shot.OVERSHOOT
                and shooter.classify(high) == _Shot.TURNBACK):
            break
        if reach >= BRACKET_LIMIT:
            raise ShootingError(
                f'{shooter.nl.name}: no speed bracket in '
                f'[{-BRACKET_LIMIT:g}, {BRACKET_LIMIT:g}]')
        reach *= 2.0
    for iteration in range(MAX_BISECTIONS):
        middle = 0.5 * (low + high)
        if high - low <= SPEED_RESOLUTION * max(1.0, abs(middle)):
            break
        if shooter.classify(middle) == _Shot.OVERSHOOT:
            low = middle
        else:
            high = middle
        _LOGGER.debug('speed bracket [%.17g, %.17g] after %d bisections',
                      low, high, iteration + 1)
    return 0.5 * (low + high)


def _profile(shooter: _Shooter, speed: float, halfwidth: float,
             samples: int) -> Tuple[Array, Array, Array]:
    if samples < 5 or not halfwidth > 0:
        raise ValueError('need at least 5 samples on a positive halfwidth')
    _, turnback, arrival = shooter.events()
    solution = integrate.solve_ivp(
        shooter.rhs(speed), (0.0, XI_MAX), shooter.start(speed),
        events=(turnback, arrival), dense_output=True, **_ODE_OPTIONS)
    if not solution.t_events[1].size:
        raise ShootingError(
            f'trajectory at c = {speed:.12g} never reaches the ahead well')
    switch = float(solution.t_events[1][0])
    u_switch = float(solution.y_events[1][0][0])
    path = solution.sol
    midpoint = 0.5 * (shooter.behind + shooter.ahead)
    center = optimize.brentq(lambda s: path(s)[0] - midpoint, 0.0, switch,
                             xtol=1e-14)

    unstable, _ = _rates(shooter.nl, shooter.behind, speed)
    _, stable = _rates(shooter.nl, shooter.ahead, speed)
    xi = np.linspace(-halfwidth, halfwidth, samples)
    s = xi + center
    u = np.empty_like(s)
    v = np.empty_like(s)
    before = s < 0.0
    after = s > switch
    inner = ~(before | after)
    lead = shooter.sign * DEPARTURE * np.exp(unstable * s[before])
    u[before] = shooter.behind + lead
    v[before] = unstable * lead
    trail = (u_switch - shooter.ahead) * np.exp(stable * (s[after] - switch))
    u[after] = shooter.ahead + trail
    v[after] = stable * trail
    if np.any(inner):
        u[inner], v[inner] = path(s[inner])
    return xi, u, v


def _residual(nl: Nonlinearity, xi: Array, u: Array, speed: float) -> float:
    """Max norm of u'' + c u' - F'(u) by fourth order differences."""
    h = xi[1] - xi[0]
    second = (-u[4:] + 16 * u[3:-1] - 30 * u[2:-2] + 16 * u[1:-3]
              - u[:-4]) / (12 * h * h)
    first = (-u[4:] + 8 * u[3:-1] - 8 * u[1:-3] + u[:-4]) / (12 * h)
    return float(np.max(np.abs(second + speed * first
                               - nl.eval_f1(u[2:-2]))))


def closed_form_wave(imbalance: float) -> Tuple[float, Callable[[Array],
                                                                Array]]:
    """Return the speed and profile of the wave for the double well with
    F'(u) = (u^2 - 1)(u - beta): c = -|beta| sqrt 2, u = +-tanh(xi/sqrt 2).
    """
    beta = float(imbalance)
    sign = -1.0 if beta > 0 else 1.0

    def profile(xi: Array) -> Array:
        return sign * np.tanh(np.asarray(xi, dtype=float) / math.sqrt(2.0))

    return -abs(beta) * math.sqrt(2.0), profile


@dataclass(frozen=True, eq=False)
class FrontTrack:
    """Midpoint crossing of a simulated front over time."""

    times: Array
    positions: Array
    speed: float
    """Least squares slope of position against time."""


def measure_front_speed(nl: Nonlinearity, wave: TravelingWave,
                        length: float = 80.0, spacing: float = 0.05,
                        t_end: float = 20.0) -> FrontTrack:
    """Measure the speed of `wave` by direct simulation.

    A torus of the given length is seeded with the wave at x = -length/4
    and its mirror image at x = length/4. The semilinear flow runs to
    `t_end`, the crossing of the left front through the midpoint value is
    tracked, and a line is fitted over the last three quarters of the run.
    """
    nodes = int(round(length / spacing))
    spec = DomainSpec((length,), BoundaryPolicy.PERIODIC,
                      origin=(-0.5 * length,))
    grid = build_grid(spec, (nodes,))
    quarter = 0.25 * length

    def init(x: Array) -> Array:
        x = x[..., 0]
        return np.where(x < 0.0, wave(x + quarter), wave(quarter - x))

    steps = math.ceil(t_end / cfl_max_dt(grid, nl))
    trajectory = run_window(init, grid, nl, t_start=0.0, t_end=t_end,
                            snapshot_every=max(1, steps // FRONT_SNAPSHOTS))
    behind, ahead = wave.wells
    midpoint = 0.5 * (behind + ahead)
    left = grid.axes[0] < 0.0
    x = grid.axes[0][left]
    times, positions = [], []
    for f in trajectory:
        gap = wave.orientation * (f.values[left] - midpoint)
        crossing = np.nonzero((gap[:-1] < 0.0) & (gap[1:] >= 0.0))[0]
        if crossing.size != 1:
            raise ShootingError(
                f'expected one front in x < 0 at t = {f.time:.4g}, found '
                f'{crossing.size}')
        k = int(crossing[0])
        weight = -gap[k] / (gap[k + 1] - gap[k])
        times.append(f.time)
        positions.append(x[k] + weight * (x[k + 1] - x[k]))
    times_array = np.array(times)
    positions_array = np.array(positions)
    window = times_array >= 0.25 * t_end
    slope, _ = np.polyfit(times_array[window], positions_array[window], 1)
    _LOGGER.info('front speed %.6g from %d crossings', slope,
                 int(np.count_nonzero(window)))
    return FrontTrack(times_array, positions_array, float(slope))


_LOGGER = logging.getLogger(__name__)
