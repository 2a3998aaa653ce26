"""Quadrature H(u) = int (2F)^(-1/2) and the one-dimensional profiles it
generates."""
from dataclasses import dataclass, field
from typing import Final, Optional, Tuple
import logging
import math

import numpy as np
import numpy.typing as npt
from scipy import integrate, optimize

from .._errors import DirectionError, QuadratureError
from .._typing import Array, Interval, Sampler
from ._potential import Nonlinearity


F_FLOOR: Final[float] = 1e-14
"""The tabulated part of the valid interval keeps F at or above this."""

UNIFORM_KNOTS: Final[int] = 401

GEOMETRIC_RATIO: Final[float] = 1.02
"""Growth factor of the knot spacing away from a zero of F."""

UNIT_TOLERANCE: Final[float] = 1e-12

MAX_NEWTON_ITERATIONS: Final[int] = 80

_GAUSS_NODES, _GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(16)


@dataclass(frozen=True)
class _Tail:
    """Linearized approach of the profile to a zero of F."""

    well: float
    """The zero of F the tail approaches."""

    rate: Optional[float]
    """sqrt(F''(well)), None when the zero is degenerate."""

    end: float
    """Tabulated end of the inner interval next to the well."""

    end_value: float
    """H at `end`."""


@dataclass(frozen=True, eq=False)
class ProfileQuadrature:
    """Tabulated quadrature H and its inverse g on one interval.

    H is the antiderivative of (2F)^(-1/2) vanishing at `base_point`. It
    is strictly increasing on `valid_interval`, the open interval between
    the neighbouring zeros of F (or the working range ends).
    """

    nl: Nonlinearity
    base_point: float
    valid_interval: Interval
    inner_interval: Interval
    """Part of the valid interval where F >= F_FLOOR."""
    knots: Array = field(repr=False)
    knot_values: Array = field(repr=False)
    lower_tail: Optional[_Tail] = field(default=None, repr=False)
    upper_tail: Optional[_Tail] = field(default=None, repr=False)

    @property
    def value_range(self) -> Interval:
        """Range of H over the tabulated knots."""
        return float(self.knot_values[0]), float(self.knot_values[-1])

    def h_prime(self, u: npt.ArrayLike) -> Array:
        """Return H'(u) = (2F(u))^(-1/2)."""
        return 1.0 / np.sqrt(2.0 * self.nl.eval_f(np.asarray(u, dtype=float)))

    def h_map(self, u: npt.ArrayLike) -> Array:
        """Return H(u).

        Raises
        ------
        QuadratureError
            If a value lies outside the open valid interval.

        """
        values = np.asarray(u, dtype=float)
        a, b = self.valid_interval
        outside = ~((values > a) & (values < b))
        if np.any(outside):
            bad = values[outside]
            raise QuadratureError(
                f'H undefined for values in [{bad.min():.6g}, '
                f'{bad.max():.6g}], valid interval is ({a:.6g}, {b:.6g})')

        lo, hi = self.inner_interval
        result = np.empty_like(values)
        inner = (values >= lo) & (values <= hi)
        if np.any(inner):
            result[inner] = self._h_inner(values[inner])
        below = values < lo
        if np.any(below):
            result[below] = self._tail_h(self.lower_tail, values[below])
        above = values > hi
        if np.any(above):
            result[above] = self._tail_h(self.upper_tail, values[above])
        return result

    def g_map(self, nu: npt.ArrayLike) -> Array:
        """Return g(nu) = H^(-1)(nu).

        Inside the tabulated range the inverse is found by safeguarded
        Newton iteration within each knot panel. Beyond it, g follows the
        exponential approach to the neighbouring well.

        Raises
        ------
        QuadratureError
            If `nu` runs past a working range end not guarded by a zero.

        """
        values = np.asarray(nu, dtype=float)
        low, high = self.value_range
        result = np.empty_like(values)
        inner = (values >= low) & (values <= high)
        if np.any(inner):
            result[inner] = self._g_inner(values[inner])
        below = values < low
        if np.any(below):
            result[below] = self._tail_g(self.lower_tail, values[below])
        above = values > high
        if np.any(above):
            result[above] = self._tail_g(self.upper_tail, values[above])
        return result

    def g_prime(self, nu: npt.ArrayLike) -> Array:
        """Return g'(nu) = sqrt(2F(g(nu)))."""
        return np.sqrt(2.0 * self.nl.eval_f(self.g_map(nu)))

    def _panel(self, values: Array) -> npt.NDArray[np.intp]:
        index = np.searchsorted(self.knots, values, side='right') - 1
        return np.clip(index, 0, len(self.knots) - 2)

    def _h_inner(self, values: Array,
                 panel: Optional[npt.NDArray[np.intp]] = None) -> Array:
        if panel is None:
            panel = self._panel(values)
        start = self.knots[panel]
        half = 0.5 * (values - start)
        nodes = start[..., None] + half[..., None] * (_GAUSS_NODES + 1.0)
        integrand = self.h_prime(nodes)
        return self.knot_values[panel] + half * (integrand @ _GAUSS_WEIGHTS)

    def _g_inner(self, nu: Array) -> Array:
        panel = np.searchsorted(self.knot_values, nu, side='right') - 1
        panel = np.clip(panel, 0, len(self.knots) - 2)
        lower = self.knots[panel].copy()
        upper = self.knots[panel + 1].copy()
        v0 = self.knot_values[panel]
        v1 = self.knot_values[panel + 1]
        u = lower + (upper - lower) * (nu - v0) / (v1 - v0)
        for _ in range(MAX_NEWTON_ITERATIONS):
            residual = self._h_inner(u, panel) - nu
            lower = np.where(residual < 0.0, u, lower)
            upper = np.where(residual > 0.0, u, upper)
            proposal = u - residual * np.sqrt(2.0 * self.nl.eval_f(u))
            stray = ~((proposal > lower) & (proposal < upper))
            proposal = np.where(stray, 0.5 * (lower + upper), proposal)
            proposal = np.where(residual == 0.0, u, proposal)
            converged = np.abs(proposal - u) <= 4e-16 * (1.0 + np.abs(u))
            u = proposal
            if np.all(converged):
                break
        return u

    def _tail_h(self, tail: Optional[_Tail], values: Array) -> Array:
        if tail is None or tail.rate is None:
            raise QuadratureError(
                'H is not tabulated near a degenerate zero of F')
        gap = np.abs(values - tail.well) / abs(tail.end - tail.well)
        sign = 1.0 if tail.end > tail.well else -1.0
        return tail.end_value + sign * np.log(gap) / tail.rate

    def _tail_g(self, tail: Optional[_Tail], nu: Array) -> Array:
        if tail is None:
            raise QuadratureError(
                f'profile value range {self.value_range} exceeded at a '
                f'working range end where F does not vanish')
        if tail.rate is None:
            raise QuadratureError(
                'profile tail is undefined at a degenerate zero of F')
        decay = np.exp(-tail.rate * np.abs(nu - tail.end_value))
        return tail.well + (tail.end - tail.well) * decay


def build_quadrature(nl: Nonlinearity, u0: float = 0.0) -> ProfileQuadrature:
    """Tabulate H(u) = int_{u0}^u (2F(s))^(-1/2) ds and its inverse.

    Parameters
    ----------
    nl : Nonlinearity
        The potential.
    u0 : float
        Base point with F(u0) > 0.

    Raises
    ------
    QuadratureError
        If F(u0) = 0 or `u0` leaves the working range.

    """
    u0 = float(u0)
    lower, upper = nl.working_range
    if not lower < u0 < upper:
        raise QuadratureError(
            f'base point {u0:g} outside the working range ({lower:g}, '
            f'{upper:g})')
    if float(nl.eval_f(u0)) <= F_FLOOR:
        raise QuadratureError(
            f'F({u0:g}) = 0: the quadrature is singular at its base point')

    below = [z for z in nl.zero_set if z < u0]
    above = [z for z in nl.zero_set if z > u0]
    a = max(below) if below else lower
    b = min(above) if above else upper

    lo = _floor_crossing(nl, a, u0) if below else a
    hi = _floor_crossing(nl, b, u0) if above else b

    knots = _knots(lo, hi, u0, a if below else None, b if above else None)
    panels = np.array([
        integrate.quad(lambda s: (2.0 * float(nl.eval_f(s))) ** -0.5,
                       left, right, epsabs=0.0, epsrel=1e-13, limit=200)[0]
        for left, right in zip(knots[:-1], knots[1:])
    ])
    values = np.concatenate([[0.0], np.cumsum(panels)])
    values -= values[int(np.searchsorted(knots, u0))]

    def tail(well: float, end: float, end_value: float) -> _Tail:
        curvature = float(nl.eval_f2(well))
        rate = math.sqrt(curvature) if curvature > 0.0 else None
        return _Tail(well=well, rate=rate, end=end, end_value=end_value)

    q = ProfileQuadrature(
        nl=nl,
        base_point=u0,
        valid_interval=(a, b),
        inner_interval=(lo, hi),
        knots=knots,
        knot_values=values,
        lower_tail=tail(a, lo, float(values[0])) if below else None,
        upper_tail=tail(b, hi, float(values[-1])) if above else None,
    )
    _LOGGER.debug('tabulated H of %s on [%.3g, %.3g] with %d knots',
                  nl.name, lo, hi, len(knots))
    return q


def _floor_crossing(nl: Nonlinearity, zero: float, u0: float) -> float:
    # Point between the zero and u0 where F rises through F_FLOOR.
    return float(optimize.brentq(lambda s: float(nl.eval_f(s)) - F_FLOOR,
                                 zero, u0, xtol=1e-15, rtol=1e-15))


def _knots(lo: float, hi: float, u0: float,
           lower_zero: Optional[float], upper_zero: Optional[float]) -> Array:
    parts = [np.linspace(lo, hi, UNIFORM_KNOTS), [u0]]
    reach = 0.1 * (hi - lo)
    if lower_zero is not None:
        parts.append(lower_zero + _geometric(lo - lower_zero, reach))
    if upper_zero is not None:
        parts.append(upper_zero - _geometric(upper_zero - hi, reach))
    knots = np.unique(np.concatenate(parts))
    return knots[(knots >= lo) & (knots <= hi)]


def _geometric(start: float, reach: float) -> Array:
    count = max(1, int(math.ceil(math.log(reach / start)
                                 / math.log(GEOMETRIC_RATIO))))
    return start * GEOMETRIC_RATIO ** np.arange(count)


@dataclass(frozen=True, eq=False)
class ExactProfile:
    """Planar solution x -> g(<a, x> + alpha) of the steady equation."""

    quadrature: ProfileQuadrature
    direction: Array
    offset: float

    def phase(self, x: npt.ArrayLike) -> Array:
        return np.asarray(x, dtype=float) @ self.direction + self.offset

    def __call__(self, x: npt.ArrayLike) -> Array:
        return self.quadrature.g_map(self.phase(x))

    def gradient(self, x: npt.ArrayLike) -> Array:
        """Return Du(x), stacked along the last axis."""
        slope = self.quadrature.g_prime(self.phase(x))
        return slope[..., None] * self.direction


def exact_profile(q: ProfileQuadrature, direction: npt.ArrayLike,
                  offset: float = 0.0) -> ExactProfile:
    """Return the sampler x -> g(<a, x> + alpha).

    Raises
    ------
    DirectionError
        If `direction` is not a unit vector.

    """
    a = np.atleast_1d(np.asarray(direction, dtype=float))
    if a.ndim != 1 or abs(float(np.linalg.norm(a)) - 1.0) > UNIT_TOLERANCE:
        raise DirectionError(f'direction {a.tolist()} is not a unit vector')
    return ExactProfile(quadrature=q, direction=a, offset=float(offset))


@dataclass(frozen=True, eq=False)
class LipschitzProfile:
    """Composition x -> g(psi(x)) with a 1-Lipschitz map psi.

    Since |Du|^2 = g'^2 |D psi|^2 <= 2F(u), the composition satisfies the
    gradient bound with equality where |D psi| = 1.
    """

    quadrature: ProfileQuadrature
    psi: Sampler

    def __call__(self, x: npt.ArrayLike) -> Array:
        return self.quadrature.g_map(self.psi(np.asarray(x, dtype=float)))


def lipschitz_profile(q: ProfileQuadrature, psi: Sampler) -> LipschitzProfile:
    return LipschitzProfile(quadrature=q, psi=psi)


_LOGGER = logging.getLogger(__name__)
