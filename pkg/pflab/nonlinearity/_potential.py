"""Admissible potentials F >= 0 and their evaluation."""
from dataclasses import dataclass
from typing import Callable, Dict, Final, Mapping, Optional, Sequence, Tuple
import logging

import numpy as np
import numpy.typing as npt
from numpy.polynomial import Polynomial
from scipy import optimize

from .._errors import NonlinearityError, WorkingRangeError
from .._typing import Array, Interval, ScalarMap


DEFAULT_WORKING_RANGE: Final[Interval] = (-2.0, 2.0)
"""Bounded states of interest satisfy |u| <= 1, plus an overshoot margin."""

SAMPLE_COUNT: Final[int] = 10_000
"""Dense sample size used to check F >= 0 and to bound |F''|."""

ZERO_TOLERANCE: Final[float] = 1e-10
"""Critical values of F at or below this level belong to the zero set."""

NEGATIVITY_TOLERANCE: Final[float] = 1e-12


@dataclass(frozen=True, eq=False)
class Nonlinearity:
    """Potential F with its first two derivatives.

    Parameters
    ----------
    name : str
        Human readable identifier, also used in reports.
    eval_f, eval_f1, eval_f2 : callable
        Elementwise maps u -> F(u), F'(u) and F''(u).
    zero_set : tuple of float
        Ordered real roots of F inside the working range.
    wells : tuple of float
        Ordered local minimizers of F inside the working range. Every
        member of `zero_set` is a well, the converse fails for
        imbalanced potentials.
    f2_bound : float
        Upper bound of |F''| on the working range.
    working_range : tuple of float
        Interval [-A, A] holding all states of interest.

    """

    name: str
    eval_f: ScalarMap
    eval_f1: ScalarMap
    eval_f2: ScalarMap
    zero_set: Tuple[float, ...]
    wells: Tuple[float, ...]
    f2_bound: float
    working_range: Interval = DEFAULT_WORKING_RANGE

    def evaluate(self, u: npt.ArrayLike) -> Tuple[Array, Array, Array]:
        """Return (F(u), F'(u), F''(u)) after checking the working range."""
        values = self.check_range(u)
        return self.eval_f(values), self.eval_f1(values), self.eval_f2(values)

    def check_range(self, u: npt.ArrayLike) -> Array:
        """Return `u` as a float array, raising if it leaves the range."""
        values = np.asarray(u, dtype=float)
        lower, upper = self.working_range
        if values.size == 0:
            return values
        lowest = float(np.min(values))
        highest = float(np.max(values))
        if not (lower <= lowest and highest <= upper):
            raise WorkingRangeError(
                f'states span [{lowest:.6g}, {highest:.6g}], outside the '
                f'working range [{lower:g}, {upper:g}] of {self.name}')
        return values

    def sample(self, count: int = SAMPLE_COUNT) -> Array:
        """Return an evenly spaced sample of the working range."""
        return np.linspace(*self.working_range, count)

    @property
    def is_bistable(self) -> bool:
        return len(self.wells) == 2


def evaluate(nl: Nonlinearity,
             u: npt.ArrayLike) -> Tuple[Array, Array, Array]:
    """Return the consistent triple (F, F', F'') at `u`.

    Raises
    ------
    WorkingRangeError
        If any state lies outside `nl.working_range`.

    """
    return nl.evaluate(u)


def make_double_well(imbalance: float = 0.0,
                     working_range: Interval = DEFAULT_WORKING_RANGE,
                     ) -> Nonlinearity:
    """Return the bistable potential with wells at -1 and 1.

    The derivative is F'(u) = (u^2 - 1)(u - beta). The antiderivative is
    shifted so that min F = 0, hence beta = 0 yields (1 - u^2)^2 / 4 and
    the lower well is the only zero when beta != 0.

    Parameters
    ----------
    imbalance : float
        The parameter beta, in the open interval (-1, 1).
    working_range : tuple of float
        Interval of admissible states.

    """
    beta = float(imbalance)
    if not abs(beta) < 1.0:
        raise NonlinearityError(
            f'imbalance {beta:g} outside (-1, 1): potential is not bistable')

    if beta == 0.0:
        def eval_f(u: npt.ArrayLike) -> Array:
            u = np.asarray(u, dtype=float)
            return (1.0 - u * u) ** 2 / 4.0

        def eval_f1(u: npt.ArrayLike) -> Array:
            u = np.asarray(u, dtype=float)
            return u ** 3 - u

        name = 'double_well'
        zero_set: Tuple[float, ...] = (-1.0, 1.0)
    else:
        shift = 0.25 + 2.0 * abs(beta) / 3.0
        antiderivative = Polynomial([shift, beta, -0.5, -beta / 3.0, 0.25])

        def eval_f(u: npt.ArrayLike) -> Array:
            return antiderivative(np.asarray(u, dtype=float))

        def eval_f1(u: npt.ArrayLike) -> Array:
            u = np.asarray(u, dtype=float)
            return (u * u - 1.0) * (u - beta)

        name = f'double_well_imbalanced(beta={beta:g})'
        zero_set = (-1.0,) if beta > 0 else (1.0,)

    def eval_f2(u: npt.ArrayLike) -> Array:
        u = np.asarray(u, dtype=float)
        return 3.0 * u * u - 2.0 * beta * u - 1.0

    # F'' is a parabola: its extremes on an interval sit at the ends or
    # at the vertex beta / 3.
    lower, upper = working_range
    candidates = np.array([lower, upper, min(max(beta / 3.0, lower), upper)])
    f2_bound = float(np.max(np.abs(eval_f2(candidates))))

    return Nonlinearity(
        name=name,
        eval_f=eval_f,
        eval_f1=eval_f1,
        eval_f2=eval_f2,
        zero_set=zero_set,
        wells=(-1.0, 1.0),
        f2_bound=f2_bound,
        working_range=working_range,
    )


def make_zero(working_range: Interval = DEFAULT_WORKING_RANGE
              ) -> Nonlinearity:
    """Return F = 0, which turns every flow into a pure diffusion."""

    def vanish(u: npt.ArrayLike) -> Array:
        return np.zeros_like(np.asarray(u, dtype=float))

    return Nonlinearity(
        name='zero',
        eval_f=vanish,
        eval_f1=vanish,
        eval_f2=vanish,
        zero_set=(),
        wells=(),
        f2_bound=0.0,
        working_range=working_range,
    )


def make_polynomial(coefficients: Sequence[float],
                    working_range: Interval = DEFAULT_WORKING_RANGE,
                    name: Optional[str] = None) -> Nonlinearity:
    """Return the potential F(u) = sum_k c_k u^k.

    Parameters
    ----------
    coefficients : sequence of float
        Coefficients of F in ascending degree.

    Raises
    ------
    NonlinearityError
        If F takes negative values on the working range.

    """
    if len(coefficients) == 0:
        raise NonlinearityError('polynomial potential needs coefficients')
    potential = Polynomial([float(c) for c in coefficients])
    first = potential.deriv()
    second = potential.deriv(2)

    def eval_f(u: npt.ArrayLike) -> Array:
        return potential(np.asarray(u, dtype=float))

    def eval_f1(u: npt.ArrayLike) -> Array:
        return first(np.asarray(u, dtype=float))

    def eval_f2(u: npt.ArrayLike) -> Array:
        return second(np.asarray(u, dtype=float))

    lower, upper = working_range
    candidates = [np.linspace(lower, upper, SAMPLE_COUNT)]
    if second.degree() >= 1:
        roots = second.deriv().roots()
        real = roots[np.isreal(roots)].real
        candidates.append(real[(real >= lower) & (real <= upper)])
    f2_bound = float(np.max(np.abs(eval_f2(np.concatenate(candidates)))))

    wells = find_wells(eval_f1, working_range)
    nl = Nonlinearity(
        name=name or f'polynomial{tuple(coefficients)}',
        eval_f=eval_f,
        eval_f1=eval_f1,
        eval_f2=eval_f2,
        zero_set=tuple(w for w in wells
                       if float(eval_f(w)) <= ZERO_TOLERANCE),
        wells=wells,
        f2_bound=f2_bound,
        working_range=working_range,
    )
    validate(nl)
    return nl


def find_wells(eval_f1: ScalarMap, working_range: Interval,
               count: int = 2 * SAMPLE_COUNT + 1) -> Tuple[float, ...]:
    """Return the local minimizers of F inside the working range.

    Minimizers are located as sign changes of F' from negative to
    positive on a dense sample, refined by bracketing root finding.
    """
    grid = np.linspace(*working_range, count)
    slope = eval_f1(grid)
    wells = []
    for i in range(count - 1):
        left, right = slope[i], slope[i + 1]
        if left < 0.0 and right > 0.0:
            wells.append(optimize.brentq(eval_f1, grid[i], grid[i + 1],
                                         xtol=1e-15))
        elif left == 0.0 and 0 < i and slope[i - 1] < 0.0 < right:
            wells.append(float(grid[i]))
    return tuple(float(w) for w in wells)


def validate(nl: Nonlinearity) -> None:
    """Check the admissibility invariants of a potential.

    Raises
    ------
    NonlinearityError
        If F is negative somewhere on the sample, or if F' does not
        vanish at a member of the zero set.

    """
    sample = nl.sample()
    values = nl.eval_f(sample)
    if np.min(values) < -NEGATIVITY_TOLERANCE:
        where = float(sample[int(np.argmin(values))])
        raise NonlinearityError(
            f'{nl.name} is negative near u={where:.6g}')
    for zero in nl.zero_set:
        if abs(float(nl.eval_f1(zero))) > 1e-8:
            raise NonlinearityError(
                f"{nl.name} has F'({zero:.6g}) != 0 at a zero of F")


def make_named(name: str, params: Mapping[str, float],
               working_range: Interval = DEFAULT_WORKING_RANGE,
               coefficients: Optional[Sequence[float]] = None
               ) -> Nonlinearity:
    """Build a potential from its configuration name.

    Parameters
    ----------
    name : str
        One of `double_well`, `double_well_imbalanced`, `zero`,
        `polynomial`.
    params : mapping
        Named parameters, e.g. {'beta': 0.3}.
    coefficients : sequence of float, optional
        Ascending coefficients, required by `polynomial`.

    """
    try:
        factory = _FACTORIES[name]
    except KeyError:
        raise NonlinearityError(
            f'unknown potential {name!r}, expected one of '
            f'{sorted(_FACTORIES)}') from None
    nl = factory(dict(params), working_range, coefficients)
    _LOGGER.debug('built potential %s, f2_bound=%g', nl.name, nl.f2_bound)
    return nl


_Factory = Callable[[Dict[str, float], Interval, Optional[Sequence[float]]],
                    Nonlinearity]


def _named_double_well(params: Dict[str, float], working_range: Interval,
                       _: Optional[Sequence[float]]) -> Nonlinearity:
    if params:
        raise NonlinearityError(
            f'double_well takes no parameters, got {sorted(params)}')
    return make_double_well(0.0, working_range)


def _named_imbalanced(params: Dict[str, float], working_range: Interval,
                      _: Optional[Sequence[float]]) -> Nonlinearity:
    if set(params) != {'beta'}:
        raise NonlinearityError(
            'double_well_imbalanced needs exactly the parameter beta')
    return make_double_well(params['beta'], working_range)


def _named_zero(params: Dict[str, float], working_range: Interval,
                _: Optional[Sequence[float]]) -> Nonlinearity:
    if params:
        raise NonlinearityError(
            f'zero takes no parameters, got {sorted(params)}')
    return make_zero(working_range)


def _named_polynomial(params: Dict[str, float], working_range: Interval,
                      coefficients: Optional[Sequence[float]]
                      ) -> Nonlinearity:
    if params:
        raise NonlinearityError(
            f'polynomial takes coefficients, not {sorted(params)}')
    if coefficients is None:
        raise NonlinearityError('polynomial potential needs coefficients')
    return make_polynomial(coefficients, working_range)


_FACTORIES: Final[Dict[str, _Factory]] = {
    'double_well': _named_double_well,
    'double_well_imbalanced': _named_imbalanced,
    'zero': _named_zero,
    'polynomial': _named_polynomial,
}


_LOGGER = logging.getLogger(__name__)
