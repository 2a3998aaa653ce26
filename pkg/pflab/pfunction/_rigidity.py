"""Detecting the equality case P = 0.

A solution with P = 0 is either constant or one-dimensional,
u = g(<a, x> + alpha) with g the inverse of H. Since |D H(u)|^2 =
|Du|^2 / 2F(u), equality makes nu = H(u) a function with unit gradient,
and on the whole space such functions are affine.
"""
from dataclasses import dataclass
from enum import Enum, auto
from typing import Final, Optional, Tuple
import logging

import numpy as np

from ..grid import Field, gradient
from ..nonlinearity import Nonlinearity, ProfileQuadrature


RIGIDITY_TOLERANCE: Final[float] = 1e-6


class Verdict(Enum):
    CONSTANT = auto()
    ONE_DIMENSIONAL = auto()
    NOT_RIGID = auto()


@dataclass(frozen=True)
class RigidityReport:
    verdict: Verdict
    direction: Optional[Tuple[float, ...]]
    """Unit vector a, for one-dimensional fields."""

    offset: Optional[float]
    """alpha, for one-dimensional fields."""

    deviation: float
    """max |D nu - fit| over active nodes."""

    max_abs_p: float
    """max |P| evaluated as 2F(u) (|D nu|^2 - 1)."""

    tolerance: float


def rigidity_detect(f: Field, nl: Nonlinearity, q: ProfileQuadrature,
                    tol: float = RIGIDITY_TOLERANCE) -> RigidityReport:
    """Classify `f` as constant, one-dimensional or neither.

    Raises
    ------
    QuadratureError
        If a nonconstant field leaves the valid interval of `q`.

    """
    grid = f.grid
    if f.oscillation() <= tol:
        return RigidityReport(Verdict.CONSTANT, None, None, 0.0, 0.0, tol)

    nu = f.with_values(q.h_map(f.values))
    d_nu = gradient(nu)[grid.active]
    fit = np.mean(d_nu, axis=0)
    deviation = float(np.max(np.linalg.norm(d_nu - fit, axis=-1)))
    potential = nl.eval_f(f.active_values)
    max_abs_p = float(np.max(np.abs(
        2.0 * potential * (np.sum(d_nu ** 2, axis=-1) - 1.0))))
    length = float(np.linalg.norm(fit))

    if deviation <= tol and abs(length - 1.0) <= tol and max_abs_p <= tol:
        direction = fit / length
        points = grid.points[grid.active]
        offset = float(np.mean(nu.active_values - points @ direction))
        _LOGGER.debug('one-dimensional: a = %s, alpha = %.9g',
                      direction.tolist(), offset)
        return RigidityReport(Verdict.ONE_DIMENSIONAL,
                              tuple(float(c) for c in direction), offset,
                              deviation, max_abs_p, tol)
    _LOGGER.debug('not rigid: deviation %.3g, |fit| = %.6g', deviation,
                  length)
    return RigidityReport(Verdict.NOT_RIGID, None, None, deviation,
                          max_abs_p, tol)


_LOGGER = logging.getLogger(__name__)
