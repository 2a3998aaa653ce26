"""Checking sup P <= tol along a trajectory."""
from dataclasses import dataclass, field
from typing import Final, List, Optional, Tuple
import logging

import numpy as np

from .._typing import Array
from ..nonlinearity import Nonlinearity
from ..solvers import QuasilinearProfile, Trajectory
from ._pfield import Variant, p_function
from ._residual import GRAD_FLOOR_RATIO, lemma_residual
from ._tolerance import estimate_tolerance, residual_tolerance


TENSION_LEVEL: Final[float] = 1e-10
"""F(u) at or below this level counts as touching the zero set."""


@dataclass(frozen=True, eq=False)
class EstimateReport:
    """Time series of sup P over a trajectory and the verdict on it."""

    variant: Variant
    times: Array = field(repr=False)
    sup_p: Array = field(repr=False)
    argsup: Tuple[Tuple[float, ...], ...] = field(repr=False)
    positive_mass: Array = field(repr=False)
    tolerance: float

    initial_violation: bool
    """sup P exceeds the tolerance at the first snapshot."""

    violation: bool
    """Initial violation, or sup P above the tolerance at a later time."""

    first_violation: Optional[float]
    """Time of the first snapshot with sup P above the tolerance."""

    residual_min: Optional[float] = None
    """Smallest Lemma residual over consecutive pairs, if evaluated."""

    residual_tolerance: Optional[float] = None

    tension_times: Tuple[float, ...] = ()
    """Snapshots where F(u) vanishes somewhere on a nonconstant field."""

    @property
    def passed(self) -> bool:
        return not self.violation

    @property
    def residual_passed(self) -> bool:
        if self.residual_min is None or self.residual_tolerance is None:
            return True
        return self.residual_min >= -self.residual_tolerance

    def sup_positive_part(self, index: int = 0) -> float:
        return max(float(self.sup_p[index]), 0.0)


def verify_estimate(traj: Trajectory, nl: Nonlinearity,
                    profile: Optional[QuasilinearProfile] = None,
                    tol: Optional[float] = None,
                    residuals: bool = False,
                    grad_floor: Optional[float] = None,
                    floor_ratio: float = GRAD_FLOOR_RATIO,
                    residual_tol: Optional[float] = None
                    ) -> EstimateReport:
    """Evaluate P on every snapshot of `traj` and compare sup P with `tol`.

    Violations are report content. When the first snapshot already
    violates the bound the forward assertion is meaningless; the report
    flags it and still carries the whole series.

    Parameters
    ----------
    traj : Trajectory
        A nonempty trajectory.
    nl : Nonlinearity
        The potential of the run.
    profile : QuasilinearProfile, optional
        Selects the quasilinear P; the semilinear P when omitted.
    tol : float, optional
        Bound for sup P, by default 10 h^2 + 5 dt.
    residuals : bool
        Also evaluate the Lemma residual on each pair of consecutive
        snapshots (semilinear runs only).
    grad_floor : float, optional
        Absolute floor for |Du| in the residual.
    floor_ratio : float
        Relative floor for |Du| when `grad_floor` is omitted.
    residual_tol : float, optional
        Bound for -min R, by default 50 h^2 + 5 dt.

    """
    grid = traj.grid
    tolerance = estimate_tolerance(grid, traj.dt) if tol is None else tol
    sup_p, argsup, mass, tension = [], [], [], []
    variant = Variant.SEMILINEAR
    for f in traj:
        p = p_function(f, nl, profile)
        variant = p.variant
        sup_p.append(p.sup())
        argsup.append(p.argsup())
        mass.append(p.positive_mass())
        touches = float(np.min(nl.eval_f(f.active_values))) <= TENSION_LEVEL
        if touches and f.oscillation() > tolerance:
            tension.append(f.time)

    series = np.array(sup_p)
    above = np.nonzero(series > tolerance)[0]
    initial_violation = bool(series[0] > tolerance)
    first = float(traj.times[above[0]]) if above.size else None
    if initial_violation:
        _LOGGER.warning(
            'sup P = %.4g exceeds %.3g at the first snapshot; the forward '
            'estimate is not asserted', series[0], tolerance)
    elif first is not None:
        _LOGGER.info('sup P = %.4g exceeds %.3g at t = %.6g',
                     series[above[0]], tolerance, first)
    if tension:
        _LOGGER.warning(
            'rigidity tension at %d snapshots: F(u) vanishes on a '
            'nonconstant field, first at t = %.6g', len(tension), tension[0])

    residual_min = residual_bound = None
    if residuals and profile is None:
        minima: List[float] = [
            lemma_residual(before, after, nl, grad_floor,
                           floor_ratio).minimum()
            for before, after in traj.step_pairs()]
        residual_min = min(minima, default=float('inf'))
        residual_bound = (residual_tolerance(grid, traj.dt)
                          if residual_tol is None else residual_tol)

    return EstimateReport(
        variant=variant,
        times=traj.times,
        sup_p=series,
        argsup=tuple(argsup),
        positive_mass=np.array(mass),
        tolerance=tolerance,
        initial_violation=initial_violation,
        violation=bool(above.size),
        first_violation=first,
        residual_min=residual_min,
        residual_tolerance=residual_bound,
        tension_times=tuple(tension),
    )


_LOGGER = logging.getLogger(__name__)
