"""Discretization budgets for discrete versions of the continuum
inequalities."""
from typing import Final

from ..grid import Grid


ESTIMATE_SPACE: Final[float] = 10.0

RESIDUAL_SPACE: Final[float] = 50.0

TIME_FACTOR: Final[float] = 5.0


def estimate_tolerance(grid: Grid, dt: float) -> float:
    """Return 10 h^2 + 5 dt, plus the boundary localization slack."""
    h = max(grid.spacing)
    return ESTIMATE_SPACE * h * h + TIME_FACTOR * dt + grid.geometric_slack


def residual_tolerance(grid: Grid, dt: float) -> float:
    """Return 50 h^2 + 5 dt."""
    h = max(grid.spacing)
    return RESIDUAL_SPACE * h * h + TIME_FACTOR * dt
