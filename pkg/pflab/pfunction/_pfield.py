"""P-functions P = xi(|Du|^2) - 2F(u) and the energy they are tied to."""
from dataclasses import dataclass, field
from enum import Enum, auto
from typing import Optional, Tuple

import numpy as np

from .._typing import Array
from ..grid import Field, Grid, forward_differences, grad_norm_sq
from ..nonlinearity import Nonlinearity
from ..solvers import QuasilinearProfile, TravelingWave


class Variant(Enum):
    SEMILINEAR = auto()
    """P = |Du|^2 - 2F(u)."""

    QUASILINEAR = auto()
    """P = xi(|Du|^2) - 2F(u) for a quasilinear profile."""


@dataclass(frozen=True, eq=False)
class PField:
    """Nodewise P values of one snapshot, zero at inactive nodes."""

    grid: Grid
    values: Array = field(repr=False)
    variant: Variant
    time: float = 0.0

    @property
    def active_values(self) -> Array:
        return self.values[self.grid.active]

    def sup(self) -> float:
        return float(np.max(self.active_values))

    def argsup(self) -> Tuple[float, ...]:
        """Coordinates of a node where the supremum is attained."""
        masked = np.where(self.grid.active, self.values, -np.inf)
        index = np.unravel_index(int(np.argmax(masked)), self.grid.shape)
        return tuple(float(c) for c in self.grid.points[index])

    def positive_mass(self) -> float:
        """Return sum (P)_+ h^dim over active nodes."""
        return float(np.sum(np.maximum(self.active_values, 0.0))
                     * self.grid.cell_volume)

    def as_field(self) -> Field:
        return Field(self.grid, self.values, self.time)


def _assemble(f: Field, gradient_term: Array, nl: Nonlinearity,
              variant: Variant) -> PField:
    grid = f.grid
    values = np.zeros(grid.shape)
    potential = nl.eval_f(f.active_values)
    values[grid.active] = gradient_term[grid.active] - 2.0 * potential
    return PField(grid, values, variant, f.time)


def p_semilinear(f: Field, nl: Nonlinearity) -> PField:
    """Return P = |Du|^2 - 2F(u) at every active node."""
    return _assemble(f, grad_norm_sq(f), nl, Variant.SEMILINEAR)


def p_quasilinear(f: Field, nl: Nonlinearity,
                  profile: QuasilinearProfile) -> PField:
    """Return P = xi(|Du|^2) - 2F(u) at every active node.

    For the minimal surface profile xi(s) = 2 - 2 / sqrt(1 + s), and
    P <= 0 is the bound (sqrt(1 + |Du|^2) - 1) / sqrt(1 + |Du|^2) <= F(u).
    """
    return _assemble(f, profile.xi(grad_norm_sq(f)), nl, Variant.QUASILINEAR)


def p_function(f: Field, nl: Nonlinearity,
               profile: Optional[QuasilinearProfile] = None) -> PField:
    if profile is None:
        return p_semilinear(f, nl)
    return p_quasilinear(f, nl, profile)


def energy(f: Field, nl: Nonlinearity) -> float:
    """Return E(u) = sum (|D+u|^2 / 2 + F(u)) h^dim on a torus.

    The explicit semilinear step is a gradient descent step for E, so E
    decreases along explicit trajectories below the stability limit.
    """
    grid = f.grid
    density = 0.5 * np.sum(forward_differences(f) ** 2, axis=-1) \
        + nl.eval_f(f.values)
    return float(np.sum(density) * grid.cell_volume)


def wave_p_function(wave: TravelingWave, nl: Nonlinearity) -> Array:
    """Return P = u'^2 - 2F(u) along a traveling wave profile.

    Along the wave dP/dxi = -2 c u'^2, and P <= 0 since both ends sit on
    wells.
    """
    return wave.slope ** 2 - 2.0 * nl.eval_f(wave.profile)
