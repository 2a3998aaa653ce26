"""Residual of the parabolic inequality satisfied by P where Du != 0.

Away from critical points P = |Du|^2 - 2F(u) satisfies

    (Lap - d/dt) P - <B, DP> >= |DP|^2 / (2 |Du|^2),  B = 2F'(u) Du / |Du|^2.

On a flat torus the Bochner formula carries no curvature term and yields
the same inequality.
"""
from dataclasses import dataclass, field
from typing import Final, Optional

import numpy as np

from .._errors import GridError, SnapshotError
from .._typing import Array, BoolArray
from ..grid import Field, Grid, check_same_grid, gradient, laplacian
from ..nonlinearity import Nonlinearity
from ._pfield import p_semilinear


GRAD_FLOOR_RATIO: Final[float] = 0.1
"""Default floor for |Du| relative to its maximum on the snapshot."""


@dataclass(frozen=True, eq=False)
class LemmaResidual:
    """Residual R at the admissible nodes of a snapshot pair."""

    grid: Grid
    values: Array = field(repr=False)
    """R on the full lattice, zero outside `mask`."""

    mask: BoolArray = field(repr=False)
    grad_floor: float
    time: float
    dt: float

    @property
    def admissible_count(self) -> int:
        return int(np.count_nonzero(self.mask))

    def minimum(self) -> float:
        """Return min R over the mask, +inf when the mask is empty."""
        if not self.mask.any():
            return float('inf')
        return float(np.min(self.values[self.mask]))


def interior_mask(grid: Grid) -> BoolArray:
    """Active nodes all of whose stencil neighbours are active."""
    interior = grid.active.copy()
    for axis, periodic in enumerate(grid.periodic_axes):
        for shift in (1, -1):
            neighbour = np.roll(grid.active, shift, axis)
            if not periodic:
                edge = [slice(None)] * grid.dim
                edge[axis] = 0 if shift == 1 else -1
                neighbour[tuple(edge)] = False
            interior &= neighbour
    return interior


def lemma_residual(before: Field, after: Field, nl: Nonlinearity,
                   grad_floor: Optional[float] = None,
                   floor_ratio: float = GRAD_FLOOR_RATIO) -> LemmaResidual:
    """Evaluate R = Lap P - P_t - <B, DP> - |DP|^2 / (2 |Du|^2).

    Space derivatives are taken on `after`, P_t is the backward
    difference between the snapshots. Admissible nodes are interior
    nodes of `after` with |Du| >= grad_floor and Du != 0.

    Parameters
    ----------
    before, after : Field
        Consecutive snapshots on one grid.
    nl : Nonlinearity
        The potential of the run.
    grad_floor : float, optional
        Lower bound for |Du|, by default `floor_ratio` max |Du|.
    floor_ratio : float
        Relative floor used when `grad_floor` is omitted.

    Raises
    ------
    GridError
        If the snapshots live on different grids.
    SnapshotError
        If `after` does not come strictly after `before`, or the floor is
        not positive.

    """
    grid = check_same_grid(before, after)
    if grad_floor is not None and not grad_floor > 0.0:
        raise SnapshotError(
            f'grad_floor must be positive, got {grad_floor:g}')
    if grad_floor is None and not floor_ratio > 0.0:
        raise SnapshotError(
            f'floor_ratio must be positive, got {floor_ratio:g}')
    dt = after.time - before.time
    if not dt > 0.0:
        raise SnapshotError(
            f'snapshots at t = {before.time:.6g} and {after.time:.6g} are '
            f'not in increasing order')
    p_before = p_semilinear(before, nl)
    p_after = p_semilinear(after, nl)
    p_field = p_after.as_field()

    du = gradient(after)
    dp = gradient(p_field)
    du_sq = np.sum(du * du, axis=-1)
    norm = np.sqrt(du_sq)
    if grad_floor is None:
        peak = float(np.max(norm[grid.active]))
        grad_floor = floor_ratio * peak
    mask = interior_mask(grid) & (norm >= grad_floor) & (du_sq > 0.0)

    safe = np.where(mask, du_sq, 1.0)
    drift = 2.0 * nl.eval_f1(after.values) * np.sum(du * dp, axis=-1) / safe
    values = (laplacian(p_field).values
              - (p_after.values - p_before.values) / dt
              - drift
              - np.sum(dp * dp, axis=-1) / (2.0 * safe))
    return LemmaResidual(grid=grid, values=np.where(mask, values, 0.0),
                         mask=mask, grad_floor=float(grad_floor),
                         time=after.time, dt=dt)


def bochner_residual(before: Field, after: Field, nl: Nonlinearity,
                     grad_floor: Optional[float] = None,
                     floor_ratio: float = GRAD_FLOOR_RATIO
                     ) -> LemmaResidual:
    """Return the residual of the Bochner inequality on a flat torus.

    The Ricci term vanishes on a flat torus, so the residual is the one
    computed by `lemma_residual`.

    Raises
    ------
    GridError
        If the grid is not a torus.

    """
    if not before.grid.is_periodic:
        raise GridError('the Bochner residual lives on a flat torus')
    return lemma_residual(before, after, nl, grad_floor, floor_ratio)
