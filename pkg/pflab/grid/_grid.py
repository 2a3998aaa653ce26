"""Uniform Cartesian lattices and the scalar fields living on them."""
from dataclasses import dataclass, field, replace
from enum import Enum, auto
from functools import cached_property
from typing import Final, Optional, Sequence, Tuple
import logging

import numpy as np

from .._errors import GeometryError, GridError
from .._typing import Array, BoolArray, BoundaryData, Sampler
from ._epigraph import EpigraphSpec, check_epigraph


MIN_NODES: Final[int] = 8
"""Smallest node count accepted along any axis."""

MAX_DIM: Final[int] = 3


class BoundaryPolicy(Enum):
    """How the lattice closes off at the faces of its box."""

    PERIODIC = auto()
    """Every axis wraps around: the flat torus."""

    EPIGRAPH_DIRICHLET = auto()
    """Periodic in x', Dirichlet on the graph x_n = h(x'), reflecting cap
    at the top of the box."""

    SLAB_DIRICHLET = auto()
    """Periodic in x', Dirichlet on both faces of the last axis."""

    BOX_DIRICHLET = auto()
    """Dirichlet on every face."""


@dataclass(frozen=True)
class DomainSpec:
    """Physical description of a computational box."""

    extents: Tuple[float, ...]
    """Per-axis physical lengths."""

    policy: BoundaryPolicy = BoundaryPolicy.PERIODIC

    origin: Optional[Tuple[float, ...]] = None
    """Coordinates of node zero, defaults to the origin."""

    epigraph: Optional[EpigraphSpec] = None
    """Boundary graph, required by EPIGRAPH_DIRICHLET."""

    boundary_data: Optional[BoundaryData] = None
    """Dirichlet values as a function of (points, t); zero if omitted."""


@dataclass(frozen=True, eq=False)
class Grid:
    """Lattice of nodes x = origin + i * spacing with an activity mask.

    Active nodes carry unknowns. Dirichlet nodes hold boundary data and
    every other inactive node is exterior to the domain.
    """

    extents: Tuple[float, ...]
    resolution: Tuple[int, ...]
    spacing: Tuple[float, ...]
    origin: Tuple[float, ...]
    policy: BoundaryPolicy
    active: BoolArray = field(repr=False)
    dirichlet: BoolArray = field(repr=False)
    epigraph: Optional[EpigraphSpec] = field(default=None, repr=False)
    boundary_data: Optional[BoundaryData] = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return len(self.resolution)

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.resolution

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    @property
    def min_spacing(self) -> float:
        return min(self.spacing)

    @property
    def active_count(self) -> int:
        return int(np.count_nonzero(self.active))

    @property
    def is_periodic(self) -> bool:
        return self.policy == BoundaryPolicy.PERIODIC

    @property
    def periodic_axes(self) -> Tuple[bool, ...]:
        if self.policy == BoundaryPolicy.PERIODIC:
            return (True,) * self.dim
        if self.policy == BoundaryPolicy.BOX_DIRICHLET:
            return (False,) * self.dim
        return (True,) * (self.dim - 1) + (False,)

    @property
    def geometric_slack(self) -> float:
        """Boundary localization error of the snapped Dirichlet rows."""
        if self.epigraph is None:
            return 0.0
        return max(self.spacing[-1] * self.epigraph.slope_bound, 1e-12)

    @cached_property
    def axes(self) -> Tuple[Array, ...]:
        return tuple(o + h * np.arange(n) for o, h, n
                     in zip(self.origin, self.spacing, self.resolution))

    @cached_property
    def points(self) -> Array:
        """Node coordinates of shape (*resolution, dim)."""
        return np.stack(np.meshgrid(*self.axes, indexing='ij'), axis=-1)

    def same_as(self, other: 'Grid') -> bool:
        return other is self or (
            self.resolution == other.resolution
            and self.spacing == other.spacing
            and self.origin == other.origin
            and self.policy == other.policy
            and np.array_equal(self.active, other.active))

    def boundary_values(self, t: float) -> Array:
        """Full-lattice array holding Dirichlet data, zero elsewhere."""
        values = np.zeros(self.shape)
        if self.boundary_data is not None and np.any(self.dirichlet):
            data = np.asarray(self.boundary_data(self.points, t), dtype=float)
            values[self.dirichlet] = np.broadcast_to(
                data, self.shape)[self.dirichlet]
        return values

    def apply_boundary(self, values: Array, t: float) -> Array:
        """Return `values` with inactive nodes reset to boundary data."""
        if self.active.all():
            return values
        return np.where(self.active, values, self.boundary_values(t))


def build_grid(spec: DomainSpec, resolution: Sequence[int]) -> Grid:
    """Lay out the lattice for a domain.

    Raises
    ------
    GridError
        If extents or counts are invalid, fewer than 8 nodes lie along
        some axis, or no node is active.
    GeometryError
        If the boundary graph violates its slope or curvature bounds.

    """
    extents = tuple(float(e) for e in spec.extents)
    counts = tuple(int(n) for n in resolution)
    dim = len(counts)
    if not 1 <= dim <= MAX_DIM:
        raise GridError(f'dimension {dim} outside 1..{MAX_DIM}')
    if len(extents) != dim:
        raise GridError(
            f'{len(extents)} extents given for a {dim}-dimensional grid')
    if not all(e > 0 and np.isfinite(e) for e in extents):
        raise GridError(f'extents must be positive, got {extents}')
    if min(counts) < MIN_NODES:
        raise GridError(
            f'resolution {counts} has fewer than {MIN_NODES} nodes per axis')
    origin = tuple(float(o) for o in (spec.origin or (0.0,) * dim))
    if len(origin) != dim:
        raise GridError(f'origin {origin} does not match dimension {dim}')
    spacing = tuple(e / n for e, n in zip(extents, counts))

    grid = Grid(
        extents=extents,
        resolution=counts,
        spacing=spacing,
        origin=origin,
        policy=spec.policy,
        active=np.ones(counts, dtype=bool),
        dirichlet=np.zeros(counts, dtype=bool),
        epigraph=spec.epigraph,
        boundary_data=spec.boundary_data,
    )
    active, dirichlet = _masks(grid)
    if not np.any(active):
        raise GridError('the domain has no active node')
    grid = replace(grid, active=active, dirichlet=dirichlet)
    _LOGGER.debug('grid %s %s: %d active, %d Dirichlet nodes',
                  spec.policy.name, counts, grid.active_count,
                  int(np.count_nonzero(dirichlet)))
    return grid


def _masks(grid: Grid) -> Tuple[BoolArray, BoolArray]:
    shape = grid.shape
    active = np.ones(shape, dtype=bool)
    dirichlet = np.zeros(shape, dtype=bool)
    policy = grid.policy

    if policy != BoundaryPolicy.EPIGRAPH_DIRICHLET and grid.epigraph:
        raise GridError(f'{policy.name} grids take no boundary graph')

    if policy == BoundaryPolicy.PERIODIC:
        return active, dirichlet

    if policy == BoundaryPolicy.BOX_DIRICHLET:
        for axis in range(grid.dim):
            face = [slice(None)] * grid.dim
            for index in (0, -1):
                face[axis] = index
                dirichlet[tuple(face)] = True
        return ~dirichlet, dirichlet

    if policy == BoundaryPolicy.SLAB_DIRICHLET:
        dirichlet[..., 0] = True
        dirichlet[..., -1] = True
        return ~dirichlet, dirichlet

    spec = grid.epigraph
    if spec is None or grid.dim < 2:
        raise GridError('epigraph grids need a graph and at least 2 axes')
    base = grid.points[..., 0, :-1]
    check_epigraph(spec, base)
    height = np.asarray(spec.graph_fn(base), dtype=float)
    vertical = grid.axes[-1]
    above = vertical > height[..., None]
    below = ~above
    if not np.all(below[..., 0]):
        raise GeometryError(
            'the boundary graph dips below the bottom of the box')
    # Highest node at or below the graph in every column.
    row = np.sum(below, axis=-1) - 1
    np.put_along_axis(dirichlet, row[..., None], True, axis=-1)
    return above, dirichlet


@dataclass(frozen=True, eq=False)
class Field:
    """Scalar samples on the full lattice of a grid at one instant."""

    grid: Grid
    values: Array = field(repr=False)
    time: float = 0.0

    def __post_init__(self) -> None:
        if self.values.shape != self.grid.shape:
            raise GridError(
                f'field of shape {self.values.shape} on a grid of shape '
                f'{self.grid.shape}')

    @property
    def active_values(self) -> Array:
        return self.values[self.grid.active]

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.active_values)))

    def with_values(self, values: Array, time: Optional[float] = None
                    ) -> 'Field':
        return Field(self.grid, values, self.time if time is None else time)

    def oscillation(self) -> float:
        active = self.active_values
        return float(np.max(active) - np.min(active))

    @classmethod
    def sample(cls, grid: Grid, sampler: Sampler, time: float = 0.0
               ) -> 'Field':
        """Evaluate `sampler` at every node, then impose boundary data."""
        values = np.broadcast_to(
            np.asarray(sampler(grid.points), dtype=float), grid.shape).copy()
        return cls(grid, grid.apply_boundary(values, time), time)

    @classmethod
    def constant(cls, grid: Grid, value: float, time: float = 0.0
                 ) -> 'Field':
        return cls.sample(grid, lambda x: np.full(x.shape[:-1], value), time)


def check_same_grid(*fields: Field) -> Grid:
    """Return the shared grid of `fields`, raising if they differ."""
    grid = fields[0].grid
    for other in fields[1:]:
        if not grid.same_as(other.grid):
            raise GridError('fields live on different grids')
    return grid


_LOGGER = logging.getLogger(__name__)
