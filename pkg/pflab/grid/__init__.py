"""Uniform Cartesian lattices, boundary geometry and finite differences."""
from ._epigraph import (
    CURVATURE_FLOOR,
    EpigraphSpec,
    check_epigraph,
    epigraph_mean_curvature,
    flat_graph,
    paraboloid_graph,
    tilted_graph,
)
from ._grid import (
    BoundaryPolicy,
    DomainSpec,
    Field,
    Grid,
    build_grid,
    check_same_grid,
)
from ._io import (
    FieldHeader,
    read_field_binary,
    read_field_header,
    write_field_binary,
    write_field_csv,
)
from ._operators import (
    forward_differences,
    grad_norm_sq,
    gradient,
    hessian,
    inner,
    laplacian,
    quasilinear_apply,
    staggered_inner,
)
