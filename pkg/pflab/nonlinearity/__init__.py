"""Admissible potentials and the exact one-dimensional profiles they
generate."""
from ._potential import (
    DEFAULT_WORKING_RANGE,
    Nonlinearity,
    evaluate,
    find_wells,
    make_double_well,
    make_named,
    make_polynomial,
    make_zero,
    validate,
)
from ._quadrature import (
    ExactProfile,
    LipschitzProfile,
    ProfileQuadrature,
    build_quadrature,
    exact_profile,
    lipschitz_profile,
)
