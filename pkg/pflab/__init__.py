"""Numerical laboratory for Modica-type gradient estimates."""
from . import nonlinearity, grid, solvers, pfunction, harness
from ._errors import PflabError
