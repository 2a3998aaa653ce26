from typing import Callable, NewType, Protocol, Tuple

import numpy as np
import numpy.typing as npt


Array = npt.NDArray[np.float64]
"""Real-valued array, scalar samples or stacked vectors."""

BoolArray = npt.NDArray[np.bool_]
"""Node mask over a lattice."""

ScalarMap = Callable[[npt.ArrayLike], Array]
"""Pointwise real map applied elementwise, e.g. u -> F(u)."""

Sampler = Callable[[Array], Array]
"""Map from coordinates of shape (..., dim) to values of shape (...)."""

BoundaryData = Callable[[Array, float], Array]
"""Dirichlet data as a function of node coordinates and time."""

Interval = Tuple[float, float]
"""Closed real interval (lower, upper)."""

Seed = NewType('Seed', int)


class CoefficientProfile(Protocol):
    """Anything exposing the derivatives of an integrand phi(s), s=|Du|^2."""

    def phi1(self, s: npt.ArrayLike) -> Array: ...

    def phi2(self, s: npt.ArrayLike) -> Array: ...
