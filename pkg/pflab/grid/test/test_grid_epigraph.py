from dataclasses import dataclass
from typing import Final, List

import numpy as np
import pytest

from pflab._errors import GeometryError
from pflab.grid import (
    EpigraphSpec, check_epigraph, epigraph_mean_curvature, flat_graph,
    paraboloid_graph, tilted_graph)


def test_grid_mean_curvature():
    for case in CURVATURE_CASES:
        points = np.atleast_2d(case.point)
        value = epigraph_mean_curvature(case.spec, points)
        assert value.shape == (1,)
        assert float(value[0]) == pytest.approx(case.expected, abs=1e-6)


@dataclass
class _CurvatureCase:
    spec: EpigraphSpec
    point: List[float]
    expected: float


CURVATURE_CASES: Final[List[_CurvatureCase]] = [
    _CurvatureCase(flat_graph(), [0.3], 0.0),
    _CurvatureCase(flat_graph(2.0), [0.3, -1.0], 0.0),
    _CurvatureCase(paraboloid_graph(0.7, 1.0), [0.0], 0.7),
    _CurvatureCase(paraboloid_graph(0.7, 1.0), [0.0, 0.0], 1.4),
    # h'' / (1 + h'^2)^(3/2) away from the vertex.
    _CurvatureCase(paraboloid_graph(1.0, 1.0), [1.0], 2.0 ** -1.5),
    _CurvatureCase(tilted_graph(0.5), [0.2, 0.4], 0.0),
    _CurvatureCase(EpigraphSpec(lambda x: np.cos(x[..., 0]), 1.0), [0.0],
                   -1.0),
]


def test_grid_check_epigraph():
    x = np.linspace(-1, 1, 21)[:, None]
    check_epigraph(flat_graph(), x)
    check_epigraph(paraboloid_graph(0.4, 1.0), x)
    with pytest.raises(GeometryError):
        check_epigraph(EpigraphSpec(lambda x: np.cos(x[..., 0]), 1.0), x)
    with pytest.raises(GeometryError):
        check_epigraph(EpigraphSpec(tilted_graph(0.5).graph_fn, 0.4), x)
