import math

import numpy as np
import pytest

from pflab._errors import QuadratureError
from pflab.grid import BoundaryPolicy, DomainSpec, Field, build_grid
from pflab.nonlinearity import (
    build_quadrature, exact_profile, make_double_well)
from pflab.pfunction import Verdict, rigidity_detect


DOUBLE_WELL = make_double_well()
QUADRATURE = build_quadrature(DOUBLE_WELL)


def _box_field(sampler) -> Field:
    spec = DomainSpec((3.0, 3.0), BoundaryPolicy.BOX_DIRICHLET,
                      origin=(-1.5, -1.5),
                      boundary_data=lambda x, t: sampler(x))
    return Field.sample(build_grid(spec, (80, 80)), sampler)


def test_pfunction_rigidity_direction_sweep():
    offset = 0.3
    for k in range(16):
        theta = 2 * math.pi * k / 16
        direction = np.array([math.cos(theta), math.sin(theta)])
        f = _box_field(exact_profile(QUADRATURE, direction, offset))
        report = rigidity_detect(f, DOUBLE_WELL, QUADRATURE)
        assert report.verdict == Verdict.ONE_DIMENSIONAL, theta
        np.testing.assert_allclose(report.direction, direction, atol=1e-6)
        assert report.offset == pytest.approx(offset, abs=1e-6)
        assert report.max_abs_p <= report.tolerance


def test_pfunction_rigidity_constant():
    f = _box_field(lambda x: np.full(x.shape[:-1], 0.2))
    report = rigidity_detect(f, DOUBLE_WELL, QUADRATURE)
    assert report.verdict == Verdict.CONSTANT
    assert report.direction is None
    assert report.offset is None


def test_pfunction_rigidity_radial_bump():
    f = _box_field(lambda x: 0.8 * np.exp(-np.sum(x * x, axis=-1)))
    report = rigidity_detect(f, DOUBLE_WELL, QUADRATURE)
    assert report.verdict == Verdict.NOT_RIGID
    assert report.deviation > 1e-2


def test_pfunction_rigidity_scaled_profile():
    # g(2 x) has |D nu| = 2 everywhere: affine but not unit speed.
    f = _box_field(lambda x: QUADRATURE.g_map(2.0 * x[..., 0]))
    report = rigidity_detect(f, DOUBLE_WELL, QUADRATURE)
    assert report.verdict == Verdict.NOT_RIGID
    assert report.deviation <= 1e-6


def test_pfunction_rigidity_out_of_range():
    f = _box_field(lambda x: 1.5 * x[..., 0])
    with pytest.raises(QuadratureError):
        rigidity_detect(f, DOUBLE_WELL, QUADRATURE)
