import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pflab._errors import DirectionError, QuadratureError
from pflab.nonlinearity import (
    build_quadrature, exact_profile, lipschitz_profile, make_double_well,
    make_zero)


QUADRATURE = build_quadrature(make_double_well(), 0.0)


def test_nonlinearity_quadrature_closed_form():
    assert float(QUADRATURE.h_map(0.0)) == pytest.approx(0.0, abs=1e-15)
    assert float(QUADRATURE.h_map(0.5)) == pytest.approx(
        math.sqrt(2) * math.atanh(0.5), abs=1e-12)
    assert float(QUADRATURE.h_map(0.5)) == pytest.approx(0.776281, abs=1e-6)

    u = np.linspace(-0.999, 0.999, 2001)
    np.testing.assert_allclose(QUADRATURE.h_map(u),
                               math.sqrt(2) * np.arctanh(u), atol=1e-10)

    nu = np.linspace(-15, 15, 3001)
    np.testing.assert_allclose(QUADRATURE.g_map(nu),
                               np.tanh(nu / math.sqrt(2)), atol=1e-10)


def test_nonlinearity_quadrature_round_trip():
    u = np.linspace(-0.9999, 0.9999, 4001)
    np.testing.assert_allclose(QUADRATURE.g_map(QUADRATURE.h_map(u)), u,
                               atol=1e-10, rtol=0)
    assert float(QUADRATURE.g_map(QUADRATURE.h_map(0.5))) == pytest.approx(
        0.5, abs=1e-10)


def test_nonlinearity_quadrature_monotone():
    assert np.all(np.diff(QUADRATURE.knot_values) > 0)
    u = np.linspace(-0.99999, 0.99999, 100_001)
    assert np.all(np.diff(QUADRATURE.h_map(u)) > 0)


def test_nonlinearity_quadrature_equipartition():
    for beta in [0.0, 0.3, -0.5]:
        nl = make_double_well(beta)
        q = build_quadrature(nl, 0.0)
        a, b = q.valid_interval
        width = b - a
        u = np.linspace(a + 0.05 * width, b - 0.05 * width, 1001)
        nu = q.h_map(u)
        step = 1e-5
        slope = (q.g_map(nu + step) - q.g_map(nu - step)) / (2 * step)
        np.testing.assert_allclose(slope ** 2, 2 * nl.eval_f(q.g_map(nu)),
                                   atol=1e-8)


def test_nonlinearity_quadrature_imbalanced_interval():
    q = build_quadrature(make_double_well(0.3), 0.0)
    assert q.valid_interval == (-1.0, 2.0)
    assert q.upper_tail is None
    with pytest.raises(QuadratureError):
        q.g_map(q.value_range[1] + 1.0)


@settings(max_examples=50, deadline=None)
@given(u=st.floats(min_value=-0.99, max_value=0.99))
def test_nonlinearity_quadrature_inverse(u):
    assert float(QUADRATURE.g_map(QUADRATURE.h_map(u))) == pytest.approx(
        u, abs=1e-10)


def test_nonlinearity_quadrature_errors():
    nl = make_double_well()
    for u0 in [1.0, -1.0, 2.0]:
        with pytest.raises(QuadratureError):
            build_quadrature(nl, u0)
    with pytest.raises(QuadratureError):
        build_quadrature(make_zero(), 0.0)
    with pytest.raises(QuadratureError):
        QUADRATURE.h_map(np.array([0.0, 1.0]))
    with pytest.raises(QuadratureError):
        QUADRATURE.h_map(-1.5)


def test_nonlinearity_exact_profile():
    profile = exact_profile(QUADRATURE, [1.0], 0.0)
    assert float(profile(np.zeros((1, 1)))[0]) == pytest.approx(0.0)
    grad = profile.gradient(np.zeros((1, 1)))
    assert float(grad[0, 0]) ** 2 == pytest.approx(0.5, abs=1e-12)

    x = np.linspace(-8, 8, 161)[:, None]
    np.testing.assert_allclose(profile(x), np.tanh(x[:, 0] / math.sqrt(2)),
                               atol=1e-10)

    theta = 0.7
    planar = exact_profile(QUADRATURE, [math.cos(theta), math.sin(theta)],
                           0.3)
    point = np.array([[0.1, -0.4]])
    expected = math.tanh((0.1 * math.cos(theta) - 0.4 * math.sin(theta)
                          + 0.3) / math.sqrt(2))
    assert float(planar(point)[0]) == pytest.approx(expected, abs=1e-10)

    # <a, x> + alpha = H(u0) lands on the base point.
    assert float(planar(np.array([[-0.3 * math.cos(theta),
                                   -0.3 * math.sin(theta)]]))[0]) == \
        pytest.approx(0.0, abs=1e-12)


def test_nonlinearity_exact_profile_direction():
    for direction in [[1.0, 1.0], [0.0, 0.0], [1.0 + 1e-9], [[1.0, 0.0]]]:
        with pytest.raises(DirectionError):
            exact_profile(QUADRATURE, direction)


def test_nonlinearity_lipschitz_profile():
    profile = lipschitz_profile(QUADRATURE, lambda x: np.abs(x[..., 0]))
    x = np.linspace(-5, 5, 101)[:, None]
    np.testing.assert_allclose(profile(x),
                               np.tanh(np.abs(x[:, 0]) / math.sqrt(2)),
                               atol=1e-10)
