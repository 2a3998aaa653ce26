import math

import numpy as np
import pytest

from pflab.grid import DomainSpec, Field, build_grid
from pflab.nonlinearity import (
    build_quadrature, lipschitz_profile, make_double_well)
from pflab.pfunction import (
    Variant, estimate_tolerance, p_function, verify_estimate)
from pflab.solvers import (
    Trajectory, make_minimal_surface_profile, run_window)


DOUBLE_WELL = make_double_well()
MINIMAL = make_minimal_surface_profile()
TORUS = build_grid(DomainSpec((2 * math.pi,)), (256,))


def _sine(x):
    return 0.5 * np.sin(x[..., 0])


def test_pfunction_estimate_lipschitz_triangle():
    def triangle(x):
        return 10.0 - np.abs(x[..., 0])

    grid = build_grid(DomainSpec((40.0,), origin=(-20.0,)), (800,))
    init = lipschitz_profile(build_quadrature(DOUBLE_WELL), triangle)
    trajectory = run_window(init, grid, DOUBLE_WELL, t_start=0.0, t_end=1.0,
                            snapshot_every=20)
    report = verify_estimate(trajectory, DOUBLE_WELL)
    assert report.variant == Variant.SEMILINEAR
    assert report.tolerance == estimate_tolerance(grid, trajectory.dt)
    assert not report.initial_violation
    assert report.passed
    assert report.first_violation is None
    assert report.residual_min is None
    assert len(report.sup_p) == len(trajectory)


def test_pfunction_estimate_with_residuals():
    trajectory = run_window(_sine, TORUS, DOUBLE_WELL, t_start=0.0,
                            t_end=0.05)
    report = verify_estimate(trajectory, DOUBLE_WELL, residuals=True)
    assert report.passed
    assert np.all(report.sup_p < 0.0)
    assert report.residual_min is not None
    assert report.residual_passed


def test_pfunction_estimate_initial_violation():
    trajectory = run_window(lambda x: 0.1 * np.sin(10 * x[..., 0]), TORUS,
                            DOUBLE_WELL, t_start=0.0, t_end=0.01)
    report = verify_estimate(trajectory, DOUBLE_WELL)
    assert report.initial_violation
    assert report.violation
    assert not report.passed
    assert report.first_violation == 0.0
    assert report.sup_positive_part() > 0.4


def test_pfunction_estimate_well_constant():
    trajectory = run_window(lambda x: np.ones(x.shape[:-1]), TORUS,
                            DOUBLE_WELL, t_start=0.0, t_end=0.01)
    report = verify_estimate(trajectory, DOUBLE_WELL)
    assert report.passed
    np.testing.assert_array_equal(report.sup_p, 0.0)
    assert report.tension_times == ()
    assert report.sup_positive_part(-1) == 0.0


def test_pfunction_estimate_quasilinear():
    trajectory = run_window(_sine, TORUS, DOUBLE_WELL, profile=MINIMAL,
                            t_start=0.0, t_end=0.05, snapshot_every=10)
    report = verify_estimate(trajectory, DOUBLE_WELL, MINIMAL,
                             residuals=True)
    assert report.variant == Variant.QUASILINEAR
    assert report.passed
    assert report.residual_min is None
    assert report.residual_passed


def test_pfunction_estimate_series():
    trajectory = run_window(_sine, TORUS, DOUBLE_WELL, t_start=-0.02,
                            t_end=0.0, snapshot_every=5)
    report = verify_estimate(trajectory, DOUBLE_WELL, tol=1e-3)
    assert report.tolerance == 1e-3
    np.testing.assert_array_equal(report.times, trajectory.times)
    for index, f in enumerate(trajectory):
        p = p_function(f, DOUBLE_WELL)
        assert report.sup_p[index] == p.sup()
        assert report.argsup[index] == p.argsup()
        assert report.positive_mass[index] == p.positive_mass()


def test_pfunction_estimate_tension():
    # cos hits the well u = 1 at x = 0 without being constant.
    f = Field.sample(TORUS, lambda x: np.cos(x[..., 0]))
    trajectory = Trajectory(snapshots=(f,), dt=0.01, scheme='explicit',
                            cfl_ratio=0.5)
    report = verify_estimate(trajectory, DOUBLE_WELL)
    assert report.tension_times == (0.0,)
    assert report.initial_violation
    assert report.sup_p[0] == pytest.approx(0.5, abs=1e-3)
