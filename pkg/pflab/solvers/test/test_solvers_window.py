import math

import numpy as np
import pytest

from pflab._errors import SolverError
from pflab.grid import (
    BoundaryPolicy, DomainSpec, build_grid, read_field_binary)
from pflab.nonlinearity import make_double_well
from pflab.solvers import Scheme, band_limited_noise, run_window


DOUBLE_WELL = make_double_well()
TORUS = build_grid(DomainSpec((2 * math.pi,)), (64,))


def _kink(x):
    return np.tanh(x[..., 0] / math.sqrt(2))


def test_solvers_window_snapshots():
    trajectory = run_window(lambda x: 0.5 * np.sin(x[..., 0]), TORUS,
                            DOUBLE_WELL, t_start=-1.0, t_end=0.0,
                            snapshot_every=50)
    times = trajectory.times
    assert times[0] == -1.0
    assert times[-1] == 0.0
    assert np.all(np.diff(times) > 0)
    assert trajectory.scheme == 'explicit'
    assert 0.0 < trajectory.cfl_ratio <= 0.9 + 1e-12
    steps = round(1.0 / trajectory.dt)
    assert steps * trajectory.dt == pytest.approx(1.0)

    pairs = list(trajectory.step_pairs())
    assert pairs
    for before, after in pairs:
        assert after.time - before.time == pytest.approx(trajectory.dt)
    assert len(pairs) >= steps // 50
    assert pairs[-1][1] is trajectory.final


def test_solvers_window_steady_profile():
    spec = DomainSpec((24.0,), BoundaryPolicy.BOX_DIRICHLET, origin=(-12.0,),
                      boundary_data=lambda x, t: _kink(x))
    grid = build_grid(spec, (2400,))
    trajectory = run_window(_kink, grid, DOUBLE_WELL, t_start=-0.05,
                            t_end=0.0, snapshot_every=100)
    initial = trajectory.initial.values
    for f in trajectory:
        assert np.max(np.abs(f.values - initial)) <= 1e-6


def test_solvers_window_well_constant():
    trajectory = run_window(lambda x: np.ones(x.shape[:-1]), TORUS,
                            DOUBLE_WELL, t_start=-2.0, t_end=0.0,
                            snapshot_every=100)
    for f in trajectory:
        np.testing.assert_array_equal(f.values, 1.0)


def test_solvers_window_imex():
    trajectory = run_window(lambda x: 0.5 * np.sin(x[..., 0]), TORUS,
                            DOUBLE_WELL, t_start=0.0, t_end=1.0,
                            scheme=Scheme.IMEX, dt=0.05)
    assert trajectory.dt == pytest.approx(0.05)
    assert trajectory.cfl_ratio > 1.0
    assert trajectory.scheme == 'imex'
    assert len(trajectory) == 21


def test_solvers_window_non_finite():
    with pytest.raises(SolverError):
        run_window(lambda x: np.full(x.shape[:-1], np.nan), TORUS,
                   DOUBLE_WELL, t_start=0.0, t_end=1.0)


def test_solvers_window_snapshot_files(tmp_path):
    trajectory = run_window(lambda x: 0.5 * np.sin(x[..., 0]), TORUS,
                            DOUBLE_WELL, t_start=0.0, t_end=0.1,
                            snapshot_every=10, snapshot_dir=tmp_path / 'run')
    files = sorted((tmp_path / 'run').glob('snapshot_*.bin'))
    assert len(files) == len(trajectory)
    loaded = read_field_binary(files[-1], TORUS)
    np.testing.assert_array_equal(loaded.values, trajectory.final.values)
    assert loaded.time == trajectory.final.time


def test_solvers_window_errors():
    with pytest.raises(SolverError, match='empty window'):
        run_window(_kink, TORUS, DOUBLE_WELL, t_start=0.0, t_end=0.0)
    with pytest.raises(SolverError, match='snapshot_every'):
        run_window(_kink, TORUS, DOUBLE_WELL, snapshot_every=0)


def test_solvers_band_limited_noise():
    grid = build_grid(DomainSpec((2 * math.pi, 2 * math.pi)), (32, 32))
    for seed in range(5):
        sampler = band_limited_noise(grid, seed)
        values = sampler(grid.points)
        assert np.max(np.abs(values)) <= 0.9
        np.testing.assert_array_equal(
            values, band_limited_noise(grid, seed)(grid.points))
    first = band_limited_noise(grid, 0)(grid.points)
    second = band_limited_noise(grid, 1)(grid.points)
    assert not np.allclose(first, second)

    # Smooth: the 8 lowest modes are resolved by 32 nodes per axis.
    spectrum = np.abs(np.fft.fft2(first))
    assert np.all(spectrum[8:-7, :] < 1e-9 * spectrum.max())


def test_solvers_band_limited_noise_slopes():
    # |u'| <= 0.9 sum k c_k / sum c_k with c_k = max(k, 1)^-5, any seed.
    grid = build_grid(DomainSpec((2 * math.pi,)), (256,))
    sizes = np.maximum(np.arange(8.0), 1.0) ** -5.0
    bound = 0.9 * np.sum(np.arange(8.0) * sizes) / np.sum(sizes)
    h = grid.spacing[0]
    for seed in range(10):
        values = band_limited_noise(grid, seed)(grid.points)
        slope = (np.roll(values, -1) - np.roll(values, 1)) / (2 * h)
        assert np.max(np.abs(slope)) <= bound
        assert np.max(np.abs(values)) > 0.1
