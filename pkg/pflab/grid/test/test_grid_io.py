import math

import numpy as np
import pytest

from pflab._errors import GridError
from pflab.grid import (
    BoundaryPolicy, DomainSpec, Field, build_grid, flat_graph,
    read_field_binary, read_field_header, write_field_binary,
    write_field_csv)


def _sample_field() -> Field:
    spec = DomainSpec((4.0, 2.0), BoundaryPolicy.EPIGRAPH_DIRICHLET,
                      origin=(-2.0, -1.0), epigraph=flat_graph())
    grid = build_grid(spec, (16, 12))
    return Field.sample(grid, lambda x: np.sin(x[..., 0]) * x[..., 1],
                        time=-0.125)


def test_grid_binary_file(tmp_path):
    f = _sample_field()
    path = tmp_path / 'field.bin'
    write_field_binary(f, path)

    raw = path.read_bytes()
    assert raw[:4] == b'PFLD'
    assert len(raw) == 64 + 8 * f.values.size

    header = read_field_header(path)
    assert header.dim == 2
    assert header.policy == BoundaryPolicy.EPIGRAPH_DIRICHLET
    assert header.resolution == (16, 12)
    assert header.spacing == f.grid.spacing
    assert header.time == -0.125

    loaded = read_field_binary(path, f.grid)
    np.testing.assert_array_equal(loaded.values, f.values)
    assert loaded.time == f.time


def test_grid_binary_mismatch(tmp_path):
    f = _sample_field()
    path = tmp_path / 'field.bin'
    write_field_binary(f, path)
    other = build_grid(DomainSpec((4.0, 2.0)), (16, 12))
    with pytest.raises(GridError):
        read_field_binary(path, other)

    (tmp_path / 'junk.bin').write_bytes(b'NOPE' + bytes(60))
    with pytest.raises(GridError):
        read_field_header(tmp_path / 'junk.bin')
    (tmp_path / 'short.bin').write_bytes(b'PFLD')
    with pytest.raises(GridError):
        read_field_header(tmp_path / 'short.bin')


def test_grid_csv_file(tmp_path):
    grid = build_grid(DomainSpec((2 * math.pi,)), (32,))
    f = Field.sample(grid, lambda x: np.cos(x[..., 0]))
    path = tmp_path / 'field.csv'
    write_field_csv(f, path)
    assert path.read_text().splitlines()[0] == 'x,value'
    table = np.loadtxt(path, delimiter=',', skiprows=1)
    assert table.shape == (32, 2)
    np.testing.assert_array_equal(table[:, 0], grid.axes[0])
    np.testing.assert_array_equal(table[:, 1], f.values)

    epigraph = _sample_field()
    write_field_csv(epigraph, path)
    table = np.loadtxt(path, delimiter=',', skiprows=1)
    assert table.shape == (epigraph.grid.active_count, 3)
    assert np.all(table[:, 1] > 0)
