"""Field serialization: CSV for inspection, raw binary for exact
round-tripping."""
from dataclasses import dataclass
from pathlib import Path
from typing import Final, Tuple, Union
import struct

import numpy as np

from .._errors import GridError
from ._grid import BoundaryPolicy, Field, Grid


PathLike = Union[str, Path]

MAGIC: Final[bytes] = b'PFLD'
VERSION: Final[int] = 1
HEADER_SIZE: Final[int] = 64
_HEADER_FORMAT: Final[str] = '<4sHHB3x3I3dd'

_POLICY_CODE: Final = {policy: index for index, policy
                       in enumerate(BoundaryPolicy, start=1)}
_CODE_POLICY: Final = {index: policy for policy, index
                       in _POLICY_CODE.items()}

_AXIS_NAMES: Final[Tuple[str, ...]] = ('x', 'y', 'z')


@dataclass(frozen=True)
class FieldHeader:
    """Descriptive block in front of a binary field."""

    dim: int
    policy: BoundaryPolicy
    resolution: Tuple[int, ...]
    spacing: Tuple[float, ...]
    time: float

    def matches(self, grid: Grid) -> bool:
        return (self.resolution == grid.resolution
                and self.spacing == grid.spacing
                and self.policy == grid.policy)


def write_field_csv(f: Field, path: PathLike) -> None:
    """Write one row per active node: coordinates, then the value."""
    grid = f.grid
    columns = np.column_stack([grid.points[grid.active], f.active_values])
    header = ','.join(_AXIS_NAMES[:grid.dim] + ('value',))
    np.savetxt(path, columns, fmt='%.17g', delimiter=',', header=header,
               comments='')


def write_field_binary(f: Field, path: PathLike) -> None:
    """Write the 64-byte header followed by little-endian float64 values
    of the full lattice in C order."""
    grid = f.grid
    pad = 3 - grid.dim
    header = struct.pack(
        _HEADER_FORMAT, MAGIC, VERSION, grid.dim, _POLICY_CODE[grid.policy],
        *(grid.resolution + (0,) * pad), *(grid.spacing + (0.0,) * pad),
        float(f.time))
    with open(path, 'wb') as stream:
        stream.write(header.ljust(HEADER_SIZE, b'\0'))
        stream.write(np.ascontiguousarray(f.values, dtype='<f8').tobytes())


def read_field_header(path: PathLike) -> FieldHeader:
    with open(path, 'rb') as stream:
        raw = stream.read(HEADER_SIZE)
    return _parse_header(raw, path)


def read_field_binary(path: PathLike, grid: Grid) -> Field:
    """Read a binary field back onto `grid`.

    Raises
    ------
    GridError
        If the header does not describe `grid` or the payload is short.

    """
    with open(path, 'rb') as stream:
        header = _parse_header(stream.read(HEADER_SIZE), path)
        payload = stream.read()
    if not header.matches(grid):
        raise GridError(f'{path}: header {header} does not match the grid')
    values = np.frombuffer(payload, dtype='<f8')
    if values.size != int(np.prod(grid.shape)):
        raise GridError(
            f'{path}: {values.size} values for {grid.shape} nodes')
    return Field(grid, values.reshape(grid.shape).astype(float), header.time)


def _parse_header(raw: bytes, path: PathLike) -> FieldHeader:
    if len(raw) < HEADER_SIZE:
        raise GridError(f'{path}: truncated field header')
    magic, version, dim, policy, *rest = struct.unpack_from(
        _HEADER_FORMAT, raw)
    if magic != MAGIC or version != VERSION:
        raise GridError(f'{path}: not a version {VERSION} field file')
    if not 1 <= dim <= 3 or policy not in _CODE_POLICY:
        raise GridError(f'{path}: corrupt field header')
    counts, spacings, time = rest[:3], rest[3:6], rest[6]
    return FieldHeader(
        dim=dim,
        policy=_CODE_POLICY[policy],
        resolution=tuple(int(n) for n in counts[:dim]),
        spacing=tuple(float(h) for h in spacings[:dim]),
        time=float(time),
    )
