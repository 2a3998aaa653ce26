"""Finite difference operators on lattice fields.

All operators act on the full lattice array. Periodic axes wrap, bounded
axes read the Dirichlet values stored at inactive nodes and reflect at a
Neumann cap. Outputs vanish at inactive nodes unless stated otherwise.
"""
from typing import List

import numpy as np

from .._errors import GridError
from .._typing import Array, CoefficientProfile
from ._grid import Field, Grid, check_same_grid


def _padded(grid: Grid, values: Array) -> Array:
    # One ghost layer per axis: wrap on periodic axes, mirror otherwise.
    out = values
    for axis, periodic in enumerate(grid.periodic_axes):
        width = [(0, 0)] * grid.dim
        width[axis] = (1, 1)
        out = np.pad(out, width, mode='wrap' if periodic else 'reflect')
    return out


def _shifted(padded: Array, shifts: List[int]) -> Array:
    index = tuple(slice(1 + s, padded.shape[k] - 1 + s)
                  for k, s in enumerate(shifts))
    return padded[index]


def gradient(f: Field) -> Array:
    """Return Du of shape (*resolution, dim).

    Centered differences in the interior, wrapped on periodic axes and
    second order one-sided at the faces of bounded axes.
    """
    grid = f.grid
    parts = []
    for axis, (h, periodic) in enumerate(zip(grid.spacing,
                                             grid.periodic_axes)):
        if periodic:
            parts.append((np.roll(f.values, -1, axis)
                          - np.roll(f.values, 1, axis)) / (2 * h))
        else:
            parts.append(np.gradient(f.values, h, axis=axis, edge_order=2))
    return np.stack(parts, axis=-1)


def grad_norm_sq(f: Field) -> Array:
    """Return |Du|^2 nodewise."""
    return np.sum(gradient(f) ** 2, axis=-1)


def laplacian(f: Field) -> Field:
    """Return the (2 dim + 1)-point Laplacian, zero at inactive nodes."""
    grid = f.grid
    padded = _padded(grid, f.values)
    center = f.values
    total = np.zeros(grid.shape)
    for axis, h in enumerate(grid.spacing):
        shift = [0] * grid.dim
        shift[axis] = 1
        forward = _shifted(padded, shift)
        shift[axis] = -1
        backward = _shifted(padded, shift)
        total += (forward - 2.0 * center + backward) / (h * h)
    return f.with_values(np.where(grid.active, total, 0.0))


def hessian(f: Field) -> Array:
    """Return D^2u of shape (*resolution, dim, dim).

    Mixed derivatives use the symmetric four point cross stencil.
    """
    grid = f.grid
    dim = grid.dim
    padded = _padded(grid, f.values)
    out = np.empty(grid.shape + (dim, dim))
    for i in range(dim):
        shift = [0] * dim
        shift[i] = 1
        forward = _shifted(padded, shift)
        shift[i] = -1
        backward = _shifted(padded, shift)
        out[..., i, i] = (forward - 2.0 * f.values + backward) \
            / grid.spacing[i] ** 2
        for j in range(i + 1, dim):
            corners = 0.0
            for si, sj, sign in ((1, 1, 1.0), (1, -1, -1.0),
                                 (-1, 1, -1.0), (-1, -1, 1.0)):
                shift = [0] * dim
                shift[i], shift[j] = si, sj
                corners = corners + sign * _shifted(padded, shift)
            mixed = corners / (4.0 * grid.spacing[i] * grid.spacing[j])
            out[..., i, j] = out[..., j, i] = mixed
    return out


def quasilinear_apply(f: Field, profile: CoefficientProfile) -> Field:
    """Return a_ij(Du) u_ij with a_ij(p) = phi'(|p|^2) delta_ij
    + 2 phi''(|p|^2) p_i p_j."""
    grid = f.grid
    grad = gradient(f)
    hess = hessian(f)
    s = np.sum(grad ** 2, axis=-1)
    trace = np.trace(hess, axis1=-2, axis2=-1)
    normal = np.einsum('...i,...ij,...j->...', grad, hess, grad)
    values = profile.phi1(s) * trace + 2.0 * profile.phi2(s) * normal
    return f.with_values(np.where(grid.active, values, 0.0))


def forward_differences(f: Field) -> Array:
    """Return the periodic forward differences D+u, shape (..., dim)."""
    grid = f.grid
    if not grid.is_periodic:
        raise GridError('forward differences need a periodic grid')
    return np.stack([(np.roll(f.values, -1, axis) - f.values) / h
                     for axis, h in enumerate(grid.spacing)], axis=-1)


def inner(f: Field, g: Field) -> float:
    """Return the lattice L2 product sum(u v) h^dim over active nodes."""
    grid = check_same_grid(f, g)
    return float(np.sum((f.values * g.values)[grid.active])
                 * grid.cell_volume)


def staggered_inner(f: Field, g: Field) -> float:
    """Return sum(D+u . D+v) h^dim, the product matching -<Lap u, v>."""
    grid = check_same_grid(f, g)
    return float(np.sum(forward_differences(f) * forward_differences(g))
                 * grid.cell_volume)
