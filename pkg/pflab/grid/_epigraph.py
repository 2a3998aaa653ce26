"""Boundary graphs x_n = h(x') of epigraph domains."""
from dataclasses import dataclass
from typing import Final
import logging

import numpy as np
import numpy.typing as npt

from .._errors import GeometryError
from .._typing import Array, Sampler


CURVATURE_FLOOR: Final[float] = -1e-8
"""Mean curvature accepted as nonnegative at sampled boundary points."""

DIFFERENCE_STEP: Final[float] = 1e-3


@dataclass(frozen=True, eq=False)
class EpigraphSpec:
    """Domain {x_n > h(x')} described by its boundary graph."""

    graph_fn: Sampler
    """Map from x' of shape (..., n - 1) to h(x') of shape (...)."""

    slope_bound: float
    """Bound for |Dh| on the sampled domain."""

    name: str = 'graph'


def flat_graph(height: float = 0.0) -> EpigraphSpec:
    return EpigraphSpec(
        graph_fn=lambda x: np.full(np.shape(x)[:-1], float(height)),
        slope_bound=0.0,
        name='flat',
    )


def paraboloid_graph(curvature: float, extent: float) -> EpigraphSpec:
    """Return h(x') = curvature * |x'|^2 / 2.

    Parameters
    ----------
    curvature : float
        Principal curvature at the vertex, nonnegative for a convex graph.
    extent : float
        Largest |x'| sampled, used for the slope bound.

    """
    k = float(curvature)
    return EpigraphSpec(
        graph_fn=lambda x: 0.5 * k * np.sum(np.asarray(x) ** 2, axis=-1),
        slope_bound=abs(k) * float(extent),
        name=f'paraboloid(curvature={k:g})',
    )


def tilted_graph(slope: float) -> EpigraphSpec:
    """Return the half-space boundary h(x') = slope * x_1."""
    s = float(slope)
    return EpigraphSpec(
        graph_fn=lambda x: s * np.asarray(x)[..., 0],
        slope_bound=abs(s),
        name=f'tilted(slope={s:g})',
    )


def _derivatives(spec: EpigraphSpec, points: npt.ArrayLike):
    x = np.atleast_2d(np.asarray(points, dtype=float))
    n = x.shape[-1]
    step = DIFFERENCE_STEP
    unit = np.eye(n) * step

    def h(shift: Array) -> Array:
        return np.asarray(spec.graph_fn(x + shift), dtype=float)

    center = h(np.zeros(n))
    grad = np.stack([(h(unit[k]) - h(-unit[k])) / (2 * step)
                     for k in range(n)], axis=-1)
    hess = np.empty(x.shape[:-1] + (n, n))
    for k in range(n):
        hess[..., k, k] = (h(unit[k]) - 2 * center + h(-unit[k])) / step ** 2
        for m in range(k + 1, n):
            mixed = (h(unit[k] + unit[m]) - h(unit[k] - unit[m])
                     - h(-unit[k] + unit[m]) + h(-unit[k] - unit[m]))
            hess[..., k, m] = hess[..., m, k] = mixed / (4 * step ** 2)
    return grad, hess


def epigraph_mean_curvature(spec: EpigraphSpec,
                            points: npt.ArrayLike) -> Array:
    """Return div(Dh / sqrt(1 + |Dh|^2)) at the sample points.

    Derivatives of the graph are taken by central differences. Convex
    graphs have nonnegative curvature.

    Parameters
    ----------
    spec : EpigraphSpec
        The boundary graph.
    points : array_like
        Sample points x' of shape (m, n - 1).

    Returns
    -------
    array
        Mean curvature at each point, shape (m,).

    """
    grad, hess = _derivatives(spec, points)
    weight = 1.0 + np.sum(grad ** 2, axis=-1)
    trace = np.trace(hess, axis1=-2, axis2=-1)
    normal = np.einsum('...k,...km,...m->...', grad, hess, grad)
    return (trace * weight - normal) / weight ** 1.5


def check_epigraph(spec: EpigraphSpec, points: npt.ArrayLike) -> None:
    """Verify the slope and curvature hypotheses on the sampled graph.

    Raises
    ------
    GeometryError
        If |Dh| exceeds the slope bound or the mean curvature drops
        below CURVATURE_FLOOR somewhere.

    """
    x = np.asarray(points, dtype=float)
    flat = x.reshape(-1, x.shape[-1])
    grad, _ = _derivatives(spec, flat)
    slope = float(np.max(np.linalg.norm(grad, axis=-1)))
    if slope > spec.slope_bound * (1 + 1e-6) + 1e-9:
        raise GeometryError(
            f'{spec.name}: |Dh| reaches {slope:.6g} above the slope bound '
            f'{spec.slope_bound:g}')
    curvature = epigraph_mean_curvature(spec, flat)
    worst = float(np.min(curvature))
    if worst < CURVATURE_FLOOR:
        where = flat[int(np.argmin(curvature))].tolist()
        raise GeometryError(
            f'{spec.name}: mean curvature {worst:.3g} < 0 at x\' = {where}')
    _LOGGER.debug('%s: max slope %.3g, min mean curvature %.3g',
                  spec.name, slope, worst)


_LOGGER = logging.getLogger(__name__)
