"""One-step updates for the semilinear and quasilinear flows."""
from enum import Enum, auto
from typing import Final, Optional
import logging

import numpy as np
from scipy.sparse.linalg import LinearOperator, cg

from .._errors import SchemeError, SolverError, StabilityError
from .._typing import Array
from ..grid import Field, Grid, grad_norm_sq, laplacian, quasilinear_apply
from ..nonlinearity import Nonlinearity
from ._profile import QuasilinearProfile


CFL_SAFETY: Final[float] = 0.9

IMPLICIT_RTOL: Final[float] = 1e-12
"""Relative tolerance requested from the conjugate gradient solve."""

IMPLICIT_RESIDUAL: Final[float] = 1e-10
"""Relative residual above which an implicit solve counts as failed."""

IMPLICIT_MAXITER: Final[int] = 1000


class Scheme(Enum):
    """Time discretization of the diffusion term."""

    EXPLICIT = auto()
    """Forward Euler: monotone below the CFL limit."""

    IMEX = auto()
    """Implicit diffusion by conjugate gradients, explicit reaction."""

    @classmethod
    def parse(cls, name: str) -> 'Scheme':
        try:
            return cls[name.upper()]
        except KeyError:
            raise SchemeError(
                f'unknown scheme {name!r}, expected one of '
                f'{[s.name.lower() for s in cls]}') from None


def cfl_max_dt(grid: Grid, nl: Nonlinearity, sup_grad_sq: float = 0.0,
               profile: Optional[QuasilinearProfile] = None,
               safety: float = CFL_SAFETY) -> float:
    """Return the explicit stability limit.

    dt = safety / (c * 2 sum_k 1/h_k^2 + r * f2_bound), where c bounds the
    normalized diffusion coefficients and r the factor multiplying the
    reaction. Both are 1 for the semilinear flow. For quasilinear flows
    they are sampled over |Du|^2 <= sup_grad_sq.
    """
    stencil = 2.0 * sum(1.0 / (h * h) for h in grid.spacing)
    reaction = nl.f2_bound
    if profile is not None:
        stencil *= profile.diffusion_bound(sup_grad_sq)
        reaction *= profile.reaction_factor(sup_grad_sq)
    return safety / (stencil + reaction)


def _check_explicit(dt: float, limit: float) -> None:
    if not dt > 0.0:
        raise StabilityError(f'time step {dt:g} must be positive')
    if dt > limit * (1.0 + 1e-12):
        raise StabilityError(
            f'time step {dt:.6g} exceeds the stability limit {limit:.6g}')


def step_semilinear(f: Field, nl: Nonlinearity, dt: float,
                    scheme: Scheme = Scheme.EXPLICIT) -> Field:
    """Advance u_t = Lap u - F'(u) by one step.

    Parameters
    ----------
    f : Field
        Current state; inactive nodes carry the boundary data.
    nl : Nonlinearity
        The potential.
    dt : float
        Time step.
    scheme : Scheme
        EXPLICIT (forward Euler) or IMEX (implicit diffusion).

    Raises
    ------
    StabilityError
        If an explicit step exceeds the CFL limit.
    SchemeError
        If IMEX is requested on a non-periodic grid.
    SolverError
        If the implicit solve does not converge.
    WorkingRangeError
        If the state leaves the working range of `nl`.

    """
    grid = f.grid
    reaction = nl.eval_f1(nl.check_range(f.active_values))
    time = f.time + dt
    if scheme == Scheme.EXPLICIT:
        _check_explicit(dt, cfl_max_dt(grid, nl, safety=1.0))
        values = f.values.copy()
        values[grid.active] += dt * (laplacian(f).active_values - reaction)
    elif scheme == Scheme.IMEX:
        if not grid.is_periodic:
            raise SchemeError('the IMEX scheme needs a periodic grid')
        if not dt > 0.0:
            raise StabilityError(f'time step {dt:g} must be positive')
        values = _implicit_diffusion(
            f, f.values - dt * reaction.reshape(grid.shape), dt)
    else:
        raise SchemeError(f'unknown scheme {scheme}')
    return f.with_values(grid.apply_boundary(values, time), time)


def _implicit_diffusion(f: Field, rhs: Array, dt: float) -> Array:
    # Solve (I - dt Lap) u = rhs on a torus.
    grid = f.grid
    size = rhs.size

    def matvec(v: Array) -> Array:
        field = f.with_values(v.reshape(grid.shape))
        return v - dt * laplacian(field).values.ravel()

    operator = LinearOperator((size, size), matvec=matvec, dtype=float)
    b = rhs.ravel()
    solution, info = cg(operator, b, x0=f.values.ravel(), rtol=IMPLICIT_RTOL,
                        atol=0.0, maxiter=IMPLICIT_MAXITER)
    scale = max(float(np.linalg.norm(b)), np.finfo(float).tiny)
    residual = float(np.linalg.norm(b - matvec(solution))) / scale
    if info < 0 or residual > IMPLICIT_RESIDUAL:
        raise SolverError(
            f'implicit diffusion solve stalled: relative residual '
            f'{residual:.3g} after info={info}')
    _LOGGER.debug('implicit solve residual %.3g', residual)
    return solution.reshape(grid.shape)


def step_quasilinear(f: Field, nl: Nonlinearity,
                     profile: QuasilinearProfile, dt: float) -> Field:
    """Advance phi'(|Du|^2) u_t = a_ij(Du) u_ij - F'(u) by one explicit
    step.

    Raises
    ------
    StabilityError
        If phi' <= 0 somewhere or `dt` exceeds the quasilinear CFL limit.

    """
    grid = f.grid
    reaction = nl.eval_f1(nl.check_range(f.active_values))
    s = grad_norm_sq(f)[grid.active]
    weight = profile.phi1(s)
    if np.any(weight <= 0.0):
        raise StabilityError(f'{profile.name}: phi\' <= 0, the operator '
                             f'degenerates')
    s_max = float(np.max(s)) if s.size else 0.0
    _check_explicit(dt, cfl_max_dt(grid, nl, s_max, profile, safety=1.0))
    values = f.values.copy()
    operator = quasilinear_apply(f, profile).active_values
    values[grid.active] += dt * (operator - reaction) / weight
    time = f.time + dt
    return f.with_values(grid.apply_boundary(values, time), time)


_LOGGER = logging.getLogger(__name__)
