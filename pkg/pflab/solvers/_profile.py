"""Integrands phi(s), s = |Du|^2, of quasilinear energies."""
from dataclasses import dataclass
from typing import Final

import numpy as np
import numpy.typing as npt

from .._errors import StabilityError
from .._typing import Array, ScalarMap


PROFILE_SAMPLES: Final[int] = 257
"""Sample count used to bound coefficient ratios on [0, s_max]."""


@dataclass(frozen=True, eq=False)
class QuasilinearProfile:
    """The functions phi, phi', phi'' of an integrand and the derived
    xi(s) = 2 s phi'(s) - phi(s) and Lambda = xi'."""

    name: str
    phi: ScalarMap
    phi1: ScalarMap
    phi2: ScalarMap

    def xi(self, s: npt.ArrayLike) -> Array:
        s = np.asarray(s, dtype=float)
        return 2.0 * s * self.phi1(s) - self.phi(s)

    def lam(self, s: npt.ArrayLike) -> Array:
        s = np.asarray(s, dtype=float)
        return self.phi1(s) + 2.0 * s * self.phi2(s)

    def _sample(self, s_max: float) -> Array:
        return np.linspace(0.0, max(float(s_max), 0.0), PROFILE_SAMPLES)

    def diffusion_bound(self, s_max: float) -> float:
        """Largest eigenvalue of a_ij / phi' for |Du|^2 <= s_max.

        The eigenvalues of a_ij are phi' (across the gradient) and
        Lambda (along it).
        """
        s = self._sample(s_max)
        return float(max(1.0, np.max(self.lam(s) / self.phi1(s))))

    def reaction_factor(self, s_max: float) -> float:
        """Largest value of 1 / phi' for |Du|^2 <= s_max."""
        return float(np.max(1.0 / self.phi1(self._sample(s_max))))

    def check_parabolic(self, s_max: float) -> None:
        """Raise unless phi' > 0 and Lambda > 0 on [0, s_max]."""
        s = self._sample(s_max)
        if np.any(self.phi1(s) <= 0.0) or np.any(self.lam(s) <= 0.0):
            raise StabilityError(
                f'{self.name} profile degenerates for |Du|^2 <= {s_max:g}')


def make_minimal_surface_profile() -> QuasilinearProfile:
    """Return phi(s) = 2 (sqrt(1 + s) - 1).

    Then phi' = (1 + s)^(-1/2), xi(s) = 2 - 2 (1 + s)^(-1/2) and
    Lambda(s) = (1 + s)^(-3/2).
    """
    def phi(s: npt.ArrayLike) -> Array:
        return 2.0 * (np.sqrt(1.0 + np.asarray(s, dtype=float)) - 1.0)

    def phi1(s: npt.ArrayLike) -> Array:
        return (1.0 + np.asarray(s, dtype=float)) ** -0.5

    def phi2(s: npt.ArrayLike) -> Array:
        return -0.5 * (1.0 + np.asarray(s, dtype=float)) ** -1.5

    return QuasilinearProfile('minimal_surface', phi, phi1, phi2)


def make_semilinear_profile() -> QuasilinearProfile:
    """Return phi(s) = s, for which every quasilinear quantity reduces to
    its semilinear counterpart."""
    def phi(s: npt.ArrayLike) -> Array:
        return np.asarray(s, dtype=float).copy()

    def phi1(s: npt.ArrayLike) -> Array:
        return np.ones_like(np.asarray(s, dtype=float))

    def phi2(s: npt.ArrayLike) -> Array:
        return np.zeros_like(np.asarray(s, dtype=float))

    return QuasilinearProfile('semilinear', phi, phi1, phi2)
