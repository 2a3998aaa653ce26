"""Error hierarchy shared by all modules."""


class PflabError(Exception):
    """Base class for every error raised by pflab."""


class NonlinearityError(PflabError, ValueError):
    """The potential is not admissible."""


class WorkingRangeError(PflabError, ValueError):
    """A state left the working range of a potential."""


class QuadratureError(PflabError, ValueError):
    """The profile quadrature is undefined at the requested values."""


class DirectionError(PflabError, ValueError):
    """A direction vector is not a unit vector."""


class GridError(PflabError, ValueError):
    """The lattice description or the fields living on it are invalid."""


class GeometryError(GridError):
    """The boundary graph violates its slope or curvature hypotheses."""


class StabilityError(PflabError, ValueError):
    """A time step exceeds the stability limit, or the operator degenerates."""


class SchemeError(PflabError, ValueError):
    """The requested time-stepping scheme is unavailable on this grid."""


class SolverError(PflabError, RuntimeError):
    """A numerical solve failed to converge or produced non-finite values."""


class ShootingError(SolverError):
    """The traveling-wave shooting could not bracket or land the profile."""


class ConfigError(PflabError, ValueError):
    """The experiment configuration cannot be parsed or is inconsistent."""


class BundleError(PflabError, FileNotFoundError):
    """A report bundle lacks a file needed downstream."""


class SnapshotError(PflabError, ValueError):
    """Two snapshots are not consecutive states of one run."""


class ReportError(PflabError, ValueError):
    """A report file does not carry the documented keys."""
