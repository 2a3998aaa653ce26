"""P-functions, the inequalities they satisfy and the equality case."""
from ._estimate import EstimateReport, verify_estimate
from ._pfield import (
    PField,
    Variant,
    energy,
    p_function,
    p_quasilinear,
    p_semilinear,
    wave_p_function,
)
from ._residual import (
    GRAD_FLOOR_RATIO,
    LemmaResidual,
    bochner_residual,
    interior_mask,
    lemma_residual,
)
from ._rigidity import (
    RIGIDITY_TOLERANCE,
    RigidityReport,
    Verdict,
    rigidity_detect,
)
from ._tolerance import estimate_tolerance, residual_tolerance
