"""Time steppers, backward windows and traveling-wave profiles."""
from ._profile import (
    QuasilinearProfile,
    make_minimal_surface_profile,
    make_semilinear_profile,
)
from ._stepper import (
    CFL_SAFETY,
    Scheme,
    cfl_max_dt,
    step_quasilinear,
    step_semilinear,
)
from ._wave import (
    FrontTrack,
    TravelingWave,
    closed_form_wave,
    measure_front_speed,
    orient_wells,
    solve_traveling_wave,
)
from ._window import Trajectory, band_limited_noise, run_window
