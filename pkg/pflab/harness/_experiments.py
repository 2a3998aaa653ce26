"""The experiment kinds and the runs behind them."""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Dict, Final, Optional, Tuple
import logging
import math

import numpy as np

from .._errors import ConfigError, PflabError
from .._typing import Array, Sampler, Seed
from ..grid import (
    BoundaryPolicy, DomainSpec, EpigraphSpec, Field, Grid, build_grid,
    flat_graph, paraboloid_graph, tilted_graph)
from ..nonlinearity import (
    Nonlinearity, build_quadrature, exact_profile, lipschitz_profile,
    make_named)
from ..pfunction import (
    Verdict, bochner_residual, lemma_residual, p_function,
    residual_tolerance, rigidity_detect, verify_estimate, wave_p_function)
from ..solvers import (
    QuasilinearProfile, band_limited_noise, closed_form_wave,
    make_minimal_surface_profile, measure_front_speed, run_window,
    solve_traveling_wave)
from ._collections import median_by_key
from ._config import (
    DomainSection, ExperimentConfig, InitialSection, Kind,
    NonlinearitySection, worker_count)
from ._report import Bundle, ExperimentResult, write_bundle


ENDS_ONLY: Final[int] = 2 ** 62
"""Snapshot stride that keeps the window ends and their partner steps."""

FRONT_SPEED_FLOOR: Final[float] = 1e-3
"""Waves slower than this are not tracked by direct simulation."""

FRONT_TOLERANCE: Final[float] = 0.02
"""Relative gap allowed between shooting and front-tracking speeds."""

CLOSED_FORM_FACTOR: Final[float] = 10.0
"""Closed-form comparisons allow this multiple of the wave tolerance."""


def build_nonlinearity(section: NonlinearitySection) -> Nonlinearity:
    spec = section.potential
    return make_named(spec.name, spec.params, section.working_range,
                      section.coefficients)


def build_domain(section: DomainSection,
                 boundary: Optional[Sampler] = None) -> Grid:
    """Return the grid of a domain section.

    Parameters
    ----------
    section : DomainSection
        The configured box.
    boundary : callable, optional
        Time-independent Dirichlet data for box and slab domains.

    """
    epigraph = None
    if section.policy == BoundaryPolicy.EPIGRAPH_DIRICHLET:
        epigraph = _graph(section)
    data = None
    if boundary is not None:
        def data(points: Array, t: float) -> Array:
            return boundary(points)
    spec = DomainSpec(section.extents, section.policy, origin=section.origin,
                      epigraph=epigraph, boundary_data=data)
    return build_grid(spec, section.resolution)


def _graph(section: DomainSection) -> EpigraphSpec:
    name, params = section.graph
    try:
        if name == 'flat':
            graph = flat_graph(params.get('height', 0.0))
        elif name == 'paraboloid':
            origin = section.origin or (0.0,) * len(section.extents)
            reach = max(max(abs(o), abs(o + e)) for o, e
                        in zip(origin[:-1], section.extents[:-1]))
            graph = paraboloid_graph(params['curvature'], reach)
        elif name == 'tilted':
            graph = tilted_graph(params['slope'])
        else:
            raise ConfigError(f'unknown boundary graph {name!r}')
    except KeyError as error:
        raise ConfigError(
            f'boundary graph {name} needs parameter {error}') from None
    if section.slope_bound is not None:
        graph = replace(graph, slope_bound=section.slope_bound)
    return graph


def build_initial(section: InitialSection, grid: Grid, nl: Nonlinearity,
                  seed: int = 0) -> Sampler:
    """Return the sampler of the configured initial data on `grid`."""
    amplitude = section.amplitude
    if section.profile == 'random':
        return band_limited_noise(grid, Seed(seed), amplitude=amplitude)
    if section.profile == 'constant':
        value = section.value
        return lambda x: np.full(x.shape[:-1], value)
    if section.profile == 'sine':
        frequency = 2 * math.pi * section.wavenumber / grid.extents[0]
        start = grid.origin[0]
        return lambda x: amplitude * np.sin(frequency * (x[..., 0] - start))
    if section.profile == 'bump':
        center = np.asarray(section.base_point or (0.0,) * grid.dim)
        return lambda x: amplitude * np.exp(
            -np.sum((x - center) ** 2, axis=-1))

    direction = np.asarray(section.direction or _first_axis(grid.dim))
    if direction.shape != (grid.dim,):
        raise ConfigError(f'initial.direction {direction.tolist()} does '
                          f'not have {grid.dim} entries')
    q = build_quadrature(nl)
    if section.profile == 'exact':
        return exact_profile(q, direction, section.offset)
    if section.profile == 'capped':
        top = float(q.h_map(section.ceiling))
        offset = section.offset
        return lipschitz_profile(
            q, lambda x: np.minimum(x @ direction + offset, top))
    return lipschitz_profile(q, _phase(section, grid, q.h_map, direction))


def _first_axis(dim: int) -> Tuple[float, ...]:
    return (1.0,) + (0.0,) * (dim - 1)


def _phase(section: InitialSection, grid: Grid,
           h_map: Callable[[Array], Array], direction: Array) -> Sampler:
    offset = section.offset
    if section.psi == 'identity':
        return lambda x: x @ direction + offset
    if section.psi == 'ramp':
        low, high = h_map(np.array([-section.ceiling, section.ceiling]))
        return lambda x: np.clip(x @ direction + offset, low, high)
    if section.psi == 'triangle':
        # Periodic triangle along the first axis, peak L/4 at the center.
        length = grid.extents[0]
        center = grid.origin[0] + 0.5 * length

        def triangle(x: Array) -> Array:
            shifted = np.mod(x[..., 0] - center + 0.5 * length, length)
            return 0.25 * length - np.abs(shifted - 0.5 * length) + offset
        return triangle

    graph = grid.epigraph
    if graph is None:
        raise ConfigError('initial.psi = graph needs an epigraph domain')
    scale = math.sqrt(1.0 + graph.slope_bound ** 2)

    def distance(x: Array) -> Array:
        height = np.asarray(graph.graph_fn(x[..., :-1]), dtype=float)
        return (x[..., -1] - height) / scale + offset
    return distance


def prepare_field(cfg: ExperimentConfig, seed: int = 0,
                  initial: Optional[InitialSection] = None
                  ) -> Tuple[Nonlinearity, Grid, Sampler]:
    """Build the potential, the grid and the initial data of `cfg`.

    Box and slab domains take the initial data as Dirichlet data.

    Raises
    ------
    ConfigError
        If any of them cannot be built from the configuration.

    """
    if cfg.domain is None:
        raise ConfigError(f'{cfg.kind.label} needs a [domain] section')
    try:
        nl = build_nonlinearity(cfg.nonlinearity)
        grid = build_domain(cfg.domain)
        init = build_initial(initial or cfg.initial, grid, nl, seed)
        if cfg.domain.policy in (BoundaryPolicy.BOX_DIRICHLET,
                                 BoundaryPolicy.SLAB_DIRICHLET):
            grid = build_domain(cfg.domain, boundary=init)
    except ConfigError:
        raise
    except PflabError as error:
        raise ConfigError(f'cannot build the experiment: {error}') from error
    return nl, grid, init


def _run_forward(cfg: ExperimentConfig,
                 profile: Optional[QuasilinearProfile],
                 snapshot_dir: Optional[Path]) -> ExperimentResult:
    required = {
        Kind.CYLINDER: BoundaryPolicy.SLAB_DIRICHLET,
        Kind.EPIGRAPH: BoundaryPolicy.EPIGRAPH_DIRICHLET,
    }.get(cfg.kind)
    if required is not None and cfg.domain is not None \
            and cfg.domain.policy != required:
        raise ConfigError(f'{cfg.kind.label} needs domain.policy = '
                          f'{required.name.split("_")[0].lower()}')
    if cfg.kind == Kind.MINIMAL_SURFACE and profile is None:
        profile = make_minimal_surface_profile()
    nl, grid, init = prepare_field(cfg, cfg.run.seeds[0])
    time = cfg.time
    trajectory = run_window(init, grid, nl, profile, time.t_start,
                            time.t_end, time.snapshot_every, time.scheme,
                            time.dt, snapshot_dir)
    tolerance = cfg.tolerance
    report = verify_estimate(
        trajectory, nl, profile, tol=tolerance.estimate, residuals=True,
        floor_ratio=tolerance.grad_floor_ratio,
        residual_tol=tolerance.residual)
    return ExperimentResult(
        kind=cfg.kind,
        passed=report.passed and report.residual_passed,
        violation=report.violation,
        tolerance=report.tolerance,
        series={'t': report.times, 'sup_p': report.sup_p,
                'positive_mass': report.positive_mass},
        sup_p_series=report.sup_p,
        residual_min=report.residual_min,
        details={
            'variant': report.variant.name.lower(),
            'scheme': trajectory.scheme,
            'dt': trajectory.dt,
            'cfl_ratio': trajectory.cfl_ratio,
            'snapshots': len(trajectory),
            'initial_violation': report.initial_violation,
            'first_violation': report.first_violation,
            'residual_tolerance': report.residual_tolerance,
            'tension_times': list(report.tension_times),
            'resolution': list(grid.resolution),
            'spacing': list(grid.spacing),
            'potential': nl.name,
        },
    )


@dataclass(frozen=True)
class _WindowOutcome:
    seed: int
    window: float
    sup_p_plus: float
    residual_min: float
    residual_ok: bool
    bochner_match: bool


def _run_ancient(cfg: ExperimentConfig,
                 profile: Optional[QuasilinearProfile],
                 snapshot_dir: Optional[Path]) -> ExperimentResult:
    jobs = [(seed, window) for window in sorted(cfg.time.windows)
            for seed in cfg.run.seeds]

    def run(job: Tuple[int, float]) -> _WindowOutcome:
        return _ancient_window(cfg, profile, *job)

    with ThreadPoolExecutor(max_workers=min(worker_count(),
                                            len(jobs))) as pool:
        outcomes = list(pool.map(run, jobs))

    medians = median_by_key((o.window, o.sup_p_plus) for o in outcomes)
    values = np.array([median for _, median in medians])
    trend = bool(np.all(np.diff(values) <= 0.0))
    threshold = cfg.tolerance.ancient_threshold
    below = bool(values[-1] <= threshold)
    residuals_ok = all(o.residual_ok for o in outcomes)
    bochner = all(o.bochner_match for o in outcomes)
    _LOGGER.info('ancient windows: medians of (sup P)+ %s',
                 ', '.join(f'T={w:g}: {m:.3g}' for w, m in medians))
    return ExperimentResult(
        kind=cfg.kind,
        passed=trend and below and residuals_ok and bochner,
        violation=not below,
        tolerance=threshold,
        series={
            'seed': np.array([o.seed for o in outcomes], dtype=float),
            'window': np.array([o.window for o in outcomes]),
            'sup_p_plus': np.array([o.sup_p_plus for o in outcomes]),
            'residual_min': np.array([o.residual_min for o in outcomes]),
        },
        sup_p_series=values,
        residual_min=min(o.residual_min for o in outcomes),
        details={
            'windows': [w for w, _ in medians],
            'medians': values.tolist(),
            'nonincreasing': trend,
            'below_threshold': below,
            'residuals_ok': residuals_ok,
            'bochner_match': bochner,
            'seeds': list(cfg.run.seeds),
        },
    )


def _ancient_window(cfg: ExperimentConfig,
                    profile: Optional[QuasilinearProfile],
                    seed: int, window: float) -> _WindowOutcome:
    nl, grid, init = prepare_field(cfg, seed)
    trajectory = run_window(init, grid, nl, profile, t_start=-window,
                            t_end=0.0, snapshot_every=ENDS_ONLY,
                            scheme=cfg.time.scheme, dt=cfg.time.dt)
    sup_p_plus = max(p_function(trajectory.final, nl, profile).sup(), 0.0)

    residual_min, residual_ok, match = math.inf, True, True
    if profile is None:
        ratio = cfg.tolerance.grad_floor_ratio
        for before, after in trajectory.step_pairs():
            lemma = lemma_residual(before, after, nl, floor_ratio=ratio)
            residual_min = min(residual_min, lemma.minimum())
            if grid.is_periodic:
                bochner = bochner_residual(before, after, nl,
                                           floor_ratio=ratio)
                match = match and bool(
                    np.array_equal(bochner.values, lemma.values)
                    and np.array_equal(bochner.mask, lemma.mask))
        bound = cfg.tolerance.residual
        if bound is None:
            bound = residual_tolerance(grid, trajectory.dt)
        residual_ok = residual_min >= -bound
    _LOGGER.debug('seed %d, T = %g: (sup P)+ = %.4g, min R = %.4g', seed,
                  window, sup_p_plus, residual_min)
    return _WindowOutcome(seed, window, sup_p_plus, residual_min,
                          residual_ok, match)


def _run_wave(cfg: ExperimentConfig,
              profile: Optional[QuasilinearProfile],
              snapshot_dir: Optional[Path]) -> ExperimentResult:
    try:
        nl = build_nonlinearity(cfg.nonlinearity)
    except PflabError as error:
        raise ConfigError(f'cannot build the potential: {error}') from error
    settings = cfg.wave
    wave = solve_traveling_wave(nl, settings.halfwidth, settings.tol,
                                settings.samples)
    p = wave_p_function(wave, nl)
    series = {'xi': wave.xi, 'profile': wave.profile, 'p': p}
    checks = {
        'monotone': wave.is_monotone,
        'p_nonpositive': bool(np.max(p) <= settings.tol),
    }
    details: Dict[str, object] = {
        'speed': wave.speed,
        'wells': list(wave.wells),
        'residual': wave.residual,
        'max_p': float(np.max(p)),
    }

    beta = _imbalance(cfg.nonlinearity)
    if beta is not None:
        speed, reference = closed_form_wave(beta)
        series['reference'] = reference(wave.xi)
        error = float(np.max(np.abs(wave.profile - series['reference'])))
        bound = CLOSED_FORM_FACTOR * settings.tol
        checks['closed_form'] = (abs(wave.speed - speed) <= bound
                                 and error <= bound)
        details.update(closed_form_speed=speed, profile_error=error)

    if abs(wave.speed) > FRONT_SPEED_FLOOR:
        track = measure_front_speed(nl, wave, settings.front_length,
                                    settings.front_spacing,
                                    settings.front_time)
        gap = abs(track.speed - wave.speed) / abs(wave.speed)
        checks['front_speed'] = gap <= FRONT_TOLERANCE
        details.update(front_speed=track.speed, front_gap=gap)

    details['checks'] = checks
    return ExperimentResult(
        kind=cfg.kind,
        passed=all(checks.values()),
        violation=not checks['p_nonpositive'],
        tolerance=settings.tol,
        series=series,
        sup_p_series=np.array([np.max(p)]),
        details=details,
    )


def _imbalance(section: NonlinearitySection) -> Optional[float]:
    name, params = section.potential
    if name == 'double_well':
        return 0.0
    if name == 'double_well_imbalanced':
        return float(params.get('beta', 0.0))
    return None


def _run_rigidity(cfg: ExperimentConfig,
                  profile: Optional[QuasilinearProfile],
                  snapshot_dir: Optional[Path]) -> ExperimentResult:
    tol = cfg.tolerance.rigidity
    sweep = (cfg.initial.profile == 'exact' and cfg.run.directions > 0
             and cfg.domain is not None and len(cfg.domain.extents) == 2)
    if sweep:
        return _rigidity_sweep(cfg, tol)

    nl, grid, init = prepare_field(cfg, cfg.run.seeds[0])
    report = rigidity_detect(Field.sample(grid, init), nl,
                             build_quadrature(nl), tol)
    expect = cfg.run.expect
    return ExperimentResult(
        kind=cfg.kind,
        passed=expect is None or report.verdict == expect,
        violation=False,
        tolerance=tol,
        series={'deviation': np.array([report.deviation]),
                'max_abs_p': np.array([report.max_abs_p])},
        verdict=report.verdict.name.lower(),
        direction=report.direction,
        offset=report.offset,
        details={'expected': None if expect is None else expect.name.lower()},
    )


def _rigidity_sweep(cfg: ExperimentConfig, tol: float) -> ExperimentResult:
    if cfg.domain is None \
            or cfg.domain.policy != BoundaryPolicy.BOX_DIRICHLET:
        raise ConfigError('the rigidity sweep samples planar profiles on a '
                          'box domain')
    count = cfg.run.directions
    angles = 2 * np.pi * np.arange(count) / count
    offset = cfg.initial.offset

    def detect(angle: float):
        direction = (math.cos(angle), math.sin(angle))
        initial = replace(cfg.initial, direction=direction)
        nl, grid, init = prepare_field(cfg, initial=initial)
        return rigidity_detect(Field.sample(grid, init), nl,
                               build_quadrature(nl), tol)

    with ThreadPoolExecutor(max_workers=min(worker_count(), count)) as pool:
        reports = list(pool.map(detect, angles))

    recovered = []
    for angle, report in zip(angles, reports):
        expected = np.array([math.cos(angle), math.sin(angle)])
        recovered.append(
            report.verdict == Verdict.ONE_DIMENSIONAL
            and np.max(np.abs(np.asarray(report.direction) - expected)) <= tol
            and abs(report.offset - offset) <= tol)

    verdicts = {report.verdict for report in reports}

    def column(get: Callable) -> Array:
        return np.array([get(r) if r.direction is not None else np.nan
                         for r in reports])

    return ExperimentResult(
        kind=cfg.kind,
        passed=all(recovered),
        violation=False,
        tolerance=tol,
        series={
            'angle': angles,
            'a_1': column(lambda r: r.direction[0]),
            'a_2': column(lambda r: r.direction[1]),
            'offset': column(lambda r: r.offset),
            'deviation': np.array([r.deviation for r in reports]),
        },
        verdict=verdicts.pop().name.lower() if len(verdicts) == 1 else None,
        offset=offset,
        details={'directions': count, 'recovered': sum(recovered)},
    )


def _run_residuals(cfg: ExperimentConfig,
                   profile: Optional[QuasilinearProfile],
                   snapshot_dir: Optional[Path]) -> ExperimentResult:
    nl, grid, init = prepare_field(cfg, cfg.run.seeds[0])
    time = cfg.time
    trajectory = run_window(init, grid, nl, None, time.t_start, time.t_end,
                            time.snapshot_every, time.scheme, time.dt,
                            snapshot_dir)
    ratio = cfg.tolerance.grad_floor_ratio
    times, minima, counts, matches = [], [], [], []
    for before, after in trajectory.step_pairs():
        lemma = lemma_residual(before, after, nl, floor_ratio=ratio)
        times.append(after.time)
        minima.append(lemma.minimum())
        counts.append(lemma.admissible_count)
        if grid.is_periodic:
            bochner = bochner_residual(before, after, nl, floor_ratio=ratio)
            matches.append(bool(np.array_equal(bochner.values, lemma.values)))
    bound = cfg.tolerance.residual
    if bound is None:
        bound = residual_tolerance(grid, trajectory.dt)
    residual_min = min(minima, default=math.inf)
    below = residual_min < -bound
    return ExperimentResult(
        kind=cfg.kind,
        passed=not below and all(matches),
        violation=below,
        tolerance=bound,
        series={'t': np.array(times), 'residual_min': np.array(minima),
                'admissible': np.array(counts, dtype=float)},
        residual_min=residual_min,
        details={'pairs': len(times), 'dt': trajectory.dt,
                 'bochner_match': all(matches) if matches else None},
    )


_Runner = Callable[[ExperimentConfig, Optional[QuasilinearProfile],
                    Optional[Path]], ExperimentResult]

_RUNNERS: Final[Dict[Kind, _Runner]] = {
    Kind.FORWARD_INVARIANCE: _run_forward,
    Kind.MINIMAL_SURFACE: _run_forward,
    Kind.EPIGRAPH: _run_forward,
    Kind.CYLINDER: _run_forward,
    Kind.ANCIENT_WINDOW: _run_ancient,
    Kind.TRAVELING_WAVE: _run_wave,
    Kind.RIGIDITY: _run_rigidity,
    Kind.RESIDUALS: _run_residuals,
}


def execute(cfg: ExperimentConfig,
            profile: Optional[QuasilinearProfile] = None,
            snapshot_dir: Optional[Path] = None) -> ExperimentResult:
    """Run the experiment of `cfg` without writing a bundle.

    Parameters
    ----------
    cfg : ExperimentConfig
        The experiment.
    profile : QuasilinearProfile, optional
        Integrand of quasilinear runs; the minimal surface one by default
        for `minimal_surface`, the semilinear flow otherwise.
    snapshot_dir : path, optional
        Directory receiving the field snapshots of single runs.

    """
    _LOGGER.info('running %s', cfg.kind.label)
    result = _RUNNERS[cfg.kind](cfg, profile, snapshot_dir)
    _LOGGER.info('%s %s', cfg.kind.label,
                 'passed' if result.passed else 'failed')
    return result


def run_experiment(cfg: ExperimentConfig,
                   profile: Optional[QuasilinearProfile] = None) -> Bundle:
    """Run `cfg` and write its bundle to the configured output directory."""
    bundle = Bundle(Path(cfg.experiment.output))
    snapshot_dir = bundle.fields_dir if cfg.run.write_fields else None
    result = execute(cfg, profile, snapshot_dir)
    return write_bundle(result, bundle.directory)


_LOGGER = logging.getLogger(__name__)
