"""Experiment configuration read from INI or JSON files.

Both formats nest the same way, section -> key -> value. Unknown
sections and keys are rejected, never ignored.
"""
from dataclasses import MISSING, dataclass, field, fields
from enum import Enum, auto
from os import PathLike
from pathlib import Path
from typing import (
    Any, Callable, Dict, Final, Mapping, NamedTuple, Optional, Tuple, Type,
    TypeVar, Union)
import configparser
import json
import logging
import os

from .._errors import ConfigError
from .._typing import Interval
from ..grid import BoundaryPolicy
from ..nonlinearity import DEFAULT_WORKING_RANGE
from ..pfunction import GRAD_FLOOR_RATIO, RIGIDITY_TOLERANCE, Verdict
from ..solvers import Scheme


THREADS_VARIABLE: Final[str] = 'PFLAB_THREADS'
"""Environment variable capping the worker threads."""

ANCIENT_THRESHOLD: Final[float] = 0.05
"""Bound for the median of (sup P)+ at the longest window."""


class Kind(Enum):
    FORWARD_INVARIANCE = auto()
    ANCIENT_WINDOW = auto()
    MINIMAL_SURFACE = auto()
    EPIGRAPH = auto()
    CYLINDER = auto()
    TRAVELING_WAVE = auto()
    RIGIDITY = auto()
    RESIDUALS = auto()

    @property
    def label(self) -> str:
        return self.name.lower()


class NamedSpec(NamedTuple):
    """A name followed by `key=value` parameters, e.g.
    `double_well_imbalanced beta=0.3`."""

    name: str
    params: Dict[str, float]


@dataclass(frozen=True)
class ExperimentSection:
    kind: Kind
    output: Path = Path('pflab-out')


@dataclass(frozen=True)
class DomainSection:
    policy: BoundaryPolicy
    extents: Tuple[float, ...]
    resolution: Tuple[int, ...]
    origin: Optional[Tuple[float, ...]] = None
    graph: NamedSpec = NamedSpec('flat', {})
    slope_bound: Optional[float] = None
    """Overrides the slope bound of the boundary graph."""


@dataclass(frozen=True)
class NonlinearitySection:
    potential: NamedSpec
    coefficients: Optional[Tuple[float, ...]] = None
    working_range: Interval = DEFAULT_WORKING_RANGE


@dataclass(frozen=True)
class InitialSection:
    profile: str = 'exact'
    direction: Optional[Tuple[float, ...]] = None
    """Unit vector, the first axis by default."""

    offset: float = 0.0
    psi: str = 'identity'
    """1-Lipschitz phase of `lipschitz` data: identity, ramp, triangle or
    graph."""

    amplitude: float = 0.9
    wavenumber: int = 1
    value: float = 0.0
    ceiling: float = 0.9
    """Level at which `capped` data and `ramp` phases are clamped."""

    base_point: Optional[Tuple[float, ...]] = None


@dataclass(frozen=True)
class TimeSection:
    t_start: float = 0.0
    t_end: float = 1.0
    snapshot_every: int = 1
    dt: Optional[float] = None
    scheme: Scheme = Scheme.EXPLICIT
    windows: Tuple[float, ...] = (1.0, 2.0, 4.0, 8.0)


@dataclass(frozen=True)
class RunSection:
    seeds: Tuple[int, ...] = (0,)
    directions: int = 16
    write_fields: bool = False
    expect: Optional[Verdict] = None
    """Verdict a single rigidity field must receive."""


@dataclass(frozen=True)
class ToleranceSection:
    estimate: Optional[float] = None
    """Bound for sup P, `auto` for 10 h^2 + 5 dt."""

    residual: Optional[float] = None
    """Bound for -min R, `auto` for 50 h^2 + 5 dt."""

    rigidity: float = RIGIDITY_TOLERANCE
    grad_floor_ratio: float = GRAD_FLOOR_RATIO
    ancient_threshold: float = ANCIENT_THRESHOLD


@dataclass(frozen=True)
class WaveSection:
    halfwidth: float = 20.0
    tol: float = 1e-6
    samples: int = 8001
    front_length: float = 80.0
    front_spacing: float = 0.05
    front_time: float = 20.0


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: ExperimentSection
    nonlinearity: NonlinearitySection
    domain: Optional[DomainSection] = None
    initial: InitialSection = field(default_factory=InitialSection)
    time: TimeSection = field(default_factory=TimeSection)
    run: RunSection = field(default_factory=RunSection)
    tolerance: ToleranceSection = field(default_factory=ToleranceSection)
    wave: WaveSection = field(default_factory=WaveSection)

    @property
    def kind(self) -> Kind:
        return self.experiment.kind


def load_config(path: Union[str, PathLike]) -> ExperimentConfig:
    """Read a configuration file, JSON if its suffix is `.json`.

    Raises
    ------
    ConfigError
        If the file cannot be read or parsed, or its content is invalid.

    """
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as error:
        raise ConfigError(f'cannot read config {path}: {error}') from error

    if path.suffix.lower() == '.json':
        try:
            data = json.loads(text)
        except json.JSONDecodeError as error:
            raise ConfigError(f'{path}: {error}') from error
        if not isinstance(data, dict):
            raise ConfigError(f'{path}: expected an object of sections')
    else:
        parser = configparser.ConfigParser(interpolation=None)
        try:
            parser.read_string(text, source=str(path))
        except configparser.Error as error:
            raise ConfigError(f'{path}: {error}') from error
        data = {name: dict(parser[name]) for name in parser.sections()}
    _LOGGER.debug('read config %s: sections %s', path, sorted(data))
    return parse_config(data)


def parse_config(data: Mapping[str, Mapping[str, Any]]) -> ExperimentConfig:
    """Build a configuration from nested mappings of raw values.

    Raises
    ------
    ConfigError
        Naming the first unknown or missing section or key, or the key
        whose value is malformed.

    """
    unknown = sorted(set(data) - set(_SECTIONS))
    if unknown:
        raise ConfigError(f'unknown section [{unknown[0]}]')
    for required in ('experiment', 'nonlinearity'):
        if required not in data:
            raise ConfigError(f'missing section [{required}]')

    sections = {}
    for name, raw in data.items():
        if not isinstance(raw, Mapping):
            raise ConfigError(f'section [{name}] is not a table of keys')
        cls, converters = _SECTIONS[name]
        sections[name] = _build_section(name, cls, converters, raw)

    config = ExperimentConfig(**sections)
    if config.domain is None and config.kind != Kind.TRAVELING_WAVE:
        raise ConfigError(
            f'missing section [domain], required by {config.kind.label}')
    _check_consistency(config)
    return config


def worker_count() -> int:
    """Return the worker thread cap from PFLAB_THREADS, or the CPU count.

    Raises
    ------
    ConfigError
        If the variable is set to anything but a positive integer.

    """
    raw = os.environ.get(THREADS_VARIABLE)
    if raw is None or not raw.strip():
        return os.cpu_count() or 1
    try:
        count = int(raw)
    except ValueError:
        count = 0
    if count < 1:
        raise ConfigError(
            f'{THREADS_VARIABLE} must be a positive integer, got {raw!r}')
    return count


S = TypeVar('S')
_Converter = Callable[[str], Any]


def _build_section(name: str, cls: Type[S],
                   converters: Mapping[str, _Converter],
                   raw: Mapping[str, Any]) -> S:
    values: Dict[str, Any] = {}
    for key, value in raw.items():
        if key not in converters:
            raise ConfigError(f'unknown key {name}.{key}')
        try:
            values[key] = converters[key](_text(value))
        except (ValueError, KeyError) as error:
            raise ConfigError(
                f'bad value for {name}.{key}: {value!r} ({error})') from error
    for item in fields(cls):
        required = (item.default is MISSING
                    and item.default_factory is MISSING)
        if required and item.name not in values:
            raise ConfigError(f'missing key {name}.{item.name}')
    return cls(**values)


def _check_consistency(config: ExperimentConfig) -> None:
    domain = config.domain
    if domain is not None:
        dim = len(domain.extents)
        if len(domain.resolution) != dim:
            raise ConfigError(
                f'domain.resolution has {len(domain.resolution)} entries '
                f'for {dim} extents')
        if domain.origin is not None and len(domain.origin) != dim:
            raise ConfigError(
                f'domain.origin has {len(domain.origin)} entries for {dim} '
                f'extents')
    tolerance = config.tolerance
    for key in ('estimate', 'residual', 'rigidity', 'grad_floor_ratio',
                'ancient_threshold'):
        value = getattr(tolerance, key)
        if value is not None and not value > 0.0:
            raise ConfigError(f'tolerance.{key} must be positive, got '
                              f'{value:g}')
    if not config.time.t_start < config.time.t_end:
        raise ConfigError(
            f'empty time window [{config.time.t_start:g}, '
            f'{config.time.t_end:g}]')
    if config.time.snapshot_every < 1:
        raise ConfigError('time.snapshot_every must be positive')
    bad = [w for w in config.time.windows if not w > 0.0]
    if bad:
        raise ConfigError(f'time.windows must be positive, got {bad[0]:g}')


def _text(value: Any) -> str:
    # JSON values arrive typed; INI values as text.
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, (list, tuple)):
        return ', '.join(_text(item) for item in value)
    return str(value).strip()


def _items(text: str):
    return [item for item in text.replace(',', ' ').split() if item]


def _floats(text: str) -> Tuple[float, ...]:
    values = tuple(float(item) for item in _items(text))
    if not values:
        raise ValueError('expected at least one number')
    return values


def _ints(text: str) -> Tuple[int, ...]:
    values = tuple(int(item) for item in _items(text))
    if not values:
        raise ValueError('expected at least one integer')
    return values


def _interval(text: str) -> Interval:
    values = _floats(text)
    if len(values) != 2 or not values[0] < values[1]:
        raise ValueError('expected two increasing numbers')
    return values[0], values[1]


def _auto_float(text: str) -> Optional[float]:
    return None if text.lower() == 'auto' else float(text)


def _boolean(text: str) -> bool:
    lowered = text.lower()
    if lowered in ('1', 'yes', 'true', 'on'):
        return True
    if lowered in ('0', 'no', 'false', 'off'):
        return False
    raise ValueError('expected a boolean')


def _named_spec(text: str) -> NamedSpec:
    """Parse `name key=value ...`."""
    words = text.split()
    if not words:
        raise ValueError('expected a name')
    params = {}
    for word in words[1:]:
        key, sep, value = word.partition('=')
        if not sep:
            raise ValueError(f'expected key=value, got {word!r}')
        params[key] = float(value)
    return NamedSpec(words[0], params)


def _choice(*options: str) -> _Converter:
    def convert(text: str) -> str:
        if text not in options:
            raise ValueError(f'expected one of {", ".join(options)}')
        return text
    return convert


def _enum_by_name(enum: Type[Enum]) -> _Converter:
    def convert(text: str):
        return enum[text.upper()]
    return convert


def _scheme(text: str) -> Scheme:
    return Scheme.parse(text)


_POLICIES: Final[Dict[str, BoundaryPolicy]] = {
    'periodic': BoundaryPolicy.PERIODIC,
    'box': BoundaryPolicy.BOX_DIRICHLET,
    'slab': BoundaryPolicy.SLAB_DIRICHLET,
    'epigraph': BoundaryPolicy.EPIGRAPH_DIRICHLET,
}

PROFILES: Final[Tuple[str, ...]] = (
    'exact', 'lipschitz', 'capped', 'random', 'sine', 'constant', 'bump')

PHASES: Final[Tuple[str, ...]] = ('identity', 'ramp', 'triangle', 'graph')

_SECTIONS: Final[Dict[str, Tuple[type, Dict[str, _Converter]]]] = {
    'experiment': (ExperimentSection, {
        'kind': _enum_by_name(Kind),
        'output': Path,
    }),
    'domain': (DomainSection, {
        'policy': lambda text: _POLICIES[text.lower()],
        'extents': _floats,
        'resolution': _ints,
        'origin': _floats,
        'graph': _named_spec,
        'slope_bound': float,
    }),
    'nonlinearity': (NonlinearitySection, {
        'potential': _named_spec,
        'coefficients': _floats,
        'working_range': _interval,
    }),
    'initial': (InitialSection, {
        'profile': _choice(*PROFILES),
        'direction': _floats,
        'offset': float,
        'psi': _choice(*PHASES),
        'amplitude': float,
        'wavenumber': int,
        'value': float,
        'ceiling': float,
        'base_point': _floats,
    }),
    'time': (TimeSection, {
        't_start': float,
        't_end': float,
        'snapshot_every': int,
        'dt': _auto_float,
        'scheme': _scheme,
        'windows': _floats,
    }),
    'run': (RunSection, {
        'seeds': _ints,
        'directions': int,
        'write_fields': _boolean,
        'expect': _enum_by_name(Verdict),
    }),
    'tolerance': (ToleranceSection, {
        'estimate': _auto_float,
        'residual': _auto_float,
        'rigidity': float,
        'grad_floor_ratio': float,
        'ancient_threshold': float,
    }),
    'wave': (WaveSection, {
        'halfwidth': float,
        'tol': float,
        'samples': int,
        'front_length': float,
        'front_spacing': float,
        'front_time': float,
    }),
}


_LOGGER = logging.getLogger(__name__)
