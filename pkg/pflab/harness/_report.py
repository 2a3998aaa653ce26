"""Report bundles: report.json, series.csv and optional field snapshots."""
from dataclasses import dataclass, field
from os import PathLike
from pathlib import Path
from typing import Any, Dict, Final, Optional, Tuple, Union
import json
import logging
import math

import numpy as np

from .._errors import BundleError, ReportError
from .._typing import Array
from ._config import Kind


REPORT_FILE: Final[str] = 'report.json'

SERIES_FILE: Final[str] = 'series.csv'

FIELDS_DIR: Final[str] = 'fields'

REPORT_KEYS: Final[Tuple[str, ...]] = (
    'kind', 'passed', 'violation', 'tolerance', 'sup_p_series',
    'residual_min', 'verdict', 'direction', 'offset', 'details')
"""Exactly the keys of every report.json."""


@dataclass(frozen=True, eq=False)
class ExperimentResult:
    """Outcome of one experiment, before it is written to disk."""

    kind: Kind
    passed: bool
    violation: bool
    tolerance: Optional[float]
    series: Dict[str, Array] = field(repr=False)
    """Columns of series.csv, in order."""

    sup_p_series: Optional[Array] = field(default=None, repr=False)
    residual_min: Optional[float] = None
    verdict: Optional[str] = None
    direction: Optional[Tuple[float, ...]] = None
    offset: Optional[float] = None
    details: Dict[str, Any] = field(default_factory=dict)

    def to_report(self) -> Dict[str, Any]:
        return {
            'kind': self.kind.label,
            'passed': self.passed,
            'violation': self.violation,
            'tolerance': self.tolerance,
            'sup_p_series': self.sup_p_series,
            'residual_min': self.residual_min,
            'verdict': self.verdict,
            'direction': self.direction,
            'offset': self.offset,
            'details': self.details,
        }


@dataclass(frozen=True)
class Bundle:
    directory: Path

    @property
    def report_path(self) -> Path:
        return self.directory / REPORT_FILE

    @property
    def series_path(self) -> Path:
        return self.directory / SERIES_FILE

    @property
    def fields_dir(self) -> Path:
        return self.directory / FIELDS_DIR


def write_bundle(result: ExperimentResult,
                 directory: Union[str, PathLike]) -> Bundle:
    bundle = Bundle(Path(directory))
    bundle.directory.mkdir(parents=True, exist_ok=True)
    bundle.report_path.write_text(
        json.dumps(_jsonable(result.to_report()), indent=2, sort_keys=True)
        + '\n')
    write_series(bundle.series_path, result.series)
    _LOGGER.info('wrote %s and %s', bundle.report_path, bundle.series_path)
    return bundle


def write_series(path: Union[str, PathLike], series: Dict[str, Array]
                 ) -> None:
    """Write equal-length columns as CSV with a header row.

    Values use 17 significant digits, so identical runs give identical
    files.
    """
    names = list(series)
    columns = [np.asarray(series[name], dtype=float).ravel()
               for name in names]
    if len({column.size for column in columns}) > 1:
        raise ValueError(f'series columns {names} differ in length')
    np.savetxt(path, np.column_stack(columns) if columns else np.empty((0,)),
               fmt='%.17g', delimiter=',', header=','.join(names),
               comments='')


def read_report(directory: Union[str, PathLike]) -> Dict[str, Any]:
    """Load report.json from a bundle.

    Raises
    ------
    BundleError
        If the report is absent.
    ReportError
        If its keys differ from the documented set.

    """
    path = Path(directory) / REPORT_FILE
    if not path.is_file():
        raise BundleError(f'missing report file {path}')
    report = json.loads(path.read_text())
    if not isinstance(report, dict) or set(report) != set(REPORT_KEYS):
        keys = sorted(report) if isinstance(report, dict) else []
        raise ReportError(f'{path} has keys {keys}, expected '
                          f'{sorted(REPORT_KEYS)}')
    return report


def read_series(directory: Union[str, PathLike]) -> Dict[str, Array]:
    """Load series.csv from a bundle.

    Raises
    ------
    BundleError
        If the series is absent or holds no rows.

    """
    path = Path(directory) / SERIES_FILE
    if not path.is_file():
        raise BundleError(f'missing series file {path}')
    lines = path.read_text().splitlines()
    if len(lines) < 2:
        raise BundleError(f'empty series file {path}')
    names = lines[0].split(',')
    data = np.loadtxt(path, delimiter=',', skiprows=1, ndmin=2)
    return {name: data[:, index] for index, name in enumerate(names)}


def _jsonable(value: Any) -> Any:
    # Non-finite floats become null; json would emit NaN/Infinity.
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        number = float(value)
        return number if math.isfinite(number) else None
    if isinstance(value, Path):
        return str(value)
    return value


_LOGGER = logging.getLogger(__name__)
