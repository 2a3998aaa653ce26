"""Gnuplot scripts for report bundles.

The scripts read only series.csv from their own directory, so a bundle
can be moved and plotted anywhere.
"""
from os import PathLike
from pathlib import Path
from typing import Dict, Final, List, Union
import logging

import numpy as np

from .._typing import Array
from ._report import SERIES_FILE, read_report, read_series


PLOT_SCRIPT: Final[str] = 'plot.gp'

PLOT_IMAGE: Final[str] = 'plot.png'

_PREAMBLE: Final[str] = f"""\
set datafile separator ','
set key autotitle columnhead
set terminal pngcairo size 960,640
set output '{PLOT_IMAGE}'
set grid
"""


def emit_plots(bundle: Union[str, PathLike]) -> Path:
    """Write the plot script of a bundle and return its path.

    Raises
    ------
    BundleError
        If the report or the series file is missing, or the series is
        empty.

    """
    directory = Path(bundle)
    report = read_report(directory)
    series = read_series(directory)
    kind = report['kind']
    if kind == 'ancient_window':
        body = _ancient(series)
    elif kind == 'traveling_wave':
        body = _wave(series)
    elif kind == 'rigidity':
        body = _columns('direction angle', 'deviation', series,
                        ['deviation'], x='angle')
    elif kind == 'residuals':
        body = _columns('t', 'min R', series, ['residual_min'])
    else:
        body = _forward(series, report.get('tolerance'))
    path = directory / PLOT_SCRIPT
    path.write_text(_PREAMBLE + f"set title '{kind}'\n" + body)
    _LOGGER.info('wrote %s', path)
    return path


def _index(series: Dict[str, Array], name: str) -> int:
    return list(series).index(name) + 1


def _columns(xlabel: str, ylabel: str, series: Dict[str, Array],
             names: List[str], x: str = 't') -> str:
    lines = [f"set xlabel '{xlabel}'", f"set ylabel '{ylabel}'"]
    column = _index(series, x)
    plots = [f"'{SERIES_FILE}' using {column}:{_index(series, name)} "
             f"with lines" for name in names]
    lines.append('plot ' + ', \\\n     '.join(plots))
    return '\n'.join(lines) + '\n'


def _forward(series: Dict[str, Array], tolerance) -> str:
    body = _columns('t', 'sup P', series, ['sup_p'])
    if tolerance is None:
        return body
    return body.rstrip('\n') + (f", \\\n     {tolerance!r} with lines "
                                f"dashtype 2 title 'tolerance'\n")


def _ancient(series: Dict[str, Array]) -> str:
    seed, window = _index(series, 'seed'), _index(series, 'window')
    value = _index(series, 'sup_p_plus')
    lines = ["set xlabel 'window length T'", "set ylabel '(sup P)+ at t = 0'",
             'set logscale x 2']
    plots = [f"'{SERIES_FILE}' using {window}:(${seed} == {s:g} ? "
             f"${value} : 1/0) with linespoints title 'seed {s:g}'"
             for s in np.unique(series['seed'])]
    lines.append('plot ' + ', \\\n     '.join(plots))
    return '\n'.join(lines) + '\n'


def _wave(series: Dict[str, Array]) -> str:
    names = ['profile']
    if 'reference' in series:
        names.append('reference')
    return _columns('xi', 'u', series, names, x='xi')


_LOGGER = logging.getLogger(__name__)
