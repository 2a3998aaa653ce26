"""Command line entry point: pflab run | accept | plot | wave."""
from enum import IntEnum
from typing import List, Optional, Sequence
import argparse
import logging
import sys

from .._errors import ConfigError, NonlinearityError, PflabError
from ..nonlinearity import make_double_well
from ..pfunction import wave_p_function
from ..solvers import closed_form_wave, solve_traveling_wave
from ._acceptance import Level, acceptance_suite
from ._config import load_config
from ._experiments import run_experiment
from ._plots import emit_plots
from ._printer import Printer
from ._report import read_report


class ExitCode(IntEnum):
    SUCCESS = 0
    VERIFICATION_FAILURE = 1
    CONFIG_ERROR = 2
    FAULT = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='pflab',
        description='Numerical checks of P-function gradient estimates.')
    parser.add_argument('-v', '--verbose', action='store_true',
                        help='log debug messages')
    commands = parser.add_subparsers(dest='command', required=True)

    run = commands.add_parser('run', help='run one configured experiment')
    run.add_argument('--config', required=True,
                     help='INI or JSON experiment file')

    accept = commands.add_parser('accept', help='run the acceptance suite')
    accept.add_argument('--level', choices=['quick', 'full'],
                        default='quick')
    accept.add_argument('--only', type=_criteria, default=None,
                        help='comma separated criterion numbers')

    plot = commands.add_parser('plot', help='write the plot script of a '
                               'report bundle')
    plot.add_argument('--bundle', required=True, help='bundle directory')

    wave = commands.add_parser('wave', help='solve the traveling wave of '
                               'the double well with imbalance beta')
    wave.add_argument('--beta', type=float, required=True)
    wave.add_argument('--halfwidth', type=float, default=20.0)
    wave.add_argument('--tol', type=float, default=1e-6)
    return parser


def _criteria(text: str) -> List[int]:
    try:
        return [int(item) for item in text.split(',') if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f'expected comma separated integers, got {text!r}') from None


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
    try:
        return int(_COMMANDS[args.command](args))
    except ConfigError as error:
        _LOGGER.error('configuration error: %s', error)
        return int(ExitCode.CONFIG_ERROR)
    except PflabError as error:
        _LOGGER.error('%s: %s', type(error).__name__, error)
        return int(ExitCode.FAULT)
    except Exception:  # pylint: disable=broad-except
        _LOGGER.exception('unexpected failure')
        return int(ExitCode.FAULT)


def _run(args: argparse.Namespace) -> ExitCode:
    cfg = load_config(args.config)
    bundle = run_experiment(cfg)
    report = read_report(bundle.directory)
    if report['passed']:
        return ExitCode.SUCCESS
    _LOGGER.warning('%s failed verification, see %s', report['kind'],
                    bundle.report_path)
    return ExitCode.VERIFICATION_FAILURE


def _accept(args: argparse.Namespace) -> ExitCode:
    try:
        summary = acceptance_suite(Level[args.level.upper()], args.only)
    except ValueError as error:
        if isinstance(error, PflabError):
            raise
        raise ConfigError(str(error)) from error
    sys.stdout.write(Printer().to_string(summary.outcomes))
    if summary.passed:
        return ExitCode.SUCCESS
    return ExitCode.VERIFICATION_FAILURE


def _plot(args: argparse.Namespace) -> ExitCode:
    path = emit_plots(args.bundle)
    sys.stdout.write(f'{path}\n')
    return ExitCode.SUCCESS


def _wave(args: argparse.Namespace) -> ExitCode:
    try:
        nl = make_double_well(args.beta)
    except NonlinearityError as error:
        raise ConfigError(f'bad value for --beta: {error}') from error
    wave = solve_traveling_wave(nl, args.halfwidth, args.tol)
    speed, _ = closed_form_wave(args.beta)
    p = wave_p_function(wave, nl)
    sys.stdout.write(
        f'speed        {wave.speed:.12g}\n'
        f'closed form  {speed:.12g}\n'
        f'wells        {wave.wells[0]:g} -> {wave.wells[1]:g}\n'
        f'max P        {float(p.max()):.3g}\n'
        f'monotone     {wave.is_monotone}\n')
    return ExitCode.SUCCESS


_COMMANDS = {
    'run': _run,
    'accept': _accept,
    'plot': _plot,
    'wave': _wave,
}


_LOGGER = logging.getLogger(__name__)


if __name__ == '__main__':
    sys.exit(main())
