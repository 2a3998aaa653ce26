import json
import math

from pflab.harness._cli import ExitCode, main
from pflab.harness._plots import PLOT_SCRIPT


def _write(tmp_path, name, output, initial, time):
    path = tmp_path / name
    path.write_text(json.dumps({
        'experiment': {'kind': 'forward_invariance',
                       'output': str(tmp_path / output)},
        'domain': {'policy': 'periodic', 'extents': [2 * math.pi],
                   'resolution': [256]},
        'nonlinearity': {'potential': 'double_well'},
        'initial': initial,
        'time': time,
    }))
    return path


def test_harness_cli_run_success(tmp_path):
    path = _write(tmp_path, 'sine.json', 'sine',
                  {'profile': 'sine', 'amplitude': 0.5}, {'t_end': 0.01})
    assert main(['run', '--config', str(path)]) == ExitCode.SUCCESS
    report = json.loads((tmp_path / 'sine' / 'report.json').read_text())
    assert report['violation'] is False

    assert main(['plot', '--bundle', str(tmp_path / 'sine')]) == 0
    assert (tmp_path / 'sine' / PLOT_SCRIPT).is_file()


def test_harness_cli_run_violation(tmp_path):
    path = _write(tmp_path, 'steep.json', 'steep',
                  {'profile': 'sine', 'amplitude': 0.1, 'wavenumber': 10},
                  {'t_end': 0.01})
    code = main(['run', '--config', str(path)])
    assert code == ExitCode.VERIFICATION_FAILURE
    report = json.loads((tmp_path / 'steep' / 'report.json').read_text())
    assert report['violation'] is True
    assert report['details']['first_violation'] == 0.0


def test_harness_cli_config_errors(tmp_path, caplog):
    path = tmp_path / 'incomplete.ini'
    path.write_text('[experiment]\nkind = forward_invariance\n')
    assert main(['run', '--config', str(path)]) == ExitCode.CONFIG_ERROR
    assert 'nonlinearity' in caplog.text

    missing = tmp_path / 'absent.ini'
    assert main(['run', '--config', str(missing)]) == ExitCode.CONFIG_ERROR

    assert main(['accept', '--only', '12']) == ExitCode.CONFIG_ERROR

    negative = _write(tmp_path, 'negative.json', 'negative',
                      {'profile': 'sine'}, {'t_end': 0.01, 'windows': [-1]})
    assert main(['run', '--config', str(negative)]) == ExitCode.CONFIG_ERROR
    assert 'time.windows' in caplog.text


def test_harness_cli_fault(tmp_path):
    assert main(['plot', '--bundle', str(tmp_path)]) == ExitCode.FAULT


def test_harness_cli_wave(capsys):
    assert main(['wave', '--beta', '0.0']) == ExitCode.SUCCESS
    out = capsys.readouterr().out
    assert 'closed form' in out
    assert 'wells        -1 -> 1' in out


def test_harness_cli_wave_bad_beta(caplog):
    assert main(['wave', '--beta', '1.5']) == ExitCode.CONFIG_ERROR
    assert '--beta' in caplog.text
