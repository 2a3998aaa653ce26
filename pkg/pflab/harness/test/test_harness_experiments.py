from typing import Any, Dict
import math

import numpy as np
import pytest

from pflab._errors import ConfigError
from pflab.harness._config import Kind, parse_config
from pflab.harness._experiments import (
    execute,
    prepare_field,
    run_experiment,
)
from pflab.harness._report import read_report, read_series


def _config(kind: str = 'forward_invariance', **sections: Dict[str, Any]):
    data = {
        'experiment': {'kind': kind},
        'domain': {'policy': 'periodic', 'extents': 2 * math.pi,
                   'resolution': 256},
        'nonlinearity': {'potential': 'double_well'},
        'initial': {'profile': 'sine', 'amplitude': 0.5},
        'time': {'t_end': 0.05},
    }
    for name, values in sections.items():
        data.setdefault(name, {}).update(values)
    return parse_config(data)


def test_harness_experiments_forward_passes():
    result = execute(_config())
    assert result.kind == Kind.FORWARD_INVARIANCE
    assert result.passed
    assert not result.violation
    assert np.all(result.sup_p_series < 0.0)
    assert result.residual_min >= -result.details['residual_tolerance']
    assert not result.details['initial_violation']
    assert result.details['first_violation'] is None
    assert result.details['variant'] == 'semilinear'
    assert list(result.series) == ['t', 'sup_p', 'positive_mass']
    assert result.series['t'][0] == 0.0


def test_harness_experiments_forward_violation():
    result = execute(_config(initial={'amplitude': 0.1, 'wavenumber': 10},
                             time={'t_end': 0.01}))
    assert not result.passed
    assert result.violation
    assert result.details['initial_violation']
    assert result.details['first_violation'] == 0.0


def test_harness_experiments_minimal_surface():
    result = execute(_config('minimal_surface',
                             time={'snapshot_every': 10}))
    assert result.details['variant'] == 'quasilinear'
    assert not result.violation
    assert result.residual_min is None


def test_harness_experiments_residuals():
    result = execute(_config('residuals', time={'t_end': 0.01}))
    assert result.passed
    assert result.details['bochner_match'] is True
    assert result.details['pairs'] == len(result.series['t'])
    assert result.residual_min >= -result.tolerance


def test_harness_experiments_wave():
    cfg = parse_config({
        'experiment': {'kind': 'traveling_wave'},
        'nonlinearity': {'potential': 'double_well'},
    })
    result = execute(cfg)
    assert result.passed
    assert abs(result.details['speed']) <= 1e-8
    assert result.details['profile_error'] <= 1e-5
    assert 'front_speed' not in result.details
    assert result.details['checks'] == {'monotone': True,
                                        'p_nonpositive': True,
                                        'closed_form': True}


def test_harness_experiments_rigidity_single_field():
    box = {'policy': 'box', 'extents': [3.0, 3.0], 'origin': [-1.5, -1.5],
           'resolution': [40, 40]}
    result = execute(_config('rigidity', domain=box,
                             initial={'profile': 'constant', 'value': 0.2},
                             run={'expect': 'constant'}))
    assert result.passed
    assert result.verdict == 'constant'
    assert result.direction is None
    assert result.details == {'expected': 'constant'}


def test_harness_experiments_ancient_structure():
    result = execute(_config('ancient_window',
                             domain={'resolution': 64},
                             initial={'profile': 'random'},
                             time={'windows': [0.5, 1.0]},
                             run={'seeds': [0, 1]}))
    assert result.details['windows'] == [0.5, 1.0]
    assert result.details['seeds'] == [0, 1]
    assert len(result.series['window']) == 4
    assert np.all(result.series['sup_p_plus'] >= 0.0)
    assert len(result.sup_p_series) == 2
    assert result.details['bochner_match']
    assert result.details['residuals_ok']


def test_harness_experiments_ancient_residuals_every_pair():
    # The first step out of the random data is the hardest pair.
    result = execute(_config('ancient_window',
                             initial={'profile': 'random', 'amplitude': 0.9},
                             time={'windows': [1.0, 8.0]},
                             run={'seeds': [0, 7]}))
    assert result.details['residuals_ok']
    assert result.details['bochner_match']
    assert np.all(np.isfinite(result.series['residual_min']))


def test_harness_experiments_run_writes_bundle(tmp_path):
    bundle = run_experiment(_config(experiment={'output': tmp_path / 'out'},
                                    run={'write_fields': True},
                                    time={'t_end': 0.01}))
    report = read_report(bundle.directory)
    assert report['kind'] == 'forward_invariance'
    assert report['violation'] is False
    series = read_series(bundle.directory)
    assert len(series['t']) == len(report['sup_p_series'])
    assert any(bundle.fields_dir.iterdir())


def test_harness_experiments_errors():
    with pytest.raises(ConfigError, match='epigraph'):
        execute(_config('epigraph'))
    with pytest.raises(ConfigError, match='slab'):
        execute(_config('cylinder'))
    with pytest.raises(ConfigError, match='epigraph domain'):
        prepare_field(_config(initial={'profile': 'lipschitz',
                                       'psi': 'graph'}))
    with pytest.raises(ConfigError, match='box domain'):
        execute(_config('rigidity', initial={'profile': 'exact'},
                        domain={'extents': [3.0, 3.0],
                                'resolution': [20, 20]}))
    with pytest.raises(ConfigError):
        prepare_field(_config(nonlinearity={'potential': 'quartic'}))
