"""
Test the utilities: run configuration, file formats and plots
"""

import json

import numpy as np
import pytest

from PyFringe.bloch_qubits import QubitParams, intensities, two_qubit_state
from PyFringe.exceptions import ConfigError
from PyFringe.intensity_layers import build_layers
from PyFringe.optimizer import AdamConfig, train
from PyFringe.test.reference_values import EPOCH1_PARAMS, EPOCH100_PARAMS
from PyFringe.utils import (RunConfig, atomic_write, parse_config_text,
                            plot_pattern, read_layer_csv, read_pattern_csv,
                            save_figure, to_json, write_history_csv,
                            write_layer_csv, write_pattern_csv)
from PyFringe.wave_optics import basis_pattern, scalar_pattern


def test_parse_config_text():
    """
    Tests that comments and blank lines are skipped
    """
    text = '# geometry\n\ngeometry.d = 12.5  # slit separation\n experiment.model=eq18\n'
    assert parse_config_text(text) == {'geometry.d': '12.5', 'experiment.model': 'eq18'}
    with pytest.raises(ConfigError) as err:
        parse_config_text('geometry.d 12.5')
    assert err.value.key == 'line 1'


def test_run_config_defaults():
    """
    Tests that an empty configuration gives the default run
    """
    config = RunConfig.from_file()
    assert config.geometry().to_dict() == {'a': 2., 'd': 12.5, 'n_slits': 2, 'lambda': 1.}
    assert config.source_params() == EPOCH1_PARAMS
    assert config.model == 'scalar' and config.grating == 'textbook'
    assert config.formats == {'csv', 'json', 'svg'}
    spec = config.steering_spec()
    assert spec.theta_target == 0.04 and len(spec.grid) == 2001


def test_run_config_model_spellings():
    """
    Tests that the configured model and grating names map onto the pattern functions
    """
    config = RunConfig.from_file(None, {'experiment.model': 'eq18', 'experiment.grating': 'paper-literal'})
    assert config.model == 'basis' and config.grating == 'unnormalized'
    config = RunConfig.from_file(None, {'experiment.model': 'eq27'})
    assert config.model == 'scalar' and config.grating == 'textbook'


def test_run_config_from_file(tmp_path):
    """
    Tests that a config file and the overrides are merged
    """
    path = tmp_path / 'run.cfg'
    path.write_text('geometry.d = 6.25\noptimizer.max_epochs = 50\nexperiment.theta_target = 0.02\n')
    config = RunConfig.from_file(path, {'experiment.theta_target': -0.03, 'optimizer.max_epochs': None})
    assert config['geometry.d'] == 6.25
    assert config['optimizer.max_epochs'] == 50
    assert config['experiment.theta_target'] == -0.03


@pytest.mark.parametrize('values, key', [
    ({'geometry.slits': '2'}, 'geometry.slits'),
    ({'detector.distance': '1'}, 'detector.distance'),
    ({'geometry.d': 'twelve'}, 'geometry.d'),
    ({'geometry.d': 'nan'}, 'geometry.d'),
    ({'geometry.n_slits': '0'}, 'geometry.n_slits'),
    ({'geometry.a': '13'}, 'geometry.a'),
    ({'optimizer.learning_rate': '0'}, 'optimizer.learning_rate'),
    ({'optimizer.beta1': '1'}, 'optimizer.beta1'),
    ({'optimizer.method': 'lbfgs'}, 'optimizer.method'),
    ({'source.mode': 'random'}, 'source.mode'),
    ({'experiment.theta_target': '0.5'}, 'experiment.theta_target'),
    ({'experiment.grid_max': '-0.2'}, 'experiment.grid_max'),
    ({'experiment.grid_min': '2'}, 'experiment.grid_min'),
    ({'experiment.grating': 'cosine'}, 'experiment.grating'),
    ({'output.formats': 'csv,png'}, 'output.formats'),
])
def test_run_config_rejected(values, key):
    """
    Tests that every invalid entry is rejected with its dotted key
    """
    with pytest.raises(ConfigError) as err:
        RunConfig.from_file(None, values)
    assert err.value.key == key
    assert key in str(err.value)


def test_pattern_csv_round_trip(tmp_path, geom, grid):
    """
    Tests that a pattern read back from csv is bitwise equal
    """
    for pattern in (scalar_pattern(geom, EPOCH100_PARAMS, grid),
                    basis_pattern(geom, QubitParams(0.3, 1.2, 2.9, -0.7), grid)):
        path = write_pattern_csv(pattern, tmp_path / 'pattern.csv')
        restored = read_pattern_csv(path)
        assert restored.labels == pattern.labels
        assert np.array_equal(restored.grid.theta, pattern.grid.theta)
        assert np.array_equal(restored.channels, pattern.channels)


def test_history_csv_header(tmp_path, geom):
    """
    Tests the exact header of the history file
    """
    history = train(AdamConfig(max_epochs=5), geom, EPOCH1_PARAMS, 0.04)
    path = write_history_csv(history, tmp_path / 'history.csv')
    lines = path.read_text().splitlines()
    assert lines[0] == 'epoch,loss,theta1,phi1,theta2,phi2,i00,i01,i10,i11'
    assert len(lines) == 6
    assert lines[1].startswith('1,')


def test_layer_csv(tmp_path):
    """
    Tests the layer file header and its contents
    """
    iv = intensities(two_qubit_state(EPOCH1_PARAMS))
    layer = build_layers(iv, iv, 2)[1]
    path = write_layer_csv(layer, tmp_path / 'layer_2.csv')
    assert path.read_text().splitlines()[0] == 'layer,2,16'
    k, entries = read_layer_csv(path)
    assert k == 2
    assert np.array_equal(entries, layer.entries)


def test_to_json_stamp():
    """
    Tests that the json output carries the creation date and version only when stamped
    """
    stamped = json.loads(to_json({'a': 1.}))
    assert {'a', 'date_created', 'version'} == set(stamped)
    assert json.loads(to_json({'a': 1.}, stamp=False)) == {'a': 1.}


def test_atomic_write_failure(tmp_path):
    """
    Tests that a failed write leaves neither the file nor a temporary file
    """
    def writer(f):
        f.write('partial')
        raise RuntimeError('disk full')

    with pytest.raises(RuntimeError):
        atomic_write(tmp_path / 'out.csv', writer)
    assert list(tmp_path.iterdir()) == []


def test_save_figure(tmp_path, geom, grid):
    """
    Tests that a pattern plot is written as svg
    """
    fig, _ = plot_pattern(scalar_pattern(geom, EPOCH100_PARAMS, grid), theta_target=0.04)
    path = save_figure(fig, tmp_path / 'pattern.svg')
    assert '<svg' in path.read_text()
