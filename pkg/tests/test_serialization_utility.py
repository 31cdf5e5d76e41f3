import json

import numpy as np
import pytest

from models.exceptions import ConfigurationError
from models.hermitian_tuple import HermitianTuple
from models.scan import ScanGrid
from models.run_manifest import RunManifest
from strategies.model_source.builtin_model_source_strategy import BuiltinModelSourceStrategy
from strategies.model_source.model_source_strategy import ModelSourceStrategy
from utilities.clifford_utility import CliffordUtility
from utilities.model_utility import ModelUtility
from utilities.serialization_utility import SerializationUtility
from utilities.spectrum_utility import SpectrumUtility


def test_complex_values():
    assert SerializationUtility.complex_value([0.5, -1.0]) == complex(0.5, -1.0)
    assert SerializationUtility.complex_value(0.8) == complex(0.8)
    with pytest.raises(ConfigurationError):
        SerializationUtility.complex_value([1.0])
    with pytest.raises(ConfigurationError):
        SerializationUtility.from_complex_pairs([[1.0, 2.0, 3.0]])


def test_lattice_model_json_rebuilds_the_hamiltonian():
    model = ModelUtility.lattice4d(2, t1=0.8 * np.exp(0.1j * np.pi))
    data = json.loads(json.dumps(SerializationUtility.model_to_dict(model)))
    assert data['params']['t1'] == pytest.approx([0.8 * np.cos(0.1 * np.pi), 0.8 * np.sin(0.1 * np.pi)])
    rebuilt = SerializationUtility.hamiltonian_from_dict(data)
    assert abs(rebuilt - model.hamiltonian).max() == 0


def test_scan_csv_marks_missing_indices(tmp_path):
    rep = CliffordUtility.pauli_rep()
    tuple_ = HermitianTuple(matrices=rep.gammas)
    grid = ScanGrid(d=3, axes=(0,), ranges=((-2, 2),), resolution=(5,))
    result = SpectrumUtility.scan(tuple_, rep, grid, with_index=True, threads=1)
    path = tmp_path / 'scan.csv'
    SerializationUtility.write_scan_csv(result, path)
    points, gaps, indices = SerializationUtility.read_scan_csv(path)
    assert points.shape == (5, 3)
    assert np.allclose(gaps, [1, 0, 1, 0, 1], atol=1e-12)
    assert indices == [0, None, 1, None, 0]


def test_read_scan_csv_rejects_other_files(tmp_path):
    path = tmp_path / 'other.csv'
    path.write_text('a,b\n1,2\n')
    with pytest.raises(ConfigurationError):
        SerializationUtility.read_scan_csv(path)
    with pytest.raises(ConfigurationError):
        SerializationUtility.read_scan_csv(tmp_path / 'missing.csv')


def test_read_json_rejects_invalid_files(tmp_path):
    path = tmp_path / 'broken.json'
    path.write_text('{')
    with pytest.raises(ConfigurationError):
        SerializationUtility.read_json(path)


def test_manifest_hash_ignores_key_order(tmp_path):
    assert RunManifest.hash_config({'a': 1, 'b': 2}) == RunManifest.hash_config({'b': 2, 'a': 1})
    manifest = RunManifest(subcommand='scan', params={'grid': 'x=0:1:2'}, seed=7, config_hash='h')
    path = manifest.write(tmp_path / 'scan.csv')
    assert path.name == 'scan.csv.manifest.json'
    assert json.loads(path.read_text())['version'] == manifest.version


@pytest.mark.parametrize('name, d, rep_name', [
    ('builtin:pauli', 3, 'pauli'),
    ('builtin:gamma:4', 4, 'recursive'),
    ('builtin:abc:0.25', 3, 'pauli'),
    ('builtin:fuzzy:5', 3, 'pauli'),
    ('builtin:haldane:2', 3, 'pauli'),
    ('builtin:ai4d:2', 5, 'gamma5'),
    ('builtin:a4d:2', 5, 'gamma5'),
])
def test_builtin_models(name, d, rep_name):
    model = BuiltinModelSourceStrategy(name).load()
    assert model.tuple.d == d
    assert model.rep_name == rep_name
    assert len(model.axis_names) == d


def test_builtin_4d_presets_scale_positions_only():
    model = BuiltinModelSourceStrategy('builtin:ai4d:2').load()
    assert model.axis_names == ['x1', 'x2', 'x3', 'x4', 'E']
    assert model.axis_scales == (0.1, 0.1, 0.1, 0.1, 1.0)
    assert np.allclose(model.to_physical(model.to_lambda([1, 2, 3, 4, 5])), [1, 2, 3, 4, 5])


@pytest.mark.parametrize('name', ['builtin:gamma', 'builtin:gamma:five', 'builtin:unknown', 'builtin'])
def test_invalid_builtin_names(name):
    with pytest.raises(ConfigurationError):
        BuiltinModelSourceStrategy(name).load()


@pytest.mark.parametrize('config', [
    {'params': {}},
    {'model': 'lattice4d', 'params': {'N': 'many'}},
    {'model': 'haldane', 'params': {'n1': 0}},
    {'model': 'tuple', 'params': {}},
])
def test_invalid_model_records(config):
    with pytest.raises(ConfigurationError):
        ModelSourceStrategy.build(config)


def test_file_model_source(tmp_path):
    path = tmp_path / 'model.json'
    path.write_text(json.dumps({'model': 'haldane', 'params': {'n1': 2, 'n2': 3, 't_c': 0.0},
                                'scale': {'kappa_x': 0.5, 'kappa_h': 2.0}}))
    model = ModelUtility.get_model_source_strategy(str(path)).load()
    assert model.lattice.n == 12
    assert model.axis_scales == (0.5, 0.5, 2.0)
