import csv
import json

import pytest

from main import dispatch
from models.run_manifest import RunManifest
from utilities.command_utility import COMMAND_NAMES, CommandUtility


def stdout_json(capsys) -> dict:
    return json.loads(capsys.readouterr().out)


def stderr_error(capsys) -> dict:
    lines = [line for line in capsys.readouterr().err.splitlines() if line.startswith('{')]
    return json.loads(lines[-1])


def test_every_command_has_a_strategy():
    for name in COMMAND_NAMES:
        assert CommandUtility.get_command_strategy(name).name == name
    assert CommandUtility.get_command_strategy('plot') is None


def test_probe_pauli(capsys):
    assert dispatch(['probe', '--model', 'builtin:pauli', '--lambda', '0,0,0']) == 0
    data = stdout_json(capsys)
    assert data['gap'] == pytest.approx(1.0)
    assert data['signature'] == 2
    assert data['index'] == 1
    assert data['singular'] is False


def test_probe_with_negated_orientation(capsys):
    assert dispatch(['probe', '--model', 'builtin:pauli', '--lambda', '0,0,0', '--negate-orientation']) == 0
    assert stdout_json(capsys)['signature'] == -2


def test_config_is_an_alias_of_model(capsys):
    assert dispatch(['probe', '--config', 'builtin:pauli', '--lambda', '2,0,0']) == 0
    assert stdout_json(capsys)['signature'] == 0


def test_probe_writes_manifest(tmp_path):
    out = tmp_path / 'probe.json'
    assert dispatch(['probe', '--model', 'builtin:fuzzy:3', '--lambda', '0,0,0', '--out', str(out)]) == 0
    assert json.loads(out.read_text())['signature'] == 2
    manifest = json.loads(RunManifest.path_for(out).read_text())
    assert manifest['subcommand'] == 'probe'
    assert manifest['outputs'] == [str(out)]
    assert manifest['params']['model'] == 'builtin:fuzzy:3'


def test_bad_grid_is_a_user_error(tmp_path, capsys):
    code = dispatch(['scan', '--model', 'builtin:gamma:5', '--grid', 'x1=bad', '--out', str(tmp_path / 's.csv')])
    assert code == 1
    assert stderr_error(capsys)['error'] == 'ConfigurationError'


def test_unknown_subcommand_and_missing_flags_exit_with_user_error():
    assert dispatch(['plot']) == 1
    assert dispatch(['probe', '--model', 'builtin:pauli']) == 1
    assert dispatch(['probe', '--model', 'builtin:pauli', '--lambda', '0,0']) == 1


def test_help_exits_cleanly():
    assert dispatch(['scan', '--help']) == 0


def test_unknown_model_is_a_user_error(capsys):
    assert dispatch(['probe', '--model', 'builtin:moebius', '--lambda', '0']) == 1
    assert stderr_error(capsys)['error'] == 'ConfigurationError'


def test_missing_model_file_is_a_user_error(tmp_path, capsys):
    assert dispatch(['probe', '--model', str(tmp_path / 'missing.json'), '--lambda', '0,0,0']) == 1
    assert 'not found' in stderr_error(capsys)['message']


def test_gamma(capsys):
    assert dispatch(['gamma', '--d', '5', '--explicit-5']) == 0
    data = stdout_json(capsys)
    assert data['d'] == 5 and data['r'] == 4
    assert data['orientation'] == 1
    assert dispatch(['gamma', '--d', '3', '--explicit-5']) == 1


def test_scan_then_components(tmp_path, capsys):
    out = tmp_path / 'scan.csv'
    assert dispatch(['scan', '--model', 'builtin:pauli', '--grid', 'lambda1=-2:2:41,lambda2=-2:2:41',
                     '--index', '--threads', '2', '--out', str(out)]) == 0
    with open(out, newline='') as f:
        rows = list(csv.DictReader(f))
    assert len(rows) == 41 * 41
    assert rows[0].keys() == {'lambda1', 'lambda2', 'lambda3', 'gap', 'index'}
    center = rows[20 * 41 + 20]
    assert float(center['lambda1']) == 0 and float(center['lambda2']) == 0
    assert int(center['index']) == 1
    assert RunManifest.path_for(out).exists()

    capsys.readouterr()
    assert dispatch(['components', '--in', str(out)]) == 0
    data = stdout_json(capsys)
    assert data['components'] == 1
    assert data['failed_points'] == 0


def test_scan_output_does_not_depend_on_threads(tmp_path):
    outputs = []
    for threads in ('1', '3'):
        out = tmp_path / f"scan_{threads}.csv"
        assert dispatch(['scan', '--model', 'builtin:abc:0.2', '--grid', 'lambda1=-2:2:21,lambda3=-1:1:11',
                         '--fixed', 'lambda2=0.1', '--threads', threads, '--out', str(out)]) == 0
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]


def test_lattice_scan_uses_physical_units(tmp_path):
    out = tmp_path / 'scan.csv'
    assert dispatch(['scan', '--model', 'builtin:haldane:2', '--grid', 'x=-1:1:3', '--fixed', 'E=0.5',
                     '--out', str(out)]) == 0
    with open(out, newline='') as f:
        rows = list(csv.DictReader(f))
    assert [float(row['lambda1']) for row in rows] == [-1.0, 0.0, 1.0]
    assert all(float(row['lambda3']) == 0.5 for row in rows)


def test_build_lattice(tmp_path):
    out = tmp_path / 'haldane.json'
    assert dispatch(['build', '--model', 'builtin:haldane:3', '--out', str(out)]) == 0
    data = json.loads(out.read_text())
    assert data['n'] == 18
    assert data['hamiltonian']['shape'] == [18, 18]
    assert all(len(value) == 2 for value in data['hamiltonian']['values'])
    with open(tmp_path / 'haldane.sites.csv', newline='') as f:
        sites = list(csv.reader(f))
    assert sites[0] == ['site_id', 'sublattice', 'x1', 'x2']
    assert len(sites) == 19
    assert RunManifest.path_for(out).exists()


def test_build_tuple_round_trips_through_a_model_file(tmp_path, capsys):
    out = tmp_path / 'abc.json'
    assert dispatch(['build', '--model', 'builtin:abc:0.5', '--out', str(out)]) == 0
    assert dispatch(['probe', '--model', 'builtin:abc:0.5', '--lambda', '0.3,0.2,0.1']) == 0
    builtin = stdout_json(capsys)
    assert dispatch(['probe', '--model', str(out), '--lambda', '0.3,0.2,0.1']) == 0
    assert stdout_json(capsys) == builtin


def test_rays(capsys):
    assert dispatch(['rays', '--model', 'builtin:pauli', '--n', '5', '--t-max', '2', '--step', '0.01',
                     '--eps', '0.02']) == 0
    data = stdout_json(capsys)
    assert data['counts'] == [1] * 5
    assert data['histogram'] == {'1': 5}
    assert dispatch(['rays', '--model', 'builtin:pauli', '--axes', 'x9']) == 1


def test_ray_origin_on_spectrum_is_a_numerical_error(capsys):
    code = dispatch(['rays', '--model', 'builtin:pauli', '--n', '2', '--fixed', 'lambda3=1', '--t-max', '2',
                     '--step', '0.01', '--eps', '0.02'])
    assert code == 2
    assert stderr_error(capsys)['error'] == 'RayOriginOnSpectrumError'


def test_flow(tmp_path):
    out = tmp_path / 'flow.csv'
    assert dispatch(['flow', '--model', 'builtin:pauli', '--from', '0,0,-2', '--to', '0,0,2', '--steps', '5',
                     '--k', '4', '--out', str(out)]) == 0
    with open(out, newline='') as f:
        rows = list(csv.reader(f))
    assert rows[0] == ['step', 's', 'lambda1', 'lambda2', 'lambda3', 'eig1', 'eig2', 'eig3', 'eig4']
    assert len(rows) == 6
    middle = [float(value) for value in rows[3]]
    assert middle[1] == 0.5
    assert middle[5:] == pytest.approx([-3, 1, 1, 1])


def test_verify(tmp_path, capsys):
    out = tmp_path / 'verify.json'
    assert dispatch(['verify', '--d-max', '5', '--seed', '7', '--json', str(out)]) == 0
    assert 'theorem reports passed' in capsys.readouterr().out
    reports = json.loads(out.read_text())
    assert all(report['pass'] for report in reports)
    assert json.loads(RunManifest.path_for(out).read_text())['seed'] == 7


def test_verify_refuses_large_dimensions(capsys):
    assert dispatch(['verify', '--d-max', '13']) == 1
    assert 'allow-large' in stderr_error(capsys)['message']
