import tempfile

import numpy as np
import pytest

from models.exceptions import ConfigurationError, NumericalError, RayOriginOnSpectrumError
from models.hermitian_tuple import HermitianTuple, ProbePoint
from models.scan import ScanGrid
from utilities.clifford_utility import CliffordUtility
from utilities.config import Config
from utilities.localizer_utility import LocalizerUtility
from utilities.model_utility import ModelUtility
from utilities.spectrum_utility import SpectrumUtility
from utilities.verification_utility import VerificationUtility

CLASS_A_T1 = 0.8 * np.exp(0.1j * np.pi)


@pytest.fixture
def pauli():
    rep = CliffordUtility.pauli_rep()
    return HermitianTuple(matrices=rep.gammas, label='pauli'), rep


def lattice_index(n, t1, physical, force=None):
    model = ModelUtility.lattice4d(n, mass=0.5, t=1.0, t1=t1)
    scaled, probe = ModelUtility.scale_4d(model, 0.1, probe=physical)
    return LocalizerUtility.index(scaled.tuple, probe, CliffordUtility.gamma5_explicit(), force=force)


def index_sequence(n, t1, xs):
    model = ModelUtility.lattice4d(n, mass=0.5, t=1.0, t1=t1)
    scaled, _ = ModelUtility.scale_4d(model, 0.1)
    rep = CliffordUtility.gamma5_explicit()
    sequence = []
    for x in xs:
        report = LocalizerUtility.probe(scaled.tuple, ProbePoint.of(scaled.to_lambda((x, 0, 0, 0, 0))), rep, k=1)
        if report.index is not None and (not sequence or sequence[-1] != report.index):
            sequence.append(report.index)
    return sequence


@pytest.mark.parametrize('kwargs', [
    dict(axes=(), ranges=(), resolution=()),
    dict(axes=(0,), ranges=((0, 1),), resolution=(1,)),
    dict(axes=(0, 0), ranges=((0, 1), (0, 1)), resolution=(3, 3)),
    dict(axes=(0,), ranges=((1, 0),), resolution=(3,)),
    dict(axes=(3,), ranges=((0, 1),), resolution=(3,)),
    dict(axes=(0,), ranges=((0, 1),), resolution=(3,), fixed={0: 0.5}),
])
def test_scan_grid_validation(kwargs):
    with pytest.raises(ConfigurationError):
        ScanGrid(d=3, **kwargs)


def test_scan_grid_points_are_in_c_order():
    grid = ScanGrid(d=3, axes=(2, 0), ranges=((0, 1), (-1, 1)), resolution=(2, 3), fixed={1: 0.25})
    assert grid.shape == (2, 3) and grid.size == 6
    assert grid.steps == (1.0, 1.0)
    assert np.allclose(grid.points(), [[-1, 0.25, 0], [0, 0.25, 0], [1, 0.25, 0],
                                       [-1, 0.25, 1], [0, 0.25, 1], [1, 0.25, 1]])


def test_scan_matches_closed_form_and_ignores_thread_count(pauli):
    tuple_, rep = pauli
    grid = ScanGrid(d=3, axes=(0, 1), ranges=((-2, 2), (-2, 2)), resolution=(21, 21))
    single = SpectrumUtility.scan(tuple_, rep, grid, with_index=True, threads=1)
    pooled = SpectrumUtility.scan(tuple_, rep, grid, with_index=True, threads=4)
    assert np.array_equal(single.gap, pooled.gap)
    assert np.array_equal(single.index.filled(-9), pooled.index.filled(-9))

    radii = np.linalg.norm(grid.points(), axis=1).reshape(grid.shape)
    assert np.allclose(single.gap, np.abs(radii - 1), atol=1e-10)
    assert single.failures == 0
    assert np.all(single.index[radii < 0.9] == 1)
    assert np.all(single.index[radii > 1.1] == 0)


def test_scan_over_three_axes_uses_memory_mapped_slabs(pauli, tmp_path, monkeypatch):
    monkeypatch.setattr(tempfile, 'tempdir', str(tmp_path))
    tuple_, rep = pauli
    grid = ScanGrid(d=3, axes=(0, 1, 2), ranges=((-1.5, 1.5),) * 3, resolution=(5, 5, 5))
    result = SpectrumUtility.scan(tuple_, rep, grid, with_index=True, threads=2)
    assert result.meta['slabs'] == 5
    radii = np.linalg.norm(grid.points(), axis=1).reshape(grid.shape)
    assert np.allclose(result.gap, np.abs(radii - 1), atol=1e-10)
    assert result.index[2, 2, 2] == 1
    assert result.meta['slab_files'] == []
    assert list(tmp_path.iterdir()) == []


def test_scan_keeps_slab_files_in_the_configured_directory(pauli, tmp_path, monkeypatch):
    monkeypatch.setitem(Config().value['scan'], 'slab_dir', str(tmp_path))
    tuple_, rep = pauli
    grid = ScanGrid(d=3, axes=(0, 1, 2), ranges=((-1.5, 1.5),) * 3, resolution=(3, 3, 3))
    result = SpectrumUtility.scan(tuple_, rep, grid, with_index=True, threads=1)
    assert len(result.meta['slab_files']) == 2
    assert sorted(path.name[:4] for path in tmp_path.iterdir()) == ['gap_', 'inde']
    kept = np.memmap(result.meta['slab_files'][0], dtype=np.float64, mode='r', shape=grid.shape)
    assert np.array_equal(kept, result.gap)


def test_scan_rejects_wrong_grid_dimension(pauli):
    tuple_, rep = pauli
    with pytest.raises(ValueError):
        SpectrumUtility.scan(tuple_, rep, ScanGrid(d=2, axes=(0,), ranges=((0, 1),), resolution=(3,)))


def test_component_count_on_point_clouds():
    first = np.random.default_rng(1).normal(scale=0.05, size=(50, 2))
    second = first + np.array([3.0, 0.0])
    count, labels = SpectrumUtility.component_count(np.vstack([first, second]), 0.5)
    assert count == 2
    assert len(set(labels[:50])) == 1 and labels[0] != labels[50]
    assert SpectrumUtility.component_count(np.empty((0, 2)), 0.5)[0] == 0
    with pytest.raises(ValueError):
        SpectrumUtility.component_count(first, 0.0)


@pytest.mark.parametrize('t, expected', [(1 / 7, 3), (0.2, 3), (0.3, 1), (1.0, 1)])
def test_scaling_example_changes_topology(t, expected):
    tuple_ = ModelUtility.example_abc(t)
    grid = ScanGrid(d=3, axes=(0, 1), ranges=((-2, 2), (-2, 2)), resolution=(161, 161))
    result = SpectrumUtility.scan(tuple_, CliffordUtility.pauli_rep(), grid)
    points = SpectrumUtility.zero_set(result)
    count, _ = SpectrumUtility.component_count(points, SpectrumUtility.default_linking_radius(grid))
    assert count == expected


def test_resolvent_regions_and_locally_constant_index(pauli):
    tuple_, rep = pauli
    grid = ScanGrid(d=3, axes=(0, 1), ranges=((-2, 2), (-2, 2)), resolution=(41, 41))
    result = SpectrumUtility.scan(tuple_, rep, grid, with_index=True)
    _, count = SpectrumUtility.resolvent_regions(result)
    assert count == 2
    assert SpectrumUtility.index_jumps(result) == []
    with pytest.raises(ValueError):
        SpectrumUtility.index_jumps(SpectrumUtility.scan(tuple_, rep, grid))


def test_zero_set_rejects_bad_eps(pauli):
    tuple_, rep = pauli
    grid = ScanGrid(d=3, axes=(0,), ranges=((-2, 2),), resolution=(9,))
    result = SpectrumUtility.scan(tuple_, rep, grid)
    assert len(SpectrumUtility.zero_set(result, eps=0.01)) == 2
    with pytest.raises(ValueError):
        SpectrumUtility.zero_set(result, eps=0.0)


def test_infer_step():
    grid = ScanGrid(d=3, axes=(0, 2), ranges=((-1, 1), (0, 1)), resolution=(5, 11))
    assert SpectrumUtility.infer_step(grid.points()) == pytest.approx(0.1)


def test_ray_crossings(pauli):
    tuple_, rep = pauli
    direction = np.array([1.0, 1.0, 0.0]) / np.sqrt(2)
    assert SpectrumUtility.ray_crossings(tuple_, rep, direction, t_max=3.0, step=0.01, eps=0.02) == 1
    assert SpectrumUtility.ray_crossings(tuple_, rep, [1.0, 0, 0], t_max=4.0, step=0.01, eps=0.02,
                                         origin=[-2.0, 0, 0]) == 2
    with pytest.raises(RayOriginOnSpectrumError):
        SpectrumUtility.ray_crossings(tuple_, rep, direction, t_max=2.0, step=0.01, eps=0.02, origin=[0, 0, 1])
    with pytest.raises(ValueError):
        SpectrumUtility.ray_crossings(tuple_, rep, [1.0, 1.0, 0], t_max=2.0, step=0.01, eps=0.02)


def test_failed_ray_samples_keep_the_previous_state(pauli, monkeypatch):
    tuple_, rep = pauli
    gaps = np.array([1.0, 0.5, 0.01, np.nan, 0.01, 0.5, np.nan, 0.6, 0.01, np.nan])
    monkeypatch.setattr(SpectrumUtility, 'gaps_at', staticmethod(lambda *args, **kwargs: gaps))
    assert SpectrumUtility.ray_crossings(tuple_, rep, [1.0, 0, 0], t_max=0.9, step=0.1, eps=0.02) == 2

    monkeypatch.setattr(SpectrumUtility, 'gaps_at', staticmethod(lambda *args, **kwargs: np.full(10, np.nan)))
    with pytest.raises(NumericalError):
        SpectrumUtility.ray_crossings(tuple_, rep, [1.0, 0, 0], t_max=0.9, step=0.1, eps=0.02)


@pytest.mark.parametrize('tuple_, origin, direction', [
    (HermitianTuple(matrices=CliffordUtility.pauli_rep().gammas), [0, 0, 0], [0.6, 0, 0.8]),
    (ModelUtility.example_abc(0.2), [-2.0, 0, 0], [1.0, 0, 0]),
])
def test_ray_crossings_survive_halving_the_step(tuple_, origin, direction):
    rep = CliffordUtility.pauli_rep()
    counts = [SpectrumUtility.ray_crossings(tuple_, rep, direction, t_max=4.0, step=step, eps=0.05,
                                            origin=origin, threads=2)
              for step in (0.02, 0.01, 0.005)]
    assert counts[0] > 0
    assert counts[0] == counts[1] == counts[2]


@pytest.mark.parametrize('d', [2, 4])
def test_even_gamma_rays_away_from_the_origin_never_cross(d):
    rep = CliffordUtility.build_rep(d)
    tuple_ = HermitianTuple(matrices=rep.gammas)
    for direction in SpectrumUtility.random_directions(5, d, range(d), seed=d):
        count = SpectrumUtility.ray_crossings(tuple_, rep, direction, t_max=3.0, step=0.01, eps=0.02,
                                              origin=1.5 * direction, threads=2)
        assert count == 0


def test_gap_is_one_lipschitz():
    rng = np.random.default_rng(21)
    tuple_ = HermitianTuple(matrices=tuple(VerificationUtility.random_hermitian(6, rng) for _ in range(3)))
    rep = CliffordUtility.pauli_rep()
    for _ in range(100):
        first = rng.uniform(-3, 3, size=3)
        second = first + rng.normal(scale=0.3, size=3)
        difference = abs(LocalizerUtility.gap(tuple_, ProbePoint.of(first), rep)
                         - LocalizerUtility.gap(tuple_, ProbePoint.of(second), rep))
        assert difference <= np.linalg.norm(first - second) + 1e-10


@pytest.mark.parametrize('lambda1, radius', [(0.0, 0.5), (0.7, 0.2), (-1.2, 1.0), (0.3, 2.0)])
def test_scaling_example_is_axially_symmetric(lambda1, radius):
    tuple_ = ModelUtility.example_abc(0.3)
    rep = CliffordUtility.pauli_rep()
    gaps = [LocalizerUtility.gap(tuple_, ProbePoint.of([lambda1, radius * np.cos(theta), radius * np.sin(theta)]), rep)
            for theta in np.linspace(0, 2 * np.pi, 13)]
    assert max(gaps) - min(gaps) <= 1e-9


def test_zero_set_grows_with_eps():
    grid = ScanGrid(d=3, axes=(0, 1), ranges=((-2, 2), (-2, 2)), resolution=(41, 41))
    result = SpectrumUtility.scan(ModelUtility.example_abc(0.2), CliffordUtility.pauli_rep(), grid, threads=2)
    previous = set()
    for eps in (0.02, 0.05, 0.1, 0.2, 0.4):
        points = {tuple(point) for point in SpectrumUtility.zero_set(result, eps=eps)}
        assert previous <= points
        previous = points
    assert previous


def test_random_directions_are_unit_and_supported_on_axes():
    directions = SpectrumUtility.random_directions(20, 5, [0, 1, 2, 3], seed=7)
    assert directions.shape == (20, 5)
    assert np.allclose(np.linalg.norm(directions, axis=1), 1)
    assert np.all(directions[:, 4] == 0)
    assert np.array_equal(directions, SpectrumUtility.random_directions(20, 5, [0, 1, 2, 3], seed=7))


def test_spectral_flow_along_the_z_axis(pauli):
    tuple_, rep = pauli
    parameters, eigenvalues = SpectrumUtility.spectral_flow(tuple_, rep, [0, 0, -2], [0, 0, 2], 9, k=4)
    assert np.allclose(parameters, np.linspace(0, 1, 9))
    assert eigenvalues.shape == (9, 4)
    for s, row in zip(parameters, eigenvalues):
        z = -2 + 4 * s
        root = np.sqrt(z * z + 4)
        assert np.allclose(row, np.sort([1 - z, 1 + z, -1 + root, -1 - root]))
    with pytest.raises(ValueError):
        SpectrumUtility.spectral_flow(tuple_, rep, [0, 0, 0], [0, 0, 1], 1)


@pytest.fixture(scope='module')
def class_a_lattice():
    model = ModelUtility.lattice4d(5, mass=0.5, t=1.0, t1=CLASS_A_T1)
    scaled, _ = ModelUtility.scale_4d(model, 0.1)
    return scaled


def class_a_index(scaled, x1):
    probe = ProbePoint.of(scaled.to_lambda((x1, 0, 0, 0, 0)))
    return LocalizerUtility.index(scaled.tuple, probe, CliffordUtility.gamma5_explicit())


def test_class_ai_lattice_index_at_the_origin():
    assert lattice_index(5, 0.8, (0, 0, 0, 0, 0)) == 2


def test_smaller_lattices_are_too_small_for_an_index():
    assert lattice_index(3, 0.8, (0, 0, 0, 0, 0)) == 0


def test_class_a_lattice_index_inside_between_and_outside(class_a_lattice):
    assert class_a_index(class_a_lattice, 0.0) == 2
    assert class_a_index(class_a_lattice, 3.0) == 0
    # the index only steps down along x1, so bisection lands between the two spheroids
    inside, outside = 0.0, 3.0
    index = None
    for _ in range(10):
        middle = (inside + outside) / 2
        index = class_a_index(class_a_lattice, middle)
        if index == 1:
            break
        if index == 2:
            inside = middle
        else:
            outside = middle
    assert index == 1


def test_four_dimensional_flow_matches_the_index_change():
    model = ModelUtility.lattice4d(2, mass=0.5, t=1.0, t1=0.8)
    scaled, _ = ModelUtility.scale_4d(model, 0.1)
    rep = CliffordUtility.gamma5_explicit()
    start, end = scaled.to_lambda((0, 0, 0, 0, 0)), scaled.to_lambda((3.1, 0, 0, 0, 0))
    size = scaled.tuple.n * rep.r
    _, eigenvalues = SpectrumUtility.spectral_flow(scaled.tuple, rep, start, end, 31, k=size, threads=2)
    negatives = np.count_nonzero(eigenvalues < 0, axis=1)
    change = LocalizerUtility.signature(scaled.tuple, ProbePoint.of(end), rep) - \
        LocalizerUtility.signature(scaled.tuple, ProbePoint.of(start), rep)
    assert change == -2 * int(np.sum(np.diff(negatives)))


def test_gamma_flow_crosses_zero_once_per_index_unit():
    rep = CliffordUtility.build_rep(5)
    tuple_ = VerificationUtility.gamma_tuple(5)
    start, end = np.zeros(5), np.array([2.9, 0, 0, 0, 0])
    _, eigenvalues = SpectrumUtility.spectral_flow(tuple_, rep, start, end, 60, k=16, threads=2)
    negatives = np.count_nonzero(eigenvalues < 0, axis=1)
    assert LocalizerUtility.index(tuple_, ProbePoint.of(start), rep) == 3
    assert LocalizerUtility.index(tuple_, ProbePoint.of(end), rep) == 0
    assert int(np.sum(np.diff(negatives))) == 3
    assert int(np.sum(np.abs(np.diff(negatives)))) == 3


@pytest.mark.slow
def test_class_ai_preset_lattice_rays_cross_once():
    model = ModelUtility.lattice4d(5, mass=0.5, t=1.0, t1=0.8)
    scaled, _ = ModelUtility.scale_4d(model, 0.1)
    rep = CliffordUtility.gamma5_explicit()
    directions = SpectrumUtility.random_directions(20, 5, [0, 1, 2, 3], seed=7)
    # E stays at 0, so the rays only need to leave the span of the scaled positions
    t_max = 2.5 * max(scaled.tuple.norms[:4])
    step = 0.02
    counts = [SpectrumUtility.ray_crossings(scaled.tuple, rep, direction, t_max, step, step)
              for direction in directions]
    assert counts == [1] * 20


@pytest.mark.slow
def test_class_a_preset_lattice_index_sequence():
    assert index_sequence(5, CLASS_A_T1, np.linspace(0, 3, 31)) == [2, 1, 0]


@pytest.mark.slow
def test_class_ai_preset_commutator_norms():
    model = ModelUtility.lattice4d(5, mass=0.5, t=1.0, t1=0.8)
    tuple_ = ModelUtility.model_tuple(model)
    norms = LocalizerUtility.obstruction_norms(tuple_)
    for j in range(4):
        assert norms.matrix_norms[j] == pytest.approx(2.0, abs=1e-12)
        relative = norms.relative_commutators[(j, 4)]
        if j % 2 == 0:
            assert 0.27 <= relative <= 0.31
        else:
            assert 0.19 <= relative <= 0.23
    assert 3.8 <= norms.matrix_norms[4] <= 4.2
