import logging
import math
from typing import Tuple, List

import numpy as np
import scipy.sparse as sp
from scipy.spatial import cKDTree

from models.exceptions import DimensionMismatchError
from models.hermitian_tuple import HermitianTuple, ProbePoint
from models.lattice_model import LatticeModel, ScaledTuple

SUBLATTICES_4D = ('a', 'b', 'c', 'd')
A, B, C, D = range(4)

# (target cell shift, target sublattice, source sublattice, amplitude in units of t)
NN_IN_TERMS = (
    ((0, 0, 0, 0), C, A, -1.0),
    ((0, 0, 0, 0), B, D, 1.0),
    ((0, 0, 0, 0), D, A, -1.0),
    ((0, 0, 0, 0), B, C, -1.0),
)
NN_OUT_TERMS = (
    ((1, 1, 0, 0), A, C, -1.0),
    ((1, 1, 0, 0), D, B, 1.0),
    ((-1, 0, 0, 0), C, A, -1.0),
    ((-1, 0, 0, 0), B, D, 1.0),
    ((0, 0, 1, 1), A, D, -1.0),
    ((0, 0, 1, 1), C, B, -1.0),
    ((0, 0, -1, 0), D, A, -1.0),
    ((0, 0, -1, 0), B, C, -1.0),
)
# Amplitudes in units of t1
LR_TERMS = (
    ((1, 1, 1, 1), A, A, -1.0),
    ((1, 1, 1, 1), B, B, -1.0),
    ((1, 1, 1, 1), C, C, 1.0),
    ((1, 1, 1, 1), D, D, 1.0),
)


class ModelUtility:
    """
    Builders for every matrix ensemble studied with the localizer and the scalings
    that turn lattice models into dimensionless Hermitian tuples.
    """

    @staticmethod
    def example_abc(t: float) -> HermitianTuple:
        """
        The 3x3 triple (A, tB, tC). Commuting at t = 0; its Clifford spectrum splits into
        three spheres for small t and merges into one surface for large t.
        """
        a = np.diag([-1.0, 0.0, 1.0]).astype(complex)
        b = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=complex)
        c = np.array([[0, 1j, 0], [-1j, 0, 1j], [0, -1j, 0]], dtype=complex)
        return HermitianTuple(matrices=(a, t * b, t * c), label=f"abc t={t:g}")

    @staticmethod
    def spin_matrices(n: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        Spin-j angular momentum matrices for j = (n - 1) / 2 in the basis m = j, j - 1, ..., -j.
        """
        j = (n - 1) / 2
        m = j - np.arange(n)
        raising = np.diag(np.sqrt(j * (j + 1) - m[1:] * (m[1:] + 1)), k=1).astype(complex)
        lowering = raising.conj().T
        s_x = (raising + lowering) / 2
        s_y = (raising - lowering) / 2j
        s_z = np.diag(m).astype(complex)
        return s_x, s_y, s_z

    @staticmethod
    def fuzzy_sphere(n: int) -> HermitianTuple:
        """
        Normalized spin matrices X_k = S_k / sqrt(j(j+1)), so that sum_k X_k^2 = I.
        :param n: Matrix size, at least 2.
        """
        if n < 2:
            raise ValueError(f"A fuzzy sphere needs n >= 2, got n={n}.")
        j = (n - 1) / 2
        norm = math.sqrt(j * (j + 1))
        return HermitianTuple(matrices=tuple(s / norm for s in ModelUtility.spin_matrices(n)),
                              label=f"fuzzy sphere n={n}")

    @staticmethod
    def haldane(n1: int, n2: int, mass: float = 0.0, t: float = 1.0, t_c: float = 0.0, phi: float = 0.0,
                a: float = 1.0, chirality: int = 1) -> LatticeModel:
        """
        Finite honeycomb sample with n1 x n2 unit cells and open boundaries.
        Sites a sit at the cell origins, sites b a distance a above them; lattice vectors have length sqrt(3) a.
        Rows are shifted back by every second cell so the cut stays rectangular.
        Next-nearest-neighbor hops pick up exp(+i phi) when they turn counterclockwise
        around the hexagon (chirality = -1 flips this).
        :return: The model with the sample centered at the origin.
        """
        if n1 < 1 or n2 < 1:
            raise ValueError(f"A Haldane sample needs at least one cell per axis, got {n1}x{n2}.")
        if t == 0:
            raise ValueError("The nearest-neighbor coupling t must be nonzero.")
        a1 = np.array([math.sqrt(3) * a, 0.0])
        a2 = np.array([math.sqrt(3) * a / 2, 1.5 * a])
        coords = []
        tags = []
        for i2 in range(n2):
            for i1 in range(n1):
                origin = (i1 - i2 // 2) * a1 + i2 * a2
                coords.extend([origin, origin + np.array([0.0, a])])
                tags.extend(['a', 'b'])
        coords = np.array(coords)
        coords -= coords.mean(axis=0)

        n = len(tags)
        rows, cols, values = [], [], []
        for k, tag in enumerate(tags):
            rows.append(k)
            cols.append(k)
            values.append(mass if tag == 'a' else -mass)

        tree = cKDTree(coords)
        nearest = tree.query_pairs(1.01 * a, output_type='ndarray')
        within_second = tree.query_pairs(1.01 * math.sqrt(3) * a, output_type='ndarray')
        for i, j in nearest:
            rows.extend([i, j])
            cols.extend([j, i])
            values.extend([-t, -t])

        next_nearest = [(i, j) for i, j in within_second if np.linalg.norm(coords[i] - coords[j]) > 1.01 * a]
        if t_c != 0:
            for i, j in next_nearest:
                turn = ModelUtility.__hop_turn(coords[i], coords[j], tags[i], a)
                amplitude = -t_c * np.exp(1j * turn * chirality * phi)
                rows.extend([j, i])
                cols.extend([i, j])
                values.extend([amplitude, np.conj(amplitude)])

        hamiltonian = sp.csr_matrix(sp.coo_matrix((values, (rows, cols)), shape=(n, n), dtype=complex))
        logging.debug(f"Haldane {n1}x{n2}: {n} sites, {len(nearest)} nearest and {len(next_nearest)} "
                      f"next-nearest bonds.")
        return LatticeModel(coords=coords, sublattices=tuple(tags), hamiltonian=hamiltonian,
                            params=dict(model='haldane', n1=n1, n2=n2, M=mass, t=t, t_c=t_c, phi=phi,
                                        chirality=chirality),
                            lattice_constant=a, label=f"haldane {n1}x{n2}")

    @staticmethod
    def __hop_turn(start: np.ndarray, end: np.ndarray, tag: str, a: float) -> int:
        """
        Sign of the turn taken by the two nearest-neighbor legs of a next-nearest-neighbor hop.
        The middle site is reconstructed from the lattice, so hops along the sample edge work too.
        """
        legs = np.array([[0.0, a], [-math.sqrt(3) * a / 2, -a / 2], [math.sqrt(3) * a / 2, -a / 2]])
        if tag == 'b':
            legs = -legs
        for leg in legs:
            middle = start + leg
            second = end - middle
            if abs(np.linalg.norm(second) - a) < 1e-6 * a:
                return int(np.sign(leg[0] * second[1] - leg[1] * second[0]))
        raise ValueError(f"No middle site found for the hop {start} -> {end}.")

    @staticmethod
    def lattice4d(n: int, mass: float = 0.5, t: float = 1.0, t1: complex = 0.8, a: float = 1.0) -> LatticeModel:
        """
        The four-site-per-cell 4D lattice on N^4 cells with open boundaries.
        Basis index of site s in cell (m, n, j, l) is (((m N + n) N + j) N + l) * 4 + s.
        Every term is inserted together with its Hermitian conjugate; terms leaving the sample are dropped.
        Real t1 gives a real symmetric (class AI) Hamiltonian, complex t1 a class A one.
        """
        if n < 1:
            raise ValueError(f"The 4D lattice needs at least one cell per axis, got N={n}.")
        cells = np.indices((n, n, n, n)).reshape(4, -1).T
        cell_index = np.arange(n ** 4)
        size = 4 * n ** 4

        rows = [4 * cell_index + s for s in range(4)]
        cols = list(rows)
        values = [np.full(n ** 4, mass if s in (A, B) else -mass, dtype=complex) for s in range(4)]

        def insert(terms, scale):
            for shift, target, source, amplitude in terms:
                shifted = cells + np.asarray(shift)
                valid = np.all((shifted >= 0) & (shifted < n), axis=1)
                target_cells = np.ravel_multi_index(shifted[valid].T, (n, n, n, n))
                target_rows = 4 * target_cells + target
                source_cols = 4 * cell_index[valid] + source
                value = amplitude * scale
                rows.extend([target_rows, source_cols])
                cols.extend([source_cols, target_rows])
                values.extend([np.full(target_rows.size, value, dtype=complex),
                               np.full(target_rows.size, np.conj(value), dtype=complex)])

        insert(NN_IN_TERMS, t)
        insert(NN_OUT_TERMS, t)
        insert(LR_TERMS, t1)
        hamiltonian = sp.csr_matrix(sp.coo_matrix(
            (np.concatenate(values), (np.concatenate(rows), np.concatenate(cols))),
            shape=(size, size), dtype=complex))

        cell_coords = (cells - (n - 1) / 2) * a
        coords = np.repeat(cell_coords, 4, axis=0)
        tags = SUBLATTICES_4D * n ** 4
        t1_label = 'real' if np.imag(t1) == 0 else 'complex'
        return LatticeModel(coords=coords, sublattices=tags, hamiltonian=hamiltonian,
                            params=dict(model='lattice4d', N=n, M=mass, t=t, t1=complex(t1)),
                            lattice_constant=a, label=f"lattice4d N={n} {t1_label} t1")

    @staticmethod
    def model_tuple(model: LatticeModel) -> HermitianTuple:
        """
        :return: The unscaled tuple (X_1, ..., X_D, H).
        """
        return HermitianTuple(matrices=(*model.positions, model.hamiltonian), label=model.label)

    @staticmethod
    def scale_2d(model: LatticeModel, kappa_x: float, kappa_h: float,
                 probe=(0.0, 0.0, 0.0)) -> Tuple[ScaledTuple, ProbePoint]:
        """
        Forms (kappa_X X, kappa_X Y, kappa_H H) and lambda = (kappa_X x, kappa_X y, kappa_H E).
        :param kappa_x: Inverse distance.
        :param kappa_h: Inverse energy.
        :param probe: Physical (x, y, E).
        """
        if model.dimension != 2:
            raise DimensionMismatchError(f"scale_2d needs a 2D model, got D={model.dimension}.")
        if len(probe) != 3:
            raise DimensionMismatchError(f"A 2D probe has 3 coordinates (x, y, E), got {len(probe)}.")
        x, y = model.positions
        scaled = ScaledTuple(
            tuple=HermitianTuple(matrices=(kappa_x * x, kappa_x * y, kappa_h * model.hamiltonian),
                                 label=f"{model.label} kX={kappa_x:g} kH={kappa_h:g}"),
            kappas=dict(kappa_x=kappa_x, kappa_h=kappa_h),
            axis_names=['x', 'y', 'E'],
            axis_scales=(kappa_x, kappa_x, kappa_h)
        )
        return scaled, ProbePoint.of(scaled.to_lambda(probe))

    @staticmethod
    def scale_4d(model: LatticeModel, kappa: float,
                 probe=(0.0, 0.0, 0.0, 0.0, 0.0)) -> Tuple[ScaledTuple, ProbePoint]:
        """
        Forms (kappa X_1, ..., kappa X_4, H) and lambda = (kappa x_1, ..., kappa x_4, E).
        kappa multiplies positions only; the Hamiltonian stays in units of energy.
        :param kappa: Energy per distance.
        :param probe: Physical (x_1, x_2, x_3, x_4, E).
        """
        if model.dimension != 4:
            raise DimensionMismatchError(f"scale_4d needs a 4D model, got D={model.dimension}.")
        if len(probe) != 5:
            raise DimensionMismatchError(f"A 4D probe has 5 coordinates (x1..x4, E), got {len(probe)}.")
        scaled = ScaledTuple(
            tuple=HermitianTuple(matrices=(*(kappa * x for x in model.positions), model.hamiltonian),
                                 label=f"{model.label} kappa={kappa:g}"),
            kappas=dict(kappa=kappa),
            axis_names=['x1', 'x2', 'x3', 'x4', 'E'],
            axis_scales=(kappa, kappa, kappa, kappa, 1.0)
        )
        return scaled, ProbePoint.of(scaled.to_lambda(probe))

    @staticmethod
    def central_row(model: LatticeModel) -> Tuple[float, List[float]]:
        """
        The row of sites whose y coordinate lies nearest the vertical center of the sample.
        :return: The row's y and the sorted x coordinates of its sites.
        """
        ys = np.unique(np.round(model.coords[:, 1], 9))
        y = float(ys[np.argmin(np.abs(ys))])
        in_row = np.abs(model.coords[:, 1] - y) < 1e-6 * model.lattice_constant
        return y, sorted(float(x) for x in model.coords[in_row, 0])

    @staticmethod
    def get_model_source_strategy(source: str):
        """
        Returns the model source for a builtin preset name or a JSON file path.
        :param source: 'builtin:<name>[:<argument>]' or a path.
        :return: The model source strategy.
        """
        if source.startswith('builtin:'):
            from strategies.model_source.builtin_model_source_strategy import BuiltinModelSourceStrategy
            return BuiltinModelSourceStrategy(source)
        from strategies.model_source.file_model_source_strategy import FileModelSourceStrategy
        return FileModelSourceStrategy(source)
