import csv
import json
from pathlib import Path
from typing import Tuple, List

import numpy as np
import scipy.sparse as sp

from models.clifford_rep import CliffordRep
from models.exceptions import ConfigurationError
from models.lattice_model import LatticeModel
from models.scan import ScanResult

FLOAT_FORMAT = '%.17g'


class SerializationUtility:
    """
    JSON and CSV formats of the command line. Complex numbers are [re, im] pairs in JSON;
    CSV files hold real quantities only.
    """

    @staticmethod
    def complex_pairs(array) -> list:
        array = np.asarray(array, dtype=complex)
        return np.stack([array.real, array.imag], axis=-1).tolist()

    @staticmethod
    def from_complex_pairs(pairs) -> np.ndarray:
        array = np.asarray(pairs, dtype=float)
        if array.shape[-1] != 2:
            raise ConfigurationError(f"Complex entries must be [re, im] pairs, got shape {array.shape}.")
        return array[..., 0] + 1j * array[..., 1]

    @staticmethod
    def complex_value(value) -> complex:
        """
        Reads a complex parameter written either as a number or as an [re, im] pair.
        """
        if isinstance(value, (list, tuple)):
            if len(value) != 2:
                raise ConfigurationError(f"A complex parameter needs [re, im], got {value}.")
            return complex(float(value[0]), float(value[1]))
        return complex(value)

    @staticmethod
    def rep_to_dict(rep: CliffordRep) -> dict:
        return {
            'd': rep.d,
            'r': rep.r,
            'gammas': [SerializationUtility.complex_pairs(gamma) for gamma in rep.gammas],
            'orientation': rep.orientation,
            'construction': rep.construction,
        }

    @staticmethod
    def model_to_dict(model: LatticeModel) -> dict:
        """
        The Hamiltonian as COO triplets with complex values, in the basis order of the site table.
        """
        coo = sp.coo_matrix(model.hamiltonian)
        params = {key: SerializationUtility.complex_pairs(value) if isinstance(value, complex) else value
                  for key, value in model.params.items()}
        return {
            'label': model.label,
            'params': params,
            'lattice_constant': model.lattice_constant,
            'dimension': model.dimension,
            'n': model.n,
            'hamiltonian': {
                'shape': list(coo.shape),
                'rows': coo.row.tolist(),
                'cols': coo.col.tolist(),
                'values': SerializationUtility.complex_pairs(coo.data),
            },
        }

    @staticmethod
    def hamiltonian_from_dict(data: dict) -> sp.csr_matrix:
        hamiltonian = data['hamiltonian']
        values = SerializationUtility.from_complex_pairs(hamiltonian['values']) if hamiltonian['values'] else []
        return sp.csr_matrix(sp.coo_matrix((values, (hamiltonian['rows'], hamiltonian['cols'])),
                                           shape=tuple(hamiltonian['shape']), dtype=complex))

    @staticmethod
    def write_json(path: str | Path, data) -> None:
        with open(path, 'w', encoding='utf8') as f:
            json.dump(data, f, indent=2)

    @staticmethod
    def read_json(path: str | Path) -> dict:
        try:
            with open(path, 'r', encoding='utf8') as f:
                return json.load(f)
        except FileNotFoundError as e:
            raise ConfigurationError(f"File not found: {path}") from e
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"{path} is not valid JSON: {e}") from e

    @staticmethod
    def sites_path(model_path: str | Path) -> Path:
        model_path = Path(model_path)
        return model_path.with_name(model_path.stem + '.sites.csv')

    @staticmethod
    def write_sites_csv(model: LatticeModel, path: str | Path) -> None:
        with open(path, 'w', encoding='utf8', newline='') as f:
            writer = csv.writer(f)
            writer.writerow(['site_id', 'sublattice', *[f"x{j + 1}" for j in range(model.dimension)]])
            for site_id, tag, *coords in model.sites():
                writer.writerow([site_id, tag, *[FLOAT_FORMAT % value for value in coords]])

    @staticmethod
    def write_scan_csv(result: ScanResult, path: str | Path) -> None:
        """
        One row per grid point in C order: lambda1..lambdad, gap, index. index is empty when
        it was not computed or the point is singular.
        """
        grid = result.grid
        gap = np.asarray(result.gap).ravel()
        index = None if result.index is None else result.index.ravel()
        with open(path, 'w', encoding='utf8', newline='') as f:
            writer = csv.writer(f)
            writer.writerow([*[f"lambda{j + 1}" for j in range(grid.d)], 'gap', 'index'])
            for flat_index in range(grid.size):
                point = grid.point(flat_index)
                value = '' if index is None or index[flat_index] is np.ma.masked else int(index[flat_index])
                writer.writerow([*[FLOAT_FORMAT % x for x in point], FLOAT_FORMAT % gap[flat_index], value])

    @staticmethod
    def read_scan_csv(path: str | Path) -> Tuple[np.ndarray, np.ndarray, List[int | None]]:
        """
        :return: The lambda points, the gaps and the indices (None where empty).
        """
        try:
            with open(path, 'r', encoding='utf8', newline='') as f:
                rows = list(csv.reader(f))
        except FileNotFoundError as e:
            raise ConfigurationError(f"Scan file not found: {path}") from e
        if not rows or rows[0][-2:] != ['gap', 'index']:
            raise ConfigurationError(f"{path} is not a scan file.")
        d = len(rows[0]) - 2
        points = np.array([[float(value) for value in row[:d]] for row in rows[1:]]).reshape(-1, d)
        gaps = np.array([float(row[d]) for row in rows[1:]])
        indices = [int(row[d + 1]) if row[d + 1] else None for row in rows[1:]]
        return points, gaps, indices

    @staticmethod
    def write_flow_csv(path: str | Path, parameters: np.ndarray, points: np.ndarray, eigenvalues: np.ndarray) -> None:
        """
        One row per step: step, s, lambda1..lambdad, eig1..eigk (ascending).
        """
        d = points.shape[1]
        k = eigenvalues.shape[1]
        with open(path, 'w', encoding='utf8', newline='') as f:
            writer = csv.writer(f)
            writer.writerow(['step', 's', *[f"lambda{j + 1}" for j in range(d)], *[f"eig{i + 1}" for i in range(k)]])
            for step, (s, point, row) in enumerate(zip(parameters, points, eigenvalues)):
                writer.writerow([step, FLOAT_FORMAT % s, *[FLOAT_FORMAT % x for x in point],
                                 *[FLOAT_FORMAT % x for x in row]])
