from dataclasses import dataclass
from functools import cached_property
from typing import Tuple

import numpy as np
import scipy.sparse as sp

from models.exceptions import DimensionMismatchError, NonHermitianError
from utilities.config import Config


def max_abs(matrix) -> float:
    if sp.issparse(matrix):
        return float(abs(matrix).max()) if matrix.nnz else 0.0
    return float(np.max(np.abs(matrix))) if matrix.size else 0.0


@dataclass(frozen=True)
class HermitianTuple:
    """
    An ordered list of d Hermitian n x n matrices, dense or sparse.
    Non-Hermitian input is rejected, never symmetrized.
    """
    matrices: Tuple
    label: str = ''

    def __post_init__(self):
        if len(self.matrices) == 0:
            raise DimensionMismatchError("A Hermitian tuple needs at least one matrix.")
        shapes = {matrix.shape for matrix in self.matrices}
        if len(shapes) != 1:
            raise DimensionMismatchError(f"Tuple matrices differ in shape: {sorted(shapes)}.")
        rows, cols = shapes.pop()
        if rows != cols:
            raise DimensionMismatchError(f"Tuple matrices must be square, got {rows}x{cols}.")
        tol = Config().tuple_hermiticity_tol
        for j, matrix in enumerate(self.matrices):
            defect = max_abs(matrix - matrix.conj().T)
            if defect > tol * max(1.0, max_abs(matrix)):
                raise NonHermitianError(f"Matrix {j + 1} of '{self.label}' has Hermiticity defect {defect:.3e}.")

    @property
    def d(self) -> int:
        return len(self.matrices)

    @property
    def n(self) -> int:
        return self.matrices[0].shape[0]

    @property
    def is_sparse(self) -> bool:
        return any(sp.issparse(matrix) for matrix in self.matrices)

    @cached_property
    def norms(self) -> Tuple[float, ...]:
        """
        Spectral norms of the matrices, computed once.
        """
        from utilities.localizer_utility import LocalizerUtility
        return tuple(LocalizerUtility.hermitian_norm(matrix) for matrix in self.matrices)

    def dense(self) -> 'HermitianTuple':
        return HermitianTuple(
            matrices=tuple(matrix.toarray() if sp.issparse(matrix) else matrix for matrix in self.matrices),
            label=self.label
        )

    def rotated(self, rotation: np.ndarray) -> 'HermitianTuple':
        """
        :param rotation: Real d x d matrix U.
        :return: The tuple A_hat_j = sum_s u_js A_s.
        """
        rotation = np.asarray(rotation, dtype=float)
        matrices = tuple(
            sum(rotation[j, s] * self.matrices[s] for s in range(self.d))
            for j in range(self.d)
        )
        return HermitianTuple(matrices=matrices, label=f"{self.label} rotated")

    def conjugated(self, unitary: np.ndarray) -> 'HermitianTuple':
        """
        :param unitary: n x n unitary Q.
        :return: The tuple Q A_j Q^*.
        """
        adjoint = unitary.conj().T
        return HermitianTuple(
            matrices=tuple(unitary @ matrix @ adjoint for matrix in self.matrices),
            label=f"{self.label} conjugated"
        )


@dataclass(frozen=True)
class ProbePoint:
    """
    A point lambda in R^d at which the localizer is formed.
    """
    coords: Tuple[float, ...]

    @staticmethod
    def of(values) -> 'ProbePoint':
        return ProbePoint(coords=tuple(float(value) for value in np.ravel(values)))

    @property
    def d(self) -> int:
        return len(self.coords)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.coords, dtype=float)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.as_array()))
