import logging

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh, splu
from scipy.sparse.linalg import norm as sparse_norm

from models.exceptions import SolverConvergenceError
from strategies.eigensolver.eigensolver_strategy import EigensolverStrategy

SHIFT_FACTORS = (0.0, 1e-9, -1e-7)
INERTIA_SHIFT_FACTORS = (0.5, -0.5, 0.25, -0.25)


class SparseEigensolverStrategy(EigensolverStrategy):
    """
    Sparse back end: shift-invert ARPACK near zero, folded spectrum when no shift can be
    factored, and a symmetric-mode SuperLU LDL^H for the inertia.
    """

    def __init__(self, seed: int, tol: float = 0.0):
        self.__seed = seed
        self.__tol = tol

    def eigenvalues_near_zero(self, localizer, k: int) -> np.ndarray:
        matrix = sp.csc_matrix(localizer, dtype=complex)
        size = matrix.shape[0]
        start = self.__start_vector(size)
        scale = max(float(sparse_norm(matrix, 1)), 1.0)
        for factor in SHIFT_FACTORS:
            shift = factor * scale
            requested = min(k if factor == 0.0 else k + 2, size - 2)
            try:
                values = eigsh(matrix, k=requested, sigma=shift, which='LM', v0=start,
                               tol=self.__tol, return_eigenvectors=False)
            except ArpackNoConvergence as e:
                raise SolverConvergenceError("Shift-invert ARPACK did not converge",
                                             SparseEigensolverStrategy.__residual(matrix, e)) from e
            except RuntimeError as e:
                logging.debug(f"Shift {shift:.3e} could not be factored: {e}")
                continue
            order = np.argsort(np.abs(values), kind='stable')
            return values[order[:k]]
        logging.warning("No shift could be factored; falling back to the folded spectrum.")
        return self.__folded_spectrum(matrix, k, start)

    def signature(self, localizer, gap: float) -> int:
        matrix = sp.csc_matrix(localizer, dtype=complex)
        identity = sp.identity(matrix.shape[0], dtype=complex, format='csc')
        for factor in INERTIA_SHIFT_FACTORS:
            # |shift| < gap leaves the inertia unchanged
            shifted = sp.csc_matrix(matrix + (factor * gap) * identity)
            try:
                factorization = splu(shifted, permc_spec='MMD_AT_PLUS_A', diag_pivot_thresh=0.0,
                                     options=dict(SymmetricMode=True))
            except RuntimeError as e:
                logging.debug(f"Symmetric factorization failed for shift {factor} * gap: {e}")
                continue
            if not np.array_equal(factorization.perm_r, factorization.perm_c):
                logging.debug(f"Factorization left the diagonal for shift {factor} * gap.")
                continue
            pivots = factorization.U.diagonal().real
            if np.any(pivots == 0):
                continue
            return int(np.count_nonzero(pivots > 0) - np.count_nonzero(pivots < 0))
        raise SolverConvergenceError("No symmetric LDL^H factorization with diagonal pivots was found")

    def __start_vector(self, size: int) -> np.ndarray:
        rng = np.random.default_rng(self.__seed)
        return rng.normal(size=size) + 1j * rng.normal(size=size)

    def __folded_spectrum(self, matrix, k: int, start: np.ndarray) -> np.ndarray:
        """
        Smallest eigenvalues of L^2, mapped back to eigenvalues of L through Rayleigh quotients.
        """
        size = matrix.shape[0]
        squared = LinearOperator((size, size), matvec=lambda x: matrix @ (matrix @ x), dtype=complex)
        try:
            _, vectors = eigsh(squared, k=min(k, size - 2), which='SA', v0=start, tol=self.__tol)
        except ArpackNoConvergence as e:
            raise SolverConvergenceError("Folded-spectrum ARPACK did not converge",
                                         SparseEigensolverStrategy.__residual(matrix, e)) from e
        values = np.real(np.einsum('ij,ij->j', vectors.conj(), matrix @ vectors))
        order = np.argsort(np.abs(values), kind='stable')
        return values[order]

    @staticmethod
    def __residual(matrix, error: ArpackNoConvergence) -> float:
        if error.eigenvectors is None or len(error.eigenvalues) == 0:
            return float('inf')
        vectors = error.eigenvectors
        values = np.real(error.eigenvalues)
        residuals = np.linalg.norm(matrix @ vectors - vectors * values, axis=0)
        return float(np.max(residuals))
