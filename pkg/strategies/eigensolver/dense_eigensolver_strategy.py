import numpy as np
import scipy.linalg as la
import scipy.sparse as sp

from strategies.eigensolver.eigensolver_strategy import EigensolverStrategy


class DenseEigensolverStrategy(EigensolverStrategy):
    """
    LAPACK back end: full Hermitian eigendecomposition for eigenvalues and
    Bunch-Kaufman LDL^H for the inertia.
    """

    def __init__(self, signature_method: str = 'ldl'):
        if signature_method not in ('ldl', 'eigh'):
            raise ValueError(f"Unknown signature method: {signature_method}")
        self.__signature_method = signature_method

    def eigenvalues_near_zero(self, localizer, k: int) -> np.ndarray:
        values = la.eigvalsh(DenseEigensolverStrategy.as_dense(localizer))
        order = np.argsort(np.abs(values), kind='stable')
        return values[order[:k]]

    def signature(self, localizer, gap: float) -> int:
        matrix = DenseEigensolverStrategy.as_dense(localizer)
        if self.__signature_method == 'eigh':
            values = la.eigvalsh(matrix)
            return int(np.count_nonzero(values > 0) - np.count_nonzero(values < 0))
        if np.iscomplexobj(matrix):
            # ldl warns on rounding-level imaginary parts of a Hermitian diagonal
            matrix = matrix.copy()
            np.fill_diagonal(matrix, matrix.diagonal().real)
        _, block_diagonal, _ = la.ldl(matrix, lower=True, hermitian=True)
        return DenseEigensolverStrategy.inertia_of_block_diagonal(block_diagonal)

    @staticmethod
    def as_dense(localizer) -> np.ndarray:
        return localizer.toarray() if sp.issparse(localizer) else np.asarray(localizer)

    @staticmethod
    def inertia_of_block_diagonal(block_diagonal: np.ndarray) -> int:
        """
        Signature of the 1x1 / 2x2 block diagonal factor of an LDL^H decomposition.
        By Sylvester's law it equals the signature of the factored matrix.
        :param block_diagonal: The D factor.
        :return: Positive minus negative eigenvalue count.
        """
        size = block_diagonal.shape[0]
        signature = 0
        i = 0
        while i < size:
            if i + 1 < size and block_diagonal[i + 1, i] != 0:
                a = block_diagonal[i, i].real
                c = block_diagonal[i + 1, i + 1].real
                b = block_diagonal[i + 1, i]
                determinant = a * c - abs(b) ** 2
                if determinant > 0:
                    signature += 2 if a > 0 else -2
                i += 2
            else:
                pivot = block_diagonal[i, i].real
                signature += 1 if pivot > 0 else -1 if pivot < 0 else 0
                i += 1
        return signature
