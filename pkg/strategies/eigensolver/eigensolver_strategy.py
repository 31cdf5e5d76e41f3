import abc

import numpy as np


class EigensolverStrategy(abc.ABC):
    """
    Abstract base class for the linear algebra behind a Hermitian localizer.
    """

    @abc.abstractmethod
    def eigenvalues_near_zero(self, localizer, k: int) -> np.ndarray:
        """
        Abstract method for the k eigenvalues of smallest magnitude.
        :param localizer: Hermitian matrix, dense or sparse.
        :param k: How many eigenvalues to return.
        :return: The eigenvalues, sorted by absolute value.
        """

    @abc.abstractmethod
    def signature(self, localizer, gap: float) -> int:
        """
        Abstract method for the number of positive minus the number of negative eigenvalues.
        :param localizer: Invertible Hermitian matrix.
        :param gap: Its smallest absolute eigenvalue, already known to be nonzero.
        :return: The signature.
        """
