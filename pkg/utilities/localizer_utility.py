import logging

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
from scipy.sparse.linalg import eigsh

from models.clifford_rep import CliffordRep
from models.exceptions import (DimensionMismatchError, OddSignatureError, SingularLocalizerError,
                               SolverConvergenceError)
from models.hermitian_tuple import HermitianTuple, ProbePoint, max_abs
from models.localizer_report import LocalizerReport, ObstructionNorms
from strategies.eigensolver.eigensolver_strategy import EigensolverStrategy
from utilities.config import Config


class LocalizerUtility:
    """
    Assembles the spectral localizer sum_j (A_j - lambda_j) x gamma_j and reads off
    gap, signature, index and the eigenvalues nearest zero.
    The Kronecker order is matrix-major, Clifford-minor: A x gamma.
    """

    @staticmethod
    def assemble(hermitian_tuple: HermitianTuple, probe: ProbePoint, rep: CliffordRep):
        """
        Builds L_lambda. Sparse when any tuple matrix is sparse.
        :param hermitian_tuple: The tuple (A_1, ..., A_d).
        :param probe: The point lambda.
        :param rep: Clifford generators with the same d.
        :return: The Hermitian localizer of size n * r.
        """
        LocalizerUtility.check_dimensions(hermitian_tuple, probe, rep)
        coords = probe.as_array()
        shift = sum(coords[j] * rep.gammas[j] for j in range(rep.d))
        if hermitian_tuple.is_sparse:
            localizer = sum(sp.kron(sp.csr_matrix(matrix), sp.csr_matrix(gamma), format='csr')
                            for matrix, gamma in zip(hermitian_tuple.matrices, rep.gammas))
            localizer = sp.csr_matrix(localizer - sp.kron(sp.identity(hermitian_tuple.n, format='csr'),
                                                          sp.csr_matrix(shift), format='csr'))
        else:
            localizer = sum(np.kron(matrix, gamma) for matrix, gamma in zip(hermitian_tuple.matrices, rep.gammas))
            localizer = localizer - np.kron(np.eye(hermitian_tuple.n), shift)
        if Config().debug:
            defect = max_abs(localizer - localizer.conj().T)
            logging.debug(f"Assembled localizer of size {localizer.shape[0]} with Hermiticity defect {defect:.3e}.")
        return localizer

    @staticmethod
    def check_dimensions(hermitian_tuple: HermitianTuple, probe: ProbePoint, rep: CliffordRep) -> None:
        if rep.d != hermitian_tuple.d:
            raise DimensionMismatchError(f"Representation has d={rep.d} but the tuple has d={hermitian_tuple.d}.")
        if probe.d != hermitian_tuple.d:
            raise DimensionMismatchError(f"Probe point has {probe.d} coordinates but the tuple has d={hermitian_tuple.d}.")

    @staticmethod
    def get_eigensolver_strategy(dimension: int, force: str | None = None,
                                 signature_method: str = 'ldl') -> EigensolverStrategy:
        """
        Returns the eigensolver strategy for a localizer of the given size.
        :param dimension: Localizer dimension n * r.
        :param force: 'dense' or 'sparse' to override the size rule.
        :param signature_method: 'ldl' or 'eigh' for the dense signature.
        :return: The strategy.
        """
        config = Config()
        mode = force or ('dense' if dimension <= config.dense_threshold else 'sparse')
        match mode:
            case 'dense':
                from strategies.eigensolver.dense_eigensolver_strategy import DenseEigensolverStrategy
                return DenseEigensolverStrategy(signature_method)
            case 'sparse':
                from strategies.eigensolver.sparse_eigensolver_strategy import SparseEigensolverStrategy
                return SparseEigensolverStrategy(config.solver_seed, config.solver_tol)
            case _:
                raise ValueError(f"Invalid eigensolver mode: {mode}")

    @staticmethod
    def default_singular_tol(hermitian_tuple: HermitianTuple, probe: ProbePoint) -> float:
        return Config().singular_tol_factor * (1.0 + probe.norm + sum(hermitian_tuple.norms))

    @staticmethod
    def eigenvalues_near_zero(localizer, k: int, force: str | None = None) -> np.ndarray:
        """
        The k eigenvalues of smallest magnitude, retrying densely when an iterative solve fails.
        :return: The eigenvalues sorted by absolute value.
        """
        dimension = localizer.shape[0]
        if k >= dimension - 1:
            force = 'dense'
        strategy = LocalizerUtility.get_eigensolver_strategy(dimension, force)
        try:
            return strategy.eigenvalues_near_zero(localizer, k)
        except SolverConvergenceError as e:
            if dimension > Config().dense_fallback_limit:
                raise
            logging.warning(f"{e}. Retrying with the dense solver at dimension {dimension}.")
            return LocalizerUtility.get_eigensolver_strategy(dimension, 'dense').eigenvalues_near_zero(localizer, k)

    @staticmethod
    def gap(hermitian_tuple: HermitianTuple, probe: ProbePoint, rep: CliffordRep,
            force: str | None = None) -> float:
        """
        The Clifford pseudospectrum: smallest absolute eigenvalue of the localizer.
        """
        localizer = LocalizerUtility.assemble(hermitian_tuple, probe, rep)
        return LocalizerUtility.gap_of(localizer, force)

    @staticmethod
    def gap_of(localizer, force: str | None = None) -> float:
        return float(abs(LocalizerUtility.eigenvalues_near_zero(localizer, 1, force)[0]))

    @staticmethod
    def signature(hermitian_tuple: HermitianTuple, probe: ProbePoint, rep: CliffordRep,
                  singular_tol: float | None = None, negate_orientation: bool | None = None,
                  force: str | None = None, signature_method: str = 'ldl') -> int:
        """
        Positive minus negative eigenvalue count of the localizer.
        :param singular_tol: Gap threshold below which the signature is undefined.
        :param negate_orientation: Use the negated representation; flips the sign.
        :return: The signature.
        """
        if singular_tol is None:
            singular_tol = LocalizerUtility.default_singular_tol(hermitian_tuple, probe)
        rep = LocalizerUtility.oriented(rep, negate_orientation)
        localizer = LocalizerUtility.assemble(hermitian_tuple, probe, rep)
        gap = LocalizerUtility.gap_of(localizer, force)
        if gap <= singular_tol:
            raise SingularLocalizerError(gap, singular_tol)
        return LocalizerUtility.signature_of(localizer, gap, force, signature_method)

    @staticmethod
    def signature_of(localizer, gap: float, force: str | None = None, signature_method: str = 'ldl') -> int:
        dimension = localizer.shape[0]
        strategy = LocalizerUtility.get_eigensolver_strategy(dimension, force, signature_method)
        try:
            return strategy.signature(localizer, gap)
        except SolverConvergenceError as e:
            if dimension > Config().dense_fallback_limit:
                raise
            logging.warning(f"{e}. Computing the signature densely at dimension {dimension}.")
            return LocalizerUtility.get_eigensolver_strategy(dimension, 'dense').signature(localizer, gap)

    @staticmethod
    def index(hermitian_tuple: HermitianTuple, probe: ProbePoint, rep: CliffordRep,
              singular_tol: float | None = None, negate_orientation: bool | None = None,
              force: str | None = None) -> int:
        """
        Half the signature. An odd signature is an error, never rounded.
        """
        signature = LocalizerUtility.signature(hermitian_tuple, probe, rep, singular_tol, negate_orientation, force)
        if signature % 2:
            raise OddSignatureError(signature)
        return signature // 2

    @staticmethod
    def eig_window(hermitian_tuple: HermitianTuple, probe: ProbePoint, rep: CliffordRep, k: int,
                   force: str | None = None) -> np.ndarray:
        """
        :return: The k eigenvalues nearest zero, sorted ascending by value.
        """
        dimension = hermitian_tuple.n * rep.r
        if not 1 <= k <= dimension:
            raise ValueError(f"k={k} must lie between 1 and the localizer dimension {dimension}.")
        localizer = LocalizerUtility.assemble(hermitian_tuple, probe, rep)
        return np.sort(LocalizerUtility.eigenvalues_near_zero(localizer, k, force))

    @staticmethod
    def probe(hermitian_tuple: HermitianTuple, probe: ProbePoint, rep: CliffordRep, k: int | None = None,
              singular_tol: float | None = None, negate_orientation: bool | None = None,
              force: str | None = None) -> LocalizerReport:
        """
        Computes everything known about one localizer. Singular points get no signature.
        :return: The report.
        """
        k = Config().eig_window_k if k is None else k
        if singular_tol is None:
            singular_tol = LocalizerUtility.default_singular_tol(hermitian_tuple, probe)
        rep = LocalizerUtility.oriented(rep, negate_orientation)
        localizer = LocalizerUtility.assemble(hermitian_tuple, probe, rep)
        dimension = localizer.shape[0]
        window = LocalizerUtility.eigenvalues_near_zero(localizer, min(max(k, 1), dimension), force)
        gap = float(abs(window[0]))
        singular = gap <= singular_tol
        signature = None
        index = None
        if not singular:
            signature = LocalizerUtility.signature_of(localizer, gap, force)
            index = signature // 2 if signature % 2 == 0 else None
        return LocalizerReport(gap=gap, signature=signature, index=index,
                               eig_window=[float(value) for value in window],
                               singular_flag=singular, dimension=dimension)

    @staticmethod
    def oriented(rep: CliffordRep, negate_orientation: bool | None) -> CliffordRep:
        if negate_orientation is None:
            negate_orientation = Config().negate_orientation
        return rep.negated() if negate_orientation else rep

    @staticmethod
    def hermitian_norm(matrix) -> float:
        """
        Spectral norm of a Hermitian matrix as its largest absolute eigenvalue.
        Diagonal matrices are read off directly.
        """
        if sp.issparse(matrix):
            diagonal = matrix.diagonal()
            off_diagonal = sp.csr_matrix(matrix - sp.diags(diagonal))
            off_diagonal.eliminate_zeros()
            if off_diagonal.nnz == 0:
                return float(np.max(np.abs(diagonal))) if diagonal.size else 0.0
            if matrix.shape[0] > Config().dense_threshold:
                rng = np.random.default_rng(Config().solver_seed)
                start = rng.normal(size=matrix.shape[0]).astype(matrix.dtype)
                values = eigsh(matrix, k=1, which='LM', v0=start, return_eigenvectors=False)
                return float(np.max(np.abs(values)))
            matrix = matrix.toarray()
        matrix = np.asarray(matrix)
        if matrix.size == 0:
            return 0.0
        if np.count_nonzero(matrix - np.diag(np.diagonal(matrix))) == 0:
            return float(np.max(np.abs(np.diagonal(matrix))))
        return float(np.max(np.abs(la.eigvalsh(matrix))))

    @staticmethod
    def obstruction_norms(hermitian_tuple: HermitianTuple) -> ObstructionNorms:
        """
        Commutator norms ||[A_j, A_k]||, the sphere defect ||sum A_j^2 - I|| and the norms ||A_j||,
        all as extremal eigenvalues of Hermitian forms (i[A_j, A_k] is Hermitian).
        """
        matrices = hermitian_tuple.matrices
        norms = list(hermitian_tuple.norms)
        commutators = {}
        relative = {}
        for j in range(hermitian_tuple.d):
            for k in range(j + 1, hermitian_tuple.d):
                commutator = 1j * (matrices[j] @ matrices[k] - matrices[k] @ matrices[j])
                value = LocalizerUtility.hermitian_norm(commutator)
                commutators[(j, k)] = value
                scale = norms[j] * norms[k]
                relative[(j, k)] = value / scale if scale else 0.0
        identity = (sp.identity(hermitian_tuple.n, format='csr') if hermitian_tuple.is_sparse
                    else np.eye(hermitian_tuple.n))
        square_sum = sum(matrix @ matrix for matrix in matrices) - identity
        sphere_defect = LocalizerUtility.hermitian_norm(square_sum)
        return ObstructionNorms(commutator_norms=commutators, sphere_defect=sphere_defect,
                                matrix_norms=norms, relative_commutators=relative)
