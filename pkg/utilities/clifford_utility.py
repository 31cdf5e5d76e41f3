import logging
from functools import reduce

import numpy as np

from models.clifford_rep import CliffordRep, ValidationReport
from models.exceptions import DimensionMismatchError
from utilities.config import Config

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)


class CliffordUtility:
    """
    Constructs, validates and transforms representations of the complex Clifford relations.
    """

    @staticmethod
    def sign_constant(d: int) -> complex:
        """
        Returns eps_d for odd d. The Pauli base case gamma_3 = i gamma_2 gamma_1 and the
        doubling rule eps_{d+2} = i eps_d give eps_d = i^((d-1)/2).
        :param d: Odd number of generators.
        :return: The sign constant.
        """
        return 1j ** ((d - 1) // 2)

    @staticmethod
    def oriented_product(gammas) -> np.ndarray:
        """
        :param gammas: Generators gamma_1, ..., gamma_d with d odd.
        :return: eps_d gamma_{d-1} ... gamma_2 gamma_1.
        """
        d = len(gammas)
        r = gammas[0].shape[0]
        product = reduce(lambda acc, gamma: gamma @ acc, gammas[:d - 1], np.eye(r, dtype=complex))
        return CliffordUtility.sign_constant(d) * product

    @staticmethod
    def measure_orientation(gammas) -> int | None:
        """
        Decides which odd-d irreducible the generators form by comparing gamma_d
        with plus or minus the oriented product.
        :param gammas: The generators.
        :return: +1 or -1 for odd d >= 3, +1 for d = 1, None for even d or when neither sign matches.
        """
        d = len(gammas)
        if d % 2 == 0:
            return None
        if d == 1:
            return 1
        product = CliffordUtility.oriented_product(gammas)
        tol = Config().orientation_tol
        if np.linalg.norm(gammas[-1] - product) <= tol:
            return 1
        if np.linalg.norm(gammas[-1] + product) <= tol:
            return -1
        return None

    @staticmethod
    def pauli_rep() -> CliffordRep:
        """
        :return: (sigma_x, sigma_y, sigma_z), orientation +1.
        """
        return CliffordRep(gammas=(SIGMA_X.copy(), SIGMA_Y.copy(), SIGMA_Z.copy()),
                           orientation=1,
                           construction='recursive-pauli')

    @staticmethod
    def build_rep(d: int) -> CliffordRep:
        """
        Builds the irreducible representation of size 2^floor(d/2) by doubling odd
        representations, alpha_j = gamma_j x sigma_x, alpha_{d+1} = I x sigma_y,
        alpha_{d+2} = I x sigma_z. Even d is the first d generators of the next odd one.
        d = 1 is the 2x2 sigma_z, which is not irreducible but keeps spectrum {-1, 1}.
        :param d: Number of generators, at least 1.
        :return: The representation.
        """
        if d < 1:
            raise ValueError(f"A Clifford representation needs at least one generator, got d={d}.")
        if d == 1:
            return CliffordRep(gammas=(SIGMA_Z.copy(),), orientation=1, construction='recursive-pauli')
        if d % 2 == 0:
            odd_rep = CliffordUtility.build_rep(d + 1)
            return CliffordRep(gammas=odd_rep.gammas[:d], orientation=None, construction='recursive-pauli')

        gammas = list(CliffordUtility.pauli_rep().gammas)
        while len(gammas) < d:
            r = gammas[0].shape[0]
            identity = np.eye(r, dtype=complex)
            gammas = ([np.kron(gamma, SIGMA_X) for gamma in gammas]
                      + [np.kron(identity, SIGMA_Y), np.kron(identity, SIGMA_Z)])
        return CliffordRep(gammas=tuple(gammas), orientation=1, construction='recursive-pauli')

    @staticmethod
    def gamma5_explicit() -> CliffordRep:
        """
        The five 4x4 generators used for the 4D lattice localizer:
        sigma_x x sigma_z, sigma_y x I, sigma_x x sigma_x, sigma_x x sigma_y, sigma_z x I.
        The orientation is measured, not assumed.
        :return: The representation.
        """
        gammas = (
            np.kron(SIGMA_X, SIGMA_Z),
            np.kron(SIGMA_Y, IDENTITY_2),
            np.kron(SIGMA_X, SIGMA_X),
            np.kron(SIGMA_X, SIGMA_Y),
            np.kron(SIGMA_Z, IDENTITY_2),
        )
        orientation = CliffordUtility.measure_orientation(gammas)
        logging.debug(f"Explicit d=5 generators carry orientation {orientation}.")
        return CliffordRep(gammas=gammas, orientation=orientation, construction='explicit-gamma5')

    @staticmethod
    def rotate_rep(rep: CliffordRep, rotation: np.ndarray) -> CliffordRep:
        """
        Forms gamma_hat_j = sum_r u_jr gamma_r for a real orthogonal U.
        :param rep: Representation to rotate.
        :param rotation: Real orthogonal d x d matrix.
        :return: The rotated representation with its orientation measured.
        """
        rotation = np.asarray(rotation, dtype=float)
        if rotation.shape != (rep.d, rep.d):
            raise DimensionMismatchError(f"Rotation of shape {rotation.shape} does not act on d={rep.d} generators.")
        defect = float(np.linalg.norm(rotation.T @ rotation - np.eye(rep.d)))
        if defect > Config().orthogonality_tol:
            raise ValueError(f"Rotation is not orthogonal: ||U^T U - I|| = {defect:.3e}.")
        rotated = np.tensordot(rotation, rep.stacked(), axes=(1, 0))
        gammas = tuple(rotated[j] for j in range(rep.d))
        return CliffordRep(gammas=gammas,
                           orientation=CliffordUtility.measure_orientation(gammas),
                           construction='rotated')

    @staticmethod
    def direct_sum(first: CliffordRep, second: CliffordRep) -> CliffordRep:
        """
        Block-diagonal sum of two representations of equal d. The result is reducible.
        """
        if first.d != second.d:
            raise DimensionMismatchError(f"Cannot sum representations with d={first.d} and d={second.d}.")
        gammas = []
        for left, right in zip(first.gammas, second.gammas):
            block = np.zeros((first.r + second.r, first.r + second.r), dtype=complex)
            block[:first.r, :first.r] = left
            block[first.r:, first.r:] = right
            gammas.append(block)
        return CliffordRep(gammas=tuple(gammas), orientation=None, construction='user-supplied')

    @staticmethod
    def validate_rep(rep: CliffordRep, tol: float | None = None) -> ValidationReport:
        """
        Measures how far the generators are from the Clifford relations. Never raises.
        :param rep: Representation to check.
        :param tol: Pass threshold for every defect. Defaults to the configured relation tolerance.
        :return: The report.
        """
        hermiticity_tol = Config().gamma_hermiticity_tol if tol is None else tol
        tol = Config().relation_tol if tol is None else tol
        identity = np.eye(rep.r, dtype=complex)
        hermiticity = max(float(np.max(np.abs(gamma - gamma.conj().T))) for gamma in rep.gammas)
        square = max(float(np.linalg.norm(gamma @ gamma - identity)) for gamma in rep.gammas)
        anticommutator = 0.0
        for j in range(rep.d):
            for k in range(j + 1, rep.d):
                left, right = rep.gammas[j], rep.gammas[k]
                anticommutator = max(anticommutator, float(np.linalg.norm(left @ right + right @ left)))

        orientation_defect = None
        notes = []
        if rep.d == 1:
            notes.append('d=1 has no orientation identity; irreducibility is waived.')
        elif rep.d % 2 == 1:
            product = CliffordUtility.oriented_product(rep.gammas)
            sign = rep.orientation if rep.orientation is not None else 1
            orientation_defect = float(np.linalg.norm(rep.gammas[-1] - sign * product))
            if rep.orientation is None:
                notes.append('Orientation unlabeled; checked against +1.')
        if not rep.is_irreducible_size:
            notes.append(f"Size r={rep.r} is not the irreducible size {2 ** (rep.d // 2)}.")

        return ValidationReport(d=rep.d, r=rep.r, tol=tol,
                                hermiticity_defect=hermiticity,
                                square_defect=square,
                                anticommutator_defect=anticommutator,
                                orientation_defect=orientation_defect,
                                notes=notes,
                                hermiticity_tol=hermiticity_tol)

    @staticmethod
    def random_orthogonal(d: int, rng: np.random.Generator, special: bool = False) -> np.ndarray:
        """
        Samples an orthogonal matrix by QR of a Gaussian matrix with the sign fix on R's diagonal.
        :param d: Size.
        :param rng: Random generator.
        :param special: Force determinant +1.
        :return: The sample.
        """
        q, r = np.linalg.qr(rng.normal(size=(d, d)))
        q = q * np.sign(np.diag(r))
        if special and np.linalg.det(q) < 0:
            q[:, 0] = -q[:, 0]
        return q

    @staticmethod
    def get_rep(name: str, d: int) -> CliffordRep:
        """
        Returns the representation selected on the command line.
        :param name: 'pauli', 'gamma5', 'recursive' or 'auto' (Pauli for d = 3, recursive otherwise).
        :param d: Number of generators needed.
        :return: The representation.
        """
        match name:
            case 'pauli' | 'gamma5' if d != (3 if name == 'pauli' else 5):
                raise DimensionMismatchError(f"The {name} representation has the wrong size for d={d}.")
            case 'pauli':
                return CliffordUtility.pauli_rep()
            case 'gamma5':
                return CliffordUtility.gamma5_explicit()
            case 'recursive':
                return CliffordUtility.build_rep(d)
            case 'auto':
                return CliffordUtility.pauli_rep() if d == 3 else CliffordUtility.build_rep(d)
            case _:
                raise ValueError(f"Unknown representation: {name}")
