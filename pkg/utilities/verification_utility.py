import logging
import math
from typing import List

import numpy as np
import scipy.linalg as la

from models.clifford_rep import CliffordRep
from models.exceptions import ConfigurationError, SingularLocalizerError
from models.hermitian_tuple import HermitianTuple, ProbePoint
from models.theorem_report import Check, TheoremReport
from utilities.clifford_utility import CliffordUtility
from utilities.config import Config
from utilities.localizer_utility import LocalizerUtility
from utilities.model_utility import ModelUtility

PAULI_TOL = 1e-10
EVEN_ORIGIN_TOL = 1e-10
SPECTRUM_INTEGER_TOL = 1e-9
SYMMETRY_TOL = 1e-10
# Basis permutation 00, 10, 01, 11 that block-diagonalizes the Pauli localizer on the z axis.
PAULI_BLOCK_PERMUTATION = np.eye(4)[[0, 2, 1, 3]]


class VerificationUtility:
    """
    Numerical checks of the closed-form statements about Clifford spectra.
    Reports never raise on a failed check; they record it.
    """

    @staticmethod
    def gamma_tuple(d: int) -> HermitianTuple:
        rep = CliffordUtility.build_rep(d)
        return HermitianTuple(matrices=rep.gammas, label=f"gamma d={d}")

    @staticmethod
    def random_hermitian(n: int, rng: np.random.Generator) -> np.ndarray:
        matrix = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        return (matrix + matrix.conj().T) / 2

    @staticmethod
    def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
        q, r = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
        return q * (np.diag(r) / np.abs(np.diag(r)))

    @staticmethod
    def random_probes(count: int, d: int, rng: np.random.Generator, low: float, high: float) -> np.ndarray:
        """
        Random points whose norms are uniform in [low, high] and whose directions are uniform.
        """
        directions = rng.normal(size=(count, d))
        directions /= np.linalg.norm(directions, axis=1, keepdims=True)
        return directions * rng.uniform(low, high, size=(count, 1))

    @staticmethod
    def memory_estimate(d: int) -> int:
        """
        Bytes needed to hold three dense copies of the gamma localizer for d.
        """
        dimension = (2 ** (d // 2)) ** 2
        return 3 * 16 * dimension ** 2

    @staticmethod
    def __origin_spectrum(d: int) -> np.ndarray:
        tuple_ = VerificationUtility.gamma_tuple(d)
        localizer = LocalizerUtility.assemble(tuple_, ProbePoint.of(np.zeros(d)), CliffordUtility.build_rep(d))
        return la.eigvalsh(localizer)

    @staticmethod
    def verify_even_gamma(d: int, samples: int | None = None, seed: int | None = None) -> TheoremReport:
        """
        For even d the Clifford spectrum of an irreducible representation is the origin alone.
        """
        if d < 2 or d % 2:
            raise ValueError(f"verify_even_gamma needs an even d >= 2, got {d}.")
        settings = Config().verify_settings
        samples = settings['samples'] if samples is None else samples
        rng = np.random.default_rng(settings['seed'] if seed is None else seed)
        tuple_ = VerificationUtility.gamma_tuple(d)
        rep = CliffordUtility.build_rep(d)
        report = TheoremReport(theorem_id='even-gamma', d=d)

        report.add(Check.at_most('gap at the origin',
                                 LocalizerUtility.gap(tuple_, ProbePoint.of(np.zeros(d)), rep), EVEN_ORIGIN_TOL))
        probes = VerificationUtility.random_probes(samples, d, rng, 0.1, 3.0)
        gaps = np.array([LocalizerUtility.gap(tuple_, ProbePoint.of(probe), rep) for probe in probes])
        report.add(Check.above(f"minimum gap at {samples} probes with 0.1 <= |lambda| <= 3", gaps.min(), 0.0))

        spectrum = VerificationUtility.__origin_spectrum(d)
        rounded = np.round(spectrum)
        report.add(Check.at_most('distance of the origin spectrum from the integers',
                                 np.max(np.abs(spectrum - rounded)), SPECTRUM_INTEGER_TOL))
        report.add(Check.equal('odd eigenvalues at the origin', int(np.count_nonzero(rounded % 2)), 0))
        return report

    @staticmethod
    def verify_odd_gamma(d: int, sphere_samples: int | None = None, seed: int | None = None) -> TheoremReport:
        """
        For odd d >= 3 the Clifford spectrum is the unit sphere and the signature at the
        origin is the central binomial coefficient C(d - 1, (d - 1) / 2).
        """
        if d < 3 or d % 2 == 0:
            raise ValueError(f"verify_odd_gamma needs an odd d >= 3, got {d}.")
        settings = Config().verify_settings
        sphere_samples = settings['sphere_samples'] if sphere_samples is None else sphere_samples
        rng = np.random.default_rng(settings['seed'] if seed is None else seed)
        tuple_ = VerificationUtility.gamma_tuple(d)
        rep = CliffordUtility.build_rep(d)
        origin = ProbePoint.of(np.zeros(d))
        report = TheoremReport(theorem_id='odd-gamma', d=d)

        expected = math.comb(d - 1, (d - 1) // 2)
        signature = LocalizerUtility.signature(tuple_, origin, rep, negate_orientation=False)
        report.add(Check.equal('signature at the origin', signature, expected))
        report.add(Check.equal('signature parity at the origin', signature % 2, 0))
        flipped = LocalizerUtility.signature(tuple_, origin, rep, negate_orientation=True)
        report.add(Check.equal('signature at the origin with the negated representation', flipped, -expected))
        report.add(Check.close('gap at the origin', LocalizerUtility.gap(tuple_, origin, rep), 1.0, PAULI_TOL))

        unit = VerificationUtility.random_probes(sphere_samples, d, rng, 1.0, 1.0)
        sphere_gaps = [LocalizerUtility.gap(tuple_, ProbePoint.of(probe), rep) for probe in unit]
        report.add(Check.at_most(f"maximum gap at {sphere_samples} unit-sphere probes",
                                 max(sphere_gaps), settings['sphere_tol']))

        outside = VerificationUtility.random_probes(sphere_samples, d, rng, 2.0, 2.0)
        outside_gaps = []
        outside_signatures = []
        for probe in outside:
            point = ProbePoint.of(probe)
            outside_gaps.append(LocalizerUtility.gap(tuple_, point, rep))
            outside_signatures.append(LocalizerUtility.signature(tuple_, point, rep, negate_orientation=False))
        report.add(Check.above('minimum gap at |lambda| = 2', min(outside_gaps), 0.0))
        report.add(Check.equal('largest |signature| at |lambda| = 2', max(abs(s) for s in outside_signatures), 0))

        spectrum = VerificationUtility.__origin_spectrum(d)
        rounded = np.round(spectrum)
        report.add(Check.at_most('distance of the origin spectrum from the integers',
                                 np.max(np.abs(spectrum - rounded)), SPECTRUM_INTEGER_TOL))
        report.add(Check.equal('even eigenvalues at the origin', int(np.count_nonzero(rounded % 2 == 0)), 0))
        return report

    @staticmethod
    def verify_pauli_closed_form(n_samples: int | None = None, seed: int | None = None) -> TheoremReport:
        """
        For the Pauli triple the gap is | |lambda| - 1 | and the signature is 2 inside the unit sphere, 0 outside.
        Also checks the block structure of the localizer on the z axis after the diagonalizing permutation.
        """
        settings = Config().verify_settings
        n_samples = settings['samples'] if n_samples is None else n_samples
        rng = np.random.default_rng(settings['seed'] if seed is None else seed)
        rep = CliffordUtility.pauli_rep()
        tuple_ = HermitianTuple(matrices=rep.gammas, label='pauli')
        report = TheoremReport(theorem_id='pauli-closed-form', d=3)

        probes = rng.uniform(-2.0, 2.0, size=(n_samples, 3))
        errors = [abs(LocalizerUtility.gap(tuple_, ProbePoint.of(probe), rep) - abs(np.linalg.norm(probe) - 1.0))
                  for probe in probes]
        report.add(Check.at_most(f"max |gap - ||lambda| - 1|| over {n_samples} probes", max(errors), PAULI_TOL))

        inside = VerificationUtility.random_probes(n_samples, 3, rng, 0.05, 0.95)
        outside = VerificationUtility.random_probes(n_samples, 3, rng, 1.05, 3.0)
        wrong_inside = sum(LocalizerUtility.signature(tuple_, ProbePoint.of(p), rep, negate_orientation=False) != 2
                           for p in inside)
        wrong_outside = sum(LocalizerUtility.signature(tuple_, ProbePoint.of(p), rep, negate_orientation=False) != 0
                            for p in outside)
        report.add(Check.equal('probes inside the sphere with signature != 2', wrong_inside, 0))
        report.add(Check.equal('probes outside the sphere with signature != 0', wrong_outside, 0))

        z = 0.5
        localizer = LocalizerUtility.assemble(tuple_, ProbePoint.of([0.0, 0.0, z]), rep)
        blocks = PAULI_BLOCK_PERMUTATION @ localizer @ PAULI_BLOCK_PERMUTATION.T
        expected = VerificationUtility.pauli_block_form(z)
        report.add(Check.at_most('block form of the z-axis localizer', np.max(np.abs(blocks - expected)), PAULI_TOL))
        spectrum = np.sort(la.eigvalsh(localizer))
        closed_form = np.sort([1 - z, 1 + z, -1 + math.sqrt(z * z + 4), -1 - math.sqrt(z * z + 4)])
        report.add(Check.at_most('z-axis spectrum against its closed form',
                                 np.max(np.abs(spectrum - closed_form)), PAULI_TOL))
        return report

    @staticmethod
    def pauli_block_form(z: float) -> np.ndarray:
        return np.array([[1 - z, 0, 0, 0],
                         [0, -1 - z, 2, 0],
                         [0, 2, -1 + z, 0],
                         [0, 0, 0, 1 + z]], dtype=complex)

    @staticmethod
    def verify_d2_equivalence(n: int = 8, trials: int = 50, probes: int = 20,
                              seed: int | None = None) -> TheoremReport:
        """
        For d = 2 the gap at (x, y) is the smallest singular value of A_1 + i A_2 - (x + iy),
        so the Clifford spectrum is the ordinary spectrum of A_1 + i A_2.
        """
        if n < 2:
            raise ValueError(f"verify_d2_equivalence needs n >= 2, got {n}.")
        rng = np.random.default_rng(Config().verify_settings['seed'] if seed is None else seed)
        rep = CliffordUtility.build_rep(2)
        report = TheoremReport(theorem_id='d2-equivalence', d=2)

        discrepancy = 0.0
        eigenvalue_gap = 0.0
        for _ in range(trials):
            first = VerificationUtility.random_hermitian(n, rng)
            second = VerificationUtility.random_hermitian(n, rng)
            tuple_ = HermitianTuple(matrices=(first, second), label='random pair')
            combined = first + 1j * second
            for x, y in rng.uniform(-3.0, 3.0, size=(probes, 2)):
                oracle = la.svdvals(combined - (x + 1j * y) * np.eye(n)).min()
                discrepancy = max(discrepancy, abs(LocalizerUtility.gap(tuple_, ProbePoint.of([x, y]), rep) - oracle))
            for value in la.eigvals(combined):
                point = ProbePoint.of([value.real, value.imag])
                eigenvalue_gap = max(eigenvalue_gap, LocalizerUtility.gap(tuple_, point, rep)
                                     / LocalizerUtility.default_singular_tol(tuple_, point))
        report.add(Check.at_most(f"max discrepancy against the SVD oracle ({trials} pairs x {probes} probes)",
                                 discrepancy, SYMMETRY_TOL))
        report.add(Check.at_most('max gap at eigenvalues of A_1 + i A_2 in units of the singular tolerance',
                                 eigenvalue_gap, 1.0))

        pauli = HermitianTuple(matrices=CliffordUtility.pauli_rep().gammas[:2], label='sigma_x, sigma_y')
        report.add(Check.at_most('gap of (sigma_x, sigma_y) at the origin',
                                 LocalizerUtility.gap(pauli, ProbePoint.of([0.0, 0.0]), rep), SYMMETRY_TOL))
        away = VerificationUtility.random_probes(probes, 2, rng, 0.1, 2.0)
        report.add(Check.above('minimum gap of (sigma_x, sigma_y) away from the origin',
                               min(LocalizerUtility.gap(pauli, ProbePoint.of(p), rep) for p in away), 0.0))
        return report

    @staticmethod
    def verify_symmetry(hermitian_tuple: HermitianTuple, trials: int = 20, seed: int | None = None,
                        rep: CliffordRep | None = None) -> TheoremReport:
        """
        Rotation covariance of the gap under O(d), invariance of the signature under SO(d),
        invariance under conjugation by a unitary and independence of the representation.
        """
        d = hermitian_tuple.d
        rep = CliffordUtility.build_rep(d) if rep is None else rep
        rng = np.random.default_rng(Config().verify_settings['seed'] if seed is None else seed)
        report = TheoremReport(theorem_id='symmetry', d=d)
        scale = max(hermitian_tuple.norms) or 1.0

        reflection = np.eye(d)
        reflection[-1, -1] = -1.0
        alternatives = [CliffordUtility.rotate_rep(rep, CliffordUtility.random_orthogonal(d, rng))]
        if d >= 2:
            alternatives.append(CliffordUtility.direct_sum(rep, rep.negated()))

        rotation_error = 0.0
        conjugation_error = 0.0
        representation_error = 0.0
        signature_mismatches = 0
        signatures_compared = 0
        for trial in range(trials):
            probe = rng.normal(size=d) * scale / math.sqrt(d)
            point = ProbePoint.of(probe)
            gap = LocalizerUtility.gap(hermitian_tuple, point, rep)

            rotation = reflection if trial == 0 else CliffordUtility.random_orthogonal(d, rng)
            rotated_gap = LocalizerUtility.gap(hermitian_tuple.rotated(rotation), ProbePoint.of(rotation @ probe), rep)
            rotation_error = max(rotation_error, abs(rotated_gap - gap))

            unitary = VerificationUtility.random_unitary(hermitian_tuple.n, rng)
            conjugated = hermitian_tuple.conjugated(unitary)
            conjugation_error = max(conjugation_error, abs(LocalizerUtility.gap(conjugated, point, rep) - gap))

            for alternative in alternatives:
                representation_error = max(representation_error,
                                           abs(LocalizerUtility.gap(hermitian_tuple, point, alternative) - gap))

            special = CliffordUtility.random_orthogonal(d, rng, special=True)
            try:
                signature = LocalizerUtility.signature(hermitian_tuple, point, rep, negate_orientation=False)
                rotated = LocalizerUtility.signature(hermitian_tuple.rotated(special), ProbePoint.of(special @ probe),
                                                     rep, negate_orientation=False)
                conjugated_signature = LocalizerUtility.signature(conjugated, point, rep, negate_orientation=False)
            except SingularLocalizerError:
                logging.debug(f"Skipped the signature comparison at the near-singular probe {probe}.")
                continue
            signatures_compared += 1
            signature_mismatches += int(signature != rotated) + int(signature != conjugated_signature)

        report.add(Check.at_most(f"max gap change under O({d}) rotations", rotation_error, SYMMETRY_TOL))
        report.add(Check.at_most('max gap change under unitary conjugation', conjugation_error, SYMMETRY_TOL))
        report.add(Check.at_most('max gap change between representations', representation_error, SYMMETRY_TOL))
        report.add(Check.equal(f"signature mismatches under SO({d}) and conjugation "
                               f"({signatures_compared} probes)", signature_mismatches, 0))
        return report

    @staticmethod
    def verify_fuzzy_sphere(n_max: int = 10) -> TheoremReport:
        """
        Fuzzy spheres square-sum to the identity, their commutators shrink with n,
        and their localizer at the origin keeps the Pauli signature 2.
        """
        rep = CliffordUtility.pauli_rep()
        report = TheoremReport(theorem_id='fuzzy-sphere', d=3)
        sphere_defect = 0.0
        commutators = []
        wrong_signatures = 0
        for n in range(2, n_max + 1):
            tuple_ = ModelUtility.fuzzy_sphere(n)
            norms = LocalizerUtility.obstruction_norms(tuple_)
            sphere_defect = max(sphere_defect, norms.sphere_defect)
            commutators.append(norms.max_commutator)
            signature = LocalizerUtility.signature(tuple_, ProbePoint.of(np.zeros(3)), rep, negate_orientation=False)
            wrong_signatures += int(signature != 2)
        report.add(Check.at_most('max ||sum X_k^2 - I||', sphere_defect, 1e-12))
        report.add(Check.equal('increases of the max commutator norm with n',
                               int(np.count_nonzero(np.diff(commutators) >= 0)), 0))
        report.add(Check.equal('sizes with origin signature != 2', wrong_signatures, 0))
        return report

    @staticmethod
    def run_all(d_max: int | None = None, seed: int | None = None, allow_large: bool = False) -> List[TheoremReport]:
        """
        Runs every verification up to d_max, ordered by check id.
        :param allow_large: Permit d_max above the configured cap.
        :return: The reports.
        """
        settings = Config().verify_settings
        d_max = settings['d_max'] if d_max is None else d_max
        seed = settings['seed'] if seed is None else seed
        if d_max < 2:
            raise ConfigurationError(f"d_max must be at least 2, got {d_max}.")
        if d_max > settings['d_cap']:
            estimate = VerificationUtility.memory_estimate(d_max)
            if not allow_large:
                raise ConfigurationError(f"d_max={d_max} exceeds the cap {settings['d_cap']}; "
                                         f"it needs about {estimate / 2 ** 30:.1f} GiB. Pass --allow-large.")
            logging.warning(f"d_max={d_max} needs about {estimate / 2 ** 30:.1f} GiB of memory.")

        rng = np.random.default_rng(seed)
        random_tuple = HermitianTuple(
            matrices=tuple(VerificationUtility.random_hermitian(6, rng) for _ in range(5)),
            label='random 5-tuple'
        )
        reports = [VerificationUtility.verify_pauli_closed_form(seed=seed)]
        reports.extend(VerificationUtility.verify_even_gamma(d, seed=seed) for d in range(2, d_max + 1, 2))
        reports.extend(VerificationUtility.verify_odd_gamma(d, seed=seed) for d in range(3, d_max + 1, 2))
        reports.append(VerificationUtility.verify_d2_equivalence(seed=seed))
        reports.append(VerificationUtility.verify_symmetry(random_tuple, seed=seed))
        reports.append(VerificationUtility.verify_fuzzy_sphere())
        for report in reports:
            if report.passed:
                logging.info(f"Verified {report.theorem_id} (d={report.d}).")
            else:
                failed = [check.description for check in report.checks if not check.passed]
                logging.error(f"Verification of {report.theorem_id} (d={report.d}) failed: {', '.join(failed)}")
        return reports
