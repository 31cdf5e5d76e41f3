from dataclasses import dataclass, field, replace
from typing import Tuple

import numpy as np


@dataclass(frozen=True)
class CliffordRep:
    """
    A tuple of d anticommuting Hermitian involutions gamma_1, ..., gamma_d of size r.
    For odd d, orientation is +1 when gamma_d = eps_d gamma_{d-1} ... gamma_1 with
    eps_d = i^((d-1)/2), and -1 for the negated irreducible. Even d carries None.
    """
    gammas: Tuple[np.ndarray, ...]
    orientation: int | None = None
    construction: str = 'user-supplied'

    @property
    def d(self) -> int:
        return len(self.gammas)

    @property
    def r(self) -> int:
        return self.gammas[0].shape[0]

    @property
    def is_irreducible_size(self) -> bool:
        return self.r == 2 ** (self.d // 2)

    def stacked(self) -> np.ndarray:
        """
        :return: The generators as one (d, r, r) array.
        """
        return np.stack(self.gammas)

    def negated(self) -> 'CliffordRep':
        """
        The other irreducible for odd d. Negating every generator flips the orientation.
        :return: A new representation with every generator negated.
        """
        orientation = None if self.orientation is None else -self.orientation
        return CliffordRep(
            gammas=tuple(-gamma for gamma in self.gammas),
            orientation=orientation,
            construction=self.construction
        )

    def relabeled(self, orientation: int | None) -> 'CliffordRep':
        return replace(self, orientation=orientation)


@dataclass(frozen=True)
class ValidationReport:
    """
    Measured defects of a representation against the Clifford relations.
    """
    d: int
    r: int
    tol: float
    hermiticity_defect: float
    square_defect: float
    anticommutator_defect: float
    orientation_defect: float | None = None
    notes: list = field(default_factory=list)
    hermiticity_tol: float | None = None

    @property
    def max_defect(self) -> float:
        defects = [self.hermiticity_defect, self.square_defect, self.anticommutator_defect]
        if self.orientation_defect is not None:
            defects.append(self.orientation_defect)
        return max(defects)

    @property
    def passed(self) -> bool:
        hermiticity_tol = self.tol if self.hermiticity_tol is None else self.hermiticity_tol
        relations = [self.square_defect, self.anticommutator_defect]
        if self.orientation_defect is not None:
            relations.append(self.orientation_defect)
        return self.hermiticity_defect <= hermiticity_tol and max(relations) <= self.tol
