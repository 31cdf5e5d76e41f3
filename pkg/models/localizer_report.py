from dataclasses import dataclass, field
from typing import List, Dict

import numpy as np


@dataclass
class LocalizerReport:
    """
    Gap, signature, index and the eigenvalues nearest zero of one localizer.
    eig_window is sorted by absolute value.
    """
    gap: float
    signature: int | None
    index: int | None
    eig_window: List[float]
    singular_flag: bool
    dimension: int = 0

    def to_dict(self) -> dict:
        return {
            'gap': self.gap,
            'signature': self.signature,
            'index': self.index,
            'eigs': list(self.eig_window),
            'singular': self.singular_flag,
        }


@dataclass
class ObstructionNorms:
    """
    Spectral norms that measure how far a tuple is from commuting and from the unit sphere.
    Commutator keys are 0-based pairs (j, k) with j < k.
    """
    commutator_norms: Dict[tuple, float]
    sphere_defect: float
    matrix_norms: List[float]
    relative_commutators: Dict[tuple, float] = field(default_factory=dict)

    @property
    def max_commutator(self) -> float:
        return max(self.commutator_norms.values(), default=0.0)

    def to_dict(self) -> dict:
        return {
            'commutator_norms': {f"{j + 1},{k + 1}": value for (j, k), value in self.commutator_norms.items()},
            'relative_commutators': {f"{j + 1},{k + 1}": value
                                     for (j, k), value in self.relative_commutators.items()},
            'sphere_defect': self.sphere_defect,
            'matrix_norms': [float(np.round(value, 15)) for value in self.matrix_norms],
        }
