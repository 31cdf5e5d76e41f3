from dataclasses import dataclass, field
from typing import Tuple, List

import numpy as np
import scipy.sparse as sp

from models.hermitian_tuple import HermitianTuple


@dataclass(frozen=True)
class LatticeModel:
    """
    A finite tight-binding sample: site geometry, Hamiltonian and diagonal position operators.
    Row k of coords is the position of basis state k; sublattices[k] is its tag.
    """
    coords: np.ndarray
    sublattices: Tuple[str, ...]
    hamiltonian: sp.csr_matrix
    params: dict
    lattice_constant: float = 1.0
    label: str = ''

    @property
    def dimension(self) -> int:
        return self.coords.shape[1]

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def positions(self) -> Tuple[sp.csr_matrix, ...]:
        return tuple(sp.diags(self.coords[:, j], format='csr') for j in range(self.dimension))

    @property
    def axis_names(self) -> List[str]:
        return [f"x{j + 1}" for j in range(self.dimension)] if self.dimension != 2 else ['x', 'y']

    def sites(self) -> List[tuple]:
        return [(k, tag, *row) for k, (tag, row) in enumerate(zip(self.sublattices, self.coords))]


@dataclass(frozen=True)
class ScaledTuple:
    """
    A lattice model turned into a dimensionless Hermitian tuple, together with the
    factors that map physical probe coordinates to lambda.
    """
    tuple: HermitianTuple
    kappas: dict
    axis_names: List[str]
    axis_scales: Tuple[float, ...] = field(default_factory=tuple)

    def to_lambda(self, physical) -> np.ndarray:
        """
        :param physical: Probe coordinates in units of distance and energy.
        :return: The matching lambda.
        """
        return np.asarray(physical, dtype=float) * np.asarray(self.axis_scales, dtype=float)


@dataclass(frozen=True)
class LoadedModel:
    """
    Everything a command needs about its input: the tuple, the representation to use,
    and how physical probe coordinates map to lambda.
    """
    tuple: HermitianTuple
    rep_name: str
    axis_names: List[str]
    axis_scales: Tuple[float, ...]
    config: dict
    lattice: LatticeModel | None = None

    def to_lambda(self, physical) -> np.ndarray:
        return np.asarray(physical, dtype=float) * np.asarray(self.axis_scales, dtype=float)

    def to_physical(self, lambdas) -> np.ndarray:
        return np.asarray(lambdas, dtype=float) / np.asarray(self.axis_scales, dtype=float)
