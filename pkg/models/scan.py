from dataclasses import dataclass, field
from typing import Tuple, Dict

import numpy as np

from models.exceptions import ConfigurationError


@dataclass(frozen=True)
class ScanGrid:
    """
    A rectangular grid in lambda space. axes are 0-based indices of the varying
    coordinates; every other coordinate takes its value from fixed (default 0).
    """
    d: int
    axes: Tuple[int, ...]
    ranges: Tuple[Tuple[float, float], ...]
    resolution: Tuple[int, ...]
    fixed: Dict[int, float] = field(default_factory=dict)

    def __post_init__(self):
        if not self.axes:
            raise ConfigurationError("A scan grid needs at least one varying axis.")
        if not (len(self.axes) == len(self.ranges) == len(self.resolution)):
            raise ConfigurationError("Every varying axis needs one range and one resolution.")
        if len(set(self.axes)) != len(self.axes):
            raise ConfigurationError(f"Axes repeat in {self.axes}.")
        for axis, (low, high), count in zip(self.axes, self.ranges, self.resolution):
            if not 0 <= axis < self.d:
                raise ConfigurationError(f"Axis {axis + 1} does not exist for d={self.d}.")
            if count < 2:
                raise ConfigurationError(f"Axis {axis + 1} needs at least 2 points, got {count}.")
            if not low < high:
                raise ConfigurationError(f"Axis {axis + 1} has an empty range [{low}, {high}].")
        for axis in self.fixed:
            if axis in self.axes:
                raise ConfigurationError(f"Axis {axis + 1} is both varied and fixed.")
            if not 0 <= axis < self.d:
                raise ConfigurationError(f"Fixed axis {axis + 1} does not exist for d={self.d}.")

    @property
    def shape(self) -> Tuple[int, ...]:
        return tuple(self.resolution)

    @property
    def size(self) -> int:
        return int(np.prod(self.resolution))

    @property
    def steps(self) -> Tuple[float, ...]:
        return tuple((high - low) / (count - 1) for (low, high), count in zip(self.ranges, self.resolution))

    @property
    def max_step(self) -> float:
        return max(self.steps)

    def axis_values(self) -> list:
        return [np.linspace(low, high, count) for (low, high), count in zip(self.ranges, self.resolution)]

    def point(self, flat_index: int) -> np.ndarray:
        """
        :return: The full lambda vector of the grid point with the given C-order flat index.
        """
        multi_index = np.unravel_index(flat_index, self.shape)
        values = np.zeros(self.d)
        for axis, value in self.fixed.items():
            values[axis] = value
        for axis, (low, high), count, i in zip(self.axes, self.ranges, self.resolution, multi_index):
            values[axis] = low + (high - low) * i / (count - 1)
        return values

    def points(self) -> np.ndarray:
        """
        :return: All grid points as a (size, d) array in C order.
        """
        return np.array([self.point(i) for i in range(self.size)])


@dataclass
class ScanResult:
    """
    Gap, and optionally index, at every grid point. gap is NaN where evaluation failed;
    index is masked where the point is singular, failed or had an odd signature.
    """
    grid: ScanGrid
    gap: np.ndarray
    index: np.ma.MaskedArray | None = None
    meta: dict = field(default_factory=dict)

    @property
    def failures(self) -> int:
        return int(np.count_nonzero(np.isnan(self.gap)))
