import asyncio
import logging
import math
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Tuple, List, Callable, Iterable

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
from scipy import ndimage
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from models.clifford_rep import CliffordRep
from models.exceptions import NumericalError, RayOriginOnSpectrumError
from models.hermitian_tuple import HermitianTuple, ProbePoint
from models.scan import ScanGrid, ScanResult
from utilities.config import Config
from utilities.localizer_utility import LocalizerUtility

INDEX_MISSING = np.iinfo(np.int32).min
POINT_FAILURES = (NumericalError, la.LinAlgError, RuntimeError)


class SpectrumUtility:
    """
    Scans lambda space: gap and index maps on grids, zero sets, their connected
    components, ray crossings and spectral flow.
    """

    @staticmethod
    def scan(hermitian_tuple: HermitianTuple, rep: CliffordRep, grid: ScanGrid, with_index: bool = False,
             threads: int | None = None, force: str | None = None, meta: dict | None = None) -> ScanResult:
        """
        Evaluates the gap, and optionally the index, at every grid point on a thread pool.
        Results are written by flat grid index, so they do not depend on scheduling.
        Grids with three or more varying axes are evaluated slab by slab into memory-mapped files.
        The files are removed once the scan is done unless [scan] slab_dir is set.
        :param hermitian_tuple: The tuple to probe.
        :param rep: Clifford representation, used as given.
        :param grid: Probe points in lambda units.
        :param with_index: Also compute the index where the localizer is invertible.
        :param threads: Pool size. Resolved through Config().threads when None.
        :param force: 'dense' or 'sparse' to override the eigensolver choice.
        :param meta: Extra metadata stored on the result.
        :return: The scan result. Failed points have NaN gap and are counted in meta.
        """
        if grid.d != hermitian_tuple.d:
            raise ValueError(f"Grid has d={grid.d} but the tuple has d={hermitian_tuple.d}.")
        LocalizerUtility.check_dimensions(hermitian_tuple, ProbePoint.of(np.zeros(grid.d)), rep)
        threads = Config().threads(threads)
        start = time.time()
        gap, index, slab_files = SpectrumUtility.__allocate(grid, with_index)
        logging.info(f"Scanning {grid.size} points of '{hermitian_tuple.label}' on {threads} threads...")

        def evaluate(flat_index: int) -> None:
            probe = ProbePoint.of(grid.point(flat_index))
            try:
                localizer = LocalizerUtility.assemble(hermitian_tuple, probe, rep)
                value = LocalizerUtility.gap_of(localizer, force)
                gap.flat[flat_index] = value
                if with_index and value > LocalizerUtility.default_singular_tol(hermitian_tuple, probe):
                    signature = LocalizerUtility.signature_of(localizer, value, force)
                    if signature % 2 == 0:
                        index.flat[flat_index] = signature // 2
                    else:
                        logging.warning(f"Odd signature {signature} at {probe.coords}.")
            except POINT_FAILURES as e:
                gap.flat[flat_index] = np.nan
                logging.warning(f"Scan point {probe.coords} failed for Reason: {e}")

        slab_size = grid.size // grid.shape[0] if slab_files else grid.size
        keep_slabs = Config().slab_dir is not None
        try:
            for slab_start in range(0, grid.size, slab_size):
                SpectrumUtility.run_pool(evaluate, range(slab_start, min(slab_start + slab_size, grid.size)),
                                         threads)
                if slab_files:
                    gap.flush()
                    if index is not None:
                        index.flush()
                    logging.debug(f"Flushed slab ending at point {slab_start + slab_size}.")
            if slab_files and not keep_slabs:
                gap = np.array(gap)
                index = np.array(index) if index is not None else None
        finally:
            if slab_files and not keep_slabs:
                for slab_file in slab_files:
                    Path(slab_file).unlink(missing_ok=True)

        elapsed = time.time() - start
        result = ScanResult(
            grid=grid,
            gap=gap,
            index=np.ma.masked_equal(index, INDEX_MISSING) if index is not None else None,
            meta=dict(meta or {}, label=hermitian_tuple.label, rep=rep.construction, threads=threads,
                      wall_time=round(elapsed, 3), slabs=grid.shape[0] if slab_files else 1,
                      slab_files=slab_files if keep_slabs else [])
        )
        result.meta['failures'] = result.failures
        logging.info(f"Scanned {grid.size} points in {round(elapsed, 2)} seconds "
                     f"with {result.failures} failed points.")
        return result

    @staticmethod
    def __allocate(grid: ScanGrid, with_index: bool):
        if len(grid.axes) < 3:
            gap = np.full(grid.shape, np.nan)
            index = np.full(grid.shape, INDEX_MISSING, dtype=np.int32) if with_index else None
            return gap, index, []
        slab_dir = Config().slab_dir
        with tempfile.NamedTemporaryFile(prefix='gap_', suffix='.dat', dir=slab_dir, delete=False) as gap_file:
            files = [gap_file.name]
        gap = np.memmap(files[0], dtype=np.float64, mode='w+', shape=grid.shape)
        gap[:] = np.nan
        index = None
        if with_index:
            with tempfile.NamedTemporaryFile(prefix='index_', suffix='.dat', dir=slab_dir,
                                             delete=False) as index_file:
                files.append(index_file.name)
            index = np.memmap(files[1], dtype=np.int32, mode='w+', shape=grid.shape)
            index[:] = INDEX_MISSING
        return gap, index, files

    @staticmethod
    def run_pool(job: Callable[[int], object], indices: Iterable[int], threads: int) -> list:
        """
        Runs job(i) for every index on a bounded thread pool and returns the results in index order.
        """
        return asyncio.run(SpectrumUtility.__gather(job, list(indices), threads))

    @staticmethod
    async def __gather(job: Callable[[int], object], indices: List[int], threads: int) -> list:
        loop = asyncio.get_running_loop()
        with ThreadPoolExecutor(max_workers=threads) as executor:
            tasks = [loop.run_in_executor(executor, job, i) for i in indices]
            return list(await asyncio.gather(*tasks))

    @staticmethod
    def gaps_at(hermitian_tuple: HermitianTuple, rep: CliffordRep, points: np.ndarray,
                threads: int | None = None, force: str | None = None) -> np.ndarray:
        """
        :return: The gap at each row of points, NaN where the evaluation failed.
        """
        def evaluate(i: int) -> float:
            try:
                return LocalizerUtility.gap(hermitian_tuple, ProbePoint.of(points[i]), rep, force)
            except POINT_FAILURES as e:
                logging.warning(f"Gap at {points[i]} failed for Reason: {e}")
                return np.nan

        return np.array(SpectrumUtility.run_pool(evaluate, range(len(points)), Config().threads(threads)))

    @staticmethod
    def default_eps(grid: ScanGrid) -> float:
        return Config().zero_set_eps_factor * grid.max_step

    @staticmethod
    def default_linking_radius(grid: ScanGrid) -> float:
        return Config().linking_radius_factor * grid.max_step * math.sqrt(len(grid.axes))

    @staticmethod
    def zero_set(result: ScanResult, eps: float | None = None) -> np.ndarray:
        """
        The eps-sublevel set of the gap on the grid. Failed points are left out.
        :return: The lambda coordinates of the selected points as an (m, d) array.
        """
        eps = SpectrumUtility.default_eps(result.grid) if eps is None else eps
        if eps <= 0:
            raise ValueError(f"eps must be positive, got {eps}.")
        with np.errstate(invalid='ignore'):
            selected = np.flatnonzero(np.asarray(result.gap).ravel() <= eps)
        if selected.size == 0:
            return np.empty((0, result.grid.d))
        return np.array([result.grid.point(i) for i in selected])

    @staticmethod
    def component_count(points: np.ndarray, linking_radius: float) -> Tuple[int, np.ndarray]:
        """
        Connected components of the radius graph on a point cloud.
        :param points: (m, d) array.
        :param linking_radius: Points closer than this are linked.
        :return: The number of components and a label per point.
        """
        if linking_radius <= 0:
            raise ValueError(f"linking_radius must be positive, got {linking_radius}.")
        points = np.asarray(points, dtype=float)
        if len(points) == 0:
            return 0, np.empty(0, dtype=int)
        pairs = cKDTree(points).query_pairs(linking_radius, output_type='ndarray')
        graph = sp.coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(len(points), len(points)))
        count, labels = connected_components(graph, directed=False)
        return int(count), labels

    @staticmethod
    def resolvent_regions(result: ScanResult, eps: float | None = None) -> Tuple[np.ndarray, int]:
        """
        Labels the grid-connected regions where the gap exceeds eps.
        :return: A label array of the grid's shape (0 outside every region) and the region count.
        """
        eps = SpectrumUtility.default_eps(result.grid) if eps is None else eps
        gap = np.asarray(result.gap)
        with np.errstate(invalid='ignore'):
            resolvent = np.isfinite(gap) & (gap > eps)
        labels, count = ndimage.label(resolvent)
        return labels, int(count)

    @staticmethod
    def index_jumps(result: ScanResult, eps: float | None = None) -> List[int]:
        """
        Regions of the resolvent on which the computed index is not constant.
        :return: The labels of such regions; empty when the index is locally constant everywhere.
        """
        if result.index is None:
            raise ValueError("The scan was run without the index.")
        labels, count = SpectrumUtility.resolvent_regions(result, eps)
        index = result.index
        jumps = []
        for label in range(1, count + 1):
            values = np.unique(index[(labels == label) & ~np.ma.getmaskarray(index)].compressed())
            if len(values) > 1:
                jumps.append(label)
        return jumps

    @staticmethod
    def infer_step(points: np.ndarray) -> float:
        """
        The grid step of a point cloud read back from a scan file: the smallest spacing along any varying axis.
        """
        steps = []
        for column in np.asarray(points, dtype=float).T:
            values = np.unique(column)
            if len(values) > 1:
                steps.append(float(np.min(np.diff(values))))
        if not steps:
            raise ValueError("The points do not vary along any axis.")
        return min(steps)

    @staticmethod
    def ray_samples(t_min: float, t_max: float, step: float) -> np.ndarray:
        if step <= 0:
            raise ValueError(f"step must be positive, got {step}.")
        if t_max <= t_min:
            raise ValueError(f"Empty ray parameter range [{t_min}, {t_max}].")
        count = int(math.floor((t_max - t_min) / step + 1e-9)) + 1
        return t_min + step * np.arange(count)

    @staticmethod
    def ray_crossings(hermitian_tuple: HermitianTuple, rep: CliffordRep, direction, t_max: float, step: float,
                      eps: float, origin=None, t_min: float = 0.0, threads: int | None = None) -> int:
        """
        Counts the maximal runs of gap <= eps along origin + t * direction for t in [t_min, t_max].
        Each run is one crossing of the Clifford spectrum. A failed sample keeps the state of the sample before it.
        :param direction: Unit vector in lambda space.
        :param origin: Start of the ray, the origin of lambda space by default.
        :return: The number of crossings.
        """
        direction = np.asarray(direction, dtype=float)
        if abs(np.linalg.norm(direction) - 1.0) > 1e-9:
            raise ValueError(f"Ray direction must be a unit vector, has norm {np.linalg.norm(direction):.6g}.")
        if eps <= 0:
            raise ValueError(f"eps must be positive, got {eps}.")
        origin = np.zeros(direction.size) if origin is None else np.asarray(origin, dtype=float)
        ts = SpectrumUtility.ray_samples(t_min, t_max, step)
        gaps = SpectrumUtility.gaps_at(hermitian_tuple, rep, origin + np.outer(ts, direction), threads)
        if np.isnan(gaps[0]):
            raise NumericalError(f"The gap at the ray origin {origin} could not be computed.")
        if gaps[0] <= eps:
            raise RayOriginOnSpectrumError(float(gaps[0]), eps)
        failed = np.isnan(gaps)
        if np.any(failed):
            logging.warning(f"{np.count_nonzero(failed)} ray samples failed and keep the previous state.")
        with np.errstate(invalid='ignore'):
            below = gaps <= eps
        for i in np.flatnonzero(failed):
            below[i] = below[i - 1]
        return int(np.count_nonzero(below[1:] & ~below[:-1]))

    @staticmethod
    def random_directions(count: int, d: int, axes: Iterable[int], seed: int) -> np.ndarray:
        """
        Uniformly random unit vectors in lambda space supported on the given 0-based axes.
        """
        axes = list(axes)
        rng = np.random.default_rng(seed)
        samples = rng.normal(size=(count, len(axes)))
        samples /= np.linalg.norm(samples, axis=1, keepdims=True)
        directions = np.zeros((count, d))
        directions[:, axes] = samples
        return directions

    @staticmethod
    def spectral_flow(hermitian_tuple: HermitianTuple, rep: CliffordRep, start, end, steps: int,
                      k: int | None = None, threads: int | None = None,
                      force: str | None = None) -> Tuple[np.ndarray, np.ndarray]:
        """
        The k eigenvalues nearest zero at evenly spaced points of the segment from start to end.
        No tracking across steps is attempted.
        :return: The segment parameters s in [0, 1] and a (steps, k) array; failed steps are NaN rows.
        """
        if steps < 2:
            raise ValueError(f"A spectral flow needs at least 2 steps, got {steps}.")
        k = Config().eig_window_k if k is None else k
        k = min(k, hermitian_tuple.n * rep.r)
        start = np.asarray(start, dtype=float)
        end = np.asarray(end, dtype=float)
        parameters = np.linspace(0.0, 1.0, steps)

        def evaluate(i: int) -> np.ndarray:
            probe = ProbePoint.of(start + parameters[i] * (end - start))
            try:
                return LocalizerUtility.eig_window(hermitian_tuple, probe, rep, k, force)
            except POINT_FAILURES as e:
                logging.warning(f"Spectral flow step {i} at {probe.coords} failed for Reason: {e}")
                return np.full(k, np.nan)

        rows = SpectrumUtility.run_pool(evaluate, range(steps), Config().threads(threads))
        return parameters, np.vstack(rows)
