"""Utility functions for hhgeom."""
import os
from multiprocessing import Pool
from typing import Any, Callable, Iterable, Sequence

import numpy as np
from scipy.spatial.distance import cdist
from tqdm import tqdm

from hhgeom.constants import EPS_GEOM, JOBS_ENV_VAR


class PreconditionError(ValueError):
    """Raised when an input violates a hypothesis of the inequality being checked."""


def resolve_jobs(jobs: int | None = None) -> int:
    """Resolves the number of worker processes.

    :param jobs: Requested number of jobs. If None, falls back to the HHGEOM_JOBS environment variable, then to 1.
    :return: A positive number of jobs.
    """
    if jobs is None:
        jobs = int(os.environ.get(JOBS_ENV_VAR, "1"))

    if jobs < 1:
        raise ValueError(f"Number of jobs must be positive, got {jobs}.")

    return jobs


def parallel_map(
    function: Callable[[Any], Any],
    items: Sequence[Any],
    jobs: int = 1,
    desc: str | None = None,
) -> list[Any]:
    """Maps a function over items, optionally with a process pool, preserving the order of the items.

    :param function: A picklable function of one argument.
    :param items: The items to map over.
    :param jobs: Number of worker processes. One job maps sequentially.
    :param desc: Description for the progress bar. If None, no progress bar is shown.
    :return: The list of results in the order of the items.
    """
    # Select between multiprocessing and single processing
    if jobs > 1 and len(items) > 1:
        with Pool(processes=jobs) as pool:
            return list(tqdm(pool.imap(function, items), total=len(items), desc=desc, disable=desc is None))

    return list(tqdm(map(function, items), total=len(items), desc=desc, disable=desc is None))


def stream_rng(seed: int, index: int) -> np.random.Generator:
    """Builds the random generator of one stream (shard or trial) derived from a master seed.

    :param seed: The master seed.
    :param index: The stream index.
    :return: A NumPy random generator.
    """
    return np.random.default_rng([seed, index])


def trial_seed(seed: int, index: int) -> int:
    """Derives a reproducible integer seed for one trial of a sweep.

    :param seed: The master seed.
    :param index: The trial index.
    :return: A 32-bit integer seed.
    """
    return int(np.random.SeedSequence([seed, index]).generate_state(1)[0])


def unique_points(points: np.ndarray, tol: float = EPS_GEOM) -> np.ndarray:
    """Removes points that coincide (within a tolerance) with an earlier point.

    :param points: An (m, n) array of points.
    :param tol: Absolute distance below which two points are considered equal.
    :return: The deduplicated points in their original order.
    """
    kept: list[np.ndarray] = []
    for point in points:
        if not kept or np.min(np.linalg.norm(np.asarray(kept) - point, axis=1)) > tol:
            kept.append(point)

    return np.asarray(kept).reshape(-1, points.shape[1])


def same_point_set(first: np.ndarray, second: np.ndarray, tol: float = EPS_GEOM) -> bool:
    """Checks whether two finite point sets agree up to permutation within a tolerance.

    :param first: An (m, n) array of points.
    :param second: An (m', n) array of points.
    :param tol: Relative tolerance, scaled by the largest coordinate magnitude.
    :return: True if every point of each set has a match in the other set.
    """
    if first.shape != second.shape:
        return False

    if len(first) == 0:
        return True

    scale = max(1.0, float(np.abs(first).max()), float(np.abs(second).max()))
    distances = cdist(first, second)

    return bool(
        np.all(distances.min(axis=1) <= tol * scale)
        and np.all(distances.min(axis=0) <= tol * scale)
    )


def as_points(points: Iterable[Sequence[float]] | np.ndarray, dim: int | None = None) -> np.ndarray:
    """Converts a collection of points to a 2D float array.

    :param points: Points as nested sequences or an array.
    :param dim: Expected dimension of the points. If None, inferred.
    :return: An (m, n) float array.
    """
    array = np.asarray(points, dtype=float)

    if array.ndim == 1:
        if array.size == 0:
            array = array.reshape(0, dim or 0)
        elif dim is None or array.size == dim:
            array = array.reshape(1, -1)
        else:
            array = array.reshape(-1, dim)

    if array.ndim != 2:
        raise ValueError(f"Points must form a 2D array, got shape {array.shape}.")

    if dim is not None and array.shape[1] != dim:
        raise ValueError(f"Points must have dimension {dim}, got {array.shape[1]}.")

    return array
