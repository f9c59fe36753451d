"""Convex polytopes: hulls, H/V conversion, triangulation, volume, centroid, support function and sampling."""
from dataclasses import dataclass, replace
from functools import cached_property
from math import factorial, sqrt
from typing import Sequence

import numpy as np
from scipy.linalg import null_space
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, HalfspaceIntersection

from hhgeom.constants import EPS_GEOM, FLAT_TOL, MAX_DIM
from hhgeom.utils import as_points, same_point_set, unique_points


def check_dim(dim: int) -> None:
    """Checks that an ambient dimension is supported.

    :param dim: The ambient dimension.
    """
    if not 1 <= dim <= MAX_DIM:
        raise ValueError(f"Ambient dimension must be between 1 and {MAX_DIM}, got {dim}.")


@dataclass(frozen=True, eq=False)
class Simplex:
    """A k-simplex given by k + 1 affinely independent vertices in R^n."""

    vertices: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", as_points(self.vertices))

    @property
    def order(self) -> int:
        """Get the dimension k of the simplex."""
        return len(self.vertices) - 1

    @cached_property
    def volume(self) -> float:
        """Get the k-dimensional volume from the Gram determinant of the edge vectors."""
        order = self.order
        if order == 0:
            return 1.0

        edges = self.vertices[1:] - self.vertices[0]
        if order == edges.shape[1]:
            determinant = abs(np.linalg.det(edges))
        else:
            determinant = sqrt(max(np.linalg.det(edges @ edges.T), 0.0))

        return determinant / factorial(order)

    @property
    def centroid(self) -> np.ndarray:
        """Get the centroid (vertex average) of the simplex."""
        return self.vertices.mean(axis=0)


@dataclass(frozen=True, eq=False)
class Polytope:
    """A convex polytope in R^dim stored by its irredundant vertex list, with an optional H-form cache.

    Polytopes are immutable. Derived data (affine frame, facets, triangulation) is computed lazily and cached.
    """

    dim: int
    vertices: np.ndarray
    halfspaces: tuple[np.ndarray, np.ndarray] | None = None

    def __post_init__(self) -> None:
        check_dim(self.dim)
        object.__setattr__(self, "vertices", as_points(self.vertices, dim=self.dim))

        if self.halfspaces is not None:
            normals, offsets = self.halfspaces
            normals = as_points(normals, dim=self.dim)
            offsets = np.asarray(offsets, dtype=float).reshape(-1)

            if len(normals) != len(offsets):
                raise ValueError("Every halfspace normal needs exactly one offset.")

            object.__setattr__(self, "halfspaces", (normals, offsets))

    @classmethod
    def empty(cls, dim: int) -> "Polytope":
        """Builds the empty polytope in R^dim."""
        return cls(dim=dim, vertices=np.zeros((0, dim)))

    @classmethod
    def from_halfspaces(
        cls, dim: int, normals: np.ndarray, offsets: np.ndarray
    ) -> "Polytope":
        """Builds the vertex form of the bounded set {x : <a_j, x> <= b_j for all j}.

        :param dim: The ambient dimension.
        :param normals: An (m, dim) array of halfspace normals a_j.
        :param offsets: An (m,) array of halfspace offsets b_j.
        :return: The polytope in V-form (possibly empty or lower dimensional).
        """
        vertices = halfspace_vertices(as_points(normals, dim=dim), offsets)

        if len(vertices) == 0:
            return cls.empty(dim)

        return hull(vertices)

    @classmethod
    def from_dict(cls, data: dict) -> "Polytope":
        """Builds a polytope from its JSON form, either {"dim", "vertices"} or {"dim", "halfspaces": [{"a", "b"}]}."""
        dim = int(data["dim"])

        if "vertices" in data:
            vertices = as_points(data["vertices"], dim=dim)
            return hull(vertices) if len(vertices) > 0 else cls.empty(dim)

        if "halfspaces" in data:
            normals = [halfspace["a"] for halfspace in data["halfspaces"]]
            offsets = [halfspace["b"] for halfspace in data["halfspaces"]]
            return cls.from_halfspaces(dim, normals, offsets)

        raise ValueError('A body needs either "vertices" or "halfspaces".')

    def to_dict(self) -> dict:
        """Converts the polytope to its JSON vertex form."""
        return {"dim": self.dim, "vertices": self.vertices.tolist()}

    @property
    def is_empty(self) -> bool:
        """Get whether the polytope has no points."""
        return len(self.vertices) == 0

    @cached_property
    def affine_frame(self) -> tuple[np.ndarray, np.ndarray]:
        """Get an origin and an orthonormal basis (rows) of the affine hull."""
        if self.is_empty:
            raise ValueError("The empty polytope has no affine hull.")

        return affine_frame(self.vertices)

    @property
    def affine_dim(self) -> int:
        """Get the dimension of the affine hull (-1 for the empty polytope)."""
        if self.is_empty:
            return -1

        return self.affine_frame[1].shape[0]

    @property
    def is_full_dimensional(self) -> bool:
        """Get whether the polytope has nonempty interior in R^dim."""
        return self.affine_dim == self.dim

    @cached_property
    def local_vertices(self) -> np.ndarray:
        """Get the vertices in the coordinates of the affine hull."""
        origin, basis = self.affine_frame

        return (self.vertices - origin) @ basis.T

    @cached_property
    def facets(self) -> tuple[np.ndarray, np.ndarray]:
        """Get a minimal H-form (unit normals, offsets); lower dimensional bodies get equality pairs."""
        if self.halfspaces is not None:
            return self.halfspaces

        if self.is_empty:
            raise ValueError("The empty polytope has no H-form.")

        origin, basis = self.affine_frame
        local_normals, local_offsets = _local_facets(self.local_vertices)

        # Lift the facets of the affine hull to the ambient space
        normals = local_normals @ basis
        offsets = local_offsets + normals @ origin

        # Pin the orthogonal complement of the affine hull with pairs of opposite halfspaces
        if basis.shape[0] < self.dim:
            complement = null_space(basis).T if basis.shape[0] > 0 else np.eye(self.dim)
            levels = complement @ origin
            normals = np.vstack([normals, complement, -complement])
            offsets = np.concatenate([offsets, levels, -levels])

        return normals, offsets

    @cached_property
    def simplices(self) -> tuple[Simplex, ...]:
        """Get a triangulation into simplices of the affine hull's dimension, fanned from the vertex average."""
        if self.is_empty:
            return ()

        origin, basis = self.affine_frame
        local = self.local_vertices
        order = basis.shape[0]

        if order == 0:
            return (Simplex(self.vertices[:1]),)

        if order == 1:
            cells = [np.array([[local.min()], [local.max()]])]
        else:
            anchor = local.mean(axis=0)
            cells = [
                np.vstack([anchor, local[facet]])
                for facet in ConvexHull(local).simplices
            ]

        simplices = [Simplex(origin + cell @ basis) for cell in cells]

        return tuple(simplex for simplex in simplices if simplex.volume > 0)

    @cached_property
    def _sampling_cells(self) -> tuple[np.ndarray, np.ndarray]:
        """Get the stacked simplex vertices and their selection probabilities."""
        cells = np.stack([simplex.vertices for simplex in self.simplices])
        weights = np.array([simplex.volume for simplex in self.simplices])

        return cells, weights / weights.sum()


def affine_frame(points: np.ndarray, tol: float = EPS_GEOM) -> tuple[np.ndarray, np.ndarray]:
    """Computes an origin and an orthonormal basis of the affine hull of a point set.

    Full-dimensional point sets keep their own coordinates (zero origin, identity basis).

    :param points: An (m, n) array of points, m >= 1.
    :param tol: Relative tolerance on singular values for the rank decision.
    :return: A tuple of the origin (n,) and the basis (r, n) with orthonormal rows.
    """
    dim = points.shape[1]
    origin = points.mean(axis=0)

    if len(points) == 1:
        return origin, np.zeros((0, dim))

    _, singular_values, right_vectors = np.linalg.svd(points - origin, full_matrices=False)
    rank = int(np.sum(singular_values > tol * max(1.0, singular_values[0])))

    if rank == dim:
        return np.zeros(dim), np.eye(dim)

    return origin, right_vectors[:rank]


def _local_facets(local: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Minimal facet inequalities of a point set that is full-dimensional in its own coordinates."""
    order = local.shape[1]

    if order == 0:
        return np.zeros((0, 0)), np.zeros(0)

    if order == 1:
        return np.array([[1.0], [-1.0]]), np.array([local.max(), -local.min()])

    equations = ConvexHull(local).equations
    rows = np.hstack([equations[:, :-1], -equations[:, -1:]])

    # Qhull repeats the hyperplane of a merged facet for every triangle of it
    scale = max(1.0, float(np.abs(rows[:, -1]).max()))
    rows = unique_points(rows, tol=10 * EPS_GEOM * scale)

    return rows[:, :-1], rows[:, -1]


def _in_hull(point: np.ndarray, others: np.ndarray) -> bool:
    """Decides by linear feasibility whether a point is a convex combination of others."""
    num_others = len(others)
    result = linprog(
        c=np.zeros(num_others),
        A_eq=np.vstack([others.T, np.ones((1, num_others))]),
        b_eq=np.append(point, 1.0),
        bounds=(0, None),
        method="highs",
    )

    return result.status == 0


def hull(points: Sequence[Sequence[float]] | np.ndarray) -> Polytope:
    """Computes the irredundant vertex form of the convex hull of a point set.

    Qhull proposes candidate vertices; each candidate is then certified extreme by a linear feasibility test
    against the remaining candidates. Coincident points are merged silently.

    :param points: A nonempty collection of points in R^n, 1 <= n <= 8.
    :return: The convex hull as a Polytope.
    """
    points = as_points(points)

    if len(points) == 0:
        raise ValueError("Cannot compute the hull of an empty point set.")

    dim = points.shape[1]
    check_dim(dim)

    # Remove duplicates
    scale = max(1.0, float(np.abs(points).max()))
    points = unique_points(points, tol=EPS_GEOM * scale)

    # Work in the coordinates of the affine hull
    origin, basis = affine_frame(points)
    order = basis.shape[0]
    local = (points - origin) @ basis.T

    if order == 0:
        keep = [0]
    elif order == 1:
        keep = sorted({int(local.argmin()), int(local.argmax())})
    else:
        keep = sorted(int(index) for index in ConvexHull(local).vertices)

        # Certify every candidate with a redundancy LP
        for index in list(keep):
            others = [other for other in keep if other != index]
            if len(others) > order and _in_hull(local[index], local[others]):
                keep.remove(index)

    return Polytope(dim=dim, vertices=points[keep])


def _interval_vertices(coefficients: np.ndarray, offsets: np.ndarray, tol: float) -> np.ndarray:
    """Endpoints of the interval {y : c_j y <= b_j} for unit coefficients c_j = +-1."""
    upper = offsets[coefficients > 0] / coefficients[coefficients > 0]
    lower = offsets[coefficients < 0] / coefficients[coefficients < 0]

    if len(upper) == 0 or len(lower) == 0:
        raise ValueError("Halfspace system is unbounded.")

    low, high = lower.max(), upper.min()

    if low > high + tol:
        return np.zeros((0, 1))

    if high - low <= tol:
        return np.array([[(low + high) / 2]])

    return np.array([[low], [high]])


def chebyshev_center(normals: np.ndarray, offsets: np.ndarray) -> tuple[np.ndarray | None, float]:
    """Computes the centre and radius of the largest ball inside {y : <a_j, y> <= b_j} for unit normals a_j.

    :param normals: An (m, d) array of unit normals.
    :param offsets: An (m,) array of offsets.
    :return: A tuple of the centre (None if the system is infeasible) and the radius.
    """
    num_rows, dim = normals.shape
    result = linprog(
        c=np.append(np.zeros(dim), -1.0),
        A_ub=np.hstack([normals, np.ones((num_rows, 1))]),
        b_ub=offsets,
        bounds=[(None, None)] * dim + [(0, None)],
        method="highs",
    )

    if result.status == 2:
        return None, 0.0

    if result.status != 0:
        raise ValueError(f"Chebyshev centre LP failed: {result.message}")

    return result.x[:dim], float(result.x[dim])


def _flat_vertices(
    normals: np.ndarray, offsets: np.ndarray, center: np.ndarray, scale: float
) -> np.ndarray:
    """Vertices of a feasible system without interior: find its implicit equalities and recurse in their flat."""
    dim = normals.shape[1]

    # An inequality is an implicit equality if no feasible point satisfies it with slack
    slacks = []
    for normal, offset in zip(normals, offsets):
        result = linprog(c=normal, A_ub=normals, b_ub=offsets, bounds=(None, None), method="highs")
        slacks.append(offset - result.fun if result.status == 0 else np.inf)

    tight = np.asarray(slacks) <= 2 * (dim + 1) * FLAT_TOL * scale

    if not np.any(tight):
        return center.reshape(1, -1)

    base_point = np.linalg.lstsq(normals[tight], offsets[tight], rcond=None)[0]
    directions = null_space(normals[tight])

    if directions.shape[1] == 0:
        return base_point.reshape(1, -1)

    reduced = halfspace_vertices(
        normals[~tight] @ directions,
        offsets[~tight] - normals[~tight] @ base_point,
    )

    return base_point + reduced @ directions.T


def halfspace_vertices(
    normals: np.ndarray, offsets: np.ndarray, tol: float = EPS_GEOM
) -> np.ndarray:
    """Enumerates the vertices of the bounded set {y : <a_j, y> <= b_j for all j}.

    :param normals: An (m, d) array of normals a_j (need not be unit length).
    :param offsets: An (m,) array of offsets b_j.
    :param tol: Feasibility tolerance, relative to the coordinate scale max(1, max_j |b_j| / max_j |a_j|).
    :return: A (k, d) array of vertices; k = 0 when the set is empty.
    """
    normals = np.asarray(normals, dtype=float)
    offsets = np.asarray(offsets, dtype=float).reshape(-1)
    dim = normals.shape[1]
    empty = np.zeros((0, dim))

    # Scale of the system before normalization; nearly vanishing rows blow up their normalized offsets
    norms = np.linalg.norm(normals, axis=1)
    largest_norm = float(norms.max(initial=0.0))
    scale = max(1.0, float(np.abs(offsets).max(initial=0.0)) / largest_norm) if largest_norm > 0 else 1.0

    # Rows whose normal vanishes (relative to the largest row) are either always satisfied or make the set empty
    vanishing = norms <= tol * max(1.0, largest_norm)
    if np.any(offsets[vanishing] < -tol * max(1.0, largest_norm) * scale):
        return empty

    normals = normals[~vanishing] / norms[~vanishing, None]
    offsets = offsets[~vanishing] / norms[~vanishing]

    if dim == 0:
        return np.zeros((1, 0))

    if len(normals) == 0:
        raise ValueError("Halfspace system is unbounded.")

    if dim == 1:
        return _interval_vertices(normals[:, 0], offsets, tol * scale)

    center, radius = chebyshev_center(normals, offsets)

    if center is None:
        return empty

    if radius <= FLAT_TOL * scale:
        return _flat_vertices(normals, offsets, center, scale)

    intersection = HalfspaceIntersection(np.hstack([normals, -offsets[:, None]]), center)

    return unique_points(intersection.intersections, tol=tol * scale)


def to_hrep(polytope: Polytope) -> Polytope:
    """Populates the minimal H-form of a polytope.

    :param polytope: A nonempty polytope.
    :return: The same polytope with its halfspaces set (unit normals, one per facet, plus equality pairs
             pinning the affine hull when the polytope is lower dimensional).
    """
    return replace(polytope, halfspaces=polytope.facets)


def to_vrep(polytope: Polytope) -> Polytope:
    """Recomputes the vertex form of a polytope from its H-form.

    :param polytope: A polytope. If it carries no H-form it is returned unchanged.
    :return: A polytope in V-form.
    """
    if polytope.halfspaces is None:
        return polytope

    return Polytope.from_halfspaces(polytope.dim, *polytope.halfspaces)


def triangulate(polytope: Polytope) -> list[Simplex]:
    """Triangulates a polytope (in its affine hull) into simplices with disjoint interiors.

    :param polytope: A polytope.
    :return: A list of simplices whose union is the polytope.
    """
    return list(polytope.simplices)


def volume(polytope: Polytope) -> float:
    """Computes the volume of a polytope in its affine hull (0 for the empty polytope, 1 for a point).

    :param polytope: A polytope.
    :return: The volume.
    """
    return float(sum(simplex.volume for simplex in polytope.simplices))


def centroid(polytope: Polytope) -> np.ndarray:
    """Computes the center of mass of a polytope with respect to volume in its affine hull.

    :param polytope: A nonempty polytope.
    :return: The centroid in R^dim.
    """
    if polytope.is_empty:
        raise ValueError("The empty polytope has no centroid.")

    weights = np.array([simplex.volume for simplex in polytope.simplices])
    centers = np.array([simplex.centroid for simplex in polytope.simplices])

    return weights @ centers / weights.sum()


def support(polytope: Polytope, direction: Sequence[float] | np.ndarray) -> float:
    """Evaluates the support function h(K, x) = max over K of <x, y>.

    :param polytope: A nonempty polytope K.
    :param direction: A nonzero vector x.
    :return: The support value.
    """
    direction = np.asarray(direction, dtype=float)

    if not np.any(direction):
        raise ValueError("Support direction must be nonzero.")

    if polytope.is_empty:
        raise ValueError("The empty polytope has no support function.")

    return float(np.max(polytope.vertices @ direction))


def sample_uniform(
    polytope: Polytope, count: int, seed: int | Sequence[int] = 0
) -> np.ndarray:
    """Draws i.i.d. uniform points from a polytope.

    A simplex of the triangulation is picked with probability proportional to its volume, then a point is drawn
    with Dirichlet(1, ..., 1) barycentric coordinates.

    :param polytope: A nonempty polytope.
    :param count: Number of points.
    :param seed: Seed (or seed sequence) of the random generator.
    :return: A (count, dim) array of points.
    """
    if count < 0:
        raise ValueError(f"Sample count must be nonnegative, got {count}.")

    if count == 0:
        return np.zeros((0, polytope.dim))

    if polytope.is_empty:
        raise ValueError("Cannot sample from the empty polytope.")

    cells, weights = polytope._sampling_cells
    rng = np.random.default_rng(seed)

    cell_indices = rng.choice(len(cells), size=count, p=weights)
    barycentric = rng.dirichlet(np.ones(cells.shape[1]), size=count)

    return np.einsum("ij,ijk->ik", barycentric, cells[cell_indices])


def contains(
    polytope: Polytope, points: Sequence[Sequence[float]] | np.ndarray, tol: float = EPS_GEOM
) -> np.ndarray:
    """Tests membership of points in a polytope using its H-form.

    :param polytope: A polytope.
    :param points: Points in R^dim.
    :param tol: Relative tolerance on the inequalities.
    :return: A boolean array, one entry per point.
    """
    points = as_points(points, dim=polytope.dim)

    if polytope.is_empty:
        return np.zeros(len(points), dtype=bool)

    normals, offsets = polytope.facets
    scale = max(1.0, float(np.abs(offsets).max(initial=0.0)))

    return np.all(points @ normals.T <= offsets + tol * scale, axis=1)


def affine_image(
    polytope: Polytope, matrix: np.ndarray, shift: np.ndarray | None = None
) -> Polytope:
    """Computes the image A K + b of a polytope.

    :param polytope: A nonempty polytope K.
    :param matrix: An (m, dim) matrix A.
    :param shift: A translation b in R^m. Defaults to zero.
    :return: The image polytope.
    """
    matrix = np.asarray(matrix, dtype=float)
    image = polytope.vertices @ matrix.T

    if shift is not None:
        image = image + np.asarray(shift, dtype=float)

    # Invertible maps send vertices to vertices
    if matrix.shape[0] == matrix.shape[1] and abs(np.linalg.det(matrix)) > EPS_GEOM:
        return Polytope(dim=matrix.shape[0], vertices=image)

    return hull(image)


def minkowski_combination(first: Polytope, second: Polytope, weight: float) -> Polytope:
    """Computes the Minkowski combination (1 - w) K1 + w K2.

    :param first: A nonempty polytope K1.
    :param second: A nonempty polytope K2 of the same dimension.
    :param weight: The weight w in [0, 1].
    :return: The combination polytope.
    """
    if not 0 <= weight <= 1:
        raise ValueError(f"Minkowski weight must lie in [0, 1], got {weight}.")

    if first.dim != second.dim:
        raise ValueError("Minkowski combination requires bodies of equal dimension.")

    sums = (
        (1 - weight) * first.vertices[:, None, :] + weight * second.vertices[None, :, :]
    ).reshape(-1, first.dim)

    return hull(sums)


def is_symmetric(polytope: Polytope, tol: float = EPS_GEOM) -> bool:
    """Checks whether a polytope is 0-symmetric, i.e. K = -K.

    :param polytope: A polytope.
    :param tol: Relative tolerance on vertex coincidence.
    :return: True if the vertex set equals its negation.
    """
    return same_point_set(polytope.vertices, -polytope.vertices, tol=tol)
