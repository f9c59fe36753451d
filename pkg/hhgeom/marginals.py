"""Linear subspaces, projections P_H K, sections K cap (x + H^perp), Brunn profiles and Fubini volumes."""
from dataclasses import dataclass
from functools import partial
from typing import Sequence

import numpy as np
from scipy.linalg import null_space
from scipy.optimize import minimize, minimize_scalar

from hhgeom.constants import EPS_GEOM, EPS_NUM
from hhgeom.functional import ConcaveFn, IntegralEstimate
from hhgeom.polytope import (
    Polytope,
    centroid,
    check_dim,
    halfspace_vertices,
    hull,
    is_symmetric,
    minkowski_combination,
    sample_uniform,
    volume,
)
from hhgeom.reports import InequalityReport, PropertyReport, exact_tolerance
from hhgeom.utils import as_points, parallel_map


@dataclass(frozen=True, eq=False)
class Subspace:
    """An i-dimensional linear subspace H of R^n with orthonormal frames of H (basis) and H^perp (complement_basis)."""

    ambient_dim: int
    basis: np.ndarray
    complement_basis: np.ndarray

    def __post_init__(self) -> None:
        check_dim(self.ambient_dim)
        basis = as_points(self.basis, dim=self.ambient_dim)
        complement_basis = as_points(self.complement_basis, dim=self.ambient_dim)
        frame = np.vstack([basis, complement_basis])

        if len(frame) != self.ambient_dim or not np.allclose(frame @ frame.T, np.eye(self.ambient_dim), atol=1e-12):
            raise ValueError("Basis and complement basis must form an orthonormal frame of the ambient space.")

        if not 1 <= len(basis) <= self.ambient_dim - 1:
            raise ValueError(f"Subspace dimension must lie between 1 and {self.ambient_dim - 1}, got {len(basis)}.")

        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "complement_basis", complement_basis)

    @classmethod
    def from_vectors(cls, vectors: Sequence[Sequence[float]] | np.ndarray) -> "Subspace":
        """Builds the span of linearly independent vectors, orthonormalized with one re-orthogonalization pass.

        The frame keeps the orientation of the input: the j-th basis vector has positive inner product with the
        j-th input vector's component orthogonal to the previous ones.

        :param vectors: An (i, n) array of spanning vectors.
        :return: The subspace.
        """
        vectors = as_points(vectors)
        basis, triangle = np.linalg.qr(vectors.T)

        if np.any(np.abs(np.diag(triangle)) <= EPS_GEOM * max(1.0, float(np.abs(vectors).max()))):
            raise ValueError("Spanning vectors of a subspace must be linearly independent.")

        basis = basis * np.sign(np.diag(triangle))
        basis, correction = np.linalg.qr(basis)
        basis = (basis * np.sign(np.diag(correction))).T

        return cls(ambient_dim=vectors.shape[1], basis=basis, complement_basis=null_space(basis).T)

    @classmethod
    def coordinate(cls, n: int, indices: Sequence[int]) -> "Subspace":
        """Builds the coordinate subspace lin{e_j : j in indices} (0-based indices)."""
        indices = list(indices)
        others = [index for index in range(n) if index not in indices]
        identity = np.eye(n)

        return cls(ambient_dim=n, basis=identity[indices], complement_basis=identity[others])

    @classmethod
    def random(cls, n: int, i: int, rng: np.random.Generator) -> "Subspace":
        """Builds a random i-dimensional subspace spanned by Gaussian vectors."""
        return cls.from_vectors(rng.standard_normal((i, n)))

    @property
    def dim(self) -> int:
        """Get the dimension i of H."""
        return len(self.basis)

    @property
    def codim(self) -> int:
        """Get the dimension n - i of H^perp."""
        return self.ambient_dim - self.dim

    def coordinates(self, points: np.ndarray) -> np.ndarray:
        """Maps points of R^n to their H-coordinates."""
        return as_points(points, dim=self.ambient_dim) @ self.basis.T

    def lift(self, x: Sequence[float] | float) -> np.ndarray:
        """Maps H-coordinates to the point of H in R^n."""
        return np.atleast_1d(np.asarray(x, dtype=float)) @ self.basis

    @classmethod
    def from_dict(cls, data: dict) -> "Subspace":
        """Builds a subspace from {"ambient": n, "basis": [[...], ...]}, orthonormalizing the basis."""
        subspace = cls.from_vectors(data["basis"])

        if subspace.ambient_dim != int(data["ambient"]):
            raise ValueError("Subspace basis vectors do not match the ambient dimension.")

        return subspace

    def to_dict(self) -> dict:
        return {"ambient": self.ambient_dim, "basis": self.basis.tolist()}


def _check_dims(K: Polytope, H: Subspace) -> None:
    if K.dim != H.ambient_dim:
        raise ValueError(f"Body lives in R^{K.dim} but the subspace lives in R^{H.ambient_dim}.")


def project(K: Polytope, H: Subspace) -> Polytope:
    """Computes the orthogonal projection P_H K in H-coordinates.

    :param K: A nonempty polytope.
    :param H: A subspace.
    :return: The projection, a polytope of dimension i.
    """
    _check_dims(K, H)

    return hull(H.coordinates(K.vertices))


def section(K: Polytope, H: Subspace, x: Sequence[float] | float) -> Polytope:
    """Computes the section K cap (x + H^perp) in H^perp-coordinates.

    The flat x + H^perp is parametrized as lift(x) + y B (B the complement basis) and substituted into the H-form of K.

    :param K: A nonempty polytope.
    :param H: A subspace.
    :param x: A point in H-coordinates.
    :return: The section, a polytope of dimension n - i; empty when x lies outside P_H K.
    """
    _check_dims(K, H)
    normals, offsets = K.facets
    point = H.lift(x)

    if point.shape != (K.dim,):
        raise ValueError(f"Section point must have {H.dim} coordinates.")

    vertices = halfspace_vertices(normals @ H.complement_basis.T, offsets - normals @ point)

    if len(vertices) == 0:
        return Polytope.empty(H.codim)

    return Polytope(dim=H.codim, vertices=vertices)


def section_volume(K: Polytope, H: Subspace, x: Sequence[float] | float) -> float:
    """Computes the (n - i)-dimensional volume of K cap (x + H^perp), which is 0 for lower dimensional sections."""
    piece = section(K, H, x)

    if piece.affine_dim < H.codim:
        return 0.0

    return volume(piece)


def is_projection_symmetric(K: Polytope, H: Subspace) -> bool:
    """Checks whether P_H K = -P_H K."""
    return is_symmetric(project(K, H))


@dataclass(frozen=True, eq=False)
class BrunnProfile:
    """The Brunn profile x -> |K cap (x + H^perp)|^(1/(n - i)) of a body along a subspace."""

    subspace: Subspace
    body: Polytope

    @property
    def exponent(self) -> float:
        return 1 / self.subspace.codim

    def __call__(self, x: Sequence[float] | float) -> float:
        return brunn_eval(self, x)


def brunn_eval(p: BrunnProfile, x: Sequence[float] | float) -> float:
    """Evaluates a Brunn profile (0 outside P_H K)."""
    return section_volume(p.body, p.subspace, x) ** p.exponent


def _concavity_margin(triple: tuple[np.ndarray, np.ndarray, float], profile: BrunnProfile) -> float:
    """f((1 - lam) x + lam y) - ((1 - lam) f(x) + lam f(y)) for one segment."""
    start, end, weight = triple

    return profile((1 - weight) * start + weight * end) - ((1 - weight) * profile(start) + weight * profile(end))


def check_brunn_concavity(
    K: Polytope, H: Subspace, trials: int, seed: int, jobs: int = 1
) -> PropertyReport:
    """Tests concavity of the Brunn profile along random segments of P_H K.

    :param K: A body.
    :param H: A subspace.
    :param trials: Number of random segments.
    :param seed: Random seed.
    :param jobs: Number of worker processes.
    :return: A property report whose margins are f((1 - lam) x + lam y) - (1 - lam) f(x) - lam f(y).
    """
    if trials < 1:
        raise ValueError(f"Number of trials must be positive, got {trials}.")

    shadow = project(K, H)
    starts = sample_uniform(shadow, trials, seed=[seed, 0])
    ends = sample_uniform(shadow, trials, seed=[seed, 1])
    weights = np.random.default_rng([seed, 2]).uniform(0, 1, size=trials)

    margins = np.array(
        parallel_map(
            partial(_concavity_margin, profile=BrunnProfile(subspace=H, body=K)),
            list(zip(starts, ends, weights)),
            jobs=jobs,
        )
    )

    return PropertyReport(
        name="brunn_concavity",
        trials=trials,
        violations=int(np.sum(margins < -EPS_NUM)),
        worst_margin=float(margins.min()),
        tolerance=EPS_NUM,
        seed=seed,
    )


def fubini_volume(K: Polytope, H: Subspace, grid: int, seed: int = 0) -> IntegralEstimate:
    """Estimates int_{P_H K} |K cap (x + H^perp)| dx.

    For i = 1 the section volume is a polynomial of degree n - 1 between consecutive vertex projections, so composite
    Gauss-Legendre quadrature on a grid refined at those projections is exact. For i > 1 the integral is estimated by
    Monte Carlo over P_H K with grid samples.

    :param K: A body.
    :param H: A subspace.
    :param grid: Number of grid knots (i = 1) or of Monte Carlo samples (i > 1), at least 2.
    :param seed: Random seed of the Monte Carlo path.
    :return: The estimate.
    """
    if grid < 2:
        raise ValueError(f"Fubini grid must have at least 2 points, got {grid}.")

    shadow = project(K, H)

    if H.dim == 1:
        heights = H.coordinates(K.vertices)[:, 0]
        knots = np.unique(np.concatenate([np.linspace(heights.min(), heights.max(), grid), heights]))
        nodes, weights = np.polynomial.legendre.leggauss(K.dim // 2 + 1)

        total, evaluations = 0.0, 0
        for left, right in zip(knots[:-1], knots[1:]):
            if right - left <= EPS_GEOM:
                continue
            half = (right - left) / 2
            values = [section_volume(K, H, left + half * (node + 1)) for node in nodes]
            total += half * float(np.dot(weights, values))
            evaluations += len(nodes)

        return IntegralEstimate(value=total, std_error=0.0, method="quadrature", samples=evaluations)

    points = sample_uniform(shadow, grid, seed=seed)
    values = np.array([section_volume(K, H, point) for point in points])
    shadow_volume = volume(shadow)

    return IntegralEstimate(
        value=shadow_volume * float(values.mean()),
        std_error=shadow_volume * float(values.std(ddof=1)) / np.sqrt(grid),
        method="monte_carlo",
        samples=grid,
    )


def max_section_volume(K: Polytope, H: Subspace) -> tuple[float, np.ndarray]:
    """Maximizes the section volume over P_H K, a concave maximization of the Brunn profile.

    :param K: A body.
    :param H: A subspace.
    :return: The largest section volume found and the point of P_H K attaining it.
    """
    shadow = project(K, H)
    profile = BrunnProfile(subspace=H, body=K)

    # Starting candidates: centroids of the projection and of the body
    candidates = [centroid(shadow), H.coordinates(centroid(K))[0]]

    if H.dim == 1:
        lower, upper = shadow.vertices.min(), shadow.vertices.max()
        result = minimize_scalar(lambda t: -profile(t), bounds=(lower, upper), method="bounded", options={"xatol": 1e-10})
        candidates.append(np.array([result.x]))
    else:
        result = minimize(
            lambda x: -profile(x), candidates[0], method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-12}
        )
        candidates.append(np.asarray(result.x))

    values = [section_volume(K, H, candidate) for candidate in candidates]
    best = int(np.argmax(values))

    return values[best], candidates[best]


def check_brunn_minkowski(K1: Polytope, K2: Polytope, weight: float) -> InequalityReport:
    """Checks |(1 - lam) K1 + lam K2|^(1/n) >= (1 - lam) |K1|^(1/n) + lam |K2|^(1/n).

    :param K1: A body.
    :param K2: A body of the same dimension.
    :param weight: The weight lam in [0, 1].
    :return: The report, with the combination on the right-hand side.
    """
    n = K1.dim
    combination = minkowski_combination(K1, K2, weight)
    lhs = (1 - weight) * volume(K1) ** (1 / n) + weight * volume(K2) ** (1 / n)
    rhs = volume(combination) ** (1 / n)

    return InequalityReport(
        name="brunn_minkowski",
        lhs=lhs,
        rhs=rhs,
        tolerance=exact_tolerance(rhs),
        method={"lhs": "exact", "rhs": "exact"},
        instance={"first": K1.to_dict(), "second": K2.to_dict(), "weight": weight},
    )


def profile_concave_fn(
    K: Polytope, H: Subspace, points: np.ndarray, power: float = 1.0
) -> ConcaveFn:
    """Fits the Brunn profile (raised to a power in (0, 1]) on P_H K by the concave envelope of sampled values.

    The vertices of P_H K are always added to the samples so the envelope is defined on the whole projection.

    :param K: A body.
    :param H: A subspace.
    :param points: Sample points in H-coordinates.
    :param power: Exponent applied to the profile, in (0, 1] to keep it concave.
    :return: The fitted concave function on P_H K (in H-coordinates).
    """
    if not 0 < power <= 1:
        raise ValueError(f"Profile power must lie in (0, 1], got {power}.")

    shadow = project(K, H)
    points = np.vstack([shadow.vertices, as_points(points, dim=H.dim)])
    profile = BrunnProfile(subspace=H, body=K)
    values = np.array([profile(point) ** power for point in points])

    return ConcaveFn.envelope(points, values, domain=shadow)
