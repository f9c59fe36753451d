"""Parametric body families and random body generators."""
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Callable

import numpy as np

from hhgeom.constants import BODY_FAMILIES, EPS_GEOM
from hhgeom.polytope import Polytope, check_dim, hull, is_symmetric
from hhgeom.utils import PreconditionError, as_points


@dataclass(frozen=True)
class BodyFamily:
    """A named body family together with its parameters.

    :param tag: One of the family tags in hhgeom.constants.BODY_FAMILIES.
    :param parameters: Keyword arguments of the family builder (dimension, m, base polytope, apex, x0, C0, C1, seed, ...).
    """

    tag: str
    parameters: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.tag not in BODY_FAMILIES:
            raise ValueError(
                f'Body family "{self.tag}" is not supported. Choose from {", ".join(BODY_FAMILIES)}.'
            )


def box(lower: np.ndarray, upper: np.ndarray) -> Polytope:
    """Builds the axis-parallel box [lower_1, upper_1] x ... x [lower_n, upper_n].

    :param lower: Lower corner.
    :param upper: Upper corner, coordinate-wise strictly larger than the lower corner.
    :return: The box.
    """
    lower = np.asarray(lower, dtype=float).reshape(-1)
    upper = np.asarray(upper, dtype=float).reshape(-1)

    if lower.shape != upper.shape or np.any(upper <= lower):
        raise ValueError("Box corners must have equal length and satisfy lower < upper.")

    corners = np.array(list(product(*zip(lower, upper))))

    return Polytope(dim=len(lower), vertices=corners)


def cube(n: int, half_width: float = 1.0) -> Polytope:
    """Builds the cube [-half_width, half_width]^n."""
    return box(-half_width * np.ones(n), half_width * np.ones(n))


def cross_polytope(n: int, radius: float = 1.0) -> Polytope:
    """Builds the cross-polytope conv{+-radius e_1, ..., +-radius e_n}."""
    check_dim(n)
    identity = radius * np.eye(n)

    return Polytope(dim=n, vertices=np.vstack([identity, -identity]))


def regular_polygon(m: int, radius: float = 1.0) -> Polytope:
    """Builds the regular m-gon inscribed in the circle of the given radius, with a vertex on the positive x-axis."""
    if m < 3:
        raise ValueError(f"A regular polygon needs at least 3 vertices, got {m}.")

    angles = 2 * np.pi * np.arange(m) / m

    return Polytope(dim=2, vertices=radius * np.column_stack([np.cos(angles), np.sin(angles)]))


def regular_mgon_prism(n: int, m: int, radius: float = 1.0, half_height: float = 1.0) -> Polytope:
    """Builds the prism [-h, h]^(n - 2) x Q_m with Q_m a regular m-gon in the last two coordinates.

    It is the polytopal stand-in for the solid cylinder [-h, h]^(n - 2) x (disc of the given radius).

    :param n: Ambient dimension, at least 2.
    :param m: Number of polygon vertices, at least 3.
    :param radius: Circumradius of the polygon.
    :param half_height: Half-width h of the interval factors.
    :return: The prism.
    """
    if n < 2:
        raise ValueError(f"A prism over a polygon needs dimension at least 2, got {n}.")

    polygon = regular_polygon(m, radius).vertices

    if n == 2:
        return Polytope(dim=2, vertices=polygon)

    heights = cube(n - 2, half_height).vertices
    vertices = np.array([np.concatenate([height, corner]) for height in heights for corner in polygon])

    return Polytope(dim=n, vertices=vertices)


def cone_over_base(base: Polytope, apex: np.ndarray | None = None) -> Polytope:
    """Builds the cone conv(base x {0} U {apex}).

    :param base: A full-dimensional polytope in R^(n - 1).
    :param apex: The apex in R^n with nonzero last coordinate. Defaults to e_n.
    :return: The cone.
    """
    n = base.dim + 1
    apex = np.eye(n)[-1] if apex is None else np.asarray(apex, dtype=float).reshape(-1)

    if len(apex) != n:
        raise ValueError(f"The apex must live in R^{n}, got a vector of length {len(apex)}.")

    if abs(apex[-1]) <= EPS_GEOM:
        raise ValueError("The apex must lie off the hyperplane of the base.")

    if not base.is_full_dimensional:
        raise ValueError("The base of a cone must be full dimensional.")

    lifted = np.hstack([base.vertices, np.zeros((len(base.vertices), 1))])

    return Polytope(dim=n, vertices=np.vstack([lifted, apex]))


def generalized_cylinder(x0: np.ndarray, c0: Polytope) -> Polytope:
    """Builds the generalized symmetric cylinder [-x0, x0] + ({0} x C0).

    :param x0: A vector in R^n with nonzero first coordinate.
    :param c0: A 0-symmetric polytope in R^(n - 1).
    :return: The cylinder, whose vertices are +-x0 + (0, c) for the vertices c of C0.
    """
    x0 = np.asarray(x0, dtype=float).reshape(-1)
    n = len(x0)

    if c0.dim != n - 1:
        raise ValueError(f"C0 must live in R^{n - 1}, got dimension {c0.dim}.")

    if abs(x0[0]) <= EPS_GEOM:
        raise ValueError("x0 must have a nonzero first coordinate.")

    if not is_symmetric(c0):
        raise PreconditionError("Generalized cylinder requires C0 = -C0.")

    base = np.hstack([np.zeros((len(c0.vertices), 1)), c0.vertices])

    return Polytope(dim=n, vertices=np.vstack([base + x0, base - x0]))


def scaled_slab_body(
    n: int, i: int = 1, c0: Polytope | None = None, c1: Polytope | None = None
) -> Polytope:
    """Builds conv over t in {-1, 1} of {t} x C0 x (1 + t) C1, whose slice at height t is {t} x C0 x (1 + t) C1.

    :param n: Ambient dimension.
    :param i: Dimension of the subspace lin{e_1, ..., e_i}, 1 <= i <= n - 1.
    :param c0: A 0-symmetric polytope in R^(i - 1). Ignored when i = 1. Defaults to [-1, 1]^(i - 1).
    :param c1: A polytope in R^(n - i). Defaults to [0, 1]^(n - i).
    :return: The body.
    """
    check_dim(n)

    if not 1 <= i <= n - 1:
        raise ValueError(f"The subspace dimension must satisfy 1 <= i <= n - 1, got i = {i}, n = {n}.")

    # Middle factor C0
    if i == 1:
        middle = np.zeros((1, 0))
    else:
        c0 = cube(i - 1) if c0 is None else c0

        if c0.dim != i - 1:
            raise ValueError(f"C0 must live in R^{i - 1}, got dimension {c0.dim}.")

        if not is_symmetric(c0):
            raise PreconditionError("Scaled slab body requires C0 = -C0.")

        middle = c0.vertices

    # Scaled factor C1
    c1 = box(np.zeros(n - i), np.ones(n - i)) if c1 is None else c1

    if c1.dim != n - i:
        raise ValueError(f"C1 must live in R^{n - i}, got dimension {c1.dim}.")

    bottom = [np.concatenate([[-1.0], point, np.zeros(n - i)]) for point in middle]
    top = [np.concatenate([[1.0], point, 2 * corner]) for point in middle for corner in c1.vertices]

    return Polytope(dim=n, vertices=np.array(bottom + top))


def random_hull(n: int, count: int = 20, seed: int = 0, symmetric: bool = False) -> Polytope:
    """Builds the hull of uniform random points in [-1, 1]^n, optionally symmetrized by adding the negated points.

    :param n: Ambient dimension.
    :param count: Number of random points, at least n + 1.
    :param seed: Random seed.
    :param symmetric: Whether to return a 0-symmetric body.
    :return: The random body (full dimensional with probability one).
    """
    check_dim(n)

    if count < n + 1:
        raise ValueError(f"A random hull in R^{n} needs at least {n + 1} points, got {count}.")

    points = np.random.default_rng(seed).uniform(-1, 1, size=(count, n))

    if symmetric:
        points = np.vstack([points, -points])

    return hull(points)


def random_symmetric_body(n: int, count: int, rng: np.random.Generator) -> Polytope:
    """Builds a random 0-symmetric body conv(X U -X) for uniform points X in [-1, 1]^n."""
    points = rng.uniform(-1, 1, size=(count, n))

    return hull(np.vstack([points, -points]))


def random_symmetric_projection_body(
    n: int, i: int, count: int, rng: np.random.Generator
) -> Polytope:
    """Builds a random body whose projection onto lin{e_1, ..., e_i} is 0-symmetric while the body itself is generally not.

    Every point (y, z) is paired with a point (-y, z') whose last n - i coordinates are drawn independently.

    :param n: Ambient dimension.
    :param i: Dimension of the coordinate subspace, 1 <= i <= n - 1.
    :param count: Number of point pairs.
    :param rng: Random generator.
    :return: The random body.
    """
    if not 1 <= i <= n - 1:
        raise ValueError(f"The subspace dimension must satisfy 1 <= i <= n - 1, got i = {i}, n = {n}.")

    heads = rng.uniform(-1, 1, size=(count, i))
    tails = rng.uniform(-1, 1, size=(2 * count, n - i))

    return hull(np.hstack([np.vstack([heads, -heads]), tails]))


def random_slab_normalized_body(n: int, count: int, rng: np.random.Generator) -> Polytope:
    """Builds a random body with P_lin{e1} K = [-e1, e1], i.e. first coordinates filling exactly [-1, 1].

    :param n: Ambient dimension, at least 2.
    :param count: Number of interior random points (two extreme points are always added).
    :param rng: Random generator.
    :return: The random body.
    """
    points = rng.uniform(-1, 1, size=(count + 2, n))
    points[0, 0], points[1, 0] = -1.0, 1.0

    return hull(points)


FAMILY_BUILDERS: dict[str, Callable[..., Polytope]] = {
    "cube": cube,
    "cross_polytope": cross_polytope,
    "regular_mgon_prism": regular_mgon_prism,
    "cone_over_base": cone_over_base,
    "generalized_cylinder": generalized_cylinder,
    "scaled_slab_body": scaled_slab_body,
    "random_hull": random_hull,
}


def make_body(spec: BodyFamily) -> Polytope:
    """Builds the polytope described by a body family specification.

    :param spec: The family tag and its parameters. Polytope-valued parameters (base, c0, c1) may be given either as
                 Polytope objects or as vertex lists.
    :return: The body in V-form.
    """
    parameters = {
        name: _as_polytope(value) if name in {"base", "c0", "c1"} and value is not None else value
        for name, value in spec.parameters.items()
    }

    try:
        return FAMILY_BUILDERS[spec.tag](**parameters)
    except TypeError as error:
        raise ValueError(f'Invalid parameters for body family "{spec.tag}": {error}') from error


def _as_polytope(value: Polytope | list) -> Polytope:
    """Accepts a polytope or a vertex list (hulled)."""
    if isinstance(value, Polytope):
        return value

    return hull(as_points(value))
