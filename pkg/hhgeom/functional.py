"""Concave functions, convex gauges, integration of gauges of concave functions, and functional Hermite-Hadamard checks."""
from dataclasses import dataclass
from functools import lru_cache, partial
from math import ceil, factorial
from typing import Callable, Iterator, Literal, Sequence

import numpy as np
from scipy.integrate import quad
from scipy.linalg import expm
from scipy.spatial import ConvexHull

from hhgeom.constants import (
    EPS_GEOM,
    EPS_NUM,
    LOG_LIMIT_TOL,
    MIN_MONTE_CARLO_SAMPLES,
    SHARD_SIZE,
    SIGMA_MULTIPLIER,
)
from hhgeom.polytope import Polytope, centroid, contains, hull, is_symmetric, sample_uniform, volume
from hhgeom.reports import InequalityReport, exact_tolerance, monte_carlo_tolerance
from hhgeom.utils import PreconditionError, as_points, parallel_map, unique_points


@dataclass(frozen=True, eq=False)
class ConcaveFn:
    """A concave function f(x) = min_j (<a_j, x> + b_j) on a polytope domain.

    Unless negative values are allowed, nonnegativity on the domain is certified at construction (the minimum of a
    min of affine functions over a polytope is attained at a vertex) and evaluation clamps at 0.

    :param slopes: An (m, n) array of slopes a_j.
    :param intercepts: An (m,) array of intercepts b_j.
    :param domain: The domain polytope C.
    :param allow_negative: Whether negative values are allowed (used for exponents u of log-concave functions).
    """

    slopes: np.ndarray
    intercepts: np.ndarray
    domain: Polytope
    allow_negative: bool = False

    def __post_init__(self) -> None:
        slopes = as_points(self.slopes, dim=self.domain.dim)
        intercepts = np.asarray(self.intercepts, dtype=float).reshape(-1)

        if len(slopes) == 0 or len(slopes) != len(intercepts):
            raise ValueError("A concave function needs at least one piece and one intercept per slope.")

        object.__setattr__(self, "slopes", slopes)
        object.__setattr__(self, "intercepts", intercepts)

        if self.domain.is_empty:
            raise ValueError("The domain of a concave function must be nonempty.")

        if not self.allow_negative and self.vertex_minimum < -EPS_NUM:
            raise PreconditionError(
                f"Function must satisfy f >= 0 on C, but its minimum over C is {self.vertex_minimum:.3g}."
            )

    @classmethod
    def affine(
        cls, domain: Polytope, slope: Sequence[float], intercept: float, allow_negative: bool = False
    ) -> "ConcaveFn":
        """Builds the affine function <slope, x> + intercept."""
        return cls(
            slopes=np.asarray(slope, dtype=float).reshape(1, -1),
            intercepts=np.array([intercept], dtype=float),
            domain=domain,
            allow_negative=allow_negative,
        )

    @classmethod
    def constant(cls, domain: Polytope, value: float) -> "ConcaveFn":
        """Builds the constant function."""
        return cls.affine(domain, np.zeros(domain.dim), value, allow_negative=value < 0)

    @classmethod
    def envelope(
        cls,
        points: np.ndarray,
        values: np.ndarray,
        domain: Polytope | None = None,
        allow_negative: bool = False,
    ) -> "ConcaveFn":
        """Builds the least concave majorant of data (x_k, v_k) on conv{x_k} from the upper facets of the lifted hull.

        :param points: An (m, d) array of points x_k.
        :param values: An (m,) array of values v_k.
        :param domain: The domain. Defaults to the hull of the points.
        :param allow_negative: Whether negative values are allowed.
        :return: The concave envelope as a min of affine pieces.
        """
        points = as_points(points)
        values = np.asarray(values, dtype=float).reshape(-1)
        domain = hull(points) if domain is None else domain
        scale = max(1.0, float(np.abs(values).max()))

        # Affine data is its own envelope
        design = np.hstack([points, np.ones((len(points), 1))])
        coefficients = np.linalg.lstsq(design, values, rcond=None)[0]

        if np.max(np.abs(design @ coefficients - values)) <= EPS_GEOM * scale:
            return cls.affine(domain, coefficients[:-1], coefficients[-1], allow_negative=allow_negative)

        # Upper facets of the lifted hull have an outward normal pointing up in the value coordinate
        equations = ConvexHull(np.hstack([points, values[:, None]])).equations
        upper = equations[equations[:, -2] > EPS_GEOM]
        pieces = np.hstack([-upper[:, :-2], -upper[:, -1:]]) / upper[:, -2:-1]
        pieces = unique_points(pieces, tol=10 * EPS_GEOM * scale)

        return cls(
            slopes=pieces[:, :-1],
            intercepts=pieces[:, -1],
            domain=domain,
            allow_negative=allow_negative,
        )

    @property
    def pieces(self) -> list[tuple[np.ndarray, float]]:
        """Get the affine pieces as (a_j, b_j) pairs."""
        return list(zip(self.slopes, self.intercepts.tolist()))

    @property
    def is_affine(self) -> bool:
        """Get whether the function has a single piece."""
        return len(self.intercepts) == 1

    @property
    def vertex_minimum(self) -> float:
        """Get the unclamped minimum over the domain, attained at a domain vertex."""
        return float(self.raw(self.domain.vertices).min())

    def raw(self, points: np.ndarray) -> np.ndarray:
        """Evaluates min_j (<a_j, x> + b_j) without clamping."""
        points = as_points(points, dim=self.domain.dim)

        return np.min(points @ self.slopes.T + self.intercepts, axis=1)

    def __call__(self, points: np.ndarray) -> np.ndarray:
        """Evaluates the function at points (clamped at 0 unless negative values are allowed)."""
        values = self.raw(points)

        return values if self.allow_negative else np.maximum(values, 0.0)

    @classmethod
    def from_dict(cls, data: dict, domain: Polytope, allow_negative: bool = False) -> "ConcaveFn":
        """Builds a function from its JSON form {"pieces": [{"a": [...], "b": s}, ...]}."""
        pieces = data["pieces"]

        return cls(
            slopes=np.array([piece["a"] for piece in pieces], dtype=float).reshape(len(pieces), -1),
            intercepts=np.array([piece["b"] for piece in pieces], dtype=float),
            domain=domain,
            allow_negative=allow_negative,
        )

    def to_dict(self) -> dict:
        return {"pieces": [{"a": slope.tolist(), "b": intercept} for slope, intercept in self.pieces]}


def eval_concave(f: ConcaveFn, x: Sequence[float]) -> float:
    """Evaluates a concave function at a point of its domain.

    :param f: The function.
    :param x: A point in the domain (within EPS_GEOM).
    :return: The value max(0, min_j <a_j, x> + b_j) (unclamped if negative values are allowed).
    """
    if not contains(f.domain, x)[0]:
        raise ValueError(f"Point {list(np.ravel(x))} lies outside the domain of the function.")

    return float(f(x)[0])


def supporting_affine(f: ConcaveFn, x: Sequence[float]) -> ConcaveFn:
    """Builds an affine majorant g >= f with g(x) = f(x), namely the piece of f active at x.

    :param f: A concave function.
    :param x: A point of the domain.
    :return: The supporting affine function.
    """
    point = as_points(x, dim=f.domain.dim)
    active = int(np.argmin(point @ f.slopes.T + f.intercepts, axis=1)[0])

    return ConcaveFn.affine(f.domain, f.slopes[active], f.intercepts[active], allow_negative=f.allow_negative)


GaugeKind = Literal["power", "exp_minus_one", "max_affine"]


@dataclass(frozen=True)
class ConvexGauge:
    """A convex nondecreasing gauge phi: [0, inf) -> [0, inf) with phi(0) = 0, not identically zero.

    :param kind: power (phi(t) = t^alpha, alpha >= 1), exp_minus_one (phi(t) = e^t - 1) or max_affine
                 (phi(t) = max_k (m_k t + c_k) with m_k >= 0, shifted so that phi(0) = 0).
    :param alpha: Exponent of the power gauge.
    :param pieces: (m_k, c_k) pairs of the max-affine gauge.
    """

    kind: GaugeKind
    alpha: float = 1.0
    pieces: tuple[tuple[float, float], ...] = ()

    def __post_init__(self) -> None:
        if self.kind == "power":
            if self.alpha < 1:
                raise ValueError(f"Power gauge needs alpha >= 1, got {self.alpha}.")
        elif self.kind == "max_affine":
            if len(self.pieces) == 0:
                raise ValueError("Max-affine gauge needs at least one piece.")

            slopes = [float(slope) for slope, _ in self.pieces]
            offsets = [float(offset) for _, offset in self.pieces]

            if min(slopes) < 0:
                raise ValueError("Max-affine gauge slopes must be nonnegative.")

            if max(slopes) == 0:
                raise ValueError("Gauge must not be identically zero.")

            # Normalize so that phi(0) = 0
            shift = max(offsets)
            object.__setattr__(
                self, "pieces", tuple((slope, offset - shift) for slope, offset in zip(slopes, offsets))
            )
        elif self.kind != "exp_minus_one":
            raise ValueError(f'Gauge kind "{self.kind}" is not supported.')

    @classmethod
    def power(cls, alpha: float) -> "ConvexGauge":
        return cls(kind="power", alpha=float(alpha))

    @classmethod
    def exp_minus_one(cls) -> "ConvexGauge":
        return cls(kind="exp_minus_one")

    @classmethod
    def max_affine(cls, pieces: Sequence[tuple[float, float]]) -> "ConvexGauge":
        return cls(kind="max_affine", pieces=tuple((float(m), float(c)) for m, c in pieces))

    @property
    def is_integer_power(self) -> bool:
        """Get whether the gauge is t^alpha with integer alpha (polynomial, so exactly integrable)."""
        return self.kind == "power" and float(self.alpha).is_integer()

    def __call__(self, t: np.ndarray | float) -> np.ndarray:
        t = np.asarray(t, dtype=float)

        if np.any(t < 0):
            raise ValueError("Gauges are defined on [0, inf) only.")

        if self.kind == "power":
            return t**self.alpha

        if self.kind == "exp_minus_one":
            return np.expm1(t)

        slopes, offsets = np.array(self.pieces).T

        return np.max(np.multiply.outer(t, slopes) + offsets, axis=-1)

    def breakpoints(self, upper: float) -> np.ndarray:
        """Get the kinks of a max-affine gauge inside (0, upper), together with both ends."""
        knots = [0.0, upper]

        for first, (slope, offset) in enumerate(self.pieces):
            for other_slope, other_offset in self.pieces[first + 1 :]:
                if slope != other_slope:
                    crossing = (other_offset - offset) / (slope - other_slope)
                    if 0 < crossing < upper:
                        knots.append(crossing)

        return np.unique(knots)

    @classmethod
    def from_dict(cls, data: dict) -> "ConvexGauge":
        """Builds a gauge from {"kind": "power", "alpha": a} | {"kind": "exp_minus_one"} | {"kind": "max_affine", "pieces": [...]}."""
        kind = data["kind"]

        if kind == "power":
            return cls.power(data["alpha"])

        if kind == "max_affine":
            return cls.max_affine([(piece["m"], piece["c"]) for piece in data["pieces"]])

        return cls(kind=kind)

    def to_dict(self) -> dict:
        if self.kind == "power":
            return {"kind": "power", "alpha": self.alpha}

        if self.kind == "max_affine":
            return {"kind": "max_affine", "pieces": [{"m": m, "c": c} for m, c in self.pieces]}

        return {"kind": self.kind}


def gauge_eval(phi: ConvexGauge, t: float) -> float:
    """Evaluates a gauge at t >= 0."""
    if t < 0:
        raise ValueError(f"Gauges are defined on [0, inf) only, got t = {t}.")

    return float(phi(t))


def four_point_gap(phi: ConvexGauge, a: float, r: float, gamma: float) -> float:
    """Computes phi(a - gamma r) + phi(a + gamma r) - phi(a - r) - phi(a + r), nonnegative for convex phi.

    :param phi: A gauge.
    :param a: Centre, a >= 0.
    :param r: Radius, r >= 0.
    :param gamma: Spreading factor, gamma >= 1, with a - gamma r >= 0.
    :return: The gap of the four-point inequality.
    """
    if a < 0 or r < 0 or gamma < 1 or a - gamma * r < 0:
        raise ValueError("Four-point inequality needs a >= 0, r >= 0, gamma >= 1 and a - gamma r >= 0.")

    return float(phi(a - gamma * r) + phi(a + gamma * r) - phi(a - r) - phi(a + r))


def four_point(phi: ConvexGauge, a: float, r: float, gamma: float, tol: float = EPS_NUM) -> bool:
    """Checks phi(a - r) + phi(a + r) <= phi(a - gamma r) + phi(a + gamma r) up to a tolerance."""
    return four_point_gap(phi, a, r, gamma) >= -tol


def hh_rhs(phi: ConvexGauge, f0: float) -> float:
    """Computes the bound (1/2) int_{-1}^{1} phi(f0 (1 + t)) dt in closed form.

    :param phi: A gauge.
    :param f0: The value f(0) >= 0.
    :return: The bound.
    """
    if f0 < 0:
        raise ValueError(f"f(0) must be nonnegative, got {f0}.")

    if f0 == 0:
        return 0.0

    if phi.kind == "power":
        return f0**phi.alpha * 2**phi.alpha / (phi.alpha + 1)

    if phi.kind == "exp_minus_one":
        return float(np.expm1(2 * f0) / (2 * f0) - 1)

    # Substituting s = f0 (1 + t) gives (1 / (2 f0)) int_0^{2 f0} phi(s) ds, with phi affine between kinks
    knots = phi.breakpoints(2 * f0)
    values = phi(knots)
    integral = np.sum((values[1:] + values[:-1]) / 2 * np.diff(knots))

    return float(integral / (2 * f0))


def hh_rhs_quadrature(phi: ConvexGauge, f0: float) -> float:
    """Computes the same bound as hh_rhs by adaptive quadrature."""
    if f0 < 0:
        raise ValueError(f"f(0) must be nonnegative, got {f0}.")

    points = None
    if phi.kind == "max_affine":
        points = (phi.breakpoints(2 * f0)[1:-1] / f0 - 1).tolist() or None

    value, _ = quad(lambda t: float(phi(f0 * (1 + t))), -1, 1, points=points, epsabs=1e-12, epsrel=1e-10)

    return value / 2


IntegrationMethod = Literal["closed_form", "exact", "quadrature", "monte_carlo"]


@dataclass
class IntegralEstimate:
    """A value with its standard error (0 for deterministic paths)."""

    value: float
    std_error: float
    method: IntegrationMethod
    samples: int = 0


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All tuples of parts nonnegative integers summing to total."""
    if parts == 1:
        yield (total,)
        return

    for head in range(total + 1):
        for tail in _compositions(total - head, parts - 1):
            yield (head,) + tail


@lru_cache(maxsize=None)
def grundmann_moller_rule(order: int, s: int) -> tuple[np.ndarray, np.ndarray]:
    """Barycentric nodes and weights of the Grundmann-Moller rule of degree 2s + 1 on the standard k-simplex.

    :param order: The simplex dimension k.
    :param s: Rule index; polynomials of degree <= 2s + 1 are integrated exactly.
    :return: Nodes (N, k + 1) in barycentric coordinates and weights (N,) summing to 1/k!.
    """
    degree = 2 * s + 1
    nodes, weights = [], []

    for i in range(s + 1):
        denominator = degree + order - 2 * i
        weight = (-1) ** i * 2.0 ** (-2 * s) * denominator**degree / (factorial(i) * factorial(degree + order - i))

        for beta in _compositions(s - i, order + 1):
            nodes.append((2 * np.array(beta) + 1) / denominator)
            weights.append(weight)

    return np.array(nodes), np.array(weights)


def integrate_polynomial(
    polytope: Polytope, integrand: Callable[[np.ndarray], np.ndarray], degree: int
) -> np.ndarray:
    """Integrates a polynomial of bounded degree exactly over a polytope.

    :param polytope: The domain (integration is w.r.t. volume in its affine hull).
    :param integrand: A vectorized function mapping (N, n) points to (N,) or (N, q) values.
    :param degree: An upper bound on the polynomial degree.
    :return: The integral (scalar array or (q,) array).
    """
    total = 0.0

    for simplex in polytope.simplices:
        nodes, weights = grundmann_moller_rule(simplex.order, max(0, ceil((degree - 1) / 2)))
        values = np.asarray(integrand(nodes @ simplex.vertices))
        total = total + factorial(simplex.order) * simplex.volume * np.tensordot(weights, values, axes=1)

    return np.asarray(total)


def integrate_exp_affine(polytope: Polytope, slope: np.ndarray, intercept: float) -> float:
    """Integrates e^(<slope, x> + intercept) exactly over a polytope.

    On a k-simplex S with vertex values g_0, ..., g_k the integral is k! |S| times the divided difference
    exp[g_0, ..., g_k], read off the matrix exponential of the bidiagonal matrix with diagonal g and unit
    superdiagonal.

    :param polytope: The domain.
    :param slope: Slope of the exponent.
    :param intercept: Intercept of the exponent.
    :return: The integral.
    """
    total = 0.0

    for simplex in polytope.simplices:
        exponents = simplex.vertices @ slope + intercept
        matrix = np.diag(exponents) + np.diag(np.ones(simplex.order), k=1)
        total += factorial(simplex.order) * simplex.volume * expm(matrix)[0, simplex.order]

    return float(total)


def _shard_moments(
    shard: tuple[int, int], polytope: Polytope, features: Callable[[np.ndarray], np.ndarray], seed: int
) -> tuple[int, np.ndarray, np.ndarray]:
    """Count, mean and centred cross-product sum of features over one shard of uniform samples."""
    index, count = shard
    points = sample_uniform(polytope, count, seed=[seed, index])
    values = np.asarray(features(points)).reshape(count, -1)
    mean = values.mean(axis=0)
    centred = values - mean

    return count, mean, centred.T @ centred


def monte_carlo_moments(
    polytope: Polytope,
    features: Callable[[np.ndarray], np.ndarray],
    samples: int,
    seed: int,
    jobs: int = 1,
) -> tuple[np.ndarray, np.ndarray]:
    """Estimates the means of features of a uniform point of a polytope, and the covariance of those means.

    Samples are drawn in shards of SHARD_SIZE points; shard k uses the random stream (seed, k), and shards are merged
    in order, so the estimate does not depend on the number of jobs.

    :param polytope: A polytope with positive volume.
    :param features: A picklable vectorized function mapping (N, n) points to (N,) or (N, q) values.
    :param samples: Number of samples, at least MIN_MONTE_CARLO_SAMPLES.
    :param seed: Master seed.
    :param jobs: Number of worker processes.
    :return: The means (q,) and the covariance (q, q) of the mean estimator.
    """
    if samples < MIN_MONTE_CARLO_SAMPLES:
        raise ValueError(f"Monte Carlo estimates need at least {MIN_MONTE_CARLO_SAMPLES} samples, got {samples}.")

    shards = [
        (index, min(SHARD_SIZE, samples - start))
        for index, start in enumerate(range(0, samples, SHARD_SIZE))
    ]
    moments = parallel_map(
        partial(_shard_moments, polytope=polytope, features=features, seed=seed),
        shards,
        jobs=jobs,
    )

    # Merge shard moments in order
    total, mean, scatter = moments[0]
    for count, shard_mean, shard_scatter in moments[1:]:
        delta = shard_mean - mean
        merged = total + count
        mean = mean + delta * count / merged
        scatter = scatter + shard_scatter + np.outer(delta, delta) * total * count / merged
        total = merged

    return mean, scatter / (total - 1) / total


@dataclass(frozen=True)
class GaugeOfConcave:
    """The picklable integrand x -> phi(f(x))."""

    f: ConcaveFn
    phi: ConvexGauge

    def __call__(self, points: np.ndarray) -> np.ndarray:
        return self.phi(self.f(points))


@dataclass(frozen=True)
class ExpOfConcave:
    """The picklable integrand x -> e^(u(x))."""

    u: ConcaveFn

    def __call__(self, points: np.ndarray) -> np.ndarray:
        return np.exp(self.u(points))


@dataclass(frozen=True)
class WeightedPosition:
    """The picklable integrand x -> (f(x)^m, x f(x)^m)."""

    f: ConcaveFn
    m: int

    def __call__(self, points: np.ndarray) -> np.ndarray:
        weights = self.f(points) ** self.m

        return np.hstack([weights[:, None], points * weights[:, None]])


def _monte_carlo_mean(
    polytope: Polytope, integrand: Callable[[np.ndarray], np.ndarray], samples: int, seed: int, jobs: int
) -> IntegralEstimate:
    means, covariance = monte_carlo_moments(polytope, integrand, samples, seed, jobs)

    return IntegralEstimate(
        value=float(means[0]),
        std_error=float(np.sqrt(covariance[0, 0])),
        method="monte_carlo",
        samples=samples,
    )


def integrate_gauge_concave(
    C: Polytope, f: ConcaveFn, phi: ConvexGauge, samples: int, seed: int, jobs: int = 1
) -> IntegralEstimate:
    """Estimates the mean (1/|C|) int_C phi(f(x)) dx.

    Affine f (with no clamping in play) and a gauge t^alpha with integer alpha or e^t - 1 are integrated exactly;
    everything else is estimated by Monte Carlo.

    :param C: The body.
    :param f: A concave function on C, nonnegative.
    :param phi: The gauge.
    :param samples: Number of Monte Carlo samples.
    :param seed: Master seed.
    :param jobs: Number of worker processes.
    :return: The estimate.
    """
    body_volume = volume(C)

    if body_volume <= 0:
        raise ValueError("Integration needs a body of positive volume.")

    if f.is_affine and f.vertex_minimum >= 0:
        slope, intercept = f.slopes[0], float(f.intercepts[0])

        if phi.is_integer_power:
            alpha = int(phi.alpha)
            integral = integrate_polynomial(C, lambda points: (points @ slope + intercept) ** alpha, degree=alpha)
            return IntegralEstimate(value=float(integral) / body_volume, std_error=0.0, method="exact")

        if phi.kind == "exp_minus_one":
            integral = integrate_exp_affine(C, slope, intercept)
            return IntegralEstimate(value=integral / body_volume - 1, std_error=0.0, method="exact")

    return _monte_carlo_mean(C, GaugeOfConcave(f=f, phi=phi), samples, seed, jobs)


def _estimate_tolerance(estimate: IntegralEstimate, rhs: float) -> float:
    """Verdict tolerance for a check whose left side is the given estimate."""
    if estimate.method == "monte_carlo":
        return monte_carlo_tolerance(estimate.std_error)

    return exact_tolerance(rhs)


def _require_symmetric(C: Polytope, theorem: str) -> None:
    if not is_symmetric(C):
        raise PreconditionError(f"{theorem} requires a 0-symmetric body, C = -C.")


def check_thm2(
    C: Polytope,
    f: ConcaveFn,
    phi: ConvexGauge,
    samples: int,
    seed: int,
    jobs: int = 1,
    name: str = "thm2",
) -> InequalityReport:
    """Checks (1/|C|) int_C phi(f) <= (1/2) int_{-1}^{1} phi(f(0)(1 + t)) dt for 0-symmetric C and concave f >= 0.

    :param C: A 0-symmetric body.
    :param f: A concave function on C, nonnegative.
    :param phi: A convex gauge.
    :param samples: Number of Monte Carlo samples.
    :param seed: Master seed.
    :param jobs: Number of worker processes.
    :param name: Report name.
    :return: The report.
    """
    _require_symmetric(C, "Hermite-Hadamard bound for gauges")

    estimate = integrate_gauge_concave(C, f, phi, samples, seed, jobs)
    f0 = eval_concave(f, np.zeros(C.dim))
    rhs = hh_rhs(phi, f0)

    return InequalityReport(
        name=name,
        lhs=estimate.value,
        rhs=rhs,
        tolerance=_estimate_tolerance(estimate, rhs),
        method={"lhs": estimate.method, "rhs": "closed_form"},
        instance={"body": C.to_dict(), "function": f.to_dict(), "gauge": phi.to_dict()},
        seed=seed if estimate.method == "monte_carlo" else None,
        notes=[f"f(0) = {f0!r}", f"std_error = {estimate.std_error!r}"],
    )


def check_cor_alpha(
    C: Polytope, f: ConcaveFn, alpha: float, samples: int, seed: int, jobs: int = 1
) -> InequalityReport:
    """Checks (1/|C|) int_C f^alpha <= 2^alpha / (alpha + 1) f(0)^alpha for alpha >= 1."""
    if alpha < 1:
        raise ValueError(f"Power bound needs alpha >= 1, got {alpha}.")

    return check_thm2(C, f, ConvexGauge.power(alpha), samples, seed, jobs, name="cor_alpha")


def check_thm3(C: Polytope, u: ConcaveFn, samples: int, seed: int, jobs: int = 1) -> InequalityReport:
    """Checks (1/|C|) int_C f <= f_min (a^2 - 1) / log(a^2), a = f(0)/f_min, for log-concave f = e^u on 0-symmetric C.

    :param C: A 0-symmetric body.
    :param u: The concave exponent (negative values allowed).
    :param samples: Number of Monte Carlo samples.
    :param seed: Master seed.
    :param jobs: Number of worker processes.
    :return: The report.
    """
    _require_symmetric(C, "Log-concave Hermite-Hadamard bound")

    if not u.allow_negative:
        u = ConcaveFn(slopes=u.slopes, intercepts=u.intercepts, domain=u.domain, allow_negative=True)

    # u is concave, so its minimum over C is attained at a vertex
    exponent_min = u.vertex_minimum
    exponent_gap = float(u.raw(np.zeros(C.dim))[0]) - exponent_min
    f_min = float(np.exp(exponent_min))

    if exponent_gap < LOG_LIMIT_TOL:
        rhs = f_min
    else:
        rhs = f_min * float(np.expm1(2 * exponent_gap) / (2 * exponent_gap))

    body_volume = volume(C)

    if u.is_affine:
        estimate = IntegralEstimate(
            value=integrate_exp_affine(C, u.slopes[0], float(u.intercepts[0])) / body_volume,
            std_error=0.0,
            method="exact",
        )
    else:
        estimate = _monte_carlo_mean(C, ExpOfConcave(u=u), samples, seed, jobs)

    return InequalityReport(
        name="thm3",
        lhs=estimate.value,
        rhs=rhs,
        tolerance=_estimate_tolerance(estimate, rhs),
        method={"lhs": estimate.method, "rhs": "closed_form"},
        instance={"body": C.to_dict(), "exponent": u.to_dict()},
        seed=seed if estimate.method == "monte_carlo" else None,
        notes=[f"f_min = {f_min!r}", f"std_error = {estimate.std_error!r}"],
    )


def check_classical_hh(
    C: Polytope, f: ConcaveFn, samples: int, seed: int, jobs: int = 1
) -> InequalityReport:
    """Checks (1/|C|) int_C f <= f(x_C), with equality iff f is affine.

    :param C: A body (not necessarily symmetric).
    :param f: A concave function on C.
    :param samples: Number of Monte Carlo samples.
    :param seed: Master seed.
    :param jobs: Number of worker processes.
    :return: The report.
    """
    center = centroid(C)
    rhs = float(f(center)[0])

    if f.is_affine:
        estimate = integrate_gauge_concave(C, f, ConvexGauge.power(1), samples, seed, jobs)
    else:
        estimate = _monte_carlo_mean(C, f, samples, seed, jobs)

    report = InequalityReport(
        name="classical_hh",
        lhs=estimate.value,
        rhs=rhs,
        tolerance=_estimate_tolerance(estimate, rhs),
        method={"lhs": estimate.method, "rhs": "exact"},
        instance={"body": C.to_dict(), "function": f.to_dict()},
        seed=seed if estimate.method == "monte_carlo" else None,
        notes=[f"centroid = {center.tolist()}", f"std_error = {estimate.std_error!r}"],
    )

    if f.is_affine and report.verdict == "equality":
        report.notes.append("affine function: equality expected")

    return report


def _weighted_moments(
    C: Polytope, f: ConcaveFn, m: int, samples: int, seed: int, jobs: int
) -> tuple[np.ndarray, np.ndarray, IntegrationMethod]:
    """Means of (f^m, x f^m) over C and the covariance of those means (zero for the exact path)."""
    features = WeightedPosition(f=f, m=m)

    if f.is_affine and f.vertex_minimum >= 0:
        means = integrate_polynomial(C, features, degree=m + 1) / volume(C)
        return means, np.zeros((len(means), len(means))), "exact"

    means, covariance = monte_carlo_moments(C, features, samples, seed, jobs)

    return means, covariance, "monte_carlo"


def _check_weight_power(m: int) -> None:
    if m < 1 or int(m) != m:
        raise ValueError(f"The weight power m must be a positive integer, got {m}.")


def weighted_centroid(
    C: Polytope, f: ConcaveFn, m: int, samples: int, seed: int, jobs: int = 1
) -> np.ndarray:
    """Computes the f^m-weighted centre of mass x_{f,m} = int_C x f^m / int_C f^m.

    :param C: The body.
    :param f: A concave function on C, nonnegative and not identically zero.
    :param m: A positive integer power.
    :param samples: Number of Monte Carlo samples.
    :param seed: Master seed.
    :param jobs: Number of worker processes.
    :return: The weighted centroid.
    """
    _check_weight_power(m)
    means, _, _ = _weighted_moments(C, f, m, samples, seed, jobs)

    if means[0] <= 0:
        raise ValueError("The weighted centroid is undefined for a function vanishing on C.")

    return means[1:] / means[0]


def check_hh_center_of_mass(
    C: Polytope, f: ConcaveFn, m: int, samples: int, seed: int, jobs: int = 1
) -> InequalityReport:
    """Checks (1/|C|) int_C f^m <= f(x_{f,m})^m.

    :param C: The body.
    :param f: A concave function on C, nonnegative and not identically zero.
    :param m: A positive integer power.
    :param samples: Number of Monte Carlo samples.
    :param seed: Master seed.
    :param jobs: Number of worker processes.
    :return: The report.
    """
    _check_weight_power(m)
    means, covariance, method = _weighted_moments(C, f, m, samples, seed, jobs)

    if means[0] <= 0:
        raise ValueError("The weighted centroid is undefined for a function vanishing on C.")

    center = means[1:] / means[0]
    value_at_center = float(f(center)[0])
    rhs = value_at_center**m

    if method == "exact":
        tolerance = exact_tolerance(rhs)
    else:
        # Delta method for the ratio estimator of the centre, pushed through the active piece of f
        jacobian = np.hstack([-center[:, None], np.eye(C.dim)]) / means[0]
        center_error = np.sqrt(np.trace(jacobian @ covariance @ jacobian.T))
        slope = supporting_affine(f, center).slopes[0]
        rhs_error = m * value_at_center ** (m - 1) * np.linalg.norm(slope) * center_error
        lhs_error = float(np.sqrt(covariance[0, 0]))
        tolerance = SIGMA_MULTIPLIER * (lhs_error + rhs_error) + EPS_NUM

    return InequalityReport(
        name="hh_center_of_mass",
        lhs=float(means[0]),
        rhs=rhs,
        tolerance=float(tolerance),
        method={"lhs": method, "rhs": method},
        instance={"body": C.to_dict(), "function": f.to_dict(), "m": m},
        seed=seed if method == "monte_carlo" else None,
        notes=[f"weighted centroid = {center.tolist()}"],
    )
