"""Geometric inequality checks, equality-case constructors, check dispatch and tightness search."""
from dataclasses import dataclass
from functools import partial
from typing import Callable, Sequence

import numpy as np

from hhgeom.bodies import (
    cube,
    generalized_cylinder,
    random_symmetric_body,
    random_symmetric_projection_body,
    random_slab_normalized_body,
    scaled_slab_body,
)
from hhgeom.constants import DEFAULT_SAMPLES, EPS_CLOSED_FORM, EPS_GEOM, THEOREMS
from hhgeom.functional import (
    ConcaveFn,
    ConvexGauge,
    check_classical_hh,
    check_cor_alpha,
    check_hh_center_of_mass,
    check_thm2,
    check_thm3,
)
from hhgeom.marginals import (
    Subspace,
    is_projection_symmetric,
    max_section_volume,
    project,
    section_volume,
)
from hhgeom.polytope import Polytope, centroid, hull, support, volume
from hhgeom.reports import InequalityReport, PropertyReport, TightnessResult, exact_tolerance
from hhgeom.utils import PreconditionError, parallel_map, trial_seed


def _geometric_report(
    name: str, K: Polytope, H: Subspace, lhs: float, rhs: float, notes: list[str] | None = None
) -> InequalityReport:
    return InequalityReport(
        name=name,
        lhs=lhs,
        rhs=rhs,
        tolerance=exact_tolerance(rhs),
        method={"lhs": "exact", "rhs": "exact"},
        instance={"body": K.to_dict(), "subspace": H.to_dict()},
        notes=notes or [],
    )


def thm1_constant(n: int, i: int) -> float:
    """Computes the sharp constant 2^(n - i) / (n - i + 1)."""
    return 2 ** (n - i) / (n - i + 1)


def check_thm1(K: Polytope, H: Subspace) -> InequalityReport:
    """Checks |K| <= 2^(n - i) / (n - i + 1) |P_H K| |K cap H^perp| for bodies with P_H K = -P_H K.

    :param K: A body.
    :param H: An i-dimensional subspace.
    :return: The report.
    """
    if not is_projection_symmetric(K, H):
        raise PreconditionError("Sharp section-projection bound requires P_HK = -P_HK.")

    n, i = K.dim, H.dim
    constant = thm1_constant(n, i)
    shadow_volume = volume(project(K, H))
    central_section = section_volume(K, H, np.zeros(i))

    return _geometric_report(
        "thm1",
        K,
        H,
        lhs=volume(K),
        rhs=constant * shadow_volume * central_section,
        notes=[f"constant = {constant!r}", f"|P_HK| = {shadow_volume!r}", f"|K cap H^perp| = {central_section!r}"],
    )


def check_santos(K: Polytope) -> InequalityReport:
    """Checks |K| <= (2^n / n) |K cap e_1^perp| for bodies with P_lin{e1} K = [-e1, e1].

    :param K: A body.
    :return: The report, whose right-hand side agrees with that of check_thm1 at H = lin{e1}.
    """
    n = K.dim
    H = Subspace.coordinate(n, [0])
    heights = K.vertices[:, 0]

    if abs(heights.min() + 1) > EPS_GEOM or abs(heights.max() - 1) > EPS_GEOM:
        raise PreconditionError("Santos bound requires P_lin{e1}K = [-e1, e1].")

    constant = 2**n / n
    central_section = section_volume(K, H, [0.0])
    rhs = constant * central_section

    # Same bound as the sharp section-projection inequality at i = 1, where |P_HK| = 2 by the normalization
    thm1_rhs = thm1_constant(n, 1) * 2.0 * central_section
    if abs(rhs - thm1_rhs) > EPS_CLOSED_FORM * max(1.0, abs(rhs)):
        raise ValueError(f"Santos bound {rhs!r} disagrees with the i = 1 section-projection bound {thm1_rhs!r}.")

    return _geometric_report(
        "santos",
        K,
        H,
        lhs=volume(K),
        rhs=rhs,
        notes=[
            f"c_n = {constant!r}",
            f"thm1 constant = {thm1_constant(n, 1)!r}",
            f"thm1 rhs = {thm1_rhs!r}",
            f"|P_HK| = {float(heights.max() - heights.min())!r}",
        ],
    )


def check_mp_centroid(K: Polytope, H: Subspace) -> InequalityReport:
    """Checks |K| <= |P_H K| |K cap (x_K + H^perp)|."""
    body_volume = volume(K)

    if body_volume <= 0:
        raise ValueError("Centroid section bound needs a body of positive volume.")

    center = H.coordinates(centroid(K))[0]

    return _geometric_report(
        "mp_centroid",
        K,
        H,
        lhs=body_volume,
        rhs=volume(project(K, H)) * section_volume(K, H, center),
        notes=[f"section point = {center.tolist()}"],
    )


def check_proj_centroid(K: Polytope, H: Subspace) -> InequalityReport:
    """Checks |K| <= |P_H K| |K cap (x_{P_H K} + H^perp)| for a hyperplane H."""
    if H.dim != K.dim - 1:
        raise PreconditionError("Projection-centroid bound requires dim(H) = n - 1.")

    shadow = project(K, H)
    center = centroid(shadow)

    return _geometric_report(
        "proj_centroid",
        K,
        H,
        lhs=volume(K),
        rhs=volume(shadow) * section_volume(K, H, center),
        notes=[f"section point = {center.tolist()}"],
    )


def check_max_section(K: Polytope, H: Subspace) -> InequalityReport:
    """Checks the Fubini bound |K| <= |P_H K| max_x |K cap (x + H^perp)|."""
    largest, point = max_section_volume(K, H)

    return _geometric_report(
        "max_section",
        K,
        H,
        lhs=volume(K),
        rhs=volume(project(K, H)) * largest,
        notes=[f"section point = {np.ravel(point).tolist()}"],
    )


def compare_centroid_bounds(K: Polytope, H: Subspace) -> tuple[InequalityReport, InequalityReport]:
    """Checks both centroid section bounds on the same hyperplane; their ratios compare the two centres."""
    return check_mp_centroid(K, H), check_proj_centroid(K, H)


def check_segment_of_centers(
    K: Polytope, H: Subspace, x0: Sequence[float], x1: Sequence[float], grid: int
) -> PropertyReport:
    """Checks |K cap (c + H^perp)| >= |K| / |P_H K| along the segment c = (1 - lam) x0 + lam x1.

    :param K: A body.
    :param H: A subspace.
    :param x0: First endpoint in H-coordinates, satisfying the bound.
    :param x1: Second endpoint in H-coordinates, satisfying the bound.
    :param grid: Number of uniform values of lam in [0, 1], at least 1.
    :return: A property report whose margins are section volume minus |K| / |P_H K|.
    """
    if grid < 1:
        raise ValueError(f"Segment grid must be positive, got {grid}.")

    x0, x1 = np.atleast_1d(np.asarray(x0, dtype=float)), np.atleast_1d(np.asarray(x1, dtype=float))
    bound = volume(K) / volume(project(K, H))
    tolerance = exact_tolerance(bound)

    for label, endpoint in (("x0", x0), ("x1", x1)):
        if section_volume(K, H, endpoint) < bound - tolerance:
            raise PreconditionError(f"Endpoint {label} violates |K|/|P_HK| <= |K cap ({label} + H^perp)|.")

    weights = np.linspace(0, 1, grid) if grid > 1 else np.array([0.5])
    margins = np.array([section_volume(K, H, (1 - weight) * x0 + weight * x1) - bound for weight in weights])

    return PropertyReport(
        name="segment_of_centers",
        trials=len(weights),
        violations=int(np.sum(margins < -tolerance)),
        worst_margin=float(margins.min()),
        tolerance=tolerance,
        details={"bound": bound, "worst_weight": float(weights[int(np.argmin(margins))])},
    )


def construct_equality_thm1(
    n: int, i: int, c0: Polytope | None = None, c1: Polytope | None = None
) -> tuple[Polytope, Subspace]:
    """Builds a body attaining equality in the sharp section-projection bound, with H = lin{e_1, ..., e_i}.

    :param n: Ambient dimension.
    :param i: Subspace dimension, 1 <= i <= n - 1.
    :param c0: A 0-symmetric polytope in R^(i - 1) (ignored when i = 1).
    :param c1: A polytope in R^(n - i).
    :return: The body {(t, y, z) : t in [-1, 1], y in C0, z in (1 + t) C1} and the subspace.
    """
    return scaled_slab_body(n, i, c0, c1), Subspace.coordinate(n, range(i))


def _first_axis_vector(n: int, x0: Sequence[float] | None) -> np.ndarray:
    return np.eye(n)[0] if x0 is None else np.asarray(x0, dtype=float).reshape(-1)


def construct_equality_thm2(
    c0: Polytope, x0: Sequence[float] | None = None
) -> tuple[Polytope, ConcaveFn]:
    """Builds the generalized cylinder C = [-x0, x0] + ({0} x C0) with f(x) = 1 + x_1 / (x0)_1, an equality case.

    :param c0: A 0-symmetric polytope in R^(n - 1).
    :param x0: The cylinder axis with nonzero first coordinate. Defaults to e_1.
    :return: The body and the function (vanishing on the base -x0 + {0} x C0).
    """
    x0 = _first_axis_vector(c0.dim + 1, x0)
    C = generalized_cylinder(x0, c0)

    return C, ConcaveFn.affine(C, np.eye(C.dim)[0] / x0[0], 1.0)


def construct_equality_thm3(
    c0: Polytope, x0: Sequence[float] | None = None, slope: float = 1.0, intercept: float = 1.0
) -> tuple[Polytope, ConcaveFn]:
    """Builds the generalized cylinder with exponent u(x) = intercept + slope x_1 / (x0)_1, an equality case for e^u.

    :param c0: A 0-symmetric polytope in R^(n - 1).
    :param x0: The cylinder axis with nonzero first coordinate. Defaults to e_1.
    :param slope: Slope of u along the axis.
    :param intercept: Value u(0).
    :return: The body and the exponent u.
    """
    x0 = _first_axis_vector(c0.dim + 1, x0)
    C = generalized_cylinder(x0, c0)

    return C, ConcaveFn.affine(C, slope * np.eye(C.dim)[0] / x0[0], intercept, allow_negative=True)


@dataclass(frozen=True, eq=False)
class Instance:
    """The inputs of one check: a body plus whichever of subspace, function, gauge, alpha and m the theorem needs."""

    body: Polytope
    subspace: Subspace | None = None
    function: ConcaveFn | None = None
    gauge: ConvexGauge | None = None
    alpha: float = 2.0
    m: int = 1


def _require(instance: Instance, component: str, theorem: str) -> None:
    if getattr(instance, component) is None:
        raise ValueError(f'Theorem "{theorem}" needs a {component}.')


def run_check(
    theorem: str, instance: Instance, samples: int = DEFAULT_SAMPLES, seed: int = 0, jobs: int = 1
) -> InequalityReport:
    """Runs the named check on an instance.

    :param theorem: A tag from hhgeom.constants.THEOREMS.
    :param instance: The inputs.
    :param samples: Number of Monte Carlo samples (functional checks).
    :param seed: Master seed (functional checks).
    :param jobs: Number of worker processes.
    :return: The report.
    """
    if theorem not in THEOREMS:
        raise ValueError(f'Theorem "{theorem}" is not supported. Choose from {", ".join(THEOREMS)}.')

    K = instance.body

    if theorem == "santos":
        return check_santos(K)

    if theorem in {"thm1", "mp_centroid", "proj_centroid", "max_section"}:
        _require(instance, "subspace", theorem)
        geometric_checks: dict[str, Callable[[Polytope, Subspace], InequalityReport]] = {
            "thm1": check_thm1,
            "mp_centroid": check_mp_centroid,
            "proj_centroid": check_proj_centroid,
            "max_section": check_max_section,
        }
        return geometric_checks[theorem](K, instance.subspace)

    _require(instance, "function", theorem)
    f = instance.function

    if theorem == "thm2":
        _require(instance, "gauge", theorem)
        return check_thm2(K, f, instance.gauge, samples, seed, jobs)

    if theorem == "cor_alpha":
        return check_cor_alpha(K, f, instance.alpha, samples, seed, jobs)

    if theorem == "thm3":
        return check_thm3(K, f, samples, seed, jobs)

    if theorem == "classical_hh":
        return check_classical_hh(K, f, samples, seed, jobs)

    return check_hh_center_of_mass(K, f, instance.m, samples, seed, jobs)


def generate_perturbed_scaled_slab(
    rng: np.random.Generator, n: int = 3, i: int = 1, perturbation: float = 0.1
) -> Instance:
    """Scaled slab body with the coordinates orthogonal to lin{e_1, ..., e_i} of its vertices jittered.

    The projection onto lin{e_1, ..., e_i} is untouched, so it stays 0-symmetric.
    """
    body = scaled_slab_body(n, i)
    vertices = body.vertices.copy()
    vertices[:, i:] += perturbation * rng.uniform(-1, 1, size=(len(vertices), n - i))

    return Instance(body=hull(vertices), subspace=Subspace.coordinate(n, range(i)))


def generate_random_symmetric_projection(
    rng: np.random.Generator, n: int = 4, i: int = 1, count: int = 12
) -> Instance:
    """Random body with 0-symmetric projection onto lin{e_1, ..., e_i}."""
    return Instance(
        body=random_symmetric_projection_body(n, i, count, rng), subspace=Subspace.coordinate(n, range(i))
    )


def generate_random_slab_normalized(rng: np.random.Generator, n: int = 3, count: int = 12) -> Instance:
    """Random body with P_lin{e1} K = [-e1, e1]."""
    return Instance(body=random_slab_normalized_body(n, count, rng), subspace=Subspace.coordinate(n, [0]))


def generate_random_hull(rng: np.random.Generator, n: int = 3, i: int = 1, count: int = 12) -> Instance:
    """Hull of uniform points in [-1, 1]^n with a random i-dimensional subspace."""
    body = hull(rng.uniform(-1, 1, size=(count, n)))

    return Instance(body=body, subspace=Subspace.random(n, i, rng))


def random_concave_fn(C: Polytope, pieces: int, rng: np.random.Generator) -> ConcaveFn:
    """Random min of affine functions, each shifted to be positive on C."""
    slopes = rng.standard_normal((pieces, C.dim))
    intercepts = np.array([support(C, -slope) for slope in slopes]) + rng.uniform(0, 1, size=pieces)

    return ConcaveFn(slopes=slopes, intercepts=intercepts, domain=C)


RANDOM_GAUGES = (
    ConvexGauge.power(1),
    ConvexGauge.power(2),
    ConvexGauge.power(3),
    ConvexGauge.exp_minus_one(),
)


def generate_random_symmetric_function(
    rng: np.random.Generator, n: int = 2, pieces: int = 3, count: int = 8
) -> Instance:
    """Random 0-symmetric body with a random min-of-affines function, gauge, alpha and m."""
    body = random_symmetric_body(n, count, rng)
    gauge = RANDOM_GAUGES[int(rng.integers(len(RANDOM_GAUGES)))]

    return Instance(
        body=body,
        function=random_concave_fn(body, pieces, rng),
        gauge=gauge,
        alpha=float(rng.integers(1, 4)),
        m=int(rng.integers(1, 4)),
    )


def generate_cube_function(rng: np.random.Generator, n: int = 2, pieces: int = 3) -> Instance:
    """The cube [-1, 1]^n with a random min-of-affines function and gauge."""
    body = cube(n)
    gauge = RANDOM_GAUGES[int(rng.integers(len(RANDOM_GAUGES)))]

    return Instance(body=body, function=random_concave_fn(body, pieces, rng), gauge=gauge)


GENERATORS: dict[str, Callable[..., Instance]] = {
    "perturbed_scaled_slab": generate_perturbed_scaled_slab,
    "random_symmetric_projection": generate_random_symmetric_projection,
    "random_slab_normalized": generate_random_slab_normalized,
    "random_hull": generate_random_hull,
    "random_symmetric_function": generate_random_symmetric_function,
    "cube_function": generate_cube_function,
}


def _run_trial(
    index: int, generator: Callable[[np.random.Generator], Instance], theorem: str, seed: int, samples: int
) -> tuple[float, str, dict, int, str]:
    """Runs one trial of a tightness search with its own derived seed.

    A trial whose instance violates the theorem's preconditions is returned as skipped with a NaN ratio.
    """
    seed_of_trial = trial_seed(seed, index)
    instance = generator(np.random.default_rng(seed_of_trial))

    try:
        report = run_check(theorem, instance, samples=samples, seed=seed_of_trial)
    except PreconditionError as error:
        return np.nan, "skipped", {}, seed_of_trial, str(error)

    return report.ratio, report.verdict, report.instance, seed_of_trial, ""


def tightness_search(
    generator: Callable[[np.random.Generator], Instance],
    theorem: str,
    trials: int,
    seed: int,
    jobs: int = 1,
    samples: int = DEFAULT_SAMPLES,
    bins: int = 20,
) -> TightnessResult:
    """Runs a check over random instances and tracks the supremum of lhs / rhs.

    Trial k uses the seed derived from (seed, k); trials may run in parallel and are merged in trial order.
    Trials whose instances violate the preconditions are counted as skipped.

    :param generator: A picklable function mapping a random generator to an Instance.
    :param theorem: A tag from hhgeom.constants.THEOREMS.
    :param trials: Number of trials, at least 1.
    :param seed: Master seed.
    :param jobs: Number of worker processes.
    :param samples: Number of Monte Carlo samples per functional check.
    :param bins: Number of histogram bins.
    :return: The search result.
    """
    if trials < 1:
        raise ValueError(f"Number of trials must be positive, got {trials}.")

    outcomes = parallel_map(
        partial(_run_trial, generator=generator, theorem=theorem, seed=seed, samples=samples),
        list(range(trials)),
        jobs=jobs,
        desc=f"Searching {theorem}",
    )

    checked = [outcome for outcome in outcomes if outcome[1] != "skipped"]
    skipped = len(outcomes) - len(checked)

    if not checked:
        raise PreconditionError(f"All {trials:,} trials violated the preconditions of {theorem}: {outcomes[0][4]}")

    ratios = np.array([ratio for ratio, _, _, _, _ in checked])
    best = int(np.argmax(ratios))
    counts, edges = np.histogram(ratios[np.isfinite(ratios)], bins=bins)

    return TightnessResult(
        theorem=theorem,
        best_ratio=float(ratios[best]),
        best_instance=checked[best][2],
        best_seed=checked[best][3],
        trials=trials,
        failures=sum(verdict == "fail" for _, verdict, _, _, _ in checked),
        ratio_histogram={"counts": counts.tolist(), "edges": edges.tolist()},
        skipped=skipped,
    )
