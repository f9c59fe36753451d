"""Run the acceptance sweeps: sharp constants, equality cases, random soundness sweeps and property suites."""
from pathlib import Path

import numpy as np
import pandas as pd
from tqdm import tqdm

from hhgeom.bodies import cone_over_base, cross_polytope, cube, random_hull, random_slab_normalized_body
from hhgeom.constants import EPS_GEOM, EPS_NUM
from hhgeom.functional import (
    ConcaveFn,
    ConvexGauge,
    check_cor_alpha,
    check_thm2,
    check_thm3,
    four_point_gap,
)
from hhgeom.marginals import Subspace, check_brunn_concavity, fubini_volume, section_volume
from hhgeom.polytope import affine_image, centroid, volume
from hhgeom.symmetrize import cylinder_family, find_tstar, schwarz_profile, schwarz_volume
from hhgeom.utils import resolve_jobs
from hhgeom.verify import (
    check_mp_centroid,
    check_proj_centroid,
    check_santos,
    check_thm1,
    construct_equality_thm1,
    construct_equality_thm2,
    generate_random_symmetric_function,
    generate_random_symmetric_projection,
)

RANDOM_GAUGES = [
    ConvexGauge.power(1),
    ConvexGauge.power(2),
    ConvexGauge.power(3),
    ConvexGauge.exp_minus_one(),
]


def santos_sharpness(random_bodies: int, seed: int) -> dict[str, float]:
    """Santos constant: equality bodies for n = 2..5 and random slab-normalized bodies."""
    worst_equality, worst_ratio = 0.0, 0.0

    for n in range(2, 6):
        body, _ = construct_equality_thm1(n, 1)
        worst_equality = max(worst_equality, abs(check_santos(body).ratio - 1))

        rng = np.random.default_rng([seed, n])
        for _ in tqdm(range(random_bodies), desc=f"Santos n = {n}"):
            worst_ratio = max(worst_ratio, check_santos(random_slab_normalized_body(n, 12, rng)).ratio)

    return {"worst_equality_error": worst_equality, "worst_random_ratio": worst_ratio}


def thm1_constant(random_bodies: int, seed: int) -> dict[str, float]:
    """Sharp section-projection constant at n = 4, i in {1, 2}."""
    worst_equality, worst_ratio, failures = 0.0, 0.0, 0

    for i in (1, 2):
        body, subspace = construct_equality_thm1(4, i)
        worst_equality = max(worst_equality, abs(check_thm1(body, subspace).ratio - 1))

        rng = np.random.default_rng([seed, i])
        for _ in tqdm(range(random_bodies), desc=f"Section-projection i = {i}"):
            instance = generate_random_symmetric_projection(rng, n=4, i=i)
            report = check_thm1(instance.body, instance.subspace)
            worst_ratio = max(worst_ratio, report.ratio)
            failures += not report.passed

    return {"worst_equality_error": worst_equality, "worst_random_ratio": worst_ratio, "failures": failures}


def thm2_inequality(random_instances: int, samples: int, seed: int, jobs: int) -> dict[str, float]:
    """Gauge bound: random min-of-3-affines instances and the cylinder equality family."""
    failures, worst_ratio = 0, 0.0
    rng = np.random.default_rng(seed)

    for index in tqdm(range(random_instances), desc="Gauge bound"):
        instance = generate_random_symmetric_function(rng, n=int(rng.integers(2, 5)))
        gauge = RANDOM_GAUGES[index % len(RANDOM_GAUGES)]
        report = check_thm2(instance.body, instance.function, gauge, samples, seed + index, jobs)
        failures += not report.passed
        worst_ratio = max(worst_ratio, report.ratio)

    worst_equality = 0.0
    for gauge in RANDOM_GAUGES:
        C, f = construct_equality_thm2(cube(2))
        report = check_thm2(C, f, gauge, samples, seed, jobs)
        worst_equality = max(worst_equality, abs(report.slack) - report.tolerance)

    return {"failures": failures, "worst_random_ratio": worst_ratio, "equality_excess": worst_equality}


def corollary_closed_form() -> dict[str, float]:
    """Power bound on C = [-1, 1] with f = 1 + t: lhs = rhs = 2^alpha / (alpha + 1)."""
    interval = cube(1)
    f = ConcaveFn.affine(interval, [1.0], 1.0)
    worst = 0.0

    for alpha in (1, 2, 3):
        report = check_cor_alpha(interval, f, alpha, samples=1000, seed=0)
        expected = 2**alpha / (alpha + 1)
        worst = max(worst, abs(report.lhs - expected), abs(report.rhs - expected))

    return {"worst_error": worst}


def log_concave_examples() -> dict[str, float]:
    """Log-concave bound: the interval equality case and the separable square example."""
    interval = cube(1)
    equality = check_thm3(interval, ConcaveFn.affine(interval, [1.0], 1.0, allow_negative=True), 1000, 0)

    square = cube(2)
    separable = check_thm3(square, ConcaveFn.affine(square, [0.5, 0.5], 0.0, allow_negative=True), 1000, 0)

    return {
        "equality_error": abs(equality.lhs - (np.e**2 - 1) / 2),
        "square_lhs_error": abs(separable.lhs - (np.e - 2 + np.exp(-1))),
        "square_rhs_error": abs(separable.rhs - np.sinh(1)),
    }


def cone_remark() -> dict[str, float]:
    """Pyramid over the square: centroid heights, section lengths and ratio ordering."""
    pyramid = cone_over_base(cube(2))
    plane = Subspace.coordinate(3, [0, 2])
    mp_report, proj_report = check_mp_centroid(pyramid, plane), check_proj_centroid(pyramid, plane)

    return {
        "centroid_height_error": abs(centroid(pyramid)[2] - 1 / 4),
        "section_at_body_centroid_error": abs(section_volume(pyramid, plane, [0, 1 / 4]) - 3 / 2),
        "section_at_projection_centroid_error": abs(section_volume(pyramid, plane, [0, 1 / 3]) - 4 / 3),
        "ordering_holds": float(mp_report.ratio < proj_report.ratio <= 1 + EPS_GEOM),
    }


def schwarz_preservation(random_bodies: int, knots: int, seed: int, jobs: int) -> dict[str, float]:
    """Volume preservation of the Schwarz profile and the cross-polytope t*."""
    bodies = [cube(3), cross_polytope(3)]
    bodies += [random_hull(3 + index % 2, count=15, seed=seed + index) for index in range(random_bodies)]

    worst = 0.0
    for body in tqdm(bodies, desc="Schwarz profiles"):
        profile = schwarz_profile(body, np.eye(body.dim)[0], knots, jobs)
        worst = max(worst, abs(schwarz_volume(profile) / volume(body) - 1))

    tstar = find_tstar(cylinder_family(cross_polytope(3), knot_count=knots, jobs=jobs))

    return {"worst_relative_error": worst, "tstar_error": abs(tstar - (1 - 1 / np.sqrt(3)))}


def property_suites(segments: int, triples: int, seed: int, jobs: int) -> dict[str, float]:
    """Brunn concavity, four-point lemma, Fubini consistency and affine equivariance."""
    rng = np.random.default_rng(seed)

    # Brunn concavity
    body = random_hull(4, count=20, seed=seed)
    concavity = check_brunn_concavity(body, Subspace.random(4, 2, rng), segments, seed, jobs)

    # Four-point lemma
    four_point_violations = 0
    for gauge in [*RANDOM_GAUGES, ConvexGauge.max_affine([(0, 0), (1, -0.5), (3, -2)])]:
        a = rng.uniform(0, 2, size=triples)
        gamma = rng.uniform(1, 3, size=triples)
        r = rng.uniform(0, 0.999, size=triples) * a / gamma
        four_point_violations += sum(
            four_point_gap(gauge, a_k, r_k, gamma_k) < -EPS_NUM for a_k, r_k, gamma_k in zip(a, r, gamma)
        )

    # Fubini consistency
    fubini = fubini_volume(body, Subspace.coordinate(4, [0]), grid=200)
    fubini_error = abs(fubini.value / volume(body) - 1)

    # Affine equivariance
    matrix = rng.standard_normal((4, 4))
    shift = rng.standard_normal(4)
    image = affine_image(body, matrix, shift)
    volume_error = abs(volume(image) / (abs(np.linalg.det(matrix)) * volume(body)) - 1)
    centroid_error = float(np.max(np.abs(centroid(image) - (matrix @ centroid(body) + shift))))

    return {
        "concavity_violations": concavity.violations,
        "four_point_violations": four_point_violations,
        "fubini_relative_error": fubini_error,
        "volume_equivariance_error": volume_error,
        "centroid_equivariance_error": centroid_error,
    }


def run_acceptance_suite(
    save_path: Path,
    seed: int = 0,
    random_bodies: int = 1000,
    random_projection_bodies: int = 500,
    random_instances: int = 200,
    samples: int = 200_000,
    knots: int = 4001,
    schwarz_bodies: int = 50,
    segments: int = 10_000,
    triples: int = 10_000,
    jobs: int | None = None,
) -> None:
    """Run the acceptance sweeps and save a summary table.

    :param save_path: Path to a CSV file where the summary will be saved.
    :param seed: Master seed.
    :param random_bodies: Number of random slab-normalized bodies per dimension.
    :param random_projection_bodies: Number of random symmetric-projection bodies per subspace dimension.
    :param random_instances: Number of random functional instances.
    :param samples: Number of Monte Carlo samples per functional check.
    :param knots: Number of Schwarz profile knots.
    :param schwarz_bodies: Number of random bodies for the Schwarz sweep.
    :param segments: Number of Brunn concavity segments.
    :param triples: Number of four-point triples per gauge.
    :param jobs: Number of worker processes.
    """
    jobs = resolve_jobs(jobs)

    results = {
        "santos_sharpness": santos_sharpness(random_bodies, seed),
        "thm1_constant": thm1_constant(random_projection_bodies, seed),
        "thm2_inequality": thm2_inequality(random_instances, samples, seed, jobs),
        "corollary_closed_form": corollary_closed_form(),
        "log_concave_examples": log_concave_examples(),
        "cone_remark": cone_remark(),
        "schwarz_preservation": schwarz_preservation(schwarz_bodies, knots, seed, jobs),
        "property_suites": property_suites(segments, triples, seed, jobs),
    }

    summary = pd.DataFrame(
        [
            {"criterion": criterion, "quantity": quantity, "value": value}
            for criterion, quantities in results.items()
            for quantity, value in quantities.items()
        ]
    )
    print(summary.to_string(index=False))

    save_path.parent.mkdir(parents=True, exist_ok=True)
    summary.to_csv(save_path, index=False)


if __name__ == "__main__":
    from tap import tapify

    tapify(run_acceptance_suite)
