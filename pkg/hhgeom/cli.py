"""Command-line front end: verify inequalities, construct equality cases, search for tight instances, export profiles."""
import json
import sys
from functools import partial
from pathlib import Path
from typing import Any, Literal

import numpy as np
from tap import Tap

from hhgeom.bodies import BodyFamily, cube, make_body
from hhgeom.constants import (
    DEFAULT_KNOTS,
    DEFAULT_SAMPLES,
    DEFAULT_TRIALS,
    FAMILY_ALIASES,
    FUNCTIONAL_THEOREMS,
    THEOREMS,
)
from hhgeom.functional import ConcaveFn
from hhgeom.io import load_body, load_function, parse_gauge, parse_subspace, parse_vector, save_instance
from hhgeom.marginals import Subspace
from hhgeom.polytope import Polytope, is_symmetric, support, volume
from hhgeom.reports import InequalityReport, save_json, save_reports
from hhgeom.symmetrize import cylinder_family, find_tstar, save_profile_csv, schwarz_volume
from hhgeom.utils import PreconditionError, resolve_jobs
from hhgeom.verify import (
    GENERATORS,
    Instance,
    construct_equality_thm1,
    construct_equality_thm2,
    construct_equality_thm3,
    run_check,
    tightness_search,
)

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

DEFAULT_GENERATORS = {
    "thm1": "perturbed_scaled_slab",
    "santos": "random_slab_normalized",
    "mp_centroid": "random_hull",
    "proj_centroid": "random_hull",
    "max_section": "random_hull",
}


class RunConfig(Tap):
    command: Literal["verify", "construct", "search", "profile"]
    """What to do: verify a theorem on one instance, construct an equality case, search for tight instances,
    or export a Schwarz profile."""
    theorem: str | None = None
    """Theorem tag, one of thm1, santos, mp_centroid, proj_centroid, max_section, thm2, cor_alpha, thm3,
    classical_hh, hh_center_of_mass."""
    body: Path | None = None
    """Path to a body JSON file."""
    family: str | None = None
    """Body family alias: cube, cross-polytope, mgon-prism, cone, cylinder, scaled-slab, random-hull."""
    n: int = 3
    """Ambient dimension of family bodies."""
    i: int = 1
    """Subspace dimension."""
    polygon_vertices: int = 8
    """Number of polygon vertices of the mgon-prism family."""
    count: int = 12
    """Number of random points of random bodies."""
    symmetric: bool = False
    """Whether the random-hull family is symmetrized."""
    subspace: str | None = None
    """Subspace as a JSON path or comma-separated 1-based coordinate indices. Defaults to lin{e_1, ..., e_i}."""
    f: Path | None = None
    """Path to a concave function JSON file. Defaults to f(x) = 1 + x_1 / h(K, e_1)."""
    gauge: str | None = None
    """Gauge: power:<alpha>, exp_minus_one, max_affine:<m1>,<c1>;<m2>,<c2> or a JSON path."""
    alpha: float = 2.0
    """Exponent of the power bound (cor_alpha)."""
    m: int = 1
    """Weight power of the weighted centroid (hh_center_of_mass)."""
    samples: int = DEFAULT_SAMPLES
    """Number of Monte Carlo samples."""
    seed: int | None = None
    """Random seed. Mandatory for functional theorems and searches."""
    out: Path | None = None
    """Output path. If None, results are written to stdout."""
    instance_dir: Path | None = None
    """Directory where construct saves the equality instance as body, subspace, function and gauge JSON files that
    --body, --subspace, --f and --gauge read back. Defaults to the directory of --out."""
    format: Literal["json", "csv"] = "json"
    """Report format."""
    jobs: int | None = None
    """Number of worker processes. Defaults to the HHGEOM_JOBS environment variable, then to 1."""
    trials: int = DEFAULT_TRIALS
    """Number of search trials."""
    generator: str | None = None
    """Instance generator of the search. Defaults to one suited to the theorem."""
    perturbation: float = 0.1
    """Perturbation size of the perturbed_scaled_slab generator."""
    knots: int = DEFAULT_KNOTS
    """Number of Schwarz profile knots."""
    axis: str | None = None
    """Comma-separated symmetrization axis. Defaults to e_1."""

    def configure(self) -> None:
        self.add_argument("command")


def build_family_body(config: RunConfig) -> Polytope:
    """Builds the body of a family alias from the command-line parameters."""
    if config.family not in FAMILY_ALIASES:
        raise ValueError(f'Family "{config.family}" is not supported. Choose from {", ".join(FAMILY_ALIASES)}.')

    tag = FAMILY_ALIASES[config.family]
    n = config.n
    parameters: dict[str, Any] = {
        "cube": {"n": n},
        "cross_polytope": {"n": n},
        "regular_mgon_prism": {"n": n, "m": config.polygon_vertices},
        "cone_over_base": {"base": cube(n - 1) if n > 1 else None},
        "generalized_cylinder": {"x0": np.eye(n)[0], "c0": cube(n - 1) if n > 1 else None},
        "scaled_slab_body": {"n": n, "i": config.i},
        "random_hull": {
            "n": n,
            "count": config.count,
            "seed": config.seed or 0,
            "symmetric": config.symmetric,
        },
    }[tag]

    if n < 2 and tag in {"cone_over_base", "generalized_cylinder"}:
        raise ValueError(f'Family "{config.family}" needs dimension at least 2.')

    return make_body(BodyFamily(tag=tag, parameters=parameters))


def load_config_body(config: RunConfig) -> Polytope:
    """Loads the body from --body or builds it from --family."""
    if (config.body is None) == (config.family is None):
        raise ValueError("Exactly one of --body and --family must be given.")

    return load_body(config.body) if config.body is not None else build_family_body(config)


def default_subspace_dims(theorem: str, n: int, i: int) -> list[int]:
    """Coordinates of the default subspace of a theorem."""
    if theorem == "santos":
        return [0]

    if theorem == "proj_centroid":
        return list(range(n - 1))

    return list(range(i))


def build_instance(config: RunConfig, K: Polytope) -> Instance:
    """Assembles the inputs of a check from the command line."""
    theorem = config.theorem

    if theorem in FUNCTIONAL_THEOREMS:
        if config.f is not None:
            function = load_function(config.f, domain=K, allow_negative=theorem == "thm3")
        else:
            width = support(K, np.eye(K.dim)[0])
            function = ConcaveFn.affine(K, np.eye(K.dim)[0] / width, 1.0, allow_negative=theorem == "thm3")

        if theorem == "thm2" and config.gauge is None:
            raise ValueError('Theorem "thm2" needs --gauge.')

        return Instance(
            body=K,
            function=function,
            gauge=parse_gauge(config.gauge) if config.gauge is not None else None,
            alpha=config.alpha,
            m=config.m,
        )

    if config.subspace is not None:
        subspace = parse_subspace(config.subspace, K.dim)
    else:
        subspace = Subspace.coordinate(K.dim, default_subspace_dims(theorem, K.dim, config.i))

    return Instance(body=K, subspace=subspace)


def emit(data: Any, config: RunConfig) -> None:
    """Writes JSON-ready data to --out or stdout."""
    if config.out is None:
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        save_json(data, config.out)
        print(f"Saved results to {config.out}")


def emit_reports(reports: list[InequalityReport], config: RunConfig) -> None:
    """Writes reports to --out (JSON or CSV) or as JSON to stdout."""
    if config.out is None:
        print(json.dumps([report.to_dict() for report in reports], indent=2, sort_keys=True))
    else:
        save_reports(reports, config.out, output_format=config.format)
        print(f"Saved {len(reports):,} report(s) to {config.out}")


def run_verify(config: RunConfig, jobs: int) -> int:
    K = load_config_body(config)
    instance = build_instance(config, K)
    report = run_check(config.theorem, instance, samples=config.samples, seed=config.seed or 0, jobs=jobs)
    emit_reports([report], config)

    return EXIT_PASS if report.passed else EXIT_FAIL


def run_construct(config: RunConfig, jobs: int) -> int:
    theorem, n = config.theorem, config.n

    if theorem in {"thm1", "santos"}:
        K, subspace = construct_equality_thm1(n, 1 if theorem == "santos" else config.i)
        instance = Instance(body=K, subspace=subspace)
    elif theorem in {"thm2", "cor_alpha"}:
        C, f = construct_equality_thm2(cube(n - 1))
        gauge = parse_gauge(config.gauge) if config.gauge is not None else None
        instance = Instance(body=C, function=f, gauge=gauge, alpha=config.alpha)
    elif theorem == "thm3":
        C, u = construct_equality_thm3(cube(n - 1))
        instance = Instance(body=C, function=u)
    else:
        raise ValueError(f'No equality constructor for theorem "{theorem}".')

    directory = config.instance_dir or (config.out.parent if config.out is not None else None)
    if directory is not None:
        paths = save_instance(instance, directory, prefix=theorem)
        print(f"Saved equality instance to {', '.join(str(path) for path in paths)}", file=sys.stderr)

    report = run_check(theorem, instance, samples=config.samples, seed=config.seed or 0, jobs=jobs)
    print(f"{theorem}: lhs = {report.lhs:.12g}, rhs = {report.rhs:.12g}, verdict = {report.verdict}", file=sys.stderr)
    emit_reports([report], config)

    return EXIT_PASS if report.passed else EXIT_FAIL


def run_search(config: RunConfig, jobs: int) -> int:
    theorem = config.theorem
    name = config.generator or DEFAULT_GENERATORS.get(theorem, "random_symmetric_function")

    if name not in GENERATORS:
        raise ValueError(f'Generator "{name}" is not supported. Choose from {", ".join(GENERATORS)}.')

    options: dict[str, Any] = {"n": config.n}
    if name == "perturbed_scaled_slab":
        options["perturbation"] = config.perturbation
    if name in {"perturbed_scaled_slab", "random_symmetric_projection", "random_hull"}:
        options["i"] = {"proj_centroid": config.n - 1, "santos": 1}.get(theorem, config.i)

    result = tightness_search(
        partial(GENERATORS[name], **options),
        theorem,
        trials=config.trials,
        seed=config.seed,
        jobs=jobs,
        samples=config.samples,
    )
    if result.skipped > 0:
        print(f"Skipped {result.skipped:,} of {result.trials:,} trials violating the preconditions", file=sys.stderr)

    emit(result.to_dict(), config)

    return EXIT_PASS if result.failures == 0 else EXIT_FAIL


def run_profile(config: RunConfig, jobs: int) -> int:
    K = load_config_body(config)
    axis = parse_vector(config.axis, K.dim) if config.axis is not None else np.eye(K.dim)[0]
    family = cylinder_family(K, axis, knot_count=config.knots, jobs=jobs)
    profile = family.base_profile

    print(f"Body volume = {volume(K):.12g}", file=sys.stderr)
    print(f"Symmetral volume = {schwarz_volume(profile):.12g}", file=sys.stderr)

    if is_symmetric(K):
        print(f"t* = {find_tstar(family):.12g}", file=sys.stderr)

    if config.out is None:
        print("t,r_t")
        for t, radius in zip(profile.t, profile.radius):
            print(f"{t!r},{radius!r}")
    else:
        save_profile_csv(profile, config.out)
        print(f"Saved profile to {config.out}")

    return EXIT_PASS


def run(config: RunConfig) -> int:
    """Runs a command.

    :param config: The parsed command-line configuration.
    :return: Exit status: 0 if every check passed, 1 if any check failed, 2 on usage, input or precondition errors.
    """
    try:
        jobs = resolve_jobs(config.jobs)

        if config.command != "profile":
            if config.theorem not in THEOREMS:
                raise ValueError(f'--theorem must be one of {", ".join(THEOREMS)}, got "{config.theorem}".')

            if config.seed is None and (config.theorem in FUNCTIONAL_THEOREMS or config.command == "search"):
                raise ValueError("--seed is mandatory for Monte Carlo checks and searches.")

        commands = {
            "verify": run_verify,
            "construct": run_construct,
            "search": run_search,
            "profile": run_profile,
        }

        return commands[config.command](config, jobs)
    except PreconditionError as error:
        print(f"Precondition violated: {error}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, KeyError, FileNotFoundError) as error:
        print(f"Error: {error}", file=sys.stderr)
        return EXIT_USAGE


def hhgeom_command_line() -> None:
    """Run hhgeom from the command line."""
    sys.exit(run(RunConfig().parse_args()))
