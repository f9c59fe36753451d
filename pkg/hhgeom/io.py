"""Loading, parsing and saving of bodies, subspaces, concave functions and gauges."""
import json
from pathlib import Path
from typing import Any

import numpy as np

from hhgeom.functional import ConcaveFn, ConvexGauge
from hhgeom.marginals import Subspace
from hhgeom.polytope import Polytope
from hhgeom.reports import save_json
from hhgeom.verify import Instance


def load_json(path: Path) -> Any:
    """Loads a JSON file."""
    with open(path) as f:
        return json.load(f)


def load_body(path: Path) -> Polytope:
    """Loads a body from {"dim": n, "vertices": [...]} or {"dim": n, "halfspaces": [{"a": [...], "b": s}, ...]}."""
    return Polytope.from_dict(load_json(path))


def save_body(body: Polytope, path: Path) -> None:
    """Saves a body in vertex form."""
    save_json(body.to_dict(), path)


def load_subspace(path: Path) -> Subspace:
    """Loads a subspace from {"ambient": n, "basis": [[...], ...]} (orthonormalized on load)."""
    return Subspace.from_dict(load_json(path))


def parse_subspace(spec: str, n: int) -> Subspace:
    """Parses a subspace given as a JSON path or as comma-separated 1-based coordinate indices (e.g. "1,3").

    :param spec: The subspace specification.
    :param n: Ambient dimension.
    :return: The subspace.
    """
    if spec.endswith(".json"):
        subspace = load_subspace(Path(spec))
    else:
        indices = [int(index) - 1 for index in spec.split(",")]

        if any(not 0 <= index < n for index in indices) or len(set(indices)) != len(indices):
            raise ValueError(f'Subspace coordinates "{spec}" must be distinct indices between 1 and {n}.')

        subspace = Subspace.coordinate(n, indices)

    if subspace.ambient_dim != n:
        raise ValueError(f"Subspace lives in R^{subspace.ambient_dim} but the body lives in R^{n}.")

    return subspace


def load_function(path: Path, domain: Polytope, allow_negative: bool = False) -> ConcaveFn:
    """Loads a concave function {"pieces": [{"a": [...], "b": s}, ...]} on a domain."""
    return ConcaveFn.from_dict(load_json(path), domain=domain, allow_negative=allow_negative)


def parse_gauge(spec: str) -> ConvexGauge:
    """Parses a gauge given as a JSON path, "power:<alpha>", "exp_minus_one" or "max_affine:<m1>,<c1>;<m2>,<c2>".

    :param spec: The gauge specification.
    :return: The gauge.
    """
    if spec.endswith(".json"):
        return ConvexGauge.from_dict(load_json(Path(spec)))

    kind, _, arguments = spec.partition(":")

    if kind == "power":
        return ConvexGauge.power(float(arguments))

    if kind == "exp_minus_one" and not arguments:
        return ConvexGauge.exp_minus_one()

    if kind == "max_affine":
        pieces = [tuple(float(value) for value in piece.split(",")) for piece in arguments.split(";")]

        if any(len(piece) != 2 for piece in pieces):
            raise ValueError(f'Max-affine gauge pieces must be "<m>,<c>" pairs, got "{arguments}".')

        return ConvexGauge.max_affine(pieces)

    raise ValueError(f'Gauge specification "{spec}" is not understood.')


def parse_vector(spec: str, n: int) -> np.ndarray:
    """Parses a comma-separated vector of length n."""
    vector = np.array([float(value) for value in spec.split(",")])

    if len(vector) != n:
        raise ValueError(f'Vector "{spec}" must have {n} entries.')

    return vector


def save_subspace(subspace: Subspace, path: Path) -> None:
    """Saves a subspace as {"ambient": n, "basis": [[...], ...]}."""
    save_json(subspace.to_dict(), path)


def save_function(f: ConcaveFn, path: Path) -> None:
    """Saves a concave function as {"pieces": [{"a": [...], "b": s}, ...]}."""
    save_json(f.to_dict(), path)


def save_instance(instance: Instance, directory: Path, prefix: str) -> list[Path]:
    """Saves the parts of an instance in the formats read by the command line (--body, --subspace, --f, --gauge).

    :param instance: The instance.
    :param directory: Output directory.
    :param prefix: File name prefix, e.g. the theorem tag.
    :return: The paths written, body first.
    """
    paths = [directory / f"{prefix}_body.json"]
    save_body(instance.body, paths[0])

    if instance.subspace is not None:
        paths.append(directory / f"{prefix}_subspace.json")
        save_subspace(instance.subspace, paths[-1])

    if instance.function is not None:
        paths.append(directory / f"{prefix}_f.json")
        save_function(instance.function, paths[-1])

    if instance.gauge is not None:
        paths.append(directory / f"{prefix}_gauge.json")
        save_json(instance.gauge.to_dict(), paths[-1])

    return paths
