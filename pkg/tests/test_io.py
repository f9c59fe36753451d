"""Tests for hhgeom.io."""
import json

import numpy as np
import pytest

from hhgeom.bodies import cube
from hhgeom.io import load_body, load_function, parse_gauge, parse_subspace, parse_vector, save_body
from hhgeom.polytope import volume
from hhgeom.utils import PreconditionError, same_point_set


def write_json(path, data):
    with open(path, "w") as f:
        json.dump(data, f)

    return path


def test_load_body_from_vertices(tmp_path):
    path = write_json(tmp_path / "body.json", {"dim": 2, "vertices": [[-1, -1], [1, -1], [1, 1], [-1, 1], [0, 0]]})
    body = load_body(path)

    assert len(body.vertices) == 4
    assert volume(body) == pytest.approx(4)


def test_load_body_from_halfspaces(tmp_path):
    halfspaces = [{"a": [1, 0], "b": 1}, {"a": [-1, 0], "b": 1}, {"a": [0, 1], "b": 1}, {"a": [0, -1], "b": 1}]
    body = load_body(write_json(tmp_path / "body.json", {"dim": 2, "halfspaces": halfspaces}))

    assert same_point_set(body.vertices, cube(2).vertices)


def test_save_and_load_body(tmp_path):
    save_body(cube(3), tmp_path / "cube.json")

    assert same_point_set(load_body(tmp_path / "cube.json").vertices, cube(3).vertices)


def test_load_body_rejects_malformed_input(tmp_path):
    with pytest.raises(ValueError):
        load_body(write_json(tmp_path / "body.json", {"dim": 2}))

    (tmp_path / "broken.json").write_text("{not json")
    with pytest.raises(ValueError):
        load_body(tmp_path / "broken.json")


def test_parse_subspace(tmp_path):
    subspace = parse_subspace("1,3", 3)
    assert np.allclose(subspace.basis, [[1, 0, 0], [0, 0, 1]])

    path = write_json(tmp_path / "subspace.json", {"ambient": 3, "basis": [[1, 1, 0]]})
    subspace = parse_subspace(str(path), 3)
    assert np.allclose(subspace.basis, [[1 / np.sqrt(2), 1 / np.sqrt(2), 0]])

    for spec in ("0,1", "1,1", "4"):
        with pytest.raises(ValueError):
            parse_subspace(spec, 3)

    with pytest.raises(ValueError):
        parse_subspace(str(path), 4)


def test_load_function(tmp_path):
    square = cube(2)
    path = write_json(tmp_path / "f.json", {"pieces": [{"a": [-1, 0], "b": 2}, {"a": [1, 0], "b": 2}]})
    f = load_function(path, domain=square)

    assert len(f.pieces) == 2
    assert float(f([0.0, 0.0])[0]) == pytest.approx(2)

    negative = write_json(tmp_path / "u.json", {"pieces": [{"a": [1, 0], "b": -0.5}]})
    with pytest.raises(PreconditionError):
        load_function(negative, domain=square)
    assert load_function(negative, domain=square, allow_negative=True).vertex_minimum == pytest.approx(-1.5)


def test_parse_gauge(tmp_path):
    assert parse_gauge("power:3").alpha == 3
    assert parse_gauge("exp_minus_one").kind == "exp_minus_one"
    assert parse_gauge("max_affine:0,0;2,-1").pieces == ((0.0, 0.0), (2.0, -1.0))

    path = write_json(tmp_path / "gauge.json", {"kind": "max_affine", "pieces": [{"m": 1, "c": 0}]})
    assert parse_gauge(str(path)).kind == "max_affine"

    for spec in ("power:0.5", "cosh", "max_affine:1", "exp_minus_one:2"):
        with pytest.raises(ValueError):
            parse_gauge(spec)


def test_parse_vector():
    assert np.allclose(parse_vector("1,0,2", 3), [1, 0, 2])

    with pytest.raises(ValueError):
        parse_vector("1,0", 3)
