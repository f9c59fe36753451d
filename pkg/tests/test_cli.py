"""Tests for the hhgeom command line."""
import json

import pandas as pd
import pytest

from hhgeom.cli import EXIT_PASS, EXIT_USAGE, RunConfig, run


def run_command(*args: str) -> int:
    return run(RunConfig().parse_args(list(args)))


@pytest.fixture
def cube_path(tmp_path):
    path = tmp_path / "cube.json"
    path.write_text(json.dumps({"dim": 2, "vertices": [[-1, -1], [1, -1], [1, 1], [-1, 1]]}))

    return path


@pytest.fixture
def function_path(tmp_path):
    path = tmp_path / "f.json"
    path.write_text(json.dumps({"pieces": [{"a": [0.5, 0.5], "b": 1.0}]}))

    return path


def test_verify_santos_on_scaled_slab(capsys):
    assert run_command("verify", "--theorem", "santos", "--family", "scaled-slab", "--n", "3") == EXIT_PASS

    [report] = json.loads(capsys.readouterr().out)
    assert report["verdict"] == "equality"
    assert report["ratio"] == pytest.approx(1)


def test_verify_thm2_is_deterministic(tmp_path, cube_path, function_path):
    outputs = []

    for index in range(2):
        out = tmp_path / f"report_{index}.json"
        status = run_command(
            "verify",
            "--theorem", "thm2",
            "--body", str(cube_path),
            "--f", str(function_path),
            "--gauge", "power:2",
            "--samples", "2000",
            "--seed", "7",
            "--out", str(out),
        )
        assert status == EXIT_PASS
        outputs.append(out.read_bytes())

    assert outputs[0] == outputs[1]

    [report] = json.loads(outputs[0])
    assert report["lhs"] == pytest.approx(7 / 6)
    assert report["rhs"] == pytest.approx(4 / 3)


def test_verify_csv_output(tmp_path):
    out = tmp_path / "report.csv"
    status = run_command(
        "verify", "--theorem", "thm1", "--family", "cube", "--n", "3", "--i", "2", "--out", str(out), "--format", "csv"
    )

    assert status == EXIT_PASS
    assert pd.read_csv(out)["verdict"].tolist() == ["equality"]


def test_precondition_violation_exits_with_usage_code(capsys):
    status = run_command("verify", "--theorem", "thm1", "--family", "cone", "--n", "3", "--subspace", "1,3")

    assert status == EXIT_USAGE
    assert "P_HK = -P_HK" in capsys.readouterr().err


def test_usage_errors(cube_path, tmp_path):
    # Functional checks need a seed
    assert run_command("verify", "--theorem", "thm2", "--body", str(cube_path), "--gauge", "power:2") == EXIT_USAGE

    # Unknown theorem
    assert run_command("verify", "--theorem", "thm9", "--family", "cube") == EXIT_USAGE

    # Exactly one of --body and --family
    assert run_command("verify", "--theorem", "santos") == EXIT_USAGE
    assert run_command("verify", "--theorem", "santos", "--family", "cube", "--body", str(cube_path)) == EXIT_USAGE

    # Malformed and missing bodies
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    assert run_command("verify", "--theorem", "santos", "--body", str(broken)) == EXIT_USAGE
    assert run_command("verify", "--theorem", "santos", "--body", str(tmp_path / "missing.json")) == EXIT_USAGE


def test_construct(capsys):
    assert run_command("construct", "--theorem", "thm1", "--n", "4", "--i", "2") == EXIT_PASS
    [report] = json.loads(capsys.readouterr().out)
    assert report["lhs"] == pytest.approx(16 / 3)
    assert report["verdict"] == "equality"

    status = run_command("construct", "--theorem", "thm2", "--n", "3", "--gauge", "exp_minus_one", "--seed", "0")
    assert status == EXIT_PASS
    [report] = json.loads(capsys.readouterr().out)
    assert report["verdict"] == "equality"


def test_construct_saves_instance(tmp_path):
    out = tmp_path / "thm1" / "report.json"
    assert run_command("construct", "--theorem", "thm1", "--n", "4", "--i", "2", "--out", str(out)) == EXIT_PASS

    body_path, subspace_path = tmp_path / "thm1" / "thm1_body.json", tmp_path / "thm1" / "thm1_subspace.json"
    assert json.loads(body_path.read_text())["dim"] == 4
    assert json.loads(out.read_text())[0]["verdict"] == "equality"

    # The saved instance is read back by verify
    verify_out = tmp_path / "verify.json"
    status = run_command(
        "verify",
        "--theorem", "thm1",
        "--body", str(body_path),
        "--subspace", str(subspace_path),
        "--out", str(verify_out),
    )
    assert status == EXIT_PASS
    assert json.loads(verify_out.read_text())[0]["verdict"] == "equality"


def test_construct_saves_function_and_gauge(tmp_path):
    status = run_command(
        "construct",
        "--theorem", "thm2",
        "--n", "2",
        "--gauge", "power:2",
        "--seed", "0",
        "--instance_dir", str(tmp_path),
    )
    assert status == EXIT_PASS
    assert {path.name for path in tmp_path.iterdir()} == {"thm2_body.json", "thm2_f.json", "thm2_gauge.json"}

    status = run_command(
        "verify",
        "--theorem", "thm2",
        "--body", str(tmp_path / "thm2_body.json"),
        "--f", str(tmp_path / "thm2_f.json"),
        "--gauge", str(tmp_path / "thm2_gauge.json"),
        "--seed", "0",
        "--out", str(tmp_path / "reports" / "verify.json"),
    )
    assert status == EXIT_PASS
    assert json.loads((tmp_path / "reports" / "verify.json").read_text())[0]["verdict"] == "equality"


def test_search(tmp_path):
    out = tmp_path / "search.json"
    status = run_command(
        "search", "--theorem", "thm1", "--trials", "3", "--seed", "0", "--perturbation", "0.01", "--out", str(out)
    )

    assert status == EXIT_PASS

    result = json.loads(out.read_text())
    assert result["trials"] == 3
    assert result["failures"] == 0
    assert result["best_ratio"] <= 1 + 1e-9


def test_search_passes_subspace_dimension(tmp_path):
    out = tmp_path / "search.json"
    status = run_command(
        "search",
        "--theorem", "thm1",
        "--n", "4",
        "--i", "2",
        "--trials", "2",
        "--seed", "0",
        "--perturbation", "0.01",
        "--out", str(out),
    )

    assert status == EXIT_PASS
    assert len(json.loads(out.read_text())["best_instance"]["subspace"]["basis"]) == 2


def test_search_reports_skipped_trials(tmp_path, capsys):
    out = tmp_path / "search.json"
    status = run_command(
        "search", "--theorem", "thm1", "--generator", "random_hull", "--trials", "2", "--seed", "0", "--out", str(out)
    )

    # Random hulls almost never have a symmetric projection, so every trial is skipped
    assert status == EXIT_USAGE
    assert "All 2 trials" in capsys.readouterr().err


def test_profile(tmp_path, capsys):
    out = tmp_path / "profile.csv"

    assert run_command("profile", "--family", "cross-polytope", "--n", "3", "--knots", "101", "--out", str(out)) == 0
    assert "t* = " in capsys.readouterr().err

    profile = pd.read_csv(out)
    assert list(profile.columns) == ["t", "r_t"]
    assert len(profile) == 101
