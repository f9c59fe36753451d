"""Report types for inequality checks, property sweeps and tightness searches, and their output."""
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Literal

import numpy as np
import pandas as pd

from hhgeom.constants import EPS_GEOM, EPS_NUM, REPORT_CSV_COLUMNS, SIGMA_MULTIPLIER

Verdict = Literal["pass", "fail", "equality"]


def exact_tolerance(rhs: float) -> float:
    """Tolerance of a check whose two sides are computed exactly (up to rounding)."""
    return EPS_GEOM * max(1.0, abs(rhs))


def monte_carlo_tolerance(std_error: float) -> float:
    """Tolerance of a check with a Monte Carlo side: a band of SIGMA_MULTIPLIER standard errors plus EPS_NUM."""
    return SIGMA_MULTIPLIER * std_error + EPS_NUM


@dataclass
class InequalityReport:
    """The outcome of checking one inequality lhs <= rhs on one instance.

    :param name: Theorem tag.
    :param lhs: Left-hand side value.
    :param rhs: Right-hand side value.
    :param tolerance: Absolute tolerance of the verdict.
    :param method: Computation method per side (closed_form, exact, quadrature, monte_carlo).
    :param instance: JSON provenance of the instance (body, subspace, function, gauge, ...).
    :param seed: Seed of the Monte Carlo paths, if any.
    :param notes: Free-form remarks (e.g. expected equality).
    """

    name: str
    lhs: float
    rhs: float
    tolerance: float
    method: dict[str, str] = field(default_factory=dict)
    instance: dict[str, Any] = field(default_factory=dict)
    seed: int | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def ratio(self) -> float:
        """Get lhs / rhs (1 when both sides vanish)."""
        if self.rhs == 0:
            return 1.0 if self.lhs == 0 else float(np.inf)

        return self.lhs / self.rhs

    @property
    def slack(self) -> float:
        """Get rhs - lhs."""
        return self.rhs - self.lhs

    @property
    def verdict(self) -> Verdict:
        """Get the verdict: equality if |slack| <= tolerance, else pass if lhs <= rhs + tolerance, else fail."""
        if abs(self.slack) <= self.tolerance:
            return "equality"

        if self.lhs <= self.rhs + self.tolerance:
            return "pass"

        return "fail"

    @property
    def passed(self) -> bool:
        """Get whether the inequality holds (verdict pass or equality)."""
        return self.verdict != "fail"

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "ratio": self.ratio,
            "slack": self.slack,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
            "method": self.method,
            "instance": self.instance,
            "seed": self.seed,
            "notes": self.notes,
        }


@dataclass
class PropertyReport:
    """The outcome of a property sweep: how often a margin fell below -tolerance, and the worst margin seen."""

    name: str
    trials: int
    violations: int
    worst_margin: float
    tolerance: float
    seed: int | None = None
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "trials": self.trials,
            "violations": self.violations,
            "worst_margin": self.worst_margin,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "seed": self.seed,
            "details": self.details,
        }


@dataclass
class TightnessResult:
    """The supremum of lhs / rhs found by a random search, with the instance attaining it.

    :param theorem: Theorem tag.
    :param best_ratio: Largest ratio over all trials.
    :param best_instance: JSON provenance of the instance attaining the best ratio.
    :param best_seed: Trial seed of the best instance.
    :param trials: Number of trials.
    :param failures: Number of trials with verdict fail.
    :param ratio_histogram: Histogram of the ratios as {"counts": [...], "edges": [...]}.
    :param skipped: Number of trials whose instances violated the preconditions.
    """

    theorem: str
    best_ratio: float
    best_instance: dict[str, Any]
    best_seed: int
    trials: int
    failures: int
    ratio_histogram: dict[str, list[float]]
    skipped: int = 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "theorem": self.theorem,
            "best_ratio": self.best_ratio,
            "best_instance": self.best_instance,
            "best_seed": self.best_seed,
            "trials": self.trials,
            "failures": self.failures,
            "ratio_histogram": self.ratio_histogram,
            "skipped": self.skipped,
        }


def save_json(data: Any, path: Path) -> None:
    """Saves JSON-ready data with a stable layout."""
    path.parent.mkdir(parents=True, exist_ok=True)

    with open(path, "w") as f:
        json.dump(data, f, indent=2, sort_keys=True)
        f.write("\n")


def save_reports(
    reports: list[InequalityReport], path: Path, output_format: Literal["json", "csv"] = "json"
) -> None:
    """Saves inequality reports as a JSON array or as a CSV table.

    In CSV form every report's instance is written to its own JSON file next to the table and referenced in the
    instance_path column.

    :param reports: The reports to save.
    :param path: Path to the output file.
    :param output_format: Either "json" or "csv".
    """
    if output_format == "json":
        save_json([report.to_dict() for report in reports], path)
    elif output_format == "csv":
        instance_dir = path.parent / f"{path.stem}_instances"
        rows = []

        for index, report in enumerate(reports):
            instance_path = instance_dir / f"{index}_{report.name}.json"
            save_json(report.instance, instance_path)

            row = report.to_dict()
            row["instance_path"] = str(instance_path)
            rows.append(row)

        path.parent.mkdir(parents=True, exist_ok=True)
        pd.DataFrame(rows, columns=REPORT_CSV_COLUMNS).to_csv(path, index=False)
    else:
        raise ValueError(f'Output format "{output_format}" is not supported.')
