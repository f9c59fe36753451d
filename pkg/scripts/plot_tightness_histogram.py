"""Plot ratio histograms of tightness searches saved by `hhgeom search --out`."""
import json
from pathlib import Path

import matplotlib
import matplotlib.pyplot as plt
import numpy as np
import seaborn as sns

FIGSIZE = (10, 6)
matplotlib.rcParams["font.size"] = 16
plt.rcParams["axes.labelweight"] = "bold"


def plot_tightness_histogram(result_paths: list[Path], save_dir: Path) -> None:
    """Plot one histogram of lhs / rhs per tightness search, with the best ratio and ratio 1 marked.

    :param result_paths: Paths to tightness search JSON files.
    :param save_dir: Path to a directory where the plots will be saved.
    """
    save_dir.mkdir(parents=True, exist_ok=True)
    sns.set_style("whitegrid")

    for result_path in result_paths:
        with open(result_path) as f:
            result = json.load(f)

        counts = np.array(result["ratio_histogram"]["counts"])
        edges = np.array(result["ratio_histogram"]["edges"])

        fig, ax = plt.subplots(figsize=FIGSIZE)
        ax.bar(edges[:-1], counts, width=np.diff(edges), align="edge", edgecolor="k")
        ax.axvline(result["best_ratio"], color="tab:red", linestyle="--", label=f"best = {result['best_ratio']:.6f}")
        ax.axvline(1.0, color="k", label="ratio = 1")

        ax.set_xlabel("lhs / rhs")
        ax.set_ylabel("Count")
        ax.set_title(f"{result['theorem']} ({result['trials']:,} trials)")
        ax.legend()

        plt.tight_layout()
        plt.savefig(save_dir / f"{result_path.stem}.pdf", bbox_inches="tight")
        plt.close(fig)


if __name__ == "__main__":
    from tap import tapify

    tapify(plot_tightness_histogram)
