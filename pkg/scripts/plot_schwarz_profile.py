"""Plot Schwarz symmetrization profiles saved by `hhgeom profile --out`."""
from pathlib import Path

import matplotlib
import matplotlib.pyplot as plt
import pandas as pd
import seaborn as sns

FIGSIZE = (10, 6)
matplotlib.rcParams["font.size"] = 16
plt.rcParams["axes.labelweight"] = "bold"


def plot_schwarz_profile(profile_paths: list[Path], save_path: Path, tstar: float | None = None) -> None:
    """Plot the radius r_t against t for one or more profiles, mirrored about the axis.

    :param profile_paths: Paths to profile CSV files with columns t and r_t.
    :param save_path: Path to the image file where the plot will be saved.
    :param tstar: Optional slab parameter t* to mark with vertical lines at +-t*.
    """
    fig, ax = plt.subplots(figsize=FIGSIZE)
    colors = sns.color_palette(n_colors=len(profile_paths))

    for profile_path, color in zip(profile_paths, colors):
        profile = pd.read_csv(profile_path)
        ax.plot(profile["t"], profile["r_t"], color=color, label=profile_path.stem)
        ax.plot(profile["t"], -profile["r_t"], color=color)
        ax.fill_between(profile["t"], -profile["r_t"], profile["r_t"], color=color, alpha=0.15)

    if tstar is not None:
        for position in (-tstar, tstar):
            ax.axvline(position, color="k", linestyle="--")

    ax.set_xlabel("t")
    ax.set_ylabel("r_t")
    ax.set_aspect("equal")
    ax.legend()

    save_path.parent.mkdir(parents=True, exist_ok=True)
    plt.tight_layout()
    plt.savefig(save_path, bbox_inches="tight")
    plt.close(fig)


if __name__ == "__main__":
    from tap import tapify

    tapify(plot_schwarz_profile)
