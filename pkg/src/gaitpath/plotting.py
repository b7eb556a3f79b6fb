"""Figure rendering for trajectories and confusion matrices.

Figures are written next to the delimited output files; the format follows
the file extension (SVG by default).
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

CONTACT_COLORS = {"right": "tab:red", "left": "tab:blue"}

plt.rcParams["svg.hashsalt"] = "gaitpath"  # reproducible SVG element ids


def _savefig(fig, path) -> None:
    # drop the creation date so re-runs are byte-identical
    if str(path).lower().endswith(".svg"):
        fig.savefig(path, metadata={"Date": None})
    else:
        fig.savefig(path)


def plot_trajectory(result, path) -> None:
    """2-D path with red/blue discs where both feet touch the ground."""
    xs = [p[0] for p in result.points]
    ys = [p[1] for p in result.points]
    fig, ax = plt.subplots(figsize=(6, 6))
    ax.plot(xs, ys, "-", color="0.4", linewidth=1.2, zorder=1)
    rows_by_frame = {row[0]: row for row in result.frames}
    for skel_index, foot in result.contacts:
        sample = result.skeletons[skel_index]
        frame_row = rows_by_frame[sample.frame]
        ax.scatter([frame_row[3]], [frame_row[4]], s=36,
                   color=CONTACT_COLORS[foot], zorder=2)
    ax.scatter([xs[0]], [ys[0]], marker="s", s=48, color="black", zorder=3,
               label="start")
    ax.set_aspect("equal")
    ax.set_xlabel("x (unitless)")
    ax.set_ylabel("y (unitless)")
    ax.set_title("Estimated trajectory")
    ax.legend(loc="best", frameon=False)
    fig.tight_layout()
    _savefig(fig, path)
    plt.close(fig)


def plot_confusion(matrix: np.ndarray, path) -> None:
    """Heatmap of the 8x8 viewpoint confusion matrix with per-cell counts."""
    matrix = np.asarray(matrix)
    fig, ax = plt.subplots(figsize=(6, 5))
    im = ax.imshow(matrix, cmap="Blues")
    ticks = np.arange(8)
    labels = [f"V{i + 1}" for i in ticks]
    ax.set_xticks(ticks, labels)
    ax.set_yticks(ticks, labels)
    ax.set_xlabel("predicted viewpoint")
    ax.set_ylabel("true viewpoint")
    threshold = matrix.max() / 2.0 if matrix.max() else 0.5
    for i in range(8):
        for j in range(8):
            ax.text(j, i, str(matrix[i, j]), ha="center", va="center",
                    color="white" if matrix[i, j] > threshold else "black",
                    fontsize=8)
    fig.colorbar(im, ax=ax, shrink=0.85)
    ax.set_title("Viewpoint confusion")
    fig.tight_layout()
    _savefig(fig, path)
    plt.close(fig)
