"""Figure rendering for the CLI report paths (written next to the tables)."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .dynamics import EntropyEstimate
from .graphs import VertexTsft, labeled_graph


def render_entropy_figure(est: EntropyEstimate, path: str) -> None:
    """Convergence plot of the per-height entropy estimates."""
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    ax.plot(est.ms, est.h_values, marker="o", lw=1.2, label=r"$h_m$")
    if est.limit is not None:
        ax.axhline(est.limit, color="tab:red", ls="--", lw=1.0,
                   label=f"extrapolated {est.limit:.6f}")
    ax.set_xlabel("block height m")
    ax.set_ylabel(r"$\ln(\ln |B_m|)\,/\,m$")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_graph_figure(tsft: VertexTsft, path: str) -> None:
    """Labeled-graph drawing: vertices on a circle, edges tagged by direction."""
    g = labeled_graph(tsft)
    fig, ax = plt.subplots(figsize=(4.5, 4.5))
    pos = {
        v: (math.cos(2 * math.pi * v / g.n), math.sin(2 * math.pi * v / g.n))
        for v in range(g.n)
    }
    for v, (x, y) in pos.items():
        ax.add_patch(plt.Circle((x, y), 0.12, color="tab:blue", zorder=3))
        ax.annotate(str(v), (x, y), color="white", ha="center", va="center",
                    zorder=4, fontsize=11)
    for idx, (i, j, k) in enumerate(g.edges):
        x1, y1 = pos[i]
        x2, y2 = pos[j]
        rad = 0.25 + 0.12 * k
        if i == j:
            # Self-loop drawn as a small circle outside the vertex.
            lx, ly = x1 * 1.32, y1 * 1.32
            ax.add_patch(plt.Circle((lx, ly), 0.12, fill=False,
                                    color="tab:gray", zorder=2))
            ax.annotate(str(k), (x1 * 1.52, y1 * 1.52), ha="center",
                        va="center", fontsize=9, color="tab:red")
            continue
        ax.annotate(
            "",
            xy=(x2, y2),
            xytext=(x1, y1),
            arrowprops=dict(
                arrowstyle="-|>",
                color="tab:gray",
                shrinkA=14,
                shrinkB=14,
                connectionstyle=f"arc3,rad={rad}",
            ),
            zorder=2,
        )
        mx, my = (x1 + x2) / 2, (y1 + y2) / 2
        nx, ny = -(y2 - y1), (x2 - x1)
        norm = math.hypot(nx, ny) or 1.0
        ax.annotate(str(k), (mx + rad * nx / norm, my + rad * ny / norm),
                    ha="center", va="center", fontsize=9, color="tab:red")
    ax.set_xlim(-1.8, 1.8)
    ax.set_ylim(-1.8, 1.8)
    ax.set_aspect("equal")
    ax.axis("off")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
