"""Report rendering: figures for a built artifact, next to the CSV exports.

Produces the standard set of diagnostic views: the value-vs-complementarity
scatter, community premium levels, the domain-by-community heatmap, the
premium-vs-automation quadrant chart, and per-skill trend panels.
"""

from __future__ import annotations

import logging
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .artifact import ModelArtifact
from .export import export_all

logger = logging.getLogger(__name__)

_CMAP = plt.get_cmap("tab10")


def _community_colors(artifact: ModelArtifact) -> dict[int, tuple]:
    comms = sorted(set(artifact.partition.assignment.values()))
    return {c: _CMAP(i % 10) for i, c in enumerate(comms)}


def _label(artifact: ModelArtifact, community: int) -> str:
    return artifact.partition.labels.get(community, f"community-{community}")


def fig_value_vs_complementarity(artifact: ModelArtifact, path: str) -> None:
    colors = _community_colors(artifact)
    fig, ax = plt.subplots(figsize=(7, 5))
    for comm in sorted(colors):
        xs, ys, sizes = [], [], []
        for u in artifact.graph.nodes:
            if artifact.partition.assignment[u] != comm or u not in artifact.premia:
                continue
            xs.append(artifact.scores_premium.scores[u])
            ys.append(artifact.premia[u].premium * 100.0)
            sizes.append(10 + 2.0 * artifact.graph.stats[u].demand ** 0.5)
        if xs:
            ax.scatter(xs, ys, s=sizes, color=colors[comm], alpha=0.7, label=_label(artifact, comm))
    ax.set_xlabel("complementarity (value-weighted PageRank)")
    ax.set_ylabel("premium (%)")
    ax.legend(fontsize=7, loc="best")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def fig_community_premium(artifact: ModelArtifact, path: str) -> None:
    sums: dict[int, float] = {}
    counts: dict[int, int] = {}
    for u, prem in artifact.premia.items():
        c = artifact.partition.assignment[u]
        sums[c] = sums.get(c, 0.0) + prem.premium
        counts[c] = counts.get(c, 0) + 1
    comms = sorted(sums)
    means = [100.0 * sums[c] / counts[c] for c in comms]
    colors = _community_colors(artifact)
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar(range(len(comms)), means, color=[colors[c] for c in comms])
    ax.set_xticks(range(len(comms)))
    ax.set_xticklabels([_label(artifact, c) for c in comms], rotation=30, ha="right", fontsize=8)
    ax.set_ylabel("mean premium (%)")
    ax.axhline(0, color="black", linewidth=0.8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def fig_domain_matrix(artifact: ModelArtifact, path: str) -> None:
    matrix = artifact.domain_matrix
    grid = np.full((len(matrix.domains), len(matrix.communities)), np.nan)
    for i, d in enumerate(matrix.domains):
        for j, c in enumerate(matrix.communities):
            cell = matrix.cell(d, c)
            if cell is not None:
                grid[i, j] = 100.0 * cell
    fig, ax = plt.subplots(figsize=(7, 5))
    im = ax.imshow(grid, cmap="RdYlGn", aspect="auto")
    ax.set_xticks(range(len(matrix.communities)))
    ax.set_xticklabels(
        [_label(artifact, c) for c in matrix.communities], rotation=30, ha="right", fontsize=8
    )
    ax.set_yticks(range(len(matrix.domains)))
    ax.set_yticklabels([_label(artifact, d) for d in matrix.domains], fontsize=8)
    ax.set_xlabel("skill community")
    ax.set_ylabel("worker domain")
    for i in range(grid.shape[0]):
        for j in range(grid.shape[1]):
            text = "n/a" if np.isnan(grid[i, j]) else f"{grid[i, j]:.0f}%"
            ax.text(j, i, text, ha="center", va="center", fontsize=7)
    fig.colorbar(im, ax=ax, label="premium (%)")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def fig_premium_vs_automation(artifact: ModelArtifact, path: str) -> None:
    colors = _community_colors(artifact)
    xs_all, ys_all = [], []
    fig, ax = plt.subplots(figsize=(7, 5))
    for comm in sorted(colors):
        xs, ys = [], []
        for u in artifact.graph.nodes:
            if (
                artifact.partition.assignment[u] != comm
                or u not in artifact.premia
                or u not in artifact.automation
            ):
                continue
            xs.append(artifact.automation[u])
            ys.append(artifact.premia[u].premium * 100.0)
        if xs:
            ax.scatter(xs, ys, s=18, color=colors[comm], alpha=0.7, label=_label(artifact, comm))
            xs_all += xs
            ys_all += ys
    if xs_all:
        ax.axvline(float(np.mean(xs_all)), color="grey", linestyle="--", linewidth=0.8)
        ax.axhline(float(np.mean(ys_all)), color="grey", linestyle="--", linewidth=0.8)
    ax.set_xlabel("automation probability")
    ax.set_ylabel("premium (%)")
    ax.legend(fontsize=7, loc="best")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def fig_trends(artifact: ModelArtifact, path: str, top_n: int = 6) -> None:
    scored = sorted(
        (s for s in artifact.trends if s in artifact.premia),
        key=lambda s: -abs(artifact.premia[s].premium),
    )[:top_n]
    if not scored:
        return
    fig, axes = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
    for slug in scored:
        t = artifact.trends[slug]
        centers = [0.5 * (a + b) for a, b in t.windows]
        premia = [None if p is None else 100.0 * p for p in t.premium_per_window]
        axes[0].plot(centers, premia, marker="o", label=slug)
        ratio = [
            d / s if s else float("nan")
            for d, s in zip(t.demand_per_window, t.supply_per_window)
        ]
        axes[1].plot(centers, ratio, marker="s", label=slug)
    axes[0].set_ylabel("premium (%)")
    axes[1].set_ylabel("demand / supply")
    axes[1].set_xlabel("window midpoint (year)")
    axes[0].legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_report(artifact: ModelArtifact, outdir: str) -> list[str]:
    """CSV exports plus every figure the artifact has the sections for."""
    written = export_all(artifact, outdir)
    figures = []
    if artifact.premia is not None and artifact.scores_premium is not None:
        figures.append(("fig_value_vs_complementarity.png", fig_value_vs_complementarity))
    if artifact.premia is not None:
        figures.append(("fig_community_premium.png", fig_community_premium))
    if artifact.domain_matrix is not None:
        figures.append(("fig_domain_matrix.png", fig_domain_matrix))
    if artifact.premia is not None and artifact.automation:
        figures.append(("fig_premium_vs_automation.png", fig_premium_vs_automation))
    if artifact.trends is not None:
        figures.append(("fig_trends.png", fig_trends))
    for name, fn in figures:
        path = os.path.join(outdir, name)
        fn(artifact, path)
        written.append(path)
        logger.info("wrote %s", path)
    return written
