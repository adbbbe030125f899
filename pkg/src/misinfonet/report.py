"""Figure rendering for the analysis reports.

Renders the hyperlink and co-share graphs to PNG next to the delimited
outputs. Layouts are deterministic (circular, nodes in sorted order) so
figures are byte-stable across reruns.
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .graph import DomainGraph
from .sharing import CoShareGraph

__all__ = ["render_domain_graph", "render_coshare_graph", "render_community_sizes"]

LABEL_COLORS = {"misinfo": "#c0392b", "info": "#2471a3", "none": "#95a5a6"}


def _circular_layout(nodes: list[str]) -> dict[str, tuple[float, float]]:
    n = len(nodes)
    return {
        node: (math.cos(2 * math.pi * i / n), math.sin(2 * math.pi * i / n))
        for i, node in enumerate(nodes)
    }


def _save(fig, path: str | Path) -> None:
    fig.savefig(path, dpi=150, metadata={"Software": "misinfonet"})
    plt.close(fig)


def render_domain_graph(graph: DomainGraph, path: str | Path, title: str = "") -> None:
    nodes = sorted(graph.nodes)
    pos = _circular_layout(nodes)
    fig, ax = plt.subplots(figsize=(8, 8))
    for src, dst in sorted(graph.edges):
        (x0, y0), (x1, y1) = pos[src], pos[dst]
        ax.annotate(
            "",
            xy=(x1, y1),
            xytext=(x0, y0),
            arrowprops=dict(arrowstyle="-|>", color="#7f8c8d", lw=0.6, alpha=0.6),
        )
    for node in nodes:
        x, y = pos[node]
        color = LABEL_COLORS.get(graph.label_of(node), LABEL_COLORS["none"])
        ax.plot(x, y, "o", color=color, markersize=9, zorder=3)
        ax.annotate(node, (x, y), fontsize=6, xytext=(0, 8),
                    textcoords="offset points", ha="center")
    ax.set_title(title or f"domain hyperlink graph (level {graph.level})")
    ax.set_axis_off()
    ax.set_aspect("equal")
    _save(fig, path)


def render_coshare_graph(graph: CoShareGraph, path: str | Path) -> None:
    connected = sorted({d for edge in graph.edges for d in edge})
    if not connected:
        fig, ax = plt.subplots(figsize=(6, 6))
        ax.text(0.5, 0.5, "no co-share edges", ha="center", va="center")
        ax.set_axis_off()
        _save(fig, path)
        return
    pos = _circular_layout(connected)
    fig, ax = plt.subplots(figsize=(8, 8))
    for (a, b), score in sorted(graph.edges.items()):
        (x0, y0), (x1, y1) = pos[a], pos[b]
        ax.plot([x0, x1], [y0, y1], "-", color="#7f8c8d",
                lw=0.5 + 4.0 * score, alpha=0.5)
    for node in connected:
        x, y = pos[node]
        color = LABEL_COLORS.get(graph.nodes[node], LABEL_COLORS["none"])
        ax.plot(x, y, "o", color=color, markersize=9, zorder=3)
        ax.annotate(node, (x, y), fontsize=6, xytext=(0, 8),
                    textcoords="offset points", ha="center")
    ax.set_title(f"co-share graph (jaccard >= {graph.threshold})")
    ax.set_axis_off()
    ax.set_aspect("equal")
    _save(fig, path)


def render_community_sizes(profiles, path: str | Path) -> None:
    """Bar chart of community sizes, bars shaded by misinfo fraction."""
    fig, ax = plt.subplots(figsize=(7, 4))
    if profiles:
        ids = [str(p.community_id) for p in profiles]
        sizes = [p.size for p in profiles]
        colors = [plt.cm.RdBu_r(p.misinfo_fraction) for p in profiles]
        ax.bar(ids, sizes, color=colors, edgecolor="black", linewidth=0.5)
        for i, p in enumerate(profiles):
            ax.annotate(f"{100 * p.misinfo_fraction:.0f}%", (i, p.size),
                        ha="center", va="bottom", fontsize=7)
    ax.set_xlabel("community")
    ax.set_ylabel("size")
    ax.set_title("community sizes (annotated with misinfo share)")
    fig.tight_layout()
    _save(fig, path)
