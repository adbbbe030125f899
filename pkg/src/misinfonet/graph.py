"""Directed domain hyperlink graph and the analyses built on it.

Nodes are registrable domains annotated with a label (misinfo/info/none)
and category; edges are unweighted and directed (page-level links collapse
to at most one edge per ordered domain pair, no self-loops).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .crawler import ScrapeSnapshot
from .domains import DomainError, normalize_domain

__all__ = [
    "DomainGraph",
    "GraphStats",
    "LinkStatsRow",
    "build_graph",
    "link_stats",
    "find_mutual_cliques",
    "subgraph_stats",
    "discovered_domains",
    "CATEGORY_ORDER",
]

# Row order for the link-stats table: labels first, then info categories.
CATEGORY_ORDER = (
    "entertainment",
    "education",
    "newsandmedia",
    "business",
    "sports",
    "religion",
    "health",
)


@dataclass
class DomainGraph:
    nodes: dict[str, tuple[str, str]] = field(default_factory=dict)  # domain -> (label, category)
    edges: set[tuple[str, str]] = field(default_factory=set)
    level: int = 1
    run_id: str = ""
    skipped_links: int = 0  # unparsable link URLs dropped during build

    def add_node(self, domain: str, label: str = "none", category: str = "uncategorized") -> None:
        self.nodes.setdefault(domain, (label, category))

    def add_edge(self, src: str, dst: str) -> None:
        if src != dst:
            self.add_node(src)
            self.add_node(dst)
            self.edges.add((src, dst))

    def label_of(self, domain: str) -> str:
        return self.nodes.get(domain, ("none", "uncategorized"))[0]

    def out_edges(self, domain: str) -> list[tuple[str, str]]:
        return [e for e in self.edges if e[0] == domain]

    def degree(self, domain: str) -> int:
        return sum(1 for s, d in self.edges if s == domain or d == domain)


@dataclass
class GraphStats:
    average_degree: float
    density: float


@dataclass
class LinkStatsRow:
    to_misinfo: int = 0
    to_none: int = 0
    to_info: int = 0

    @property
    def total(self) -> int:
        return self.to_misinfo + self.to_none + self.to_info

    def percent(self, count: int) -> float:
        return round(100.0 * count / self.total, 2) if self.total else 0.0

    def as_dict(self) -> dict:
        return {
            "to_misinfo": {"count": self.to_misinfo, "percent": self.percent(self.to_misinfo)},
            "to_none": {"count": self.to_none, "percent": self.percent(self.to_none)},
            "to_info": {"count": self.to_info, "percent": self.percent(self.to_info)},
            "total": self.total,
        }


def build_graph(
    snapshots: list[ScrapeSnapshot],
    labels: dict[str, tuple[str, str]],
    run_id: str = "",
) -> DomainGraph:
    """Collapse snapshot link lists to the unweighted directed domain graph.

    Excluded snapshots are skipped entirely; every included labeled domain
    appears as a node even when isolated. Construction is deterministic and
    independent of snapshot order.
    """
    level = max((s.level for s in snapshots), default=1)
    graph = DomainGraph(level=level, run_id=run_id)
    for snap in sorted(snapshots, key=lambda s: s.domain):
        if snap.excluded:
            continue
        label, category = labels.get(snap.domain, ("none", "uncategorized"))
        graph.add_node(snap.domain, label, category)
        for link in snap.all_links():
            try:
                dst = normalize_domain(link)
            except DomainError:
                graph.skipped_links += 1
                continue
            if dst not in graph.nodes:
                dst_label, dst_category = labels.get(dst, ("none", "uncategorized"))
                graph.add_node(dst, dst_label, dst_category)
            graph.add_edge(snap.domain, dst)
    return graph


def link_stats(graph: DomainGraph, grouping: str = "by-label") -> dict[str, LinkStatsRow]:
    """Cross-tabulate outgoing edges by destination label.

    grouping "by-label" keys rows misinfo/info; "by-info-category" keys
    rows by the category of info source nodes. Row order is deterministic:
    misinfo, info, then categories in their fixed order.
    """
    if grouping not in ("by-label", "by-info-category"):
        raise ValueError(f"unknown grouping {grouping!r}")
    rows: dict[str, LinkStatsRow] = {}
    if grouping == "by-label":
        for key in ("misinfo", "info"):
            rows[key] = LinkStatsRow()
    else:
        for key in CATEGORY_ORDER:
            rows[key] = LinkStatsRow()
    for src, dst in sorted(graph.edges):
        src_label, src_category = graph.nodes[src]
        if grouping == "by-label":
            key = src_label
            if key not in rows:
                continue
        else:
            if src_label != "info" or src_category not in rows:
                continue
            key = src_category
        row = rows[key]
        dst_label = graph.label_of(dst)
        if dst_label == "misinfo":
            row.to_misinfo += 1
        elif dst_label == "info":
            row.to_info += 1
        else:
            row.to_none += 1
    return rows


def mutual_graph(graph: DomainGraph) -> dict[str, set[str]]:
    """Undirected adjacency keeping {A,B} iff both A->B and B->A exist."""
    adjacency: dict[str, set[str]] = {node: set() for node in graph.nodes}
    for src, dst in graph.edges:
        if (dst, src) in graph.edges:
            adjacency[src].add(dst)
            adjacency[dst].add(src)
    return adjacency


def _bron_kerbosch(
    clique: set[str],
    candidates: set[str],
    excluded: set[str],
    adjacency: dict[str, set[str]],
    out: list[set[str]],
) -> None:
    if not candidates and not excluded:
        out.append(set(clique))
        return
    # pivot on the vertex with most candidate neighbors to prune branches
    pivot = max(candidates | excluded, key=lambda v: len(adjacency[v] & candidates))
    for v in sorted(candidates - adjacency[pivot]):
        _bron_kerbosch(
            clique | {v},
            candidates & adjacency[v],
            excluded & adjacency[v],
            adjacency,
            out,
        )
        candidates = candidates - {v}
        excluded = excluded | {v}


def find_mutual_cliques(graph: DomainGraph, min_size: int = 3) -> list[list[str]]:
    """Maximal cliques of the mutual (reciprocal-link) graph, size >= min_size.

    Sorted by size descending, then lexicographically; members sorted.
    """
    if min_size < 3:
        raise ValueError(f"min_size must be >= 3, got {min_size}")
    adjacency = mutual_graph(graph)
    nodes = {v for v, neigh in adjacency.items() if neigh}
    cliques: list[set[str]] = []
    _bron_kerbosch(set(), nodes, set(), adjacency, cliques)
    keep = [sorted(c) for c in cliques if len(c) >= min_size]
    keep.sort(key=lambda c: (-len(c), c))
    return keep


def subgraph_stats(graph: DomainGraph, subset: set[str] | None = None) -> GraphStats:
    """Average total degree and directed density of an induced subgraph."""
    nodes = set(graph.nodes) if subset is None else set(subset)
    missing = nodes - set(graph.nodes)
    if missing:
        raise ValueError(f"subset contains unknown nodes: {sorted(missing)[:5]}")
    n = len(nodes)
    if n <= 1:
        return GraphStats(average_degree=0.0, density=0.0)
    edges = [(s, d) for s, d in graph.edges if s in nodes and d in nodes]
    return GraphStats(
        average_degree=2.0 * len(edges) / n,
        density=len(edges) / (n * (n - 1)),
    )


def discovered_domains(
    graph: DomainGraph, min_misinfo_sources: int = 2
) -> list[tuple[str, int]]:
    """Unlabeled domains receiving links from >= k distinct misinfo domains,
    ranked by misinfo in-degree (desc, then name). The surfacing mechanism
    for misinformation domains found only through crawling."""
    indegree: dict[str, int] = {}
    for src, dst in graph.edges:
        if graph.label_of(src) == "misinfo" and graph.label_of(dst) == "none":
            indegree[dst] = indegree.get(dst, 0) + 1
    found = [
        (domain, count)
        for domain, count in indegree.items()
        if count >= min_misinfo_sources
    ]
    found.sort(key=lambda item: (-item[1], item[0]))
    return found
