"""Community detection on the domain graph by modularity optimization.

Modularity is computed on the undirected projection of the directed graph
(reciprocal edges collapse to one undirected edge). The optimizer is the
classic two-phase greedy scheme: local node moves to the neighbor
community with the best modularity gain, then aggregation of communities
into super-nodes, repeated until no gain remains.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .graph import DomainGraph, subgraph_stats

__all__ = [
    "Partition",
    "CommunityProfile",
    "undirected_projection",
    "modularity",
    "louvain",
    "profile_communities",
]


@dataclass
class Partition:
    assignment: dict[str, int]
    modularity: float
    seed: int
    resolution: float

    def communities(self) -> dict[int, list[str]]:
        groups: dict[int, list[str]] = {}
        for node, cid in self.assignment.items():
            groups.setdefault(cid, []).append(node)
        for members in groups.values():
            members.sort()
        return groups


@dataclass
class CommunityProfile:
    community_id: int
    size: int
    misinfo_fraction: float
    member_domains: list[str]
    average_degree: float
    density: float


def undirected_projection(graph: DomainGraph) -> dict[str, dict[str, float]]:
    """Weighted undirected adjacency; anti-parallel directed edges collapse
    to a single unit-weight undirected edge."""
    adjacency: dict[str, dict[str, float]] = {node: {} for node in graph.nodes}
    for src, dst in graph.edges:
        adjacency[src][dst] = 1.0
        adjacency[dst][src] = 1.0
    return adjacency


def _modularity_weighted(
    adjacency: dict[str, dict[str, float]],
    assignment: dict[str, int],
    resolution: float,
    self_loops: dict[str, float] | None = None,
) -> float:
    """Newman modularity for a weighted undirected graph with optional
    self-loop weights (needed for aggregated graphs)."""
    self_loops = self_loops or {}
    two_m = sum(sum(neigh.values()) for neigh in adjacency.values()) + 2.0 * sum(
        self_loops.values()
    )
    if two_m == 0:
        return 0.0
    intra = 0.0
    community_degree: dict[int, float] = {}
    for node, neigh in adjacency.items():
        degree = sum(neigh.values()) + 2.0 * self_loops.get(node, 0.0)
        cid = assignment[node]
        community_degree[cid] = community_degree.get(cid, 0.0) + degree
        intra += 2.0 * self_loops.get(node, 0.0)
        for other, weight in neigh.items():
            if assignment[other] == cid:
                intra += weight
    q = intra / two_m
    q -= resolution * sum(d * d for d in community_degree.values()) / (two_m * two_m)
    return q


def modularity(
    graph: DomainGraph, assignment: dict[str, int], resolution: float = 1.0
) -> float:
    """Partition quality Q on the undirected projection; 0 for an edgeless
    graph and exactly 0 for the all-in-one-community partition."""
    missing = set(graph.nodes) - set(assignment)
    if missing:
        raise ValueError(f"assignment missing nodes: {sorted(missing)[:5]}")
    return _modularity_weighted(undirected_projection(graph), assignment, resolution)


def _one_level(
    adjacency: dict[str, dict[str, float]],
    self_loops: dict[str, float],
    resolution: float,
    rng: random.Random,
) -> dict[str, int] | None:
    """One local-move phase. Returns the assignment, or None if no node
    ever moved (convergence)."""
    nodes = sorted(adjacency)
    two_m = sum(sum(neigh.values()) for neigh in adjacency.values()) + 2.0 * sum(
        self_loops.values()
    )
    if two_m == 0:
        return None
    assignment = {node: i for i, node in enumerate(nodes)}
    degree = {
        node: sum(adjacency[node].values()) + 2.0 * self_loops.get(node, 0.0)
        for node in nodes
    }
    community_degree = {assignment[node]: degree[node] for node in nodes}

    moved_any = False
    improved = True
    while improved:
        improved = False
        order = list(nodes)
        rng.shuffle(order)
        for node in order:
            current = assignment[node]
            k_i = degree[node]
            # weight from node to each neighboring community
            links: dict[int, float] = {}
            for other, weight in adjacency[node].items():
                links[assignment[other]] = links.get(assignment[other], 0.0) + weight
            community_degree[current] -= k_i
            best_cid, best_gain = current, 0.0
            base = links.get(current, 0.0) - resolution * community_degree[current] * k_i / two_m
            for cid in sorted(links):
                if cid == current:
                    continue
                gain = (
                    links[cid]
                    - resolution * community_degree.get(cid, 0.0) * k_i / two_m
                ) - base
                if gain > best_gain + 1e-12 or (
                    abs(gain - best_gain) <= 1e-12 and best_gain > 0 and cid < best_cid
                ):
                    best_cid, best_gain = cid, gain
            community_degree[best_cid] = community_degree.get(best_cid, 0.0) + k_i
            if best_cid != current:
                assignment[node] = best_cid
                improved = True
                moved_any = True
    return assignment if moved_any else None


def _aggregate(
    adjacency: dict[str, dict[str, float]],
    self_loops: dict[str, float],
    assignment: dict[str, int],
) -> tuple[dict[str, dict[str, float]], dict[str, float]]:
    """Collapse communities into super-nodes; intra-community weight becomes
    a self-loop on the super-node."""
    agg_adj: dict[str, dict[str, float]] = {}
    agg_loops: dict[str, float] = {}
    name = {cid: str(cid) for cid in set(assignment.values())}
    for node, neigh in adjacency.items():
        a = name[assignment[node]]
        agg_adj.setdefault(a, {})
        agg_loops[a] = agg_loops.get(a, 0.0) + self_loops.get(node, 0.0)
        for other, weight in neigh.items():
            b = name[assignment[other]]
            if a == b:
                # each intra edge visited twice (once per endpoint)
                agg_loops[a] = agg_loops.get(a, 0.0) + weight / 2.0
            else:
                agg_adj[a][b] = agg_adj[a].get(b, 0.0) + weight
    return agg_adj, agg_loops


def louvain(graph: DomainGraph, resolution: float = 1.0, seed: int = 0) -> Partition:
    """Greedy modularity maximization; deterministic for a fixed seed.

    Node visit order is reshuffled per phase from the seed; ties on gain
    break to the lowest community id.
    """
    if not graph.nodes:
        raise ValueError("graph has no nodes")
    rng = random.Random(seed)
    adjacency = undirected_projection(graph)
    self_loops: dict[str, float] = {}
    # node -> community chain through aggregation levels
    membership = {node: node for node in graph.nodes}

    while True:
        level_assignment = _one_level(adjacency, self_loops, resolution, rng)
        if level_assignment is None:
            break
        # re-point original nodes through this level
        membership = {
            node: str(level_assignment[super_node])
            for node, super_node in membership.items()
        }
        adjacency, self_loops = _aggregate(adjacency, self_loops, level_assignment)
        if len(adjacency) == len(set(level_assignment.values())) and all(
            len(neigh) == 0 for neigh in adjacency.values()
        ):
            break

    # contiguous community ids, ordered by smallest member domain
    groups: dict[str, list[str]] = {}
    for node, community in membership.items():
        groups.setdefault(community, []).append(node)
    ordered = sorted(groups.values(), key=lambda members: min(members))
    assignment = {
        node: cid for cid, members in enumerate(ordered) for node in members
    }
    return Partition(
        assignment=assignment,
        modularity=modularity(graph, assignment, resolution),
        seed=seed,
        resolution=resolution,
    )


def profile_communities(
    graph: DomainGraph, partition: Partition
) -> list[CommunityProfile]:
    """Per-community size, misinfo fraction, and induced-subgraph stats,
    sorted by size descending (community id tie-break)."""
    profiles: list[CommunityProfile] = []
    for cid, members in partition.communities().items():
        stats = subgraph_stats(graph, set(members))
        misinfo = sum(1 for m in members if graph.label_of(m) == "misinfo")
        profiles.append(
            CommunityProfile(
                community_id=cid,
                size=len(members),
                misinfo_fraction=misinfo / len(members),
                member_domains=members,
                average_degree=stats.average_degree,
                density=stats.density,
            )
        )
    profiles.sort(key=lambda p: (-p.size, p.community_id))
    return profiles
