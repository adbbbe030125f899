"""Social link-sharing ingestion, filtering, and the Jaccard co-share graph.

Share records (user, domain) fold into a binary domain-by-user incidence
structure. Users sharing too few domains and domains with too few sharers
are filtered out, then pairs of domains whose sharer sets overlap enough
(Jaccard index above a threshold) become edges of an undirected graph.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

from .domains import DomainError, normalize_domain

__all__ = [
    "ShareRecord",
    "SharingMatrix",
    "CoShareGraph",
    "ingest",
    "read_share_records",
    "filter_users",
    "filter_domains",
    "jaccard",
    "build_coshare_graph",
    "connectivity_stats",
]


@dataclass(frozen=True)
class ShareRecord:
    user_id: str
    domain: str
    shared_at: str | None = None


@dataclass
class SharingMatrix:
    """Binary domain-by-user incidence; share multiplicity collapses to 1."""

    domains: list[str] = field(default_factory=list)  # first-occurrence order
    users: list[str] = field(default_factory=list)
    sharers: dict[str, set[str]] = field(default_factory=dict)  # domain -> user ids
    skipped_records: int = 0

    def user_support(self, user_id: str) -> int:
        return sum(1 for users in self.sharers.values() if user_id in users)

    def domain_support(self, domain: str) -> int:
        return len(self.sharers.get(domain, ()))


@dataclass
class CoShareGraph:
    nodes: dict[str, str] = field(default_factory=dict)  # domain -> label
    edges: dict[tuple[str, str], float] = field(default_factory=dict)  # sorted pair -> jaccard
    threshold: float = 0.01

    def neighbors(self, domain: str) -> list[str]:
        out = []
        for (a, b) in self.edges:
            if a == domain:
                out.append(b)
            elif b == domain:
                out.append(a)
        return out


def ingest(records) -> SharingMatrix:
    """Fold an iterable of ShareRecord into a SharingMatrix.

    Domains are normalized on ingest; malformed records (empty fields,
    unparsable domain) are skipped and counted. Row/column order is fixed
    by first occurrence, the incidence relation itself is order-invariant.
    """
    matrix = SharingMatrix()
    seen_users: set[str] = set()
    for record in records:
        if not record.user_id or not record.domain:
            matrix.skipped_records += 1
            continue
        try:
            domain = normalize_domain(record.domain)
        except DomainError:
            matrix.skipped_records += 1
            continue
        if domain not in matrix.sharers:
            matrix.sharers[domain] = set()
            matrix.domains.append(domain)
        if record.user_id not in seen_users:
            seen_users.add(record.user_id)
            matrix.users.append(record.user_id)
        matrix.sharers[domain].add(record.user_id)
    return matrix


def read_share_records(path: str | Path):
    """Yield ShareRecords from newline-delimited JSON
    (``{"user_id", "domain", "shared_at"?}``) or CSV (``user_id,domain``),
    chosen by file extension."""
    path = Path(path)
    if path.suffix.lower() == ".csv":
        with open(path, newline="", encoding="utf-8") as fh:
            for row in csv.reader(fh):
                if not row or row[0].strip().lower() == "user_id":
                    continue
                yield ShareRecord(row[0].strip(), row[1].strip() if len(row) > 1 else "")
    else:
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError:
                    yield ShareRecord("", "")  # counted as skipped by ingest
                    continue
                yield ShareRecord(
                    str(obj.get("user_id", "")),
                    str(obj.get("domain", "")),
                    obj.get("shared_at"),
                )


def filter_users(matrix: SharingMatrix, min_domains: int = 2) -> SharingMatrix:
    """Drop users who shared fewer than ``min_domains`` distinct domains."""
    counts: dict[str, int] = {}
    for users in matrix.sharers.values():
        for user in users:
            counts[user] = counts.get(user, 0) + 1
    kept = {user for user, n in counts.items() if n >= min_domains}
    out = SharingMatrix(skipped_records=matrix.skipped_records)
    out.domains = list(matrix.domains)
    out.users = [u for u in matrix.users if u in kept]
    out.sharers = {d: users & kept for d, users in matrix.sharers.items()}
    return out


def filter_domains(matrix: SharingMatrix, min_sharers: int = 5) -> SharingMatrix:
    """Drop domains with fewer than ``min_sharers`` distinct sharers."""
    out = SharingMatrix(skipped_records=matrix.skipped_records)
    out.users = list(matrix.users)
    out.domains = [d for d in matrix.domains if len(matrix.sharers[d]) >= min_sharers]
    out.sharers = {d: set(matrix.sharers[d]) for d in out.domains}
    return out


def jaccard(sharers_a: set[str], sharers_b: set[str]) -> float:
    """|A ∩ B| / |A ∪ B|; 0 when both sets are empty."""
    if not sharers_a and not sharers_b:
        return 0.0
    union = len(sharers_a | sharers_b)
    return len(sharers_a & sharers_b) / union


def build_coshare_graph(
    matrix: SharingMatrix,
    labels: dict[str, tuple[str, str]],
    threshold: float = 0.01,
) -> CoShareGraph:
    """Undirected graph with an edge for every domain pair whose sharer-set
    Jaccard index meets the threshold. Isolated nodes are retained.

    Candidate pairs come from an inverted user index, so only pairs with a
    non-empty intersection are ever scored.
    """
    graph = CoShareGraph(threshold=threshold)
    for domain in matrix.domains:
        graph.nodes[domain] = labels.get(domain, ("none", ""))[0]
    by_user: dict[str, list[str]] = {}
    for domain in matrix.domains:
        for user in matrix.sharers[domain]:
            by_user.setdefault(user, []).append(domain)
    candidates: set[tuple[str, str]] = set()
    for shared in by_user.values():
        shared = sorted(shared)
        for i in range(len(shared)):
            for j in range(i + 1, len(shared)):
                candidates.add((shared[i], shared[j]))
    for a, b in sorted(candidates):
        score = jaccard(matrix.sharers[a], matrix.sharers[b])
        if score >= threshold:
            graph.edges[(a, b)] = score
    return graph


def connectivity_stats(graph: CoShareGraph) -> dict[str, float]:
    """Mean per-node edge counts split by same-label vs cross-label
    endpoints, for misinfo and info nodes."""
    within: dict[str, int] = {}
    cross: dict[str, int] = {}
    for (a, b) in graph.edges:
        la, lb = graph.nodes[a], graph.nodes[b]
        if la == lb:
            within[a] = within.get(a, 0) + 1
            within[b] = within.get(b, 0) + 1
        else:
            cross[a] = cross.get(a, 0) + 1
            cross[b] = cross.get(b, 0) + 1
    stats: dict[str, float] = {}
    for label in ("misinfo", "info"):
        members = [d for d, l in graph.nodes.items() if l == label]
        n = len(members)
        stats[f"{label}_within"] = (
            sum(within.get(d, 0) for d in members) / n if n else 0.0
        )
        stats[f"{label}_cross"] = (
            sum(cross.get(d, 0) for d in members) / n if n else 0.0
        )
    return stats
