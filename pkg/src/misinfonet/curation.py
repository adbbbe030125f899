"""Collation, scoring, and selection of labeled domain lists.

Turns raw source files (misinformation lists, popularity ranks, a curated
informational list, a manual denylist) into a single deduplicated,
scored, categorized master list.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

from .domains import DomainError, normalize_domain

__all__ = [
    "SourceEntry",
    "DomainRecord",
    "CurationReport",
    "FALLBACK_RANK",
    "CATEGORIES",
    "PAPER_INFO_QUOTAS",
    "collate",
    "score_domain",
    "rank_and_select",
    "load_informational",
    "merge_master_list",
    "read_source_entries",
    "read_alexa_ranks",
    "read_denylist",
    "write_master_csv",
    "read_master_csv",
]

# Rank assigned to domains absent from the top-million popularity list:
# just past the list's end, so unranked domains get the maximal up-weight.
FALLBACK_RANK = 1_000_001

CATEGORIES = (
    "newsandmedia",
    "business",
    "education",
    "entertainment",
    "sports",
    "health",
    "religion",
    "uncategorized",
)

PAPER_INFO_QUOTAS = {
    "newsandmedia": 222,
    "business": 198,
    "education": 198,
    "entertainment": 198,
    "sports": 198,
    "health": 45,
    "religion": 15,
}


@dataclass(frozen=True)
class SourceEntry:
    source_name: str
    raw_domain: str


@dataclass
class DomainRecord:
    domain: str
    label: str = "none"  # misinfo | info | none
    category: str = "uncategorized"
    frequency: int = 0
    alexa_rank: int | None = None
    score: float = 0.0
    sources: set[str] = field(default_factory=set)


@dataclass
class CurationReport:
    total_raw: int = 0
    total_distinct: int = 0
    unparsable: int = 0
    headline_rows: int = 0
    removed_manual: list[str] = field(default_factory=list)
    label_collisions: list[str] = field(default_factory=list)
    category_shortfalls: dict[str, int] = field(default_factory=dict)
    final_misinfo: int = 0
    final_info: int = 0
    per_category_counts: dict[str, int] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)


def score_domain(frequency: int, alexa_rank: int) -> float:
    """Source-frequency score, exponentially up-weighted by popularity rank.

    Top-ranked domains get a nearly unit-value weight; obscure domains get
    a large weight. Strictly increasing in both arguments.
    """
    if frequency < 1:
        raise ValueError(f"frequency must be >= 1, got {frequency}")
    if alexa_rank < 1:
        raise ValueError(f"alexa_rank must be >= 1, got {alexa_rank}")
    return frequency * math.exp(alexa_rank / 5000.0)


def collate(
    entries: list[SourceEntry], report: CurationReport | None = None
) -> list[DomainRecord]:
    """Dedup source entries into one record per distinct registrable domain.

    frequency counts the source entries that collapsed onto the record;
    unparsable entries are counted on the report and skipped.
    """
    report = report if report is not None else CurationReport()
    report.total_raw += len(entries)
    records: dict[str, DomainRecord] = {}
    for entry in entries:
        try:
            domain = normalize_domain(entry.raw_domain)
        except DomainError:
            report.unparsable += 1
            continue
        rec = records.get(domain)
        if rec is None:
            rec = records[domain] = DomainRecord(domain=domain)
        rec.frequency += 1
        rec.sources.add(entry.source_name)
    report.total_distinct = len(records)
    return sorted(records.values(), key=lambda r: r.domain)


def rank_and_select(
    records: list[DomainRecord],
    denylist: set[str],
    limit: int,
    report: CurationReport | None = None,
) -> list[DomainRecord]:
    """Drop denylisted records, sort by score (desc, domain tie-break),
    keep the top ``limit`` and label them misinfo."""
    report = report if report is not None else CurationReport()
    kept = []
    for rec in records:
        if rec.domain in denylist:
            report.removed_manual.append(rec.domain)
        else:
            kept.append(rec)
    kept.sort(key=lambda r: (-r.score, r.domain))
    if limit > len(kept):
        report.warnings.append(
            f"requested {limit} misinfo domains but only {len(kept)} available"
        )
    selected = kept[:limit]
    for rec in selected:
        rec.label = "misinfo"
    report.final_misinfo = len(selected)
    return selected


def load_informational(
    path: str | Path,
    per_category_quota: dict[str, int],
    report: CurationReport | None = None,
) -> list[DomainRecord]:
    """Select per-category quotas from a ``domain,category`` CSV.

    File order within a category is trusted as rank order. Shortfalls
    (quota larger than available) are recorded, not fatal.
    """
    report = report if report is not None else CurationReport()
    taken: dict[str, int] = {c: 0 for c in per_category_quota}
    out: list[DomainRecord] = []
    seen: set[str] = set()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        for row in reader:
            if not row or row[0].strip().lower() == "domain":
                continue
            raw, category = row[0].strip(), row[1].strip().lower()
            quota = per_category_quota.get(category, 0)
            if taken.get(category, 0) >= quota:
                continue
            try:
                domain = normalize_domain(raw)
            except DomainError:
                report.unparsable += 1
                continue
            if domain in seen:
                continue
            seen.add(domain)
            taken[category] = taken.get(category, 0) + 1
            out.append(
                DomainRecord(domain=domain, label="info", category=category)
            )
    for category, quota in per_category_quota.items():
        if taken.get(category, 0) < quota:
            report.category_shortfalls[category] = quota - taken.get(category, 0)
    report.final_info = len(out)
    return out


def merge_master_list(
    misinfo: list[DomainRecord],
    info: list[DomainRecord],
    report: CurationReport | None = None,
) -> list[DomainRecord]:
    """Merge the two labeled lists; collisions resolve to misinfo and are
    surfaced on the report for audit."""
    report = report if report is not None else CurationReport()
    misinfo_domains = {r.domain for r in misinfo}
    merged = list(misinfo)
    for rec in info:
        if rec.domain in misinfo_domains:
            report.label_collisions.append(rec.domain)
            continue
        merged.append(rec)
    report.final_info = len(merged) - len(misinfo)
    counts: dict[str, int] = {}
    for rec in merged:
        counts[rec.category] = counts.get(rec.category, 0) + 1
    report.per_category_counts = counts
    # deterministic master order: score desc, domain asc
    merged.sort(key=lambda r: (-r.score, r.domain))
    return merged


# ---------------------------------------------------------------------------
# File I/O


def read_source_entries(
    path: str | Path, report: CurationReport | None = None
) -> list[SourceEntry]:
    """Read ``source,domain[,headline]`` CSV. Headlines are not resolved to
    domains here; rows carrying one are counted on the report."""
    report = report if report is not None else CurationReport()
    entries: list[SourceEntry] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        for row in reader:
            if not row or row[0].strip().lower() == "source":
                continue
            if len(row) >= 3 and row[2].strip():
                report.headline_rows += 1
            entries.append(SourceEntry(row[0].strip(), row[1].strip()))
    return entries


def read_alexa_ranks(path: str | Path) -> dict[str, int]:
    """Read ``rank,domain`` CSV into a domain -> rank map."""
    ranks: dict[str, int] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.reader(fh):
            if not row or row[0].strip().lower() == "rank":
                continue
            try:
                domain = normalize_domain(row[1].strip())
            except DomainError:
                continue
            ranks.setdefault(domain, int(row[0]))
    return ranks


def read_denylist(path: str | Path) -> set[str]:
    deny: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                deny.add(normalize_domain(line))
    return deny


def apply_scores(records: list[DomainRecord], ranks: dict[str, int]) -> None:
    """Attach popularity ranks (with the fallback for unranked domains) and
    compute scores in place."""
    for rec in records:
        rec.alexa_rank = ranks.get(rec.domain, FALLBACK_RANK)
        rec.score = score_domain(rec.frequency, rec.alexa_rank)


MASTER_HEADER = ["domain", "label", "category", "frequency", "alexa_rank", "score", "sources"]


def write_master_csv(records: list[DomainRecord], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(MASTER_HEADER)
        for rec in records:
            writer.writerow(
                [
                    rec.domain,
                    rec.label,
                    rec.category,
                    rec.frequency,
                    "" if rec.alexa_rank is None else rec.alexa_rank,
                    repr(rec.score),
                    ";".join(sorted(rec.sources)),
                ]
            )


def read_master_csv(path: str | Path) -> list[DomainRecord]:
    records: list[DomainRecord] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            records.append(
                DomainRecord(
                    domain=row["domain"],
                    label=row["label"],
                    category=row["category"],
                    frequency=int(row["frequency"] or 0),
                    alexa_rank=int(row["alexa_rank"]) if row["alexa_rank"] else None,
                    score=float(row["score"] or 0.0),
                    sources=set(filter(None, row["sources"].split(";"))),
                )
            )
    return records


def label_map(records: list[DomainRecord]) -> dict[str, tuple[str, str]]:
    """domain -> (label, category) lookup used by the graph builders."""
    return {r.domain: (r.label, r.category) for r in records}
