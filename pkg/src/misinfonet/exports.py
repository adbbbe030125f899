"""Deterministic file exporters: GEXF 1.2, Graphviz DOT, delimited stats.

Everything here writes byte-stable output for identical inputs, so runs
can be compared with plain file diffs.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from xml.sax.saxutils import escape, quoteattr

from .communities import CommunityProfile, Partition
from .graph import DomainGraph, LinkStatsRow
from .sharing import CoShareGraph

__all__ = [
    "write_gexf",
    "write_dot",
    "write_coshare_gexf",
    "write_link_stats_csv",
    "write_partition_csv",
    "write_profiles_json",
    "write_json",
]

_GEXF_OPEN = (
    '<?xml version="1.0" encoding="UTF-8"?>\n'
    '<gexf xmlns="http://www.gexf.net/1.2draft" version="1.2">\n'
)


def write_gexf(graph: DomainGraph, path: str | Path) -> None:
    """Directed domain graph as GEXF 1.2 with label/category node attributes."""
    nodes = sorted(graph.nodes)
    node_id = {domain: i for i, domain in enumerate(nodes)}
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_GEXF_OPEN)
        fh.write('  <graph defaultedgetype="directed" mode="static">\n')
        fh.write('    <attributes class="node">\n')
        fh.write('      <attribute id="0" title="label" type="string"/>\n')
        fh.write('      <attribute id="1" title="category" type="string"/>\n')
        fh.write("    </attributes>\n")
        fh.write("    <nodes>\n")
        for domain in nodes:
            label, category = graph.nodes[domain]
            fh.write(f'      <node id="{node_id[domain]}" label={quoteattr(domain)}>\n')
            fh.write("        <attvalues>\n")
            fh.write(f'          <attvalue for="0" value={quoteattr(label)}/>\n')
            fh.write(f'          <attvalue for="1" value={quoteattr(category)}/>\n')
            fh.write("        </attvalues>\n")
            fh.write("      </node>\n")
        fh.write("    </nodes>\n")
        fh.write("    <edges>\n")
        for i, (src, dst) in enumerate(sorted(graph.edges)):
            fh.write(
                f'      <edge id="{i}" source="{node_id[src]}" target="{node_id[dst]}"/>\n'
            )
        fh.write("    </edges>\n")
        fh.write("  </graph>\n")
        fh.write("</gexf>\n")


def write_coshare_gexf(graph: CoShareGraph, path: str | Path) -> None:
    """Undirected co-share graph as GEXF with a jaccard edge attribute.

    Isolated nodes are dropped from the export (they stay in the in-memory
    graph)."""
    connected = sorted({d for edge in graph.edges for d in edge})
    node_id = {domain: i for i, domain in enumerate(connected)}
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_GEXF_OPEN)
        fh.write('  <graph defaultedgetype="undirected" mode="static">\n')
        fh.write('    <attributes class="node">\n')
        fh.write('      <attribute id="0" title="label" type="string"/>\n')
        fh.write("    </attributes>\n")
        fh.write('    <attributes class="edge">\n')
        fh.write('      <attribute id="0" title="jaccard" type="double"/>\n')
        fh.write("    </attributes>\n")
        fh.write("    <nodes>\n")
        for domain in connected:
            fh.write(f'      <node id="{node_id[domain]}" label={quoteattr(domain)}>\n')
            fh.write("        <attvalues>\n")
            fh.write(
                f'          <attvalue for="0" value={quoteattr(graph.nodes[domain])}/>\n'
            )
            fh.write("        </attvalues>\n")
            fh.write("      </node>\n")
        fh.write("    </nodes>\n")
        fh.write("    <edges>\n")
        for i, (a, b) in enumerate(sorted(graph.edges)):
            fh.write(
                f'      <edge id="{i}" source="{node_id[a]}" target="{node_id[b]}">\n'
            )
            fh.write("        <attvalues>\n")
            fh.write(
                f'          <attvalue for="0" value="{graph.edges[(a, b)]!r}"/>\n'
            )
            fh.write("        </attvalues>\n")
            fh.write("      </edge>\n")
        fh.write("    </edges>\n")
        fh.write("  </graph>\n")
        fh.write("</gexf>\n")


def write_dot(graph: DomainGraph, path: str | Path) -> None:
    """Directed domain graph in Graphviz DOT, label carried as a node attr."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("digraph domains {\n")
        for domain in sorted(graph.nodes):
            label, category = graph.nodes[domain]
            fh.write(
                f'  "{domain}" [label="{escape(domain)}" '
                f'class="{label}" category="{category}"];\n'
            )
        for src, dst in sorted(graph.edges):
            fh.write(f'  "{src}" -> "{dst}";\n')
        fh.write("}\n")


def write_link_stats_csv(rows: dict[str, LinkStatsRow], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [
                "row",
                "to_misinfo_n",
                "to_misinfo_pct",
                "to_none_n",
                "to_none_pct",
                "to_info_n",
                "to_info_pct",
                "total",
            ]
        )
        for key, row in rows.items():
            writer.writerow(
                [
                    key,
                    row.to_misinfo,
                    f"{row.percent(row.to_misinfo):.2f}",
                    row.to_none,
                    f"{row.percent(row.to_none):.2f}",
                    row.to_info,
                    f"{row.percent(row.to_info):.2f}",
                    row.total,
                ]
            )


def write_partition_csv(partition: Partition, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["domain", "community_id"])
        for domain in sorted(partition.assignment):
            writer.writerow([domain, partition.assignment[domain]])


def write_profiles_json(profiles: list[CommunityProfile], path: str | Path) -> None:
    payload = [
        {
            "community_id": p.community_id,
            "size": p.size,
            "misinfo_fraction": p.misinfo_fraction,
            "member_domains": p.member_domains,
            "average_degree": p.average_degree,
            "density": p.density,
        }
        for p in profiles
    ]
    write_json(payload, path)


def write_json(payload, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
