"""Command-line entry point wiring the full pipeline.

Subcommands: curate, crawl, analyze, social, serve-fixtures. A simple
key=value config file supplies paths and parameters; command-line flags
win over config values. All randomness fans out from one --seed flag.

Exit codes: 0 success, 1 runtime failure, 2 usage/config/input error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import classifier, communities, crawler, curation, exports, graph as graphmod
from . import fixture_server, report, sharing

__all__ = ["main"]

FIXTURE_DIR = Path(__file__).parent / "fixtures" / "corpus"


class UsageError(Exception):
    """Bad config or input files; exits with status 2."""


def load_config(path: str | None) -> dict[str, str]:
    config: dict[str, str] = {}
    if not path:
        return config
    p = Path(path)
    if not p.exists():
        raise UsageError(f"config file not found: {p}")
    for line_number, line in enumerate(p.read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{p}:{line_number}: expected key = value, got {line!r}")
        key, _, value = line.partition("=")
        config[key.strip()] = value.strip()
    return config


def _require_path(config: dict, key: str, flag_value: str | None) -> Path:
    raw = flag_value or config.get(key)
    if not raw:
        raise UsageError(f"missing required path: set --{key.replace('_', '-')} or config key {key}")
    path = Path(raw)
    if not path.exists():
        raise UsageError(f"{key} path does not exist: {path}")
    return path


def _out_dir(args, config) -> Path:
    out = Path(args.output_dir or config.get("output_dir", "out"))
    out.mkdir(parents=True, exist_ok=True)
    return out


def _quotas(config: dict) -> dict[str, int]:
    quotas = {}
    for category in curation.CATEGORIES:
        key = f"quota_{category}"
        if key in config:
            quotas[category] = int(config[key])
    return quotas or dict(curation.PAPER_INFO_QUOTAS)


def cmd_curate(args, config) -> int:
    out = _out_dir(args, config)
    report_obj = curation.CurationReport()
    sources_path = _require_path(config, "sources", args.sources)
    info_path = _require_path(config, "info_list", args.info_list)
    try:
        entries = curation.read_source_entries(sources_path, report_obj)
        ranks = (
            curation.read_alexa_ranks(_require_path(config, "alexa", args.alexa))
            if (args.alexa or config.get("alexa"))
            else {}
        )
        denylist = (
            curation.read_denylist(_require_path(config, "denylist", args.denylist))
            if (args.denylist or config.get("denylist"))
            else set()
        )
    except (ValueError, OSError) as exc:
        raise UsageError(f"bad input file: {exc}") from exc
    records = curation.collate(entries, report_obj)
    curation.apply_scores(records, ranks)
    limit = int(args.limit or config.get("misinfo_limit") or len(records))
    misinfo = curation.rank_and_select(records, denylist, limit, report_obj)
    info = curation.load_informational(info_path, _quotas(config), report_obj)
    master = curation.merge_master_list(misinfo, info, report_obj)
    master_path = out / "master_list.csv"
    curation.write_master_csv(master, master_path)
    exports.write_json(
        {
            "total_raw": report_obj.total_raw,
            "total_distinct": report_obj.total_distinct,
            "unparsable": report_obj.unparsable,
            "headline_rows": report_obj.headline_rows,
            "removed_manual": sorted(report_obj.removed_manual),
            "label_collisions": sorted(report_obj.label_collisions),
            "category_shortfalls": report_obj.category_shortfalls,
            "final_misinfo": report_obj.final_misinfo,
            "final_info": report_obj.final_info,
            "per_category_counts": report_obj.per_category_counts,
            "warnings": report_obj.warnings,
        },
        out / "curation_report.json",
    )
    print(f"wrote {master_path} ({report_obj.final_misinfo} misinfo, "
          f"{report_obj.final_info} info)")
    for warning in report_obj.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    return 0


def _fixture_dir(args, config) -> Path:
    return Path(args.fixture_dir or config.get("fixture_dir") or FIXTURE_DIR)


def cmd_crawl(args, config) -> int:
    out = _out_dir(args, config)
    master_path = _require_path(config, "master_list", args.master_list)
    records = curation.read_master_csv(master_path)
    domains = [r.domain for r in records if r.label in ("misinfo", "info")]
    store = crawler.SnapshotStore(config.get("snapshot_dir", out / "snapshots"))
    run_id = args.run_id or config.get("run_id") or f"run-level{args.level}"
    if store.exists(run_id) and not args.force:
        print(
            f"error: run {run_id!r} already exists at {store.path_for(run_id)}; "
            "pass --force to overwrite",
            file=sys.stderr,
        )
        return 1
    cfg = crawler.CrawlConfig(
        max_level=args.level,
        per_fetch_timeout=float(config.get("per_fetch_timeout", 10)),
        max_pages_per_domain_level2=int(config.get("level2_page_cap", 200)),
        max_concurrent_fetches=int(config.get("max_concurrent_fetches", 8)),
        per_host_delay_ms=float(config.get("per_host_delay_ms", 100)),
        respect_robots=config.get("respect_robots", "true").lower() != "false",
    )
    if args.fixtures:
        with fixture_server.running_server(_fixture_dir(args, config)) as port:
            cfg.url_rewriter = crawler.fixture_rewriter(port)
            cfg.per_host_delay_ms = 1.0
            summary = crawler.run_crawl(domains, cfg, store, run_id, args.level)
    else:
        summary = crawler.run_crawl(domains, cfg, store, run_id, args.level)
    print(
        f"run {summary['run_id']}: {summary['succeeded']} snapshots, "
        f"{summary['excluded']} excluded"
    )
    return 0


def cmd_analyze(args, config) -> int:
    out = _out_dir(args, config)
    master_path = _require_path(config, "master_list", args.master_list)
    labels = curation.label_map(curation.read_master_csv(master_path))
    store = crawler.SnapshotStore(config.get("snapshot_dir", out / "snapshots"))
    run_id = args.run_id or config.get("run_id")
    if not run_id:
        raise UsageError("missing run id: pass --run-id or config key run_id")
    if not store.exists(run_id):
        raise UsageError(f"no snapshot run {run_id!r} in {store.directory}")
    snapshots = store.read_run(run_id)
    g = graphmod.build_graph(snapshots, labels, run_id)

    stats_rows = graphmod.link_stats(g, "by-label")
    stats_rows.update(graphmod.link_stats(g, "by-info-category"))
    exports.write_link_stats_csv(stats_rows, out / "link_stats.csv")
    exports.write_gexf(g, out / "hyperlink_graph.gexf")
    exports.write_dot(g, out / "hyperlink_graph.dot")

    partition = communities.louvain(
        g, resolution=float(config.get("resolution", 1.0)), seed=args.seed
    )
    profiles = communities.profile_communities(g, partition)
    exports.write_partition_csv(partition, out / "communities.csv")
    exports.write_profiles_json(profiles, out / "communities.json")

    cliques = graphmod.find_mutual_cliques(
        g, min_size=int(config.get("clique_min_size", 3))
    )
    exports.write_json(cliques, out / "cliques.json")

    discoveries = graphmod.discovered_domains(
        g, min_misinfo_sources=int(config.get("discovery_k", 2))
    )
    exports.write_json(
        [{"domain": d, "misinfo_in_degree": k} for d, k in discoveries],
        out / "discoveries.json",
    )

    report.render_domain_graph(g, out / "hyperlink_graph.png")
    report.render_community_sizes(profiles, out / "community_sizes.png")
    print(
        f"analyzed {run_id}: {len(g.nodes)} nodes, {len(g.edges)} edges, "
        f"{len(profiles)} communities (Q={partition.modularity:.4f}), "
        f"{len(cliques)} cliques, {len(discoveries)} discoveries"
    )
    return 0


def _metrics_table(metrics: classifier.EvalMetrics) -> str:
    lines = [f"{'class':<10}{'precision':>10}{'recall':>10}{'f1':>10}{'support':>10}"]
    for cls in ("misinfo", "info"):
        lines.append(
            f"{cls:<10}{metrics.precision[cls]:>10.2f}{metrics.recall[cls]:>10.2f}"
            f"{metrics.f1[cls]:>10.2f}{metrics.support[cls]:>10}"
        )
    return "\n".join(lines)


def cmd_social(args, config) -> int:
    out = _out_dir(args, config)
    records_path = _require_path(config, "share_records", args.records)
    labels_path = _require_path(config, "social_labels", args.labels)
    labels = curation.label_map(curation.read_master_csv(labels_path))

    matrix = sharing.ingest(sharing.read_share_records(records_path))
    matrix = sharing.filter_users(matrix, int(config.get("min_domains", 2)))
    matrix = sharing.filter_domains(matrix, int(config.get("min_sharers", 5)))

    coshare = sharing.build_coshare_graph(
        matrix, labels, float(config.get("jaccard_threshold", 0.01))
    )
    exports.write_coshare_gexf(coshare, out / "coshare_graph.gexf")
    exports.write_json(sharing.connectivity_stats(coshare), out / "connectivity.json")
    report.render_coshare_graph(coshare, out / "coshare_graph.png")

    dataset = classifier.dataset_from_matrix(matrix, labels)
    if args.predict:
        model = classifier.load_model(out / "model.json")
        try:
            row = dataset.domain_names.index(args.predict)
        except ValueError:
            raise UsageError(f"domain {args.predict!r} not in the filtered dataset")
        prob = classifier.predict(model, dataset.features[row])[0]
        print(f"{args.predict}: {prob:.4f}")
        return 0

    train_set, test_set = classifier.split(
        dataset,
        test_fraction=float(config.get("test_fraction", 0.25)),
        seed=args.seed,
    )
    grid = _hyperparam_grid(config)
    if len(grid) > 1:
        hp = classifier.tune(train_set, grid, seed=args.seed + 1)
    else:
        hp = grid[0]
    train_set = classifier.oversample(train_set, seed=args.seed + 2)
    model = classifier.train(train_set, hp, seed=args.seed + 3)
    metrics = classifier.evaluate(model, test_set)
    classifier.save_model(model, out / "model.json")
    exports.write_json(metrics.as_dict(), out / "metrics.json")
    print(_metrics_table(metrics))
    return 0


def _hyperparam_grid(config: dict) -> list[classifier.Hyperparams]:
    l2_values = [
        float(v) for v in config.get("l2_grid", "0.001").split(",") if v.strip()
    ]
    return [
        classifier.Hyperparams(
            l2_strength=l2,
            learning_rate=float(config.get("learning_rate", 1.0)),
            max_epochs=int(config.get("max_epochs", 500)),
            convergence_tol=float(config.get("convergence_tol", 1e-6)),
        )
        for l2 in l2_values
    ]


def cmd_serve_fixtures(args, config) -> int:
    fixture_server.serve_forever(_fixture_dir(args, config), args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="misinfonet",
        description="Misinformation-domain discovery: curation, crawling, "
        "hyperlink graphs, communities, co-sharing, and classification.",
    )
    parser.add_argument("--config", help="key = value config file")
    parser.add_argument("--output-dir", help="directory for all outputs")
    parser.add_argument("--seed", type=int, default=0, help="master random seed")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curate", help="collate sources into the master domain list")
    p.add_argument("--sources", help="source,domain[,headline] CSV")
    p.add_argument("--alexa", help="rank,domain CSV")
    p.add_argument("--info-list", dest="info_list", help="domain,category CSV")
    p.add_argument("--denylist", help="manual removals, one domain per line")
    p.add_argument("--limit", type=int, help="number of misinfo domains to keep")
    p.set_defaults(func=cmd_curate)

    p = sub.add_parser("crawl", help="crawl master-list domains into a snapshot run")
    p.add_argument("--level", type=int, choices=(1, 2), default=1)
    p.add_argument("--master-list", dest="master_list", help="master list CSV")
    p.add_argument("--run-id", dest="run_id")
    p.add_argument("--force", action="store_true", help="overwrite an existing run")
    p.add_argument(
        "--fixtures", action="store_true",
        help="crawl the bundled offline corpus through a local server",
    )
    p.add_argument("--fixture-dir", dest="fixture_dir")
    p.set_defaults(func=cmd_crawl)

    p = sub.add_parser("analyze", help="graph, stats, communities, cliques, discoveries")
    p.add_argument("--master-list", dest="master_list")
    p.add_argument("--run-id", dest="run_id")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("social", help="co-share graph and misinfo classifier")
    p.add_argument("--records", help="share records (NDJSON or CSV)")
    p.add_argument("--labels", help="labels CSV in master-list format")
    p.add_argument("--predict", help="print the stored model's probability for a domain")
    p.set_defaults(func=cmd_social)

    p = sub.add_parser("serve-fixtures", help="serve a fixture corpus over HTTP")
    p.add_argument("--fixture-dir", dest="fixture_dir")
    p.add_argument("--port", type=int, default=8765)
    p.set_defaults(func=cmd_serve_fixtures)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config)
        return args.func(args, config)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"runtime error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
