#!/usr/bin/env python3
"""Regenerate the bundled fixture corpus and the planted-signal social
fixture. Deterministic; run from the repository root:

    python tools/make_fixtures.py
"""

from __future__ import annotations

import json
import math
import random
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "src" / "misinfonet" / "fixtures"
CORPUS = FIXTURES / "corpus"
INPUTS = FIXTURES / "inputs"
SOCIAL = FIXTURES / "social"

CLIQUE8 = [
    "aurora-news.test", "borealis-news.test", "cascade-news.test",
    "delta-news.test", "ember-news.test", "fjord-news.test",
    "glacier-news.test", "harbor-news.test",
]
CLIQUE3 = ["liberty-daily.test", "patriot-post.test", "eagle-report.test"]
INFO = "plainfacts.test"
MISINFO = CLIQUE8 + CLIQUE3


def page(domain: str, links: list[str], extras: list[str] = ()) -> str:
    anchors = "\n".join(f'    <li><a href="{href}">{href}</a></li>' for href in links)
    extra = "\n".join(f"    {line}" for line in extras)
    return f"""<!DOCTYPE html>
<html>
<head><title>{domain}</title></head>
<body>
  <h1>{domain}</h1>
  <ul>
{anchors}
  </ul>
{extra}
</body>
</html>
"""


def write_corpus() -> None:
    pages: dict[str, tuple[list[str], list[str]]] = {}
    for domain in CLIQUE8:
        links = [f"https://{other}/" for other in CLIQUE8 if other != domain]
        pages[domain] = (links, [])
    for domain in CLIQUE3:
        links = [f"https://{other}/" for other in CLIQUE3 if other != domain]
        pages[domain] = (links, [])

    # non-mutual extras: discovery targets, one misinfo->misinfo bridge,
    # one misinfo->info link, and non-http noise
    pages["aurora-news.test"][0].append("https://liberty-daily.test/")
    pages["aurora-news.test"][0].append("https://shadow-network.test/")
    pages["aurora-news.test"][1].append('<a href="javascript:void(0)">popup</a>')
    pages["borealis-news.test"][0].append("https://shadow-network.test/")
    pages["cascade-news.test"][0].append("https://shadow-network.test/")
    pages["delta-news.test"][0].append(f"https://{INFO}/")
    pages["eagle-report.test"][1].append('<a href="#top">back to top</a>')
    pages[INFO] = (
        ["https://aurora-news.test/", "https://weather-hub.test/"],
        ['<a href="mailto:desk@plainfacts.test">contact</a>'],
    )

    for domain, (links, extras) in pages.items():
        directory = CORPUS / domain
        directory.mkdir(parents=True, exist_ok=True)
        (directory / "index.html").write_text(page(domain, links, extras))


def write_inputs() -> None:
    INPUTS.mkdir(parents=True, exist_ok=True)
    rows = ["source,domain,headline"]
    # sourceA covers everything, sourceB overlaps the 8-clique (frequency 2),
    # sourceC contributes the denylisted satire domain, one headline row,
    # and one unparsable entry
    for domain in MISINFO:
        rows.append(f"sourceA,{domain},")
    for domain in CLIQUE8:
        rows.append(f"sourceB,https://www.{domain}/article,")
    rows.append("sourceC,satire-hub.test,")
    rows.append("sourceC,liberty-daily.test,Shock headline resolved by hand")
    rows.append("sourceC,???,")
    (INPUTS / "sources.csv").write_text("\n".join(rows) + "\n")

    ranks = ["rank,domain", f"10,{INFO}"]
    for i, domain in enumerate(sorted(MISINFO + ["satire-hub.test"])):
        ranks.append(f"{2000 + 500 * i},{domain}")
    (INPUTS / "alexa.csv").write_text("\n".join(ranks) + "\n")

    (INPUTS / "denylist.txt").write_text("# manual removals\nsatire-hub.test\n")

    info_rows = ["domain,category", f"{INFO},newsandmedia",
                 "weather-hub.test,entertainment"]
    (INPUTS / "info.csv").write_text("\n".join(info_rows) + "\n")

    (INPUTS / "fixture.config").write_text(
        "# fixture pipeline configuration (paths relative to the corpus)\n"
        "misinfo_limit = 11\n"
        "quota_newsandmedia = 1\n"
        "min_domains = 2\n"
        "min_sharers = 5\n"
        "jaccard_threshold = 0.01\n"
    )


def write_social(seed: int = 42) -> None:
    SOCIAL.mkdir(parents=True, exist_ok=True)
    rng = random.Random(seed)
    misinfo = [f"redspread{i:02d}.test" for i in range(30)]
    info = [f"cleanpress{i:02d}.test" for i in range(30)]
    records: list[dict] = []
    for u in range(400):
        user = f"u{u:03d}"
        leaning, other = (misinfo, info) if u < 200 else (info, misinfo)
        shared = rng.sample(leaning, 8)
        if rng.random() < 0.25:  # light cross-category noise
            shared.append(rng.choice(other))
        for domain in shared:
            records.append({"user_id": user, "domain": domain})
            if rng.random() < 0.1:  # duplicate share, collapses to one entry
                records.append({"user_id": user, "domain": domain})
    with open(SOCIAL / "share_records.ndjson", "w") as fh:
        for record in records:
            fh.write(json.dumps(record) + "\n")

    rows = ["domain,label,category,frequency,alexa_rank,score,sources"]
    for i, domain in enumerate(misinfo):
        score = math.exp((1000 + i) / 5000)
        rows.append(f"{domain},misinfo,uncategorized,1,{1000 + i},{score!r},planted")
    for i, domain in enumerate(info):
        rows.append(f"{domain},info,newsandmedia,0,{100 + i},0.0,")
    (SOCIAL / "labels.csv").write_text("\n".join(rows) + "\n")


if __name__ == "__main__":
    write_corpus()
    write_inputs()
    write_social()
    print(f"fixtures written under {FIXTURES}")
