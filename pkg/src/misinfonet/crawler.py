"""Domain crawling: fetch pages, extract anchor hyperlinks, build snapshots.

Level-1 crawling scrapes the top page of a domain; level-2 additionally
follows every level-1 link and scrapes those pages. Sessions are stateless
(fresh connection state per fetch, no cookie carry-over) and a 404 at the
domain root excludes the domain from analysis.
"""

from __future__ import annotations

import hashlib
import json
import threading
import time
import urllib.robotparser
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from html.parser import HTMLParser
from pathlib import Path
from typing import Callable
from urllib.parse import urljoin, urlsplit

import requests

__all__ = [
    "CrawlConfig",
    "FetchResult",
    "ScrapeSnapshot",
    "extract_hyperlinks",
    "fetch_page",
    "crawl_level1",
    "crawl_level2",
    "run_crawl",
    "SnapshotStore",
    "fixture_rewriter",
]

DETERMINISTIC_TIMESTAMP = "1970-01-01T00:00:00Z"
MAX_REDIRECTS = 5

UrlRewriter = Callable[[str], str]


@dataclass
class CrawlConfig:
    max_level: int = 1
    per_fetch_timeout: float = 10.0
    max_pages_per_domain_level2: int = 200
    max_concurrent_fetches: int = 8
    per_host_delay_ms: float = 100.0
    user_agent: str = "misinfonet-crawler/0.1"
    respect_robots: bool = True
    # Rewrites logical URLs to a local fixture server; also switches
    # timestamps to a fixed value so runs are byte-stable.
    url_rewriter: UrlRewriter | None = None

    def __post_init__(self):
        if self.max_level not in (1, 2):
            raise ValueError(f"max_level must be 1 or 2, got {self.max_level}")
        for name in (
            "per_fetch_timeout",
            "max_pages_per_domain_level2",
            "max_concurrent_fetches",
            "per_host_delay_ms",
        ):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")


@dataclass
class FetchResult:
    url: str  # final URL after redirects
    status: int | str  # HTTP status, or transport-error tag string
    body_hash: str = ""
    extracted_links: list[str] = field(default_factory=list)
    fetched_at: str = ""

    @property
    def ok(self) -> bool:
        return isinstance(self.status, int) and 200 <= self.status < 300


@dataclass
class ScrapeSnapshot:
    domain: str
    level: int
    fetches: list[FetchResult] = field(default_factory=list)
    excluded: bool = False
    reason: str = ""
    run_id: str = ""

    def all_links(self) -> list[str]:
        links: list[str] = []
        for fetch in self.fetches:
            links.extend(fetch.extracted_links)
        return links


class _AnchorParser(HTMLParser):
    """Tolerant anchor-href collector; real pages are malformed."""

    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.hrefs: list[str] = []

    def handle_starttag(self, tag, attrs):
        if tag == "a":
            for key, value in attrs:
                if key == "href" and value is not None:
                    self.hrefs.append(value)
                    break


def extract_hyperlinks(html: bytes | str, base_url: str) -> list[str]:
    """All anchor hrefs resolved to absolute URLs against ``base_url``.

    Document order is preserved; non-http(s) schemes (mailto:, javascript:,
    tel:) and fragment-only references are dropped. Never raises on broken
    markup.
    """
    if isinstance(html, bytes):
        html = html.decode("utf-8", errors="replace")
    parser = _AnchorParser()
    try:
        parser.feed(html)
        parser.close()
    except Exception:
        pass  # keep whatever was collected before the parser choked
    links: list[str] = []
    for href in parser.hrefs:
        href = href.strip()
        if not href or href.startswith("#"):
            continue
        try:
            absolute = urljoin(base_url, href)
            scheme = urlsplit(absolute).scheme
        except ValueError:
            continue
        if scheme in ("http", "https"):
            links.append(absolute)
    return links


def _timestamp(config: CrawlConfig) -> str:
    if config.url_rewriter is not None:
        return DETERMINISTIC_TIMESTAMP
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())


def fetch_page(url: str, config: CrawlConfig) -> FetchResult:
    """Stateless fetch of one page: fresh session, no cookie carry-over,
    redirects followed up to a fixed depth, links extracted on 2xx only.

    Transport failures (timeout, DNS, TLS) come back as a FetchResult with
    a tag in ``status``, never as an exception.
    """
    fetch_url = config.url_rewriter(url) if config.url_rewriter else url
    fetched_at = _timestamp(config)
    try:
        with requests.Session() as session:
            session.max_redirects = MAX_REDIRECTS
            response = session.get(
                fetch_url,
                timeout=config.per_fetch_timeout,
                headers={"User-Agent": config.user_agent},
                allow_redirects=True,
            )
    except requests.exceptions.SSLError:
        return FetchResult(url=url, status="tls-error", fetched_at=fetched_at)
    except requests.exceptions.TooManyRedirects:
        return FetchResult(url=url, status="redirect-loop", fetched_at=fetched_at)
    except requests.exceptions.Timeout:
        return FetchResult(url=url, status="timeout", fetched_at=fetched_at)
    except requests.exceptions.RequestException:
        return FetchResult(url=url, status="transport-error", fetched_at=fetched_at)

    # Report the logical final URL: when fetching through a rewriter the
    # requested URL stands in for the rewritten one.
    final_url = url if config.url_rewriter else response.url
    result = FetchResult(
        url=final_url,
        status=response.status_code,
        body_hash=hashlib.sha256(response.content).hexdigest(),
        fetched_at=fetched_at,
    )
    if result.ok:
        result.extracted_links = extract_hyperlinks(response.content, final_url)
    return result


def _fetch_root(domain: str, config: CrawlConfig) -> FetchResult:
    result = fetch_page(f"https://{domain}/", config)
    if result.status == "tls-error":
        result = fetch_page(f"http://{domain}/", config)
    return result


def crawl_level1(domain: str, config: CrawlConfig, run_id: str = "") -> ScrapeSnapshot:
    """Scrape the domain's top page only."""
    root = _fetch_root(domain, config)
    snapshot = ScrapeSnapshot(domain=domain, level=1, fetches=[root], run_id=run_id)
    if root.status == 404:
        snapshot.excluded, snapshot.reason = True, "root-404"
    elif not root.ok and not isinstance(root.status, int):
        snapshot.excluded, snapshot.reason = True, "unreachable"
    return snapshot


def crawl_level2(domain: str, config: CrawlConfig, run_id: str = "") -> ScrapeSnapshot:
    """Scrape the top page, then every page it links to (deduplicated, in
    document order, capped). Individual page failures never abort the domain."""
    root = _fetch_root(domain, config)
    snapshot = ScrapeSnapshot(domain=domain, level=2, fetches=[root], run_id=run_id)
    if root.status == 404:
        snapshot.excluded, snapshot.reason = True, "root-404"
        return snapshot
    if not root.ok and not isinstance(root.status, int):
        snapshot.excluded, snapshot.reason = True, "unreachable"
        return snapshot
    seen = {root.url}
    to_follow = []
    for link in root.extracted_links:
        if link not in seen:
            seen.add(link)
            to_follow.append(link)
        if len(to_follow) >= config.max_pages_per_domain_level2:
            break
    for link in to_follow:
        snapshot.fetches.append(fetch_page(link, config))
    return snapshot


class _HostThrottle:
    """Serializes fetch starts per logical host with a minimum gap."""

    def __init__(self, delay_ms: float):
        self._delay = delay_ms / 1000.0
        self._lock = threading.Lock()
        self._last: dict[str, float] = {}

    def wait(self, host: str) -> None:
        while True:
            with self._lock:
                now = time.monotonic()
                last = self._last.get(host, 0.0)
                remaining = last + self._delay - now
                if remaining <= 0:
                    self._last[host] = now
                    return
            time.sleep(remaining)


class _RobotsCache:
    def __init__(self, config: CrawlConfig):
        self._config = config
        self._lock = threading.Lock()
        self._parsers: dict[str, urllib.robotparser.RobotFileParser | None] = {}

    def allowed(self, domain: str) -> bool:
        if not self._config.respect_robots:
            return True
        with self._lock:
            parser = self._parsers.get(domain, "miss")
        if parser == "miss":
            parser = self._fetch(domain)
            with self._lock:
                self._parsers[domain] = parser
        if parser is None:
            return True  # no robots.txt -> allowed
        return parser.can_fetch(self._config.user_agent, f"https://{domain}/")

    def _fetch(self, domain: str):
        result = fetch_page(f"https://{domain}/robots.txt", self._config)
        if not result.ok:
            return None
        # body content is not kept on FetchResult; re-fetch text directly
        url = f"https://{domain}/robots.txt"
        fetch_url = self._config.url_rewriter(url) if self._config.url_rewriter else url
        try:
            text = requests.get(
                fetch_url,
                timeout=self._config.per_fetch_timeout,
                headers={"User-Agent": self._config.user_agent},
            ).text
        except requests.exceptions.RequestException:
            return None
        parser = urllib.robotparser.RobotFileParser()
        parser.parse(text.splitlines())
        return parser


def run_crawl(
    domains: list[str],
    config: CrawlConfig,
    store: "SnapshotStore",
    run_id: str,
    level: int | None = None,
) -> dict:
    """Crawl every domain under a bounded worker budget and persist one
    snapshot per domain. Returns summary counts."""
    level = level if level is not None else config.max_level
    throttle = _HostThrottle(config.per_host_delay_ms)
    robots = _RobotsCache(config)

    def crawl_one(domain: str) -> ScrapeSnapshot:
        throttle.wait(domain)
        if not robots.allowed(domain):
            return ScrapeSnapshot(
                domain=domain, level=level, excluded=True,
                reason="robots-disallowed", run_id=run_id,
            )
        if level == 1:
            return crawl_level1(domain, config, run_id)
        return crawl_level2(domain, config, run_id)

    with ThreadPoolExecutor(max_workers=config.max_concurrent_fetches) as pool:
        snapshots = list(pool.map(crawl_one, domains))
    snapshots.sort(key=lambda s: s.domain)
    store.write_run(run_id, snapshots)
    return {
        "run_id": run_id,
        "total": len(snapshots),
        "succeeded": sum(1 for s in snapshots if not s.excluded),
        "excluded": sum(1 for s in snapshots if s.excluded),
    }


class SnapshotStore:
    """Newline-delimited JSON snapshot persistence, one file per run."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    def path_for(self, run_id: str) -> Path:
        return self.directory / f"{run_id}.ndjson"

    def exists(self, run_id: str) -> bool:
        return self.path_for(run_id).exists()

    def write_run(self, run_id: str, snapshots: list[ScrapeSnapshot]) -> Path:
        path = self.path_for(run_id)
        with open(path, "w", encoding="utf-8") as fh:
            for snap in snapshots:
                record = {
                    "run_id": run_id,
                    "domain": snap.domain,
                    "level": snap.level,
                    "excluded": snap.excluded,
                    "reason": snap.reason,
                    "fetches": [
                        {
                            "url": f.url,
                            "status": f.status,
                            "body_hash": f.body_hash,
                            "fetched_at": f.fetched_at,
                            "links": f.extracted_links,
                        }
                        for f in snap.fetches
                    ],
                }
                fh.write(json.dumps(record, ensure_ascii=False) + "\n")
        return path

    def read_run(self, run_id: str) -> list[ScrapeSnapshot]:
        snapshots: list[ScrapeSnapshot] = []
        with open(self.path_for(run_id), encoding="utf-8") as fh:
            for line in fh:
                if not line.strip():
                    continue
                record = json.loads(line)
                snapshots.append(
                    ScrapeSnapshot(
                        domain=record["domain"],
                        level=record["level"],
                        excluded=record["excluded"],
                        reason=record.get("reason", ""),
                        run_id=record["run_id"],
                        fetches=[
                            FetchResult(
                                url=f["url"],
                                status=f["status"],
                                body_hash=f.get("body_hash", ""),
                                fetched_at=f.get("fetched_at", ""),
                                extracted_links=list(f.get("links", [])),
                            )
                            for f in record.get("fetches", [])
                        ],
                    )
                )
        return snapshots


def fixture_rewriter(port: int, host: str = "127.0.0.1") -> UrlRewriter:
    """Map logical URLs onto the local fixture server.

    ``https://aurora-news.test/page`` becomes
    ``http://127.0.0.1:<port>/aurora-news.test/page`` so crawls of the
    bundled corpus never touch the live internet.
    """

    def rewrite(url: str) -> str:
        parts = urlsplit(url)
        path = parts.path or "/"
        query = f"?{parts.query}" if parts.query else ""
        return f"http://{host}:{port}/{parts.netloc}{path}{query}"

    return rewrite
