"""Registrable-domain normalization backed by a bundled public-suffix snapshot.

All graph and matrix code in this package operates on registrable domains
(public-suffix-plus-one-label, e.g. ``infowars.com``). This module is the
single place where raw URLs and hostnames collapse to that granularity.
"""

from __future__ import annotations

import importlib.resources
import re
from functools import lru_cache
from urllib.parse import urlsplit

__all__ = ["DomainError", "normalize_domain", "registrable_domain"]


class DomainError(ValueError):
    """Raised when a string has no parsable host."""

    def __init__(self, raw: str, reason: str):
        super().__init__(f"cannot normalize {raw!r}: {reason}")
        self.raw = raw
        self.reason = reason


@lru_cache(maxsize=1)
def _suffix_rules() -> tuple[frozenset[str], frozenset[str], frozenset[str]]:
    """Load (exact, wildcard, exception) rule sets from the bundled snapshot."""
    text = (
        importlib.resources.files("misinfonet.data")
        .joinpath("public_suffix_snapshot.dat")
        .read_text(encoding="utf-8")
    )
    exact, wildcard, exception = set(), set(), set()
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("//"):
            continue
        if line.startswith("!"):
            exception.add(line[1:])
        elif line.startswith("*."):
            wildcard.add(line[2:])
        else:
            exact.add(line)
    return frozenset(exact), frozenset(wildcard), frozenset(exception)


def _public_suffix_length(labels: list[str]) -> int:
    """Number of labels in the public suffix of ``labels`` (host, split on dots).

    Implements the standard public-suffix matching algorithm: exception
    rules beat all others, otherwise the longest matching rule wins, and a
    host with no matching rule falls back to the implicit ``*`` rule (its
    last label is the suffix).
    """
    exact, wildcard, exception = _suffix_rules()
    best = 1  # implicit "*" rule
    for i in range(len(labels)):
        candidate = ".".join(labels[i:])
        if candidate in exception:
            return len(labels) - i - 1
        if candidate in exact:
            best = max(best, len(labels) - i)
        # "*.foo" matches any candidate whose tail after the first label is foo
        rest = ".".join(labels[i + 1 :])
        if rest and rest in wildcard:
            best = max(best, len(labels) - i)
    return best


def _extract_host(raw: str) -> str:
    s = raw.strip()
    if not s:
        raise DomainError(raw, "empty string")
    # urlsplit treats scheme-less input as a path; force authority parsing.
    if "//" not in s.split("?", 1)[0].split("#", 1)[0]:
        s = "//" + s
    try:
        host = urlsplit(s).hostname
    except ValueError as exc:
        raise DomainError(raw, str(exc)) from None
    if not host:
        raise DomainError(raw, "no host component")
    return host


_LABEL_OK = re.compile(r"^[a-z0-9_-]{1,63}$", re.ASCII).match


def registrable_domain(host: str) -> str:
    """Collapse a hostname to its registrable domain."""
    labels = host.lower().rstrip(".").split(".")
    if not labels or any(not _LABEL_OK(label) for label in labels):
        raise DomainError(host, "malformed host labels")
    n_suffix = _public_suffix_length(labels)
    if n_suffix >= len(labels):
        raise DomainError(host, "host is itself a public suffix")
    return ".".join(labels[-(n_suffix + 1) :])


def normalize_domain(raw: str) -> str:
    """Normalize a URL or hostname to its lowercase registrable domain.

    Strips scheme, path, query, port, and sub-labels above the registrable
    boundary. Idempotent: normalizing an already-normalized domain returns
    it unchanged. Raises :class:`DomainError` for input with no parsable
    host.
    """
    return registrable_domain(_extract_host(raw))
