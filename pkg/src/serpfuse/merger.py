"""URL canonicalization, hashing, and duplicate-free result fusion.

Two result records are the same page exactly when their canonical URL
serializations are byte-equal. The 64-bit FNV-1a hash of that
serialization is the table key used while merging; equality is always
re-verified on the serialization itself, so genuine hash collisions keep
both pages.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence
from urllib.parse import parse_qsl, urlencode, urlsplit

from .backends import SearchResultRecord
from .errors import InvalidUrl

FNV64_OFFSET_BASIS = 0xCBF29CE484222325
FNV64_PRIME = 0x100000001B3
_U64 = 0xFFFFFFFFFFFFFFFF

_DEFAULT_PORTS = {"http": 80, "https": 443}


@dataclass(frozen=True, order=True)
class CanonicalUrl:
    """Normalized URL whose string form is its identity."""

    scheme: str
    host: str
    port: int | None
    path: str
    query: tuple[tuple[str, str], ...]
    # fragment is always dropped during canonicalization

    def __str__(self) -> str:
        netloc = self.host if self.port is None else f"{self.host}:{self.port}"
        out = f"{self.scheme}://{netloc}{self.path}"
        if self.query:
            out += "?" + urlencode(list(self.query))
        return out

    @property
    def origin(self) -> str:
        netloc = self.host if self.port is None else f"{self.host}:{self.port}"
        return f"{self.scheme}://{netloc}"


def _resolve_dot_segments(path: str) -> str:
    # RFC 3986 remove_dot_segments over an absolute path
    output: list[str] = []
    for segment in path.split("/"):
        if segment == ".":
            continue
        if segment == "..":
            if output:
                output.pop()
        else:
            output.append(segment)
    resolved = "/".join(output)
    if not resolved.startswith("/"):
        resolved = "/" + resolved
    return resolved


def canonicalize(url: str) -> CanonicalUrl:
    """Canonicalize an absolute http(s) URL.

    Rules: lowercase scheme and host, drop default ports, resolve dot
    segments, sort query parameters by key then value, drop the fragment,
    and strip a trailing slash everywhere except the root path.

    Raises :class:`InvalidUrl` for anything that is not absolute http(s).
    """
    try:
        parts = urlsplit(url.strip())
    except ValueError as exc:
        raise InvalidUrl(f"unparseable URL: {url!r}") from exc
    scheme = parts.scheme.lower()
    if scheme not in ("http", "https"):
        raise InvalidUrl(f"not an absolute http(s) URL: {url!r}")
    host = (parts.hostname or "").lower()
    if not host or "." not in host and host != "localhost":
        raise InvalidUrl(f"missing or bogus host in {url!r}")
    try:
        port = parts.port
    except ValueError as exc:
        raise InvalidUrl(f"bad port in {url!r}") from exc
    if port == _DEFAULT_PORTS[scheme]:
        port = None

    path = _resolve_dot_segments(parts.path or "/")
    if len(path) > 1 and path.endswith("/"):
        path = path.rstrip("/") or "/"

    params = tuple(sorted(parse_qsl(parts.query, keep_blank_values=True)))
    return CanonicalUrl(scheme=scheme, host=host, port=port, path=path, query=params)


def fnv1a64(data: bytes) -> int:
    """64-bit FNV-1a over raw bytes."""
    h = FNV64_OFFSET_BASIS
    for byte in data:
        h ^= byte
        h = (h * FNV64_PRIME) & _U64
    return h


def url_hash(canonical: CanonicalUrl | str) -> int:
    """FNV-1a 64 of the canonical URL's UTF-8 serialization."""
    return fnv1a64(str(canonical).encode("utf-8"))


@dataclass
class MergedRecord:
    """One distinct page with every (engine, rank) that produced it.

    ``title``, ``snippet`` and ``domain`` come from the best-ranked source
    (ties broken by lexicographically smallest engine id).
    """

    canonical: CanonicalUrl
    url_hash: int
    sources: list[tuple[str, int]] = field(default_factory=list)
    title: str = ""
    snippet: str = ""
    domain: str = ""

    @property
    def best_rank(self) -> int:
        return min(rank for _, rank in self.sources)


def merge(
    lists: Sequence[Iterable[SearchResultRecord]],
    hash_fn: Callable[[CanonicalUrl | str], int] = url_hash,
) -> list[MergedRecord]:
    """Fuse per-engine result lists into one duplicate-free list.

    Input lists are interleaved round-robin (first hit of each engine,
    then second of each, ...) so the output order is engine-fair before
    scoring; the ranker owns the final order. The injectable ``hash_fn``
    exists so collision behavior can be tested; the hash is only a table
    key and never decides equality.
    """
    by_hash: dict[int, list[MergedRecord]] = {}
    order: list[MergedRecord] = []

    iterators = [iter(lst) for lst in lists]
    exhausted = [False] * len(iterators)
    while not all(exhausted):
        for i, it in enumerate(iterators):
            if exhausted[i]:
                continue
            srr = next(it, None)
            if srr is None:
                exhausted[i] = True
                continue
            canonical = canonicalize(srr.url)
            key = hash_fn(canonical)
            bucket = by_hash.setdefault(key, [])
            record = next((r for r in bucket if str(r.canonical) == str(canonical)), None)
            if record is None:
                record = MergedRecord(canonical=canonical, url_hash=url_hash(canonical))
                bucket.append(record)
                order.append(record)
            record.sources.append((srr.engine_id, srr.source_rank))
            best = min(record.sources, key=lambda s: (s[1], s[0]))
            if best == (srr.engine_id, srr.source_rank):
                record.title = srr.title
                record.snippet = srr.snippet
                record.domain = srr.domain
    return order
