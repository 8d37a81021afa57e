"""Page retrieval: live HTTP fetching with polite limits, and an offline
corpus mode that replays on-disk HTML with a fixed timestamp.
"""

from __future__ import annotations

import json
import re
import threading
import urllib.robotparser
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import date, datetime, timezone
from email.utils import parsedate_to_datetime
from pathlib import Path

import httpx

from .errors import (
    FetchTimeout,
    MissingFile,
    NetworkError,
    RobotsDisallowed,
    SchemaViolation,
    TooLarge,
    TooManyRedirects,
)
from .merger import CanonicalUrl, canonicalize

_META_CHARSET_RE = re.compile(
    rb"""<meta[^>]+charset\s*=\s*["']?([a-zA-Z0-9_\-]+)""", re.IGNORECASE
)


def to_utc(dt: datetime) -> datetime:
    """Coerce to an aware UTC datetime (naive values are assumed UTC)."""
    if dt.tzinfo is None:
        return dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)


def parse_date(text: str | None) -> datetime | None:
    """Parse an ISO-8601 or RFC-1123 date into an aware UTC datetime."""
    if not text:
        return None
    text = text.strip()
    try:
        return to_utc(datetime.fromisoformat(text.replace("Z", "+00:00")))
    except ValueError:
        pass
    try:
        return to_utc(datetime.combine(date.fromisoformat(text), datetime.min.time()))
    except ValueError:
        pass
    try:
        return to_utc(parsedate_to_datetime(text))
    except (TypeError, ValueError):
        return None


@dataclass(frozen=True)
class FetchPolicy:
    timeout: float = 10.0
    max_bytes: int = 2 * 1024 * 1024
    max_redirects: int = 5
    per_host_parallelism: int = 2
    user_agent: str = "serpfuse/0.1 (+https://example.invalid/serpfuse)"
    obey_robots: bool = True

    def __post_init__(self):
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.max_redirects < 0:
            raise ValueError("max_redirects must be >= 0")
        if self.per_host_parallelism < 1:
            raise ValueError("per_host_parallelism must be >= 1")


@dataclass(frozen=True)
class PageDocument:
    """One retrieved page, immutable once produced."""

    canonical_url: CanonicalUrl
    status: int
    content_type: str
    last_modified: datetime | None
    expires: datetime | None
    body: str
    fetched_at: datetime


def _decode_body(data: bytes, header_content_type: str) -> str:
    """Decode per declared charset: header first, then meta tag, then UTF-8."""
    charset = None
    if "charset=" in header_content_type.lower():
        charset = header_content_type.lower().split("charset=", 1)[1].split(";")[0].strip()
    if not charset:
        sniffed = _META_CHARSET_RE.search(data[:4096])
        if sniffed:
            charset = sniffed.group(1).decode("ascii", "ignore")
    for candidate in (charset, "utf-8"):
        if not candidate:
            continue
        try:
            return data.decode(candidate)
        except (LookupError, UnicodeDecodeError):
            continue
    return data.decode("utf-8", errors="replace")


class _RobotsCache:
    def __init__(self, user_agent: str, timeout: float):
        self.user_agent = user_agent
        self.timeout = timeout
        self._parsers: dict[str, urllib.robotparser.RobotFileParser] = {}
        self._lock = threading.Lock()

    def allowed(self, url: str) -> bool:
        origin = canonicalize(url).origin
        with self._lock:
            parser = self._parsers.get(origin)
        if parser is None:
            parser = urllib.robotparser.RobotFileParser()
            try:
                resp = httpx.get(f"{origin}/robots.txt", timeout=self.timeout)
                if resp.status_code == 200:
                    parser.parse(resp.text.splitlines())
                else:
                    parser.allow_all = True
            except httpx.HTTPError:
                parser.allow_all = True
            with self._lock:
                self._parsers[origin] = parser
        return parser.can_fetch(self.user_agent, url)


def fetch(
    url: str,
    policy: FetchPolicy = FetchPolicy(),
    *,
    robots: _RobotsCache | None = None,
    now: datetime | None = None,
) -> PageDocument:
    """Fetch one absolute http(s) URL under the policy's limits.

    The returned document carries the final post-redirect canonical URL
    and any Last-Modified / Expires headers. Raises FetchTimeout,
    TooLarge, TooManyRedirects, RobotsDisallowed, or NetworkError.
    """
    canonicalize(url)  # validate early; raises InvalidUrl
    if policy.obey_robots:
        robots = robots or _RobotsCache(policy.user_agent, policy.timeout)
        if not robots.allowed(url):
            raise RobotsDisallowed(url)

    try:
        with httpx.Client(
            follow_redirects=True,
            max_redirects=policy.max_redirects,
            timeout=policy.timeout,
            headers={"User-Agent": policy.user_agent},
        ) as client:
            with client.stream("GET", url) as resp:
                chunks: list[bytes] = []
                total = 0
                for chunk in resp.iter_bytes():
                    total += len(chunk)
                    if total > policy.max_bytes:
                        raise TooLarge(f"{url}: body exceeds {policy.max_bytes} bytes")
                    chunks.append(chunk)
                data = b"".join(chunks)
                headers = resp.headers
                status = resp.status_code
                final_url = str(resp.url)
    except httpx.TimeoutException as exc:
        raise FetchTimeout(f"{url}: {exc}") from exc
    except httpx.TooManyRedirects as exc:
        raise TooManyRedirects(f"{url}: {exc}") from exc
    except httpx.HTTPError as exc:
        raise NetworkError(f"{url}: {exc}") from exc

    content_type = headers.get("content-type", "")
    return PageDocument(
        canonical_url=canonicalize(final_url),
        status=status,
        content_type=content_type,
        last_modified=parse_date(headers.get("last-modified")),
        expires=parse_date(headers.get("expires")),
        body=_decode_body(data, content_type),
        fetched_at=now or datetime.now(timezone.utc),
    )


def fetch_many(
    urls: list[str], policy: FetchPolicy = FetchPolicy()
) -> dict[str, PageDocument | Exception]:
    """Fetch several URLs concurrently, bounded per host.

    At most ``policy.per_host_parallelism`` requests are in flight to any
    one host. Returns a map url -> PageDocument or the exception that
    fetch raised for it (degraded pages should not sink the whole run).
    """
    semaphores: dict[str, threading.Semaphore] = defaultdict(
        lambda: threading.Semaphore(policy.per_host_parallelism)
    )
    lock = threading.Lock()
    robots = _RobotsCache(policy.user_agent, policy.timeout) if policy.obey_robots else None

    def worker(url: str):
        host = canonicalize(url).host
        with lock:
            sem = semaphores[host]
        with sem:
            return fetch(url, policy, robots=robots)

    results: dict[str, PageDocument | Exception] = {}
    with ThreadPoolExecutor(max_workers=max(4, policy.per_host_parallelism * 2)) as pool:
        futures = {url: pool.submit(worker, url) for url in urls}
        for url, future in futures.items():
            try:
                results[url] = future.result()
            except Exception as exc:  # noqa: BLE001 - collected per URL
                results[url] = exc
    return results


def fetch_corpus(manifest_path: str | Path) -> dict[CanonicalUrl, PageDocument]:
    """Load a fixed page corpus described by a JSON manifest.

    Manifest schema: {"fixed_timestamp": RFC3339 string, "pages": [{"url",
    "file", optional "last_modified" / "expires" / "content_type"}]}. Every
    document gets status 200 and fetched_at = the manifest timestamp, so
    repeated loads are byte-identical.
    """
    manifest_path = Path(manifest_path)
    try:
        with open(manifest_path, encoding="utf-8") as fh:
            manifest = json.load(fh)
    except FileNotFoundError as exc:
        raise MissingFile(str(manifest_path)) from exc
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaViolation(f"{manifest_path}: {exc}") from exc

    if "fixed_timestamp" not in manifest or "pages" not in manifest:
        raise SchemaViolation(f"{manifest_path}: needs fixed_timestamp and pages")
    fetched_at = parse_date(manifest["fixed_timestamp"])
    if fetched_at is None:
        raise SchemaViolation(f"{manifest_path}: bad fixed_timestamp")

    corpus: dict[CanonicalUrl, PageDocument] = {}
    base_dir = manifest_path.parent
    for entry in manifest["pages"]:
        if "url" not in entry or "file" not in entry:
            raise SchemaViolation(f"{manifest_path}: page entry needs url and file: {entry}")
        page_path = base_dir / entry["file"]
        if not page_path.is_file():
            raise MissingFile(str(page_path))
        body = page_path.read_text(encoding="utf-8")
        canonical = canonicalize(entry["url"])
        corpus[canonical] = PageDocument(
            canonical_url=canonical,
            status=200,
            content_type=entry.get("content_type", "text/html; charset=utf-8"),
            last_modified=parse_date(entry.get("last_modified")),
            expires=parse_date(entry.get("expires")),
            body=body,
            fetched_at=fetched_at,
        )
    return corpus
