"""Search backend contract and adapters.

Every backend answers a query with a list of SearchResultRecords. The
fixture adapter replays SERP files from disk for deterministic offline
runs; the live adapter wraps a JSON HTTP endpoint and normalizes the
vendor payload into the same envelope.
"""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from urllib.parse import urlsplit

import httpx

from .errors import BackendUnavailable, ConfigError, SchemaViolation

log = logging.getLogger(__name__)

_SERP_RESULT_FIELDS = ("rank", "url", "title", "snippet")


@dataclass(frozen=True)
class SearchResultRecord:
    """One hit from one backend."""

    engine_id: str
    source_rank: int
    url: str
    title: str
    snippet: str
    domain: str


class EngineMode(str, Enum):
    FIXTURE = "fixture"
    LIVE = "live"


@dataclass(frozen=True)
class EngineConfig:
    engine_id: str
    mode: EngineMode
    fixture_dir: str | None = None
    endpoint: str | None = None
    credential_env: str | None = None
    page_size: int = 10

    def __post_init__(self):
        if self.page_size < 1:
            raise ConfigError(f"{self.engine_id}: page_size must be >= 1")
        if self.mode is EngineMode.FIXTURE and not self.fixture_dir:
            raise ConfigError(f"{self.engine_id}: fixture mode requires fixture_dir")
        if self.mode is EngineMode.LIVE and not (self.endpoint and self.credential_env):
            raise ConfigError(f"{self.engine_id}: live mode requires endpoint and credential_env")


def domain_of(url: str) -> str:
    return (urlsplit(url).hostname or "").lower()


def load_serp_fixture(path: str | Path) -> list[SearchResultRecord]:
    """Load one SERP fixture file into SearchResultRecords, in file order.

    Schema: {"engine": str, "query": str, "results": [{rank, url, title,
    snippet}]}. Ranks must be unique and contiguous from 1; the domain is
    derived from each url, never stored.
    """
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaViolation(f"{path}: unreadable SERP fixture: {exc}") from exc

    for field in ("engine", "query", "results"):
        if field not in data:
            raise SchemaViolation(f"{path}: missing top-level field {field!r}")
    records = []
    for i, entry in enumerate(data["results"]):
        missing = [f for f in _SERP_RESULT_FIELDS if f not in entry]
        if missing:
            raise SchemaViolation(f"{path}: result {i} missing fields {missing}")
        records.append(
            SearchResultRecord(
                engine_id=str(data["engine"]),
                source_rank=int(entry["rank"]),
                url=str(entry["url"]),
                title=str(entry["title"]),
                snippet=str(entry["snippet"]),
                domain=domain_of(str(entry["url"])),
            )
        )
    ranks = sorted(r.source_rank for r in records)
    if ranks != list(range(1, len(records) + 1)):
        raise SchemaViolation(f"{path}: ranks must be unique and contiguous from 1, got {ranks}")
    return records


class FixtureIndex:
    """Index of SERP fixture files, keyed by (engine, normalized query).

    The directory is scanned once; each *.json file holds one engine's
    response to one query.
    """

    def __init__(self, fixture_dir: str | Path):
        self._index: dict[tuple[str, str], Path] = {}
        fixture_dir = Path(fixture_dir)
        if not fixture_dir.is_dir():
            raise ConfigError(f"SERP fixture directory not found: {fixture_dir}")
        for path in sorted(fixture_dir.glob("*.json")):
            try:
                with open(path, encoding="utf-8") as fh:
                    head = json.load(fh)
                key = (str(head["engine"]), str(head["query"]))
            except (json.JSONDecodeError, KeyError) as exc:
                raise SchemaViolation(f"{path}: bad SERP fixture: {exc}") from exc
            self._index[key] = path

    def lookup(self, engine_id: str, query_key: str) -> list[SearchResultRecord]:
        path = self._index.get((engine_id, query_key))
        if path is None:
            return []
        return load_serp_fixture(path)


def _live_search(cfg: EngineConfig, query_key: str, limit: int) -> list[SearchResultRecord]:
    credential = os.environ.get(cfg.credential_env or "")
    if not credential:
        raise BackendUnavailable(f"{cfg.engine_id}: credential env {cfg.credential_env} not set")
    try:
        resp = httpx.get(
            cfg.endpoint,
            params={"q": query_key, "count": limit},
            headers={"Authorization": f"Bearer {credential}"},
            timeout=10.0,
        )
        resp.raise_for_status()
        payload = resp.json()
    except Exception as exc:  # noqa: BLE001 - every transport failure degrades the merge
        raise BackendUnavailable(f"{cfg.engine_id}: {exc}") from exc

    records = []
    for i, item in enumerate(payload.get("results", []), start=1):
        url = str(item.get("url", ""))
        records.append(
            SearchResultRecord(
                engine_id=cfg.engine_id,
                source_rank=i,
                url=url,
                title=str(item.get("title", "")),
                snippet=str(item.get("snippet", "")),
                domain=domain_of(url),
            )
        )
    return records


def search(
    cfg: EngineConfig,
    query_key: str,
    limit: int,
    fixture_index: FixtureIndex | None = None,
) -> list[SearchResultRecord]:
    """Run one backend for one query, returning at most ``limit`` records.

    ``query_key`` is the normalized query joined by single spaces. Records
    come back ordered by source rank and tagged with ``cfg.engine_id``.
    Raises :class:`BackendUnavailable` on live failures so the caller can
    continue with the remaining backends.
    """
    if limit < 1:
        raise ValueError("limit must be >= 1")
    if cfg.mode is EngineMode.FIXTURE:
        index = fixture_index or FixtureIndex(cfg.fixture_dir)
        records = index.lookup(cfg.engine_id, query_key)
    else:
        records = _live_search(cfg, query_key, limit)
    records = sorted(records, key=lambda r: r.source_rank)[:limit]
    return [
        SearchResultRecord(
            engine_id=cfg.engine_id,
            source_rank=r.source_rank,
            url=r.url,
            title=r.title,
            snippet=r.snippet,
            domain=r.domain,
        )
        for r in records
    ]
