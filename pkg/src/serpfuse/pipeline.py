"""End-to-end orchestration: query -> backends -> merge -> features -> rank.

The pipeline is the one place that knows how the stages plug together;
every stage stays independently usable. All loaded state (fixtures,
corpus, thesaurus) is immutable after startup, so one context serves
concurrent requests.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone

from . import backends, evaluator, extractor, merger, ranker, retriever
from .backends import EngineMode, FixtureIndex, SearchResultRecord
from .config import AppConfig, AppMode
from .errors import AllBackendsFailed, BackendUnavailable, ThesaurusUnavailable
from .merger import CanonicalUrl
from .query import Query, Thesaurus, expand, normalize

log = logging.getLogger(__name__)


@dataclass
class SearchOutcome:
    query: Query
    ranked: list[ranker.RankedResult]
    per_engine: dict[str, list[SearchResultRecord]]
    failed_engines: list[str]

    @property
    def degraded(self) -> bool:
        return bool(self.failed_engines)


class AppContext:
    """Everything a request handler needs, loaded once."""

    def __init__(self, config: AppConfig):
        self.config = config
        self.thesaurus = (
            Thesaurus.from_file(config.thesaurus_path)
            if config.thesaurus_path and config.thesaurus_path.is_file()
            else Thesaurus.from_entries({})
        )
        self.fixture_indexes: dict[str, FixtureIndex] = {}
        for engine in config.engines:
            if engine.mode is EngineMode.FIXTURE and engine.fixture_dir:
                self.fixture_indexes[engine.engine_id] = FixtureIndex(engine.fixture_dir)
        self.corpus: dict[CanonicalUrl, retriever.PageDocument] = {}
        if config.corpus_manifest is not None:
            self.corpus = retriever.fetch_corpus(config.corpus_manifest)
        self.ratings = evaluator.RatingStore(config.ratings_path)

    @property
    def engine_ids(self) -> list[str]:
        return [e.engine_id for e in self.config.engines]

    def now(self) -> datetime:
        """Freshness reference time: fixed in offline mode for determinism."""
        if self.corpus:
            return next(iter(self.corpus.values())).fetched_at
        return datetime.now(timezone.utc)


def _query_backends(
    ctx: AppContext, q: Query, limit: int
) -> tuple[dict[str, list[SearchResultRecord]], list[str]]:
    per_engine: dict[str, list[SearchResultRecord]] = {}
    failed: list[str] = []
    with ThreadPoolExecutor(max_workers=max(1, len(ctx.config.engines))) as pool:
        futures = {
            engine.engine_id: pool.submit(
                backends.search,
                engine,
                q.key,
                limit,
                ctx.fixture_indexes.get(engine.engine_id),
            )
            for engine in ctx.config.engines
        }
        for engine_id, future in futures.items():
            try:
                per_engine[engine_id] = future.result()
            except BackendUnavailable as exc:
                log.warning("backend %s failed: %s", engine_id, exc)
                failed.append(engine_id)
    if not per_engine:
        raise AllBackendsFailed(f"all engines failed for {q.key!r}")
    return per_engine, failed


def _probe_sitemap_offline(ctx: AppContext, origin: str) -> bool:
    try:
        probe = merger.canonicalize(origin + "/sitemap.xml")
    except Exception:  # noqa: BLE001
        return False
    return probe in ctx.corpus


def _probe_sitemap_live(ctx: AppContext, origin: str) -> bool:
    try:
        doc = retriever.fetch(origin + "/sitemap.xml", ctx.config.fetch_policy)
    except Exception:  # noqa: BLE001 - any failure means "no sitemap found"
        return False
    return doc.status == 200


def _page_metas(
    ctx: AppContext, records: list[merger.MergedRecord]
) -> dict[CanonicalUrl, extractor.PageMeta]:
    """Extract PageMeta for every merged record, with the sitemap probe applied."""
    metas: dict[CanonicalUrl, extractor.PageMeta] = {}
    docs: dict[CanonicalUrl, retriever.PageDocument] = {}
    if ctx.config.mode is AppMode.OFFLINE:
        for record in records:
            doc = ctx.corpus.get(record.canonical)
            if doc is not None:
                docs[record.canonical] = doc
    else:
        fetched = retriever.fetch_many(
            [str(r.canonical) for r in records], ctx.config.fetch_policy
        )
        for record in records:
            doc = fetched.get(str(record.canonical))
            if isinstance(doc, retriever.PageDocument):
                docs[record.canonical] = doc

    sitemap_cache: dict[str, bool] = {}
    probe = (
        _probe_sitemap_offline if ctx.config.mode is AppMode.OFFLINE else _probe_sitemap_live
    )
    for record in records:
        doc = docs.get(record.canonical)
        meta = extractor.extract_meta(doc) if doc is not None else extractor.PageMeta()
        origin = record.canonical.origin
        if origin not in sitemap_cache:
            sitemap_cache[origin] = probe(ctx, origin)
        metas[record.canonical] = meta.with_sitemap(sitemap_cache[origin])
    return metas


def run_search(
    ctx: AppContext,
    raw_query: str,
    k: int | None = None,
    weight_overrides: dict[str, float] | None = None,
) -> SearchOutcome:
    """Run the full pipeline for one query.

    Raises EmptyQuery for blank input, InvalidWeights for bad overrides,
    and AllBackendsFailed when no engine answered; individual engine
    failures only mark the outcome degraded.
    """
    k = k or evaluator.DEFAULT_K
    weights = ctx.config.weights.merged_with(weight_overrides)

    q = normalize(raw_query)
    try:
        q = expand(q, ctx.thesaurus)
    except ThesaurusUnavailable as exc:
        log.warning("continuing without synonym expansion: %s", exc)

    per_engine, failed = _query_backends(ctx, q, limit=max(k, 10))
    records = merger.merge(list(per_engine.values()))
    metas = _page_metas(ctx, records)

    universe = {r.canonical for r in records}
    graph = ranker.build_link_graph(metas, universe)
    pr_norms: dict[str, float] = {}
    if universe:
        pr_result = ranker.pagerank(graph)
        peak = max(pr_result.values.values())
        pr_norms = {str(n): (v / peak if peak > 0 else 0.0) for n, v in pr_result.values.items()}
    if ctx.config.use_pagerank_links:
        link_norms = {n: pr_norms.get(str(n), 0.0) for n in graph.nodes}
    else:
        link_norms = ranker.inlink_norms(graph)

    now = ctx.now()
    features = []
    for record in records:
        srr = _representative_srr(record, per_engine)
        features.append(
            extractor.compute_features(
                q,
                srr,
                metas[record.canonical],
                link_norms.get(record.canonical, 0.0),
                now,
            )
        )
    ranked = ranker.rank(records, features, weights, pageranks=pr_norms)[:k]
    return SearchOutcome(query=q, ranked=ranked, per_engine=per_engine, failed_engines=failed)


def _representative_srr(
    record: merger.MergedRecord, per_engine: dict[str, list[SearchResultRecord]]
) -> SearchResultRecord:
    engine_id, source_rank = min(record.sources, key=lambda s: (s[1], s[0]))
    for srr in per_engine.get(engine_id, []):
        if srr.source_rank == source_rank:
            return srr
    return SearchResultRecord(
        engine_id=engine_id,
        source_rank=source_rank,
        url=str(record.canonical),
        title=record.title,
        snippet=record.snippet,
        domain=record.domain,
    )


def run_compare(
    ctx: AppContext, raw_query: str, k: int | None = None, engines: list[str] | None = None
) -> tuple[dict[str, list[SearchResultRecord]], SearchOutcome]:
    """Per-engine raw lists next to the merged, re-ranked list."""
    if engines:
        unknown = set(engines) - set(ctx.engine_ids)
        if unknown:
            raise ValueError(f"unknown engines: {sorted(unknown)}")
    outcome = run_search(ctx, raw_query, k)
    k = k or evaluator.DEFAULT_K
    raw_lists = {
        engine_id: results[:k]
        for engine_id, results in outcome.per_engine.items()
        if not engines or engine_id in engines
    }
    return raw_lists, outcome


def run_eval(ctx: AppContext, system_id: str = "serpfuse") -> list[evaluator.PrecisionReport]:
    """Precision reports for each raw engine and for the merged ranking.

    Judgment queries run through the normal offline pipeline; each raw
    engine is scored on its own result order, the merged system on the
    final ranked order. Relevant sets hold canonical URL strings.
    """
    if ctx.config.judgments_path is None:
        raise FileNotFoundError("no judgments file configured")
    k, judgments = evaluator.load_judgments(ctx.config.judgments_path)

    per_system: dict[str, dict[str, float]] = {eid: {} for eid in ctx.engine_ids}
    per_system[system_id] = {}
    for judgment in judgments:
        outcome = run_search(ctx, judgment.query, k)
        for engine_id in ctx.engine_ids:
            urls = [
                str(merger.canonicalize(srr.url))
                for srr in outcome.per_engine.get(engine_id, [])
            ]
            per_system[engine_id][judgment.query] = evaluator.precision_at_k(
                urls, judgment.relevant, k
            )
        merged_urls = [str(r.record.canonical) for r in outcome.ranked]
        per_system[system_id][judgment.query] = evaluator.precision_at_k(
            merged_urls, judgment.relevant, k
        )

    return [
        evaluator.mean_precision(per_query, k=k, system_id=sid)
        for sid, per_query in per_system.items()
    ]
