"""Command-line entry points: each pipeline stage is runnable on its own.

Subcommands: search, compare, rank, extract, pagerank, eval, serve.
Exit codes: 0 success, 1 usage error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import pipeline, service
from .backends import SearchResultRecord, domain_of
from .config import AppConfig, AppMode, load_config
from .errors import SerpfuseError
from .extractor import compute_features, extract_meta
from .merger import canonicalize, merge
from .pipeline import AppContext
from .query import normalize
from .ranker import LinkGraph, PageRankParams, WeightVector, pagerank, rank
from .retriever import PageDocument, parse_date

DEFAULT_CONFIG = "fixtures/config.json"


class _Parser(argparse.ArgumentParser):
    # spec'd exit codes: usage errors are 1, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="serpfuse", description="Meta-search with SEO-feature re-ranking")
    parser.add_argument("--config", default=DEFAULT_CONFIG, help="path to config JSON")
    parser.add_argument("--offline", action="store_true", help="force offline (fixture) mode")
    parser.add_argument("--weights", help="path to a nine-key weights JSON file")
    parser.add_argument("--k", type=int, default=10, help="result cutoff")
    sub = parser.add_subparsers(dest="command", required=True)

    p_search = sub.add_parser("search", help="run the full pipeline for a query")
    p_search.add_argument("query")

    p_compare = sub.add_parser("compare", help="per-engine raw lists beside the merged list")
    p_compare.add_argument("query")

    p_rank = sub.add_parser("rank", help="rank result records read from stdin")
    p_rank.add_argument("--q", required=True, help="query the records answer")

    p_extract = sub.add_parser("extract", help="feature-extract one HTML file")
    p_extract.add_argument("file")
    p_extract.add_argument("--q", required=True, help="query to match against")
    p_extract.add_argument("--url", default="http://local.example/page")
    p_extract.add_argument("--now", help="fixed reference time (RFC3339)")

    p_pagerank = sub.add_parser("pagerank", help="link scores for an edge-list file")
    p_pagerank.add_argument("file")
    p_pagerank.add_argument("--damping", type=float, default=0.85)
    p_pagerank.add_argument("--epsilon", type=float, default=1e-8)
    p_pagerank.add_argument("--max-iters", type=int, default=100)

    sub.add_parser("eval", help="precision report over the bundled judgments")

    p_serve = sub.add_parser("serve", help="start the HTTP service")
    p_serve.add_argument("--host")
    p_serve.add_argument("--port", type=int)

    return parser


def _load_app_config(args) -> AppConfig:
    config = load_config(args.config)
    if args.offline:
        config.mode = AppMode.OFFLINE
    if args.weights:
        config.weights = WeightVector.from_file(args.weights)
    return config


def _emit(payload) -> None:
    json.dump(payload, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _cmd_search(args) -> int:
    ctx = AppContext(_load_app_config(args))
    outcome = pipeline.run_search(ctx, args.query, args.k)
    _emit(service._search_payload(outcome, args.k))
    return 0


def _cmd_compare(args) -> int:
    ctx = AppContext(_load_app_config(args))
    raw_lists, outcome = pipeline.run_compare(ctx, args.query, args.k)
    _emit(
        {
            "query": outcome.query.key,
            "k": args.k,
            "degraded": outcome.degraded,
            "engines": {
                eid: [service._srr_payload(s) for s in srrs]
                for eid, srrs in sorted(raw_lists.items())
            },
            "merged_system": service.MERGED_SYSTEM_ID,
            "merged": [service._result_payload(r) for r in outcome.ranked],
        }
    )
    return 0


def _cmd_rank(args) -> int:
    """Rank SRR records from stdin: a JSON array of
    {engine, rank, url, title, snippet} objects."""
    raw = json.load(sys.stdin)
    per_engine: dict[str, list[SearchResultRecord]] = {}
    for item in raw:
        url = str(item["url"])
        srr = SearchResultRecord(
            engine_id=str(item["engine"]),
            source_rank=int(item["rank"]),
            url=url,
            title=str(item.get("title", "")),
            snippet=str(item.get("snippet", "")),
            domain=domain_of(url),
        )
        per_engine.setdefault(srr.engine_id, []).append(srr)

    q = normalize(args.q)
    records = merge([sorted(v, key=lambda s: s.source_rank) for v in per_engine.values()])
    weights = WeightVector.from_file(args.weights) if args.weights else WeightVector.uniform()
    now = datetime.now(timezone.utc)
    from .extractor import PageMeta

    features = [
        compute_features(
            q,
            pipeline._representative_srr(record, per_engine),
            PageMeta(),
            0.0,
            now,
        )
        for record in records
    ]
    ranked = rank(records, features, weights)[: args.k]
    _emit([service._result_payload(r) for r in ranked])
    return 0


def _cmd_extract(args) -> int:
    body = Path(args.file).read_text(encoding="utf-8")
    canonical = canonicalize(args.url)
    now = parse_date(args.now) if args.now else datetime.now(timezone.utc)
    if now is None:
        raise SerpfuseError(f"unparseable --now value: {args.now!r}")
    doc = PageDocument(
        canonical_url=canonical,
        status=200,
        content_type="text/html; charset=utf-8",
        last_modified=None,
        expires=None,
        body=body,
        fetched_at=now,
    )
    meta = extract_meta(doc)
    q = normalize(args.q)
    srr = SearchResultRecord(
        engine_id="local", source_rank=1, url=args.url, title="", snippet="",
        domain=canonical.host,
    )
    features = compute_features(q, srr, meta, 0.0, now)
    _emit(
        {
            "url": str(canonical),
            "meta": {
                "title": meta.title,
                "description": meta.meta_description,
                "keywords": list(meta.meta_keywords),
                "charset": meta.charset,
                "images_total": meta.images_total,
                "images_with_alt": meta.images_with_alt,
                "breadcrumb": meta.breadcrumb_present,
                "outlinks": [list(pair) for pair in meta.outlinks],
            },
            "features": features.as_dict(),
        }
    )
    return 0


def _cmd_pagerank(args) -> int:
    """Edge-list file: one 'src dst' pair per line; a lone token is an
    isolated node; '#' starts a comment."""
    nodes: set[str] = set()
    edges: set[tuple[str, str]] = set()
    for line in Path(args.file).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) == 1:
            nodes.add(parts[0])
        elif len(parts) == 2:
            edges.add((parts[0], parts[1]))
        else:
            raise SerpfuseError(f"bad edge-list line: {line!r}")
    graph = LinkGraph(nodes=nodes, edges=edges)
    params = PageRankParams(d=args.damping, epsilon=args.epsilon, max_iters=args.max_iters)
    result = pagerank(graph, params)
    _emit(
        {
            "values": {node: result.values[node] for node in sorted(result.values)},
            "converged": result.converged,
            "iterations": result.iterations,
        }
    )
    return 0


def _cmd_eval(args) -> int:
    from .evaluator import comparison_table

    ctx = AppContext(_load_app_config(args))
    reports = pipeline.run_eval(ctx, system_id=service.MERGED_SYSTEM_ID)
    _emit(
        {
            "k": reports[0].k if reports else 0,
            "reports": [
                {"system_id": r.system_id, "mean": r.mean, "per_query": r.per_query}
                for r in reports
            ],
            "table": comparison_table(reports),
        }
    )
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    config = _load_app_config(args)
    host, _, port = config.listen_address.partition(":")
    app = service.create_app(config)
    uvicorn.run(app, host=args.host or host or "127.0.0.1", port=args.port or int(port or 8020))
    return 0


_COMMANDS = {
    "search": _cmd_search,
    "compare": _cmd_compare,
    "rank": _cmd_rank,
    "extract": _cmd_extract,
    "pagerank": _cmd_pagerank,
    "eval": _cmd_eval,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (SerpfuseError, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"serpfuse: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
