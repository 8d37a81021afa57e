"""JSON HTTP service exposing the search pipeline to the browser UI.

Routes: GET /api/search, GET /api/compare, POST /api/feedback,
GET /api/eval, GET /healthz. In offline mode every response is a pure
function of the bundled fixtures, so identical requests yield
byte-identical bodies.
"""

from __future__ import annotations

import json
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles

from . import pipeline
from .backends import SearchResultRecord
from .config import AppConfig, load_config
from .errors import AllBackendsFailed, EmptyQuery, InvalidRating, InvalidWeights
from .evaluator import Rating
from .pipeline import AppContext
from .ranker import RankedResult

MERGED_SYSTEM_ID = "serpfuse"


def _srr_payload(srr: SearchResultRecord) -> dict:
    return {
        "rank": srr.source_rank,
        "url": srr.url,
        "title": srr.title,
        "snippet": srr.snippet,
        "domain": srr.domain,
    }


def _result_payload(result: RankedResult) -> dict:
    record = result.record
    return {
        "position": result.position,
        "url": str(record.canonical),
        "title": record.title,
        "snippet": record.snippet,
        "domain": record.domain,
        "score": result.score,
        "pagerank": result.pagerank,
        "features": result.features.as_dict(),
        "sources": [{"engine": engine, "rank": rank} for engine, rank in record.sources],
    }


def _search_payload(outcome: pipeline.SearchOutcome, k: int) -> dict:
    return {
        "query": outcome.query.key,
        "kind": outcome.query.kind.value,
        "expansions": {term: list(syns) for term, syns in outcome.query.expansions.items()},
        "k": k,
        "degraded": outcome.degraded,
        "failed_engines": sorted(outcome.failed_engines),
        "results": [_result_payload(r) for r in outcome.ranked],
    }


def _parse_weights_param(raw: str | None) -> dict[str, float] | None:
    if raw is None or raw == "":
        return None
    overrides = json.loads(raw)
    if not isinstance(overrides, dict):
        raise ValueError("weights must be a JSON object")
    return {str(key): float(value) for key, value in overrides.items()}


def create_app(config: AppConfig | str | Path) -> FastAPI:
    if not isinstance(config, AppConfig):
        config = load_config(config)
    ctx = AppContext(config)
    app = FastAPI(title="serpfuse", docs_url=None, redoc_url=None)
    app.state.ctx = ctx

    def error(status: int, message: str) -> JSONResponse:
        return JSONResponse(status_code=status, content={"error": message})

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "engines": ctx.engine_ids, "mode": ctx.config.mode.value}

    @app.get("/api/search")
    def api_search(q: str = "", k: int = 10, weights: str | None = None):
        if k < 1:
            return error(400, "k must be >= 1")
        try:
            overrides = _parse_weights_param(weights)
        except (ValueError, json.JSONDecodeError) as exc:
            return error(400, f"bad weights parameter: {exc}")
        try:
            outcome = pipeline.run_search(ctx, q, k, overrides)
        except EmptyQuery:
            return error(400, "query is empty")
        except InvalidWeights as exc:
            return error(400, str(exc))
        except AllBackendsFailed as exc:
            return error(502, str(exc))
        return JSONResponse(content=_search_payload(outcome, k))

    @app.get("/api/compare")
    def api_compare(q: str = "", k: int = 10, engines: str | None = None):
        if k < 1:
            return error(400, "k must be >= 1")
        engine_filter = [e for e in (engines or "").split(",") if e] or None
        try:
            raw_lists, outcome = pipeline.run_compare(ctx, q, k, engine_filter)
        except EmptyQuery:
            return error(400, "query is empty")
        except ValueError as exc:
            return error(400, str(exc))
        except AllBackendsFailed as exc:
            return error(502, str(exc))
        return JSONResponse(
            content={
                "query": outcome.query.key,
                "k": k,
                "degraded": outcome.degraded,
                "engines": {
                    engine_id: [_srr_payload(s) for s in srrs]
                    for engine_id, srrs in sorted(raw_lists.items())
                },
                "merged_system": MERGED_SYSTEM_ID,
                "merged": [_result_payload(r) for r in outcome.ranked],
            }
        )

    @app.post("/api/feedback")
    async def api_feedback(request: Request):
        try:
            payload = await request.json()
        except json.JSONDecodeError:
            return error(400, "body is not valid JSON")
        if not isinstance(payload, dict):
            return error(400, "body must be a JSON object")
        try:
            rating = Rating(
                query=str(payload.get("query", "")),
                system_id=str(payload.get("system") or payload.get("system_id") or ""),
                score=payload.get("score"),
                timestamp=str(
                    payload.get("timestamp") or datetime.now(timezone.utc).isoformat()
                ),
            )
        except InvalidRating as exc:
            return JSONResponse(status_code=422, content={"error": str(exc)})
        if not rating.query or not rating.system_id:
            return error(400, "query and system are required")
        ctx.ratings.record(rating)
        return Response(status_code=204)

    @app.get("/api/eval")
    def api_eval():
        from .evaluator import comparison_table

        try:
            reports = pipeline.run_eval(ctx, system_id=MERGED_SYSTEM_ID)
        except FileNotFoundError as exc:
            return error(404, str(exc))
        return JSONResponse(
            content={
                "k": reports[0].k if reports else 0,
                "reports": [
                    {
                        "system_id": r.system_id,
                        "mean": r.mean,
                        "per_query": r.per_query,
                    }
                    for r in reports
                ],
                "table": comparison_table(reports),
            }
        )

    ui_dir = config.ui_dir
    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
