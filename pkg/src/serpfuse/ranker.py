"""Link-graph PageRank and weighted feature scoring.

The link score for page A is the fixed point of

    PR(A) = (1 - d) + d * sum over pages T linking to A of PR(T) / C(T)

where C(T) is T's out-degree and d = 0.85. This is the non-normalized
variant: values start at 1.0, dangling pages simply contribute nothing,
and the result is NOT rescaled to sum to 1 (an isolated page converges to
1 - d = 0.15). The overall result score is a plain weighted sum of the
nine feature-vector parameters, uniform weights by default.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import json
from pathlib import Path
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import InvalidWeights
from .extractor import FEATURE_KEYS, PageMeta, SeoFeatureVector
from .merger import CanonicalUrl, MergedRecord, canonicalize

Node = Hashable

DEFAULT_DAMPING = 0.85


@dataclass(frozen=True)
class PageRankParams:
    d: float = DEFAULT_DAMPING
    epsilon: float = 1e-8
    max_iters: int = 100

    def __post_init__(self):
        if not 0.0 < self.d < 1.0:
            raise ValueError("damping factor must be in (0, 1)")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")


@dataclass
class LinkGraph:
    """Directed graph of canonical URLs (or any hashable node ids).

    Self-loops and duplicate edges are dropped on construction;
    ``out_degree`` counts each node's distinct out-edges.
    """

    nodes: set[Node] = field(default_factory=set)
    edges: set[tuple[Node, Node]] = field(default_factory=set)

    def __post_init__(self):
        self.edges = {(a, b) for a, b in self.edges if a != b}
        for a, b in self.edges:
            self.nodes.add(a)
            self.nodes.add(b)
        self.out_degree: dict[Node, int] = {n: 0 for n in self.nodes}
        for a, _ in self.edges:
            self.out_degree[a] += 1

    def in_degree(self) -> dict[Node, int]:
        indeg = {n: 0 for n in self.nodes}
        for _, b in self.edges:
            indeg[b] += 1
        return indeg

    def predecessors(self) -> dict[Node, list[Node]]:
        preds: dict[Node, list[Node]] = {n: [] for n in self.nodes}
        for a, b in self.edges:
            preds[b].append(a)
        return preds


@dataclass
class PageRankResult:
    values: dict[Node, float]
    converged: bool
    iterations: int
    residual: float

    def __getitem__(self, node: Node) -> float:
        return self.values[node]


def pagerank(graph: LinkGraph, params: PageRankParams = PageRankParams()) -> PageRankResult:
    """Iterate the damped link recurrence to its fixed point.

    Jacobi-style updates: each sweep reads only the previous sweep's
    values, so the result does not depend on node order beyond float
    rounding. Starts from 1.0 everywhere and stops when the largest
    per-node change drops below ``params.epsilon``. If ``max_iters``
    sweeps pass first, the best values are still returned with
    ``converged=False``.
    """
    if not graph.nodes:
        raise ValueError("pagerank needs a non-empty graph")
    d = params.d
    preds = graph.predecessors()
    out = graph.out_degree

    values = {n: 1.0 for n in graph.nodes}
    residual = float("inf")
    iterations = 0
    while iterations < params.max_iters:
        iterations += 1
        new_values = {
            n: (1.0 - d) + d * sum(values[t] / out[t] for t in preds[n])
            for n in graph.nodes
        }
        residual = max(abs(new_values[n] - values[n]) for n in graph.nodes)
        values = new_values
        if residual < params.epsilon:
            return PageRankResult(values, converged=True, iterations=iterations, residual=residual)
    return PageRankResult(values, converged=False, iterations=iterations, residual=residual)


def build_link_graph(
    pages: Mapping[CanonicalUrl, PageMeta], universe: Iterable[CanonicalUrl]
) -> LinkGraph:
    """Closed-world link graph over ``universe``.

    Nodes are exactly the universe; an edge exists where a universe page's
    outlink lands on another universe page. Outlinks pointing elsewhere,
    self-links, and repeated links are ignored.
    """
    node_by_str = {str(u): u for u in universe}
    edges: set[tuple[Node, Node]] = set()
    for url, meta in pages.items():
        src = node_by_str.get(str(url))
        if src is None:
            continue
        for href, _text in meta.outlinks:
            try:
                target = node_by_str.get(str(canonicalize(href)))
            except Exception:  # noqa: BLE001 - unparseable outlinks carry no edge
                continue
            if target is not None and target != src:
                edges.add((src, target))
    graph = LinkGraph(nodes=set(node_by_str.values()), edges=edges)
    return graph


def inlink_norms(graph: LinkGraph) -> dict[Node, float]:
    """In-degree of each node divided by the maximum in-degree (0 if none)."""
    indeg = graph.in_degree()
    peak = max(indeg.values(), default=0)
    if peak == 0:
        return {n: 0.0 for n in graph.nodes}
    return {n: indeg[n] / peak for n in graph.nodes}


def pagerank_norms(graph: LinkGraph, params: PageRankParams = PageRankParams()) -> dict[Node, float]:
    """PageRank values rescaled into [0, 1] by the maximum value."""
    result = pagerank(graph, params)
    peak = max(result.values.values())
    if peak <= 0:
        return {n: 0.0 for n in graph.nodes}
    return {n: v / peak for n, v in result.values.items()}


@dataclass(frozen=True)
class WeightVector:
    """Per-parameter weights for the nine ranking features."""

    weights: Mapping[str, float]

    def __post_init__(self):
        keys = set(self.weights)
        if keys != set(FEATURE_KEYS):
            missing = set(FEATURE_KEYS) - keys
            extra = keys - set(FEATURE_KEYS)
            raise InvalidWeights(f"weight keys wrong (missing={sorted(missing)}, extra={sorted(extra)})")
        if any(w < 0 for w in self.weights.values()):
            raise InvalidWeights("weights must be non-negative")
        if all(w == 0 for w in self.weights.values()):
            raise InvalidWeights("at least one weight must be positive")

    @classmethod
    def uniform(cls, value: float = 1.0) -> WeightVector:
        return cls({key: value for key in FEATURE_KEYS})

    @classmethod
    def from_file(cls, path: str | Path) -> WeightVector:
        with open(path, encoding="utf-8") as fh:
            return cls(json.load(fh))

    def merged_with(self, overrides: Mapping[str, float] | None) -> WeightVector:
        """New vector with some keys overridden; unknown keys are rejected."""
        if not overrides:
            return self
        unknown = set(overrides) - set(FEATURE_KEYS)
        if unknown:
            raise InvalidWeights(f"unknown weight keys: {sorted(unknown)}")
        merged = dict(self.weights)
        merged.update({k: float(v) for k, v in overrides.items()})
        return WeightVector(merged)

    def ordered(self) -> tuple[float, ...]:
        return tuple(self.weights[key] for key in FEATURE_KEYS)


def score(features: SeoFeatureVector, weights: WeightVector) -> float:
    """Weighted sum of the nine parameters, in fixed key order."""
    total = 0.0
    for value, weight in zip(features.values(), weights.ordered()):
        total += value * weight
    return total


@dataclass(frozen=True)
class RankedResult:
    record: MergedRecord
    features: SeoFeatureVector
    score: float
    pagerank: float
    position: int


def rank(
    records: Sequence[MergedRecord],
    features: Sequence[SeoFeatureVector],
    weights: WeightVector,
    pageranks: Mapping[str, float] | None = None,
) -> list[RankedResult]:
    """Order merged records by weighted score, descending.

    Ties break by (1) found by more engines, (2) better best source rank,
    (3) canonical URL string. ``pageranks`` (keyed by canonical string) is
    carried through for reporting and does not affect the order.
    """
    if len(records) != len(features):
        raise ValueError("one feature vector per record is required")
    pageranks = pageranks or {}
    scored = [
        (record, fv, score(fv, weights)) for record, fv in zip(records, features)
    ]
    scored.sort(
        key=lambda item: (
            -item[2],
            -len(item[0].sources),
            item[0].best_rank,
            str(item[0].canonical),
        )
    )
    return [
        RankedResult(
            record=record,
            features=fv,
            score=value,
            pagerank=pageranks.get(str(record.canonical), 0.0),
            position=position,
        )
        for position, (record, fv, value) in enumerate(scored, start=1)
    ]
