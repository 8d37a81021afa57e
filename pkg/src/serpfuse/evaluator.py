"""Ranking-quality evaluation: precision at k over relevance judgments,
plus an append-only store for human 1-5 ratings.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import EmptyEvaluation, InvalidRating, SchemaViolation

DEFAULT_K = 10


@dataclass(frozen=True)
class Judgment:
    """Ground truth for one query: the set of relevant canonical URLs."""

    query: str
    relevant: frozenset[str]


@dataclass(frozen=True)
class Rating:
    """One human rating of one system's results, on a 1..5 scale."""

    query: str
    system_id: str
    score: int
    timestamp: str

    def __post_init__(self):
        if isinstance(self.score, bool) or not isinstance(self.score, int) or not 1 <= self.score <= 5:
            raise InvalidRating(f"score must be an integer in 1..5, got {self.score!r}")


@dataclass(frozen=True)
class PrecisionReport:
    system_id: str
    k: int
    per_query: dict[str, float]
    mean: float


def precision_at_k(ranked: Sequence[str], relevant: Iterable[str], k: int = DEFAULT_K) -> float:
    """Fraction of the top-k ranked URLs that are relevant.

    When fewer than k results exist, the missing slots count as
    irrelevant: the denominator stays k, so a system that returns too
    little is penalized rather than excused.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    relevant_set = set(relevant)
    hits = sum(1 for url in list(ranked)[:k] if url in relevant_set)
    return hits / k


def mean_precision(
    per_query: Mapping[str, float], k: int = DEFAULT_K, system_id: str = "serpfuse"
) -> PrecisionReport:
    """Unweighted arithmetic mean of per-query precision values."""
    if not per_query:
        raise EmptyEvaluation("no per-query precision values to average")
    mean = sum(per_query.values()) / len(per_query)
    return PrecisionReport(system_id=system_id, k=k, per_query=dict(per_query), mean=mean)


def load_judgments(path: str | Path) -> tuple[int, list[Judgment]]:
    """Load the judgments file: {"k": int, "queries": [{query, relevant}]}."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if "queries" not in data:
        raise SchemaViolation(f"{path}: judgments file needs a queries list")
    k = int(data.get("k", DEFAULT_K))
    judgments = []
    for entry in data["queries"]:
        if "query" not in entry or "relevant" not in entry:
            raise SchemaViolation(f"{path}: judgment entry needs query and relevant: {entry}")
        judgments.append(
            Judgment(query=str(entry["query"]), relevant=frozenset(map(str, entry["relevant"])))
        )
    return k, judgments


def comparison_table(reports: Sequence[PrecisionReport]) -> str:
    """Render mean precision per system as a fixed two-column text table."""
    rows = [("Search Engine", "Mean Precision")]
    rows += [(r.system_id, f"{r.mean:.2f}") for r in reports]
    width = max(len(name) for name, _ in rows) + 2
    return "\n".join(f"{name:<{width}}{value}" for name, value in rows)


class RatingStore:
    """Append-only newline-delimited JSON store for ratings.

    One JSON object per line; appends are serialized under a lock, reads
    take a consistent snapshot of complete lines. Crash-safe enough for
    desk scale, and trivially diff-able.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()

    def record(self, rating: Rating) -> int:
        """Append one rating; returns its 1-based record id."""
        line = json.dumps(
            {
                "query": rating.query,
                "system_id": rating.system_id,
                "score": rating.score,
                "timestamp": rating.timestamp,
            },
            sort_keys=True,
        )
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")
                fh.flush()
            return sum(1 for _ in open(self.path, encoding="utf-8"))

    def ratings(self) -> list[Rating]:
        if not self.path.exists():
            return []
        out = []
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                raw = json.loads(line)
                out.append(
                    Rating(
                        query=raw["query"],
                        system_id=raw["system_id"],
                        score=int(raw["score"]),
                        timestamp=raw.get("timestamp", ""),
                    )
                )
        return out

    def aggregate(self, system_id: str) -> float | None:
        """Mean stored score for one system; None when it has no ratings."""
        scores = [r.score for r in self.ratings() if r.system_id == system_id]
        if not scores:
            return None
        return sum(scores) / len(scores)
