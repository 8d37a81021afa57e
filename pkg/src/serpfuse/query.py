"""Query normalization, head/tail classification, and synonym expansion.

A raw query string becomes an immutable :class:`Query`: lowercase tokens,
a head/tail kind derived from token count, and (for single-word queries
only) synonym expansions looked up in a thesaurus.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path

import httpx

from .errors import EmptyQuery, ThesaurusUnavailable

# Strip everything except word characters and hyphens, then drop the
# underscore (a word character we do not want to keep).
_PUNCT_RE = re.compile(r"[^\w-]|_", re.UNICODE)

HEAD_MAX_TERMS = 2


class QueryKind(str, Enum):
    HEAD = "head"
    TAIL = "tail"


@dataclass(frozen=True)
class Query:
    """A normalized user query.

    ``expansions`` maps a term to its synonym tokens and is populated only
    for single-term queries (multi-word queries are never expanded).
    """

    raw: str
    terms: tuple[str, ...]
    kind: QueryKind
    expansions: dict[str, tuple[str, ...]] = field(default_factory=dict)

    @property
    def key(self) -> str:
        """Fixture lookup key: terms joined by single spaces."""
        return " ".join(self.terms)


def tokenize(text: str) -> list[str]:
    """Lowercase tokens of ``text``: split on whitespace, strip punctuation.

    Internal hyphens survive ("e-commerce" stays one token); leading and
    trailing hyphens do not. Tokens that lose every character are dropped.
    """
    tokens = []
    for chunk in text.split():
        token = _PUNCT_RE.sub("", chunk.lower()).strip("-")
        if token:
            tokens.append(token)
    return tokens


def classify(terms: list[str] | tuple[str, ...]) -> QueryKind:
    """Head for one or two terms, tail for three or more."""
    if not terms:
        raise EmptyQuery("cannot classify an empty term list")
    return QueryKind.HEAD if len(terms) <= HEAD_MAX_TERMS else QueryKind.TAIL


def normalize(raw: str) -> Query:
    """Turn raw user text into a :class:`Query`.

    Raises :class:`EmptyQuery` when nothing survives tokenization.
    """
    terms = tuple(tokenize(raw))
    if not terms:
        raise EmptyQuery(f"no searchable terms in {raw!r}")
    return Query(raw=raw, terms=terms, kind=classify(terms))


class ThesaurusSource(str, Enum):
    FILE = "file"
    REMOTE = "remote"


@dataclass(frozen=True)
class Thesaurus:
    """Immutable synonym table with a uniform ``lookup`` contract.

    Entries are sanitized on construction: duplicate synonyms collapse and
    a term never lists itself.
    """

    entries: dict[str, tuple[str, ...]]
    source: ThesaurusSource = ThesaurusSource.FILE

    @classmethod
    def from_entries(
        cls, entries: dict[str, list[str]], source: ThesaurusSource = ThesaurusSource.FILE
    ) -> Thesaurus:
        clean: dict[str, tuple[str, ...]] = {}
        for term, synonyms in entries.items():
            term = term.lower()
            seen: list[str] = []
            for syn in synonyms:
                syn = syn.lower()
                if syn != term and syn not in seen:
                    seen.append(syn)
            clean[term] = tuple(seen)
        return cls(entries=clean, source=source)

    @classmethod
    def from_file(cls, path: str | Path) -> Thesaurus:
        """Load a UTF-8 JSON object mapping term -> list of synonyms."""
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        return cls.from_entries(raw, source=ThesaurusSource.FILE)

    def lookup(self, term: str) -> tuple[str, ...]:
        return self.entries.get(term.lower(), ())


class RemoteThesaurus:
    """Synonym lookup against an HTTP endpoint, same contract as Thesaurus.

    The endpoint is expected to answer ``GET <endpoint>?term=<word>`` with
    a JSON array of synonym strings. Any transport or decoding failure is
    surfaced as :class:`ThesaurusUnavailable` so callers can proceed
    without expansions.
    """

    source = ThesaurusSource.REMOTE

    def __init__(self, endpoint: str, timeout: float = 5.0):
        self.endpoint = endpoint
        self.timeout = timeout

    def lookup(self, term: str) -> tuple[str, ...]:
        try:
            resp = httpx.get(self.endpoint, params={"term": term}, timeout=self.timeout)
            resp.raise_for_status()
            synonyms = resp.json()
        except Exception as exc:  # noqa: BLE001 - any transport failure degrades
            raise ThesaurusUnavailable(f"synonym lookup failed for {term!r}: {exc}") from exc
        term = term.lower()
        seen: list[str] = []
        for syn in synonyms:
            syn = str(syn).lower()
            if syn != term and syn not in seen:
                seen.append(syn)
        return tuple(seen)


def expand(q: Query, thesaurus) -> Query:
    """Populate synonym expansions for a single-term query.

    Multi-word queries are returned unchanged; so are single-term queries
    whose term is unknown to the thesaurus. Terms and kind never change.
    """
    if len(q.terms) != 1:
        return q
    term = q.terms[0]
    synonyms = thesaurus.lookup(term)
    if not synonyms:
        return q
    return replace(q, expansions={term: tuple(synonyms)})
