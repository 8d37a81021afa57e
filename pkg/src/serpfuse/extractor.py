"""On-page signal extraction and the nine-parameter feature vector.

HTML parsing is deliberately lenient (real pages are broken); sitemap XML
parsing is deliberately strict (the format tolerates no syntax errors).
The feature vector is what the ranker's weighted score consumes.
"""

from __future__ import annotations

import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass, replace
from datetime import date, datetime
from enum import Enum
from html.parser import HTMLParser
from urllib.parse import urljoin, urlsplit

from .errors import MalformedSitemap
from .query import Query, tokenize
from .retriever import PageDocument, parse_date, to_utc

SNIPPET_CAP = 5
FRESHNESS_HALFLIFE_DAYS = 180.0
SYNONYM_DISCOUNT = 0.5

SITEMAP_NS = "http://www.sitemaps.org/schemas/sitemap/0.9"

_BREADCRUMB_SEPARATORS = {">", "»", "›", "/", "→"}


@dataclass(frozen=True)
class PageMeta:
    """Everything the extractor learned about one fetched page."""

    title: str | None = None
    meta_description: str | None = None
    meta_keywords: tuple[str, ...] = ()
    charset: str | None = None
    meta_expires: datetime | None = None
    meta_robots: str | None = None
    meta_author: str | None = None
    meta_language: str | None = None
    images_total: int = 0
    images_with_alt: int = 0
    breadcrumb_present: bool = False
    outlinks: tuple[tuple[str, str], ...] = ()  # (absolute url, anchor text)
    has_sitemap: bool = False
    last_modified: datetime | None = None  # from the document's headers
    expires: datetime | None = None

    def with_sitemap(self, present: bool) -> PageMeta:
        return replace(self, has_sitemap=present)


class ChangeFreq(str, Enum):
    ALWAYS = "always"
    HOURLY = "hourly"
    DAILY = "daily"
    WEEKLY = "weekly"
    MONTHLY = "monthly"
    YEARLY = "yearly"
    NEVER = "never"


@dataclass(frozen=True)
class SitemapEntry:
    loc: str
    lastmod: date | None = None
    changefreq: ChangeFreq | None = None
    priority: float = 0.5


FEATURE_KEYS = (
    "title",
    "description",
    "keyword",
    "snippet",
    "freshness",
    "charset",
    "image_alt",
    "sitemap",
    "links",
)


@dataclass(frozen=True)
class SeoFeatureVector:
    """The nine normalized ranking parameters for one (query, page) pair."""

    title_match: float = 0.0
    desc_match: float = 0.0
    keyword_match: float = 0.0
    snippet_freq: float = 0.0
    freshness: float = 0.0
    charset_declared: float = 0.0
    image_alt: float = 0.0
    sitemap: float = 0.0
    inlinks: float = 0.0

    def __post_init__(self):
        for key, value in zip(FEATURE_KEYS, self.values()):
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"feature {key}={value} outside [0, 1]")

    def values(self) -> tuple[float, ...]:
        return (
            self.title_match,
            self.desc_match,
            self.keyword_match,
            self.snippet_freq,
            self.freshness,
            self.charset_declared,
            self.image_alt,
            self.sitemap,
            self.inlinks,
        )

    def as_dict(self) -> dict[str, float]:
        return dict(zip(FEATURE_KEYS, self.values()))


class _MetaParser(HTMLParser):
    """Tolerant single-pass collector for the on-page signals."""

    def __init__(self, base_url: str):
        super().__init__(convert_charrefs=True)
        self.base_url = base_url
        self.title_parts: list[str] = []
        self.meta: dict[str, str] = {}
        self.charset: str | None = None
        self.images_total = 0
        self.images_with_alt = 0
        self.outlinks: list[tuple[str, str]] = []
        self.breadcrumb = False
        self.saw_nav = False
        self._in_title = False
        self._anchor_href: str | None = None
        self._anchor_text: list[str] = []
        self._trail_separators = 0
        self._after_anchor = False

    def handle_starttag(self, tag, attrs):
        attrs = {(k or "").lower(): (v or "") for k, v in attrs}
        if tag == "title":
            self._in_title = True
        elif tag == "meta":
            self._handle_meta(attrs)
        elif tag == "base" and attrs.get("href"):
            self.base_url = urljoin(self.base_url, attrs["href"])
        elif tag == "img":
            self.images_total += 1
            if attrs.get("alt", "").strip():
                self.images_with_alt += 1
        elif tag == "a":
            self._open_anchor(attrs.get("href"))
        elif tag == "nav":
            self.saw_nav = True
        if "breadcrumb" in attrs.get("class", "").lower() or "breadcrumb" in attrs.get("id", "").lower():
            self.breadcrumb = True

    def handle_startendtag(self, tag, attrs):
        self.handle_starttag(tag, attrs)

    def handle_endtag(self, tag):
        if tag == "title":
            self._in_title = False
        elif tag == "a":
            self._close_anchor()

    def handle_data(self, data):
        if self._in_title:
            self.title_parts.append(data)
        if self._anchor_href is not None:
            self._anchor_text.append(data)
        elif self._after_anchor:
            stripped = data.strip()
            if stripped in _BREADCRUMB_SEPARATORS:
                self._trail_separators += 1
                if self._trail_separators >= 2:
                    self.breadcrumb = True
            elif stripped:
                self._trail_separators = 0
                self._after_anchor = False

    def _handle_meta(self, attrs):
        if attrs.get("charset"):
            self.charset = attrs["charset"].strip()
        name = attrs.get("name", "").lower()
        http_equiv = attrs.get("http-equiv", "").lower()
        content = attrs.get("content", "")
        if name:
            self.meta[name] = content
        if http_equiv == "content-type" and "charset=" in content.lower():
            self.charset = content.lower().split("charset=", 1)[1].split(";")[0].strip()
        elif http_equiv == "expires":
            self.meta["__expires"] = content

    def _open_anchor(self, href):
        self._close_anchor()  # lenient: an unclosed <a> ends at the next one
        self._anchor_href = href or ""
        self._anchor_text = []

    def _close_anchor(self):
        if self._anchor_href is None:
            return
        href, text = self._anchor_href, " ".join(self._anchor_text).strip()
        self._anchor_href = None
        self._after_anchor = True
        if not href or href.startswith("#"):
            return
        absolute = urljoin(self.base_url, href)
        if urlsplit(absolute).scheme in ("http", "https"):
            self.outlinks.append((absolute, text))


def extract_meta(doc: PageDocument) -> PageMeta:
    """Best-effort parse of a fetched page into :class:`PageMeta`.

    Never raises on bad markup; missing elements simply stay empty. Header
    dates from the document are carried along for freshness scoring.
    ``has_sitemap`` is left False here; the sitemap probe is the caller's
    job because it needs the corpus or the network.
    """
    parser = _MetaParser(base_url=str(doc.canonical_url))
    try:
        parser.feed(doc.body)
        parser.close()
    except Exception:  # noqa: BLE001 - lenient by contract
        pass

    keywords = tuple(
        part.strip().lower()
        for part in parser.meta.get("keywords", "").split(",")
        if part.strip()
    )
    title = " ".join(" ".join(parser.title_parts).split()) or None
    return PageMeta(
        title=title,
        meta_description=parser.meta.get("description") or None,
        meta_keywords=keywords,
        charset=parser.charset,
        meta_expires=parse_date(parser.meta.get("__expires")),
        meta_robots=parser.meta.get("robots") or None,
        meta_author=parser.meta.get("author") or None,
        meta_language=parser.meta.get("language") or None,
        images_total=parser.images_total,
        images_with_alt=parser.images_with_alt,
        breadcrumb_present=parser.saw_nav or parser.breadcrumb,
        outlinks=tuple(parser.outlinks),
        has_sitemap=False,
        last_modified=doc.last_modified,
        expires=doc.expires,
    )


def _local_name(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def parse_sitemap(xml_text: str) -> list[SitemapEntry]:
    """Parse sitemap XML, strictly.

    Any XML syntax error raises :class:`MalformedSitemap`; this format is
    machine-generated and errors mean the file is broken. Semantically odd
    but well-formed input is tolerated: entries without a location are
    skipped, unknown change frequencies become None, and a missing
    priority defaults to 0.5 (out-of-range values are clamped).
    """
    try:
        root = ET.fromstring(xml_text)
    except ET.ParseError as exc:
        raise MalformedSitemap(f"sitemap XML rejected: {exc}") from exc

    entries = []
    for url_el in root:
        if _local_name(url_el.tag) != "url":
            continue
        fields = {_local_name(child.tag): (child.text or "").strip() for child in url_el}
        loc = fields.get("loc", "")
        if not loc:
            continue
        lastmod = None
        if fields.get("lastmod"):
            parsed = parse_date(fields["lastmod"])
            lastmod = parsed.date() if parsed else None
        changefreq = None
        if fields.get("changefreq"):
            try:
                changefreq = ChangeFreq(fields["changefreq"].lower())
            except ValueError:
                changefreq = None
        priority = 0.5
        if fields.get("priority"):
            try:
                priority = min(1.0, max(0.0, float(fields["priority"])))
            except ValueError:
                priority = 0.5
        entries.append(
            SitemapEntry(loc=loc, lastmod=lastmod, changefreq=changefreq, priority=priority)
        )
    return entries


def render_sitemap(entries: list[SitemapEntry]) -> str:
    """Serialize entries back to sitemap XML (inverse of parse_sitemap)."""
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<urlset xmlns="{SITEMAP_NS}">',
    ]
    for entry in entries:
        lines.append("  <url>")
        lines.append(f"    <loc>{entry.loc}</loc>")
        if entry.lastmod is not None:
            lines.append(f"    <lastmod>{entry.lastmod.isoformat()}</lastmod>")
        if entry.changefreq is not None:
            lines.append(f"    <changefreq>{entry.changefreq.value}</changefreq>")
        lines.append(f"    <priority>{entry.priority}</priority>")
        lines.append("  </url>")
    lines.append("</urlset>")
    return "\n".join(lines)


def _match_value(
    tokens: set[str], terms: set[str], synonyms: set[str], discount: float
) -> float:
    if tokens & terms:
        return 1.0
    if tokens & synonyms:
        return discount
    return 0.0


def compute_features(
    q: Query,
    srr,
    meta: PageMeta,
    inlink_norm: float,
    now: datetime,
    *,
    snippet_cap: int = SNIPPET_CAP,
    halflife_days: float = FRESHNESS_HALFLIFE_DAYS,
    synonym_discount: float = SYNONYM_DISCOUNT,
) -> SeoFeatureVector:
    """Compute the nine-parameter vector for one (query, page) pair.

    Exact term matches score 1.0 on the title/description/keyword
    predicates; synonym-only matches score ``synonym_discount``. Snippet
    frequency counts term occurrences in the engine snippet (synonyms at
    the discount), capped at ``snippet_cap`` then normalized. Freshness
    halves every ``halflife_days`` from the freshest known date among the
    expires meta tag and the document's header dates; pages without any
    date score 0. A page with no images scores a vacuous 1.0 on image_alt.
    ``now`` is fixed per run so the whole vector is deterministic.
    """
    terms = set(q.terms)
    synonyms = {syn for syns in q.expansions.values() for syn in syns}

    title_tokens = set(tokenize(meta.title or srr.title or ""))
    desc_tokens = set(tokenize(meta.meta_description or ""))
    keyword_tokens = set(tokenize(" ".join(meta.meta_keywords)))

    weighted = 0.0
    for token in tokenize(srr.snippet or ""):
        if token in terms:
            weighted += 1.0
        elif token in synonyms:
            weighted += synonym_discount
    snippet_freq = min(weighted, float(snippet_cap)) / float(snippet_cap)

    dates = [d for d in (meta.meta_expires, meta.last_modified, meta.expires) if d is not None]
    if dates:
        freshest = max(dates)
        age_days = max(0.0, (to_utc(now) - freshest).total_seconds() / 86400.0)
        freshness = math.exp(-age_days / halflife_days * math.log(2.0))
    else:
        freshness = 0.0

    return SeoFeatureVector(
        title_match=_match_value(title_tokens, terms, synonyms, synonym_discount),
        desc_match=_match_value(desc_tokens, terms, synonyms, synonym_discount),
        keyword_match=_match_value(keyword_tokens, terms, synonyms, synonym_discount),
        snippet_freq=snippet_freq,
        freshness=freshness,
        charset_declared=1.0 if meta.charset else 0.0,
        image_alt=(meta.images_with_alt / meta.images_total) if meta.images_total else 1.0,
        sitemap=1.0 if meta.has_sitemap else 0.0,
        inlinks=float(inlink_norm),
    )
