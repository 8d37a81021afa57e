"""serpfuse: a meta-search engine that fuses results from several search
backends, removes duplicate pages by canonical URL, and re-ranks the rest
with a weighted on-page feature score plus a damped link-graph score.
"""

from .backends import EngineConfig, EngineMode, SearchResultRecord, load_serp_fixture, search
from .errors import SerpfuseError
from .evaluator import (
    Judgment,
    PrecisionReport,
    Rating,
    RatingStore,
    mean_precision,
    precision_at_k,
)
from .extractor import (
    FEATURE_KEYS,
    PageMeta,
    SeoFeatureVector,
    SitemapEntry,
    compute_features,
    extract_meta,
    parse_sitemap,
    render_sitemap,
)
from .merger import CanonicalUrl, MergedRecord, canonicalize, fnv1a64, merge, url_hash
from .query import Query, QueryKind, Thesaurus, classify, expand, normalize, tokenize
from .ranker import (
    LinkGraph,
    PageRankParams,
    PageRankResult,
    RankedResult,
    WeightVector,
    build_link_graph,
    pagerank,
    rank,
    score,
)
from .retriever import FetchPolicy, PageDocument, fetch, fetch_corpus, fetch_many

__version__ = "0.1.0"

__all__ = [
    "CanonicalUrl",
    "EngineConfig",
    "EngineMode",
    "FEATURE_KEYS",
    "FetchPolicy",
    "Judgment",
    "LinkGraph",
    "MergedRecord",
    "PageDocument",
    "PageMeta",
    "PageRankParams",
    "PageRankResult",
    "PrecisionReport",
    "Query",
    "QueryKind",
    "RankedResult",
    "Rating",
    "RatingStore",
    "SearchResultRecord",
    "SeoFeatureVector",
    "SerpfuseError",
    "SitemapEntry",
    "Thesaurus",
    "WeightVector",
    "build_link_graph",
    "canonicalize",
    "classify",
    "compute_features",
    "expand",
    "extract_meta",
    "fetch",
    "fetch_corpus",
    "fetch_many",
    "fnv1a64",
    "load_serp_fixture",
    "mean_precision",
    "merge",
    "normalize",
    "pagerank",
    "parse_sitemap",
    "precision_at_k",
    "rank",
    "render_sitemap",
    "score",
    "search",
    "tokenize",
    "url_hash",
]
