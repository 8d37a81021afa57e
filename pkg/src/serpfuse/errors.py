"""Exception types shared across the pipeline stages."""


class SerpfuseError(Exception):
    """Base class for all library errors."""


class EmptyQuery(SerpfuseError):
    """No token survived query normalization."""


class ThesaurusUnavailable(SerpfuseError):
    """Remote synonym source could not be reached."""


class BackendUnavailable(SerpfuseError):
    """A search backend failed (network, credential, or bad response)."""


class AllBackendsFailed(SerpfuseError):
    """Every configured backend failed for one query."""


class SchemaViolation(SerpfuseError):
    """A fixture or config file does not match its documented schema."""


class MissingFile(SerpfuseError):
    """A file referenced by a manifest does not exist."""


class FetchTimeout(SerpfuseError):
    """A page fetch exceeded the policy timeout."""


class TooLarge(SerpfuseError):
    """A response body exceeded the policy byte limit."""


class TooManyRedirects(SerpfuseError):
    """A fetch followed more redirects than the policy allows."""


class RobotsDisallowed(SerpfuseError):
    """robots.txt forbids fetching the URL."""


class NetworkError(SerpfuseError):
    """Connection-level failure while fetching a page."""


class MalformedSitemap(SerpfuseError):
    """Sitemap XML failed strict parsing."""


class InvalidUrl(SerpfuseError):
    """URL cannot be canonicalized (not absolute http/https)."""


class InvalidWeights(SerpfuseError):
    """Weight vector has wrong keys, negative values, or is all zero."""


class EmptyEvaluation(SerpfuseError):
    """Mean precision requested over zero queries."""


class InvalidRating(SerpfuseError):
    """Rating score outside the 1..5 scale."""


class ConfigError(SerpfuseError):
    """Application configuration is missing or inconsistent."""
