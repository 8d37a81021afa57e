"""HTML signal extraction, sitemap strictness, and feature vectors."""

import math
from datetime import date, datetime, timezone

import pytest
from hypothesis import given, strategies as st

from serpfuse.errors import MalformedSitemap
from serpfuse.extractor import (
    ChangeFreq,
    PageMeta,
    SeoFeatureVector,
    compute_features,
    extract_meta,
    parse_sitemap,
    render_sitemap,
)
from serpfuse.merger import canonicalize
from serpfuse.query import Thesaurus, expand, normalize
from serpfuse.retriever import PageDocument

from conftest import make_srr

NOW = datetime(2024, 5, 1, tzinfo=timezone.utc)

SAMPLE_SITEMAP = """<?xml version="1.0" encoding="UTF-8"?>
<urlset xmlns="http://www.sitemaps.org/schemas/sitemap/0.9">
<url>
<loc>http://www.mysite.com/</loc>
<lastmod>2012-02-21</lastmod>
<changefreq>weekly</changefreq>
<priority>1.0</priority>
</url>
</urlset>"""


def make_doc(body, url="http://page.example.com/x", last_modified=None, expires=None):
    return PageDocument(
        canonical_url=canonicalize(url),
        status=200,
        content_type="text/html; charset=utf-8",
        last_modified=last_modified,
        expires=expires,
        body=body,
        fetched_at=NOW,
    )


class TestExtractMeta:
    def test_title_and_description(self):
        meta = extract_meta(
            make_doc(
                "<html><head><title>Cheap Computers</title>"
                '<meta name="description" content="Cheap computers for sale.">'
                "</head><body></body></html>"
            )
        )
        assert meta.title == "Cheap Computers"
        assert meta.meta_description == "Cheap computers for sale."

    def test_bare_page_has_nothing(self):
        meta = extract_meta(make_doc("<html><body><p>hi</p></body></html>"))
        assert meta.title is None
        assert meta.meta_description is None
        assert meta.meta_keywords == ()
        assert meta.charset is None
        assert meta.images_total == 0

    def test_uppercase_meta_keywords_still_parsed(self):
        meta = extract_meta(
            make_doc('<META NAME="KEYWORDS" CONTENT="One, Two two, three">')
        )
        assert meta.meta_keywords == ("one", "two two", "three")

    def test_charset_attribute(self):
        assert extract_meta(make_doc('<meta charset="UTF-8">')).charset == "UTF-8"

    def test_charset_from_http_equiv(self):
        meta = extract_meta(
            make_doc('<meta http-equiv="Content-Type" content="text/html; charset=ISO-8859-1">')
        )
        assert meta.charset == "iso-8859-1"

    def test_image_alt_counting_ignores_empty_alt(self):
        meta = extract_meta(
            make_doc('<img src="a" alt="described"><img src="b"><img src="c" alt="">')
        )
        assert meta.images_total == 3
        assert meta.images_with_alt == 1

    def test_outlinks_resolved_against_base(self):
        meta = extract_meta(
            make_doc(
                '<base href="http://other.example.com/dir/">'
                '<a href="page.html">rel</a>'
                '<a href="http://abs.example.com/x">abs</a>'
                '<a href="#frag">skip</a>'
                '<a href="mailto:x@example.com">skip too</a>'
            )
        )
        urls = [u for u, _ in meta.outlinks]
        assert urls == ["http://other.example.com/dir/page.html", "http://abs.example.com/x"]
        assert meta.outlinks[0][1] == "rel"

    def test_breadcrumb_by_class(self):
        meta = extract_meta(make_doc('<div class="breadcrumb-trail">a &gt; b</div>'))
        assert meta.breadcrumb_present

    def test_breadcrumb_by_link_trail_separators(self):
        meta = extract_meta(
            make_doc('<a href="/">Home</a> &gt; <a href="/a">A</a> &gt; <a href="/b">B</a>')
        )
        assert meta.breadcrumb_present

    def test_no_breadcrumb_on_plain_page(self):
        meta = extract_meta(make_doc('<p>text</p><a href="/only">one link</a>'))
        assert not meta.breadcrumb_present

    def test_malformed_html_never_raises(self):
        meta = extract_meta(make_doc("<html><title>Broken<div><<<>>>&&& <meta name="))
        assert meta.title is not None

    def test_header_dates_carried(self):
        lm = datetime(2024, 4, 1, tzinfo=timezone.utc)
        meta = extract_meta(make_doc("<p>x</p>", last_modified=lm))
        assert meta.last_modified == lm

    def test_robots_author_language(self):
        meta = extract_meta(
            make_doc(
                '<meta name="robots" content="noindex">'
                '<meta name="author" content="Someone">'
                '<meta name="language" content="en">'
            )
        )
        assert meta.meta_robots == "noindex"
        assert meta.meta_author == "Someone"
        assert meta.meta_language == "en"


class TestParseSitemap:
    def test_sample_document(self):
        entries = parse_sitemap(SAMPLE_SITEMAP)
        assert len(entries) == 1
        entry = entries[0]
        assert entry.loc == "http://www.mysite.com/"
        assert entry.lastmod == date(2012, 2, 21)
        assert entry.changefreq is ChangeFreq.WEEKLY
        assert entry.priority == 1.0

    def test_loc_only_defaults_priority(self):
        xml = (
            '<?xml version="1.0"?><urlset xmlns="http://www.sitemaps.org/schemas/sitemap/0.9">'
            "<url><loc>http://www.mysite.com/a</loc></url></urlset>"
        )
        entries = parse_sitemap(xml)
        assert entries[0].priority == 0.5
        assert entries[0].lastmod is None
        assert entries[0].changefreq is None

    def test_unclosed_url_tag(self):
        bad = SAMPLE_SITEMAP.replace("</url>", "")
        with pytest.raises(MalformedSitemap):
            parse_sitemap(bad)

    def test_entry_without_loc_skipped(self):
        xml = (
            "<urlset><url><priority>0.9</priority></url>"
            "<url><loc>http://www.mysite.com/b</loc></url></urlset>"
        )
        entries = parse_sitemap(xml)
        assert len(entries) == 1

    def test_out_of_range_priority_clamped(self):
        xml = "<urlset><url><loc>http://m.example.com/</loc><priority>7</priority></url></urlset>"
        assert parse_sitemap(xml)[0].priority == 1.0

    def test_round_trip(self):
        entries = parse_sitemap(SAMPLE_SITEMAP)
        assert parse_sitemap(render_sitemap(entries)) == entries

    @given(
        st.lists(
            st.tuples(
                st.integers(min_value=0, max_value=99),
                st.one_of(st.none(), st.dates(min_value=date(2000, 1, 1), max_value=date(2030, 1, 1))),
                st.one_of(st.none(), st.sampled_from(list(ChangeFreq))),
                st.floats(min_value=0.0, max_value=1.0, allow_nan=False),
            ),
            max_size=8,
        )
    )
    def test_round_trip_property(self, specs):
        from serpfuse.extractor import SitemapEntry

        entries = [
            SitemapEntry(
                loc=f"http://site.example.com/p{i}", lastmod=lm, changefreq=cf, priority=pr
            )
            for i, lm, cf, pr in specs
        ]
        assert parse_sitemap(render_sitemap(entries)) == entries


ALCO_THESAURUS = Thesaurus.from_entries({"alcoholism": ["dipsomania"]})


class TestComputeFeatures:
    def test_title_match_example(self):
        q = normalize("alcoholism")
        meta = PageMeta(title="Alcoholism Facts")
        srr = make_srr("g", 1, "http://x.example.com/")
        fv = compute_features(q, srr, meta, 0.0, NOW)
        assert fv.title_match == 1.0

    def test_empty_page_vector(self):
        q = normalize("alcoholism")
        srr = make_srr("g", 1, "http://x.example.com/", title="", snippet="")
        fv = compute_features(q, srr, PageMeta(), 0.0, NOW)
        assert fv.values() == (0, 0, 0, 0, 0, 0, 1.0, 0, 0)

    def test_snippet_two_occurrences(self):
        q = normalize("alcoholism")
        srr = make_srr(
            "g", 1, "http://x.example.com/", snippet="alcoholism and more alcoholism."
        )
        fv = compute_features(q, srr, PageMeta(), 0.0, NOW)
        assert fv.snippet_freq == pytest.approx(0.4)

    def test_snippet_caps_at_five(self):
        q = normalize("alcoholism")
        srr = make_srr("g", 1, "http://x.example.com/", snippet="alcoholism " * 9)
        fv = compute_features(q, srr, PageMeta(), 0.0, NOW)
        assert fv.snippet_freq == 1.0

    def test_synonym_matches_are_discounted(self):
        q = expand(normalize("alcoholism"), ALCO_THESAURUS)
        meta = PageMeta(title="Dipsomania Research", meta_keywords=("dipsomania",))
        srr = make_srr("g", 1, "http://x.example.com/", snippet="dipsomania support")
        fv = compute_features(q, srr, meta, 0.0, NOW)
        assert fv.title_match == 0.5
        assert fv.keyword_match == 0.5
        assert fv.snippet_freq == pytest.approx(0.1)

    def test_exact_match_beats_synonym(self):
        q = expand(normalize("alcoholism"), ALCO_THESAURUS)
        meta = PageMeta(title="Alcoholism and dipsomania")
        srr = make_srr("g", 1, "http://x.example.com/")
        fv = compute_features(q, srr, meta, 0.0, NOW)
        assert fv.title_match == 1.0

    def test_freshness_half_life(self):
        lm = datetime(2023, 11, 3, tzinfo=timezone.utc)  # exactly 180 days before NOW
        q = normalize("anything")
        srr = make_srr("g", 1, "http://x.example.com/")
        fv = compute_features(q, srr, PageMeta(last_modified=lm), 0.0, NOW)
        assert fv.freshness == pytest.approx(0.5, abs=1e-12)

    def test_future_expiry_clamps_to_one(self):
        future = datetime(2024, 6, 30, tzinfo=timezone.utc)
        q = normalize("anything")
        srr = make_srr("g", 1, "http://x.example.com/")
        fv = compute_features(q, srr, PageMeta(expires=future), 0.0, NOW)
        assert fv.freshness == 1.0

    def test_freshest_date_wins(self):
        older = datetime(2024, 1, 1, tzinfo=timezone.utc)
        newer = datetime(2024, 4, 1, tzinfo=timezone.utc)
        q = normalize("anything")
        srr = make_srr("g", 1, "http://x.example.com/")
        fv = compute_features(
            q, srr, PageMeta(last_modified=older, meta_expires=newer), 0.0, NOW
        )
        expected = math.exp(-30.0 / 180.0 * math.log(2))
        assert fv.freshness == pytest.approx(expected, abs=1e-12)

    def test_image_alt_ratio_and_vacuous_case(self):
        q = normalize("x")
        srr = make_srr("g", 1, "http://x.example.com/")
        with_images = compute_features(
            q, srr, PageMeta(images_total=4, images_with_alt=3), 0.0, NOW
        )
        assert with_images.image_alt == 0.75
        without = compute_features(q, srr, PageMeta(), 0.0, NOW)
        assert without.image_alt == 1.0

    def test_sitemap_and_charset_flags(self):
        q = normalize("x")
        srr = make_srr("g", 1, "http://x.example.com/")
        fv = compute_features(
            q, srr, PageMeta(charset="utf-8", has_sitemap=True), 0.3, NOW
        )
        assert fv.charset_declared == 1.0
        assert fv.sitemap == 1.0
        assert fv.inlinks == 0.3

    def test_deterministic_given_fixed_now(self):
        q = expand(normalize("alcoholism"), ALCO_THESAURUS)
        meta = PageMeta(title="Alcoholism", last_modified=datetime(2024, 3, 1, tzinfo=timezone.utc))
        srr = make_srr("g", 1, "http://x.example.com/", snippet="alcoholism twice alcoholism")
        assert compute_features(q, srr, meta, 0.5, NOW) == compute_features(q, srr, meta, 0.5, NOW)

    def test_srr_title_used_when_page_has_none(self):
        q = normalize("alcoholism")
        srr = make_srr("g", 1, "http://x.example.com/", title="Alcoholism Answers")
        fv = compute_features(q, srr, PageMeta(), 0.0, NOW)
        assert fv.title_match == 1.0

    @given(
        total=st.integers(min_value=0, max_value=50),
        with_alt=st.integers(min_value=0, max_value=50),
    )
    def test_image_alt_always_in_range(self, total, with_alt):
        with_alt = min(with_alt, total)
        q = normalize("x")
        srr = make_srr("g", 1, "http://x.example.com/")
        fv = compute_features(
            q, srr, PageMeta(images_total=total, images_with_alt=with_alt), 0.0, NOW
        )
        assert 0.0 <= fv.image_alt <= 1.0
        if total == 0:
            assert fv.image_alt == 1.0


class TestSeoFeatureVector:
    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            SeoFeatureVector(title_match=1.5)

    def test_as_dict_key_order(self):
        keys = list(SeoFeatureVector().as_dict())
        assert keys == [
            "title", "description", "keyword", "snippet", "freshness",
            "charset", "image_alt", "sitemap", "links",
        ]
