"""Canonicalization, FNV-1a hashing, and merge properties."""

import pytest
from hypothesis import given, settings, strategies as st

from serpfuse.errors import InvalidUrl
from serpfuse.merger import (
    FNV64_OFFSET_BASIS,
    canonicalize,
    fnv1a64,
    merge,
    url_hash,
)

from conftest import make_srr


class TestCanonicalize:
    def test_full_normalization_chain(self):
        c = canonicalize("HTTP://Example.com:80/a/../b?b=2&a=1#frag")
        assert str(c) == "http://example.com/b?a=1&b=2"

    def test_root_already_canonical(self):
        assert str(canonicalize("http://example.com/")) == "http://example.com/"

    def test_bare_host_gets_root_path(self):
        assert str(canonicalize("http://example.com")) == "http://example.com/"

    def test_not_a_url(self):
        with pytest.raises(InvalidUrl):
            canonicalize("not a url")

    def test_non_http_scheme_rejected(self):
        with pytest.raises(InvalidUrl):
            canonicalize("ftp://example.com/file")

    def test_https_default_port_stripped(self):
        assert str(canonicalize("https://example.com:443/x")) == "https://example.com/x"

    def test_non_default_port_kept(self):
        assert str(canonicalize("http://example.com:8080/x")) == "http://example.com:8080/x"

    def test_trailing_slash_stripped_off_root(self):
        assert str(canonicalize("http://example.com/a/")) == "http://example.com/a"

    def test_query_sorted_by_key_then_value(self):
        c = canonicalize("http://example.com/?z=1&a=2&a=1")
        assert str(c) == "http://example.com/?a=1&a=2&z=1"

    def test_fragment_removed(self):
        assert str(canonicalize("http://example.com/p#sec")) == "http://example.com/p"

    def test_equality_is_serialization_equality(self):
        a = canonicalize("http://Example.com/x")
        b = canonicalize("http://example.com/x")
        assert a == b
        assert str(a) == str(b)


class TestFnv1a64:
    def test_empty_input_is_offset_basis(self):
        assert fnv1a64(b"") == FNV64_OFFSET_BASIS == 0xCBF29CE484222325

    def test_single_a(self):
        assert fnv1a64(b"a") == 0xAF63DC4C8601EC8C

    def test_foobar_reference_vector(self):
        assert fnv1a64(b"foobar") == 0x85944171F73967E8

    def test_equal_canonicals_equal_hashes(self):
        a = canonicalize("http://example.com:80/x")
        b = canonicalize("http://EXAMPLE.com/x")
        assert url_hash(a) == url_hash(b)

    @given(st.binary(max_size=64))
    def test_stays_in_64_bits(self, data):
        assert 0 <= fnv1a64(data) < 2**64


class TestMerge:
    def test_disjoint_lists_union(self):
        google = [make_srr("google", i, f"http://g{i}.example.com/") for i in (1, 2, 3)]
        bing = [make_srr("bing", i, f"http://b{i}.example.com/") for i in (1, 2, 3)]
        merged = merge([google, bing])
        assert len(merged) == 6
        assert all(len(r.sources) == 1 for r in merged)

    def test_cross_engine_duplicate_collapses(self):
        google = [make_srr("google", 1, "http://dup.example.com/page", title="Google title")]
        bing = [
            make_srr("bing", i, f"http://b{i}.example.com/") for i in (1, 2, 3)
        ] + [make_srr("bing", 4, "http://dup.example.com/page/", title="Bing title")]
        merged = merge([google, bing])
        dup = next(r for r in merged if str(r.canonical) == "http://dup.example.com/page")
        assert sorted(dup.sources) == [("bing", 4), ("google", 1)]
        assert dup.title == "Google title"

    def test_rank_tie_takes_lexicographically_smaller_engine(self):
        google = [make_srr("google", 1, "http://dup.example.com/", title="from google")]
        bing = [make_srr("bing", 1, "http://dup.example.com/", title="from bing")]
        merged = merge([google, bing])
        assert len(merged) == 1
        assert merged[0].title == "from bing"

    def test_hash_collision_keeps_both_pages(self):
        lists = [[
            make_srr("google", 1, "http://one.example.com/"),
            make_srr("google", 2, "http://two.example.com/"),
        ]]
        merged = merge(lists, hash_fn=lambda c: 42)  # force every key to collide
        assert len(merged) == 2
        assert {str(r.canonical) for r in merged} == {
            "http://one.example.com/",
            "http://two.example.com/",
        }

    def test_round_robin_interleaving_order(self):
        google = [make_srr("google", i, f"http://g{i}.example.com/") for i in (1, 2)]
        bing = [make_srr("bing", i, f"http://b{i}.example.com/") for i in (1, 2)]
        merged = merge([google, bing])
        hosts = [r.canonical.host for r in merged]
        assert hosts == ["g1.example.com", "b1.example.com", "g2.example.com", "b2.example.com"]

    def test_stored_hash_matches_fnv_of_serialization(self):
        merged = merge([[make_srr("google", 1, "http://example.com/a?x=1")]])
        record = merged[0]
        assert record.url_hash == fnv1a64(str(record.canonical).encode("utf-8"))


def _random_lists(draw_urls, n_engines=2):
    """Build per-engine SRR lists from a pool with seeded duplicates."""
    lists = []
    for e in range(n_engines):
        engine = f"engine{e}"
        urls = draw_urls[e]
        lists.append([make_srr(engine, i + 1, url) for i, url in enumerate(urls)])
    return lists


@st.composite
def per_engine_url_lists(draw):
    pool = draw(
        st.lists(
            st.integers(min_value=0, max_value=30).map(
                lambda i: f"http://site{i}.example.com/p{i % 7}"
            ),
            min_size=1,
            max_size=50,
            unique=True,
        )
    )
    lists = []
    for _ in range(draw(st.integers(min_value=1, max_value=3))):
        subset = draw(st.lists(st.sampled_from(pool), max_size=50, unique=True))
        lists.append(subset)
    return lists


class TestMergeProperties:
    @given(per_engine_url_lists())
    @settings(max_examples=60)
    def test_no_duplicate_canonicals_and_preservation(self, url_lists):
        lists = _random_lists(url_lists, n_engines=len(url_lists))
        merged = merge(lists)

        canonicals = [str(r.canonical) for r in merged]
        assert len(canonicals) == len(set(canonicals))

        input_pairs = sorted(
            (srr.engine_id, srr.source_rank) for lst in lists for srr in lst
        )
        output_pairs = sorted(pair for r in merged for pair in r.sources)
        assert input_pairs == output_pairs

        assert len(merged) <= sum(len(lst) for lst in lists)

    @given(per_engine_url_lists())
    @settings(max_examples=60)
    def test_idempotent(self, url_lists):
        lists = _random_lists(url_lists, n_engines=len(url_lists))
        merged = merge(lists)
        # feed the merged output back as a single list of its representatives
        representatives = [
            make_srr(engine, rank, str(record.canonical), title=record.title)
            for record in merged
            for engine, rank in [min(record.sources, key=lambda s: (s[1], s[0]))]
        ]
        again = merge([representatives])
        assert [str(r.canonical) for r in again] == [str(r.canonical) for r in merged]
