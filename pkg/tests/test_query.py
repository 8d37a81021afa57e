"""Query normalization, classification, and synonym expansion."""

import pytest
from hypothesis import given, strategies as st

from serpfuse.errors import EmptyQuery, ThesaurusUnavailable
from serpfuse.query import (
    Query,
    QueryKind,
    RemoteThesaurus,
    Thesaurus,
    classify,
    expand,
    normalize,
    tokenize,
)


class TestNormalize:
    def test_tail_query_with_messy_whitespace(self):
        q = normalize("  Local   Computer Shop ")
        assert q.terms == ("local", "computer", "shop")
        assert q.kind is QueryKind.TAIL

    def test_single_word_is_head(self):
        q = normalize("Alcoholism")
        assert q.terms == ("alcoholism",)
        assert q.kind is QueryKind.HEAD

    def test_punctuation_only_raises(self):
        with pytest.raises(EmptyQuery):
            normalize("   !!!  ")

    def test_punctuation_stripped_but_internal_hyphen_kept(self):
        q = normalize("E-commerce, tips!")
        assert q.terms == ("e-commerce", "tips")

    def test_leading_and_trailing_hyphens_dropped(self):
        assert normalize("-dash- --x--").terms == ("dash", "x")

    def test_expansions_start_empty(self):
        assert normalize("alcoholism").expansions == {}

    @given(st.text(max_size=60))
    def test_idempotent(self, raw):
        try:
            q = normalize(raw)
        except EmptyQuery:
            return
        again = normalize(" ".join(q.terms))
        assert again.terms == q.terms
        assert again.kind == q.kind

    @given(st.text(max_size=60))
    def test_terms_are_clean(self, raw):
        for token in tokenize(raw):
            assert token == token.lower()
            assert token.strip() == token
            assert " " not in token


class TestClassify:
    def test_one_word_head(self):
        assert classify(["computer"]) is QueryKind.HEAD

    def test_four_word_tail(self):
        assert classify(["cheap", "computer", "for", "student"]) is QueryKind.TAIL

    def test_two_word_boundary_is_head(self):
        assert classify(["local", "computer"]) is QueryKind.HEAD

    def test_three_word_boundary_is_tail(self):
        assert classify(["a", "b", "c"]) is QueryKind.TAIL

    @given(st.lists(st.sampled_from(["x", "yz", "word"]), min_size=1, max_size=8))
    def test_depends_only_on_count(self, terms):
        expected = QueryKind.HEAD if len(terms) <= 2 else QueryKind.TAIL
        assert classify(terms) is expected


class TestExpand:
    thesaurus = Thesaurus.from_entries({"alcoholism": ["dipsomania"]})

    def test_single_term_lookup(self):
        q = expand(normalize("alcoholism"), self.thesaurus)
        assert q.expansions == {"alcoholism": ("dipsomania",)}

    def test_multi_word_query_unchanged(self):
        q = normalize("local computer")
        assert expand(q, self.thesaurus) is q

    def test_absent_term_unchanged(self):
        q = normalize("zzzq")
        assert expand(q, self.thesaurus).expansions == {}

    def test_terms_and_kind_never_change(self):
        q = normalize("alcoholism")
        expanded = expand(q, self.thesaurus)
        assert expanded.terms == q.terms
        assert expanded.kind == q.kind


class TestThesaurus:
    def test_no_self_mapping(self):
        t = Thesaurus.from_entries({"cat": ["cat", "feline"]})
        assert t.lookup("cat") == ("feline",)

    def test_no_duplicate_synonyms(self):
        t = Thesaurus.from_entries({"cat": ["feline", "Feline", "feline"]})
        assert t.lookup("cat") == ("feline",)

    def test_lookup_is_case_insensitive(self):
        t = Thesaurus.from_entries({"Cat": ["feline"]})
        assert t.lookup("CAT") == ("feline",)

    def test_file_round_trip(self, tmp_path):
        path = tmp_path / "thesaurus.json"
        path.write_text('{"alcoholism": ["dipsomania", "drunkenness"]}', encoding="utf-8")
        t = Thesaurus.from_file(path)
        assert t.lookup("alcoholism") == ("dipsomania", "drunkenness")

    def test_remote_failure_degrades(self):
        remote = RemoteThesaurus("http://127.0.0.1:9/unreachable", timeout=0.2)
        with pytest.raises(ThesaurusUnavailable):
            remote.lookup("alcoholism")
