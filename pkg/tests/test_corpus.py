import string
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, strategies as st

from factorspace.corpus import (
    DecodeError, DelimiterRule, EmptyInputError, EmptyVocabularyError, TokenStream,
    build_vocabulary, filter_terms, split_records, tokenize, top_terms,
)


def test_split_two_records():
    rs = split_records(b"first text\n-----\nsecond text\n")
    assert len(rs) == 2
    assert rs.texts == ["first text\n", "second text\n"]


def test_split_without_delimiter_is_one_record():
    rs = split_records(b"just one\nrecord here\n")
    assert len(rs) == 1


def test_split_round_trip_is_byte_identical():
    raw = (b" \n Title: A\n-----\n\n\n Title: B \xa9 1997\r\n-----\r\n"
           b"Title: C\n-----\n   \n")
    rs = split_records(raw)
    assert len(rs) == 3
    assert rs.to_bytes() == raw


def test_split_leading_blank_and_repeated_delimiters():
    raw = b"\n-----\n-----\nbody\n-----\n-----\n"
    rs = split_records(raw)
    assert len(rs) == 1
    assert rs.to_bytes() == raw


def test_split_by_line_count():
    raw = b"a\nb\nc\nd\ne\n"
    rs = split_records(raw, DelimiterRule(count=2))
    assert rs.texts == ["a\nb\n", "c\nd\n", "e\n"]
    assert rs.to_bytes() == raw
    assert len(split_records(raw, "count:5")) == 1


def test_split_errors():
    with pytest.raises(EmptyInputError):
        split_records(b"\n-----\n  \n")
    with pytest.raises(DecodeError) as exc:
        split_records(b"ok text \xff\xfe more", encoding="utf-8")
    assert exc.value.offset == 8


def test_record_ids_unique_and_ordered():
    rs = split_records(b"a\n-----\nb\n-----\nc\n", prefix="mm")
    assert rs.ids == ["mm000001", "mm000002", "mm000003"]


def test_tokenize_sentence():
    assert tokenize("Add zzzucchini, peppers and onion.") == [
        "add", "zzzucchini", "peppers", "and", "onion"]


def test_tokenize_empty():
    assert tokenize("") == []


def test_tokenize_ingredient_line():
    # "1/4 c  Olive oil": "1" and "4" contain digits, "/" splits
    assert tokenize("1/4 c  Olive oil") == ["c", "olive", "oil"]


def test_tokenize_drops_accented_and_digit_tokens():
    assert tokenize("Crème brûlée with Life5 and 350F") == ["with", "and"]
    # combining accent keeps the run together, so the whole word goes
    assert tokenize("cafe\u0301 au lait") == ["au", "lait"]


def test_tokenize_hyphen_apostrophe_split():
    assert tokenize("flat-leaf parsley; don't") == ["flat", "leaf", "parsley", "don", "t"]


def test_tokenize_control_byte_is_separator():
    assert tokenize("\xa9 1997 Lifetime") == ["lifetime"]


@given(st.text())
def test_tokens_obey_character_rules(text):
    for tok in tokenize(text):
        assert tok
        assert set(tok) <= set(string.ascii_lowercase)


@given(st.text())
def test_tokenize_idempotent_on_joined_output(text):
    toks = tokenize(text)
    assert tokenize(" ".join(toks)) == toks


def test_vocabulary_counts_and_ranks():
    v = build_vocabulary([["a", "b", "a"], ["b", "a"]])
    assert [(e.term, e.frequency, e.rank) for e in v] == [("a", 3, 1), ("b", 2, 2)]


def test_vocabulary_ties_lexicographic():
    v = build_vocabulary([TokenStream("1", ("y",)), TokenStream("2", ("x",))])
    assert v.terms == ["x", "y"]
    assert [e.rank for e in v] == [1, 2]


def test_vocabulary_empty():
    with pytest.raises(EmptyVocabularyError):
        build_vocabulary([[], []])


def test_vocabulary_matches_multinomial_generator():
    rng = np.random.default_rng(7)
    terms = [f"t{chr(97 + i)}" for i in range(20)]
    draws = rng.choice(len(terms), size=10_000, p=rng.dirichlet(np.ones(20)))
    tally = Counter(terms[i] for i in draws)
    chunks = np.array_split([terms[i] for i in draws], 37)
    v = build_vocabulary([list(c) for c in chunks])
    assert {e.term: e.frequency for e in v} == dict(tally)
    assert v.total == 10_000


@given(st.lists(st.lists(st.sampled_from("abcdefg"), max_size=8), min_size=1))
def test_vocabulary_total_equals_token_count(streams):
    if not any(streams):
        return
    v = build_vocabulary(streams)
    assert v.total == sum(map(len, streams))
    assert [e.rank for e in v] == list(range(1, len(v) + 1))
    assert all(a >= b for a, b in zip(v.frequencies, v.frequencies[1:]))


def test_top_terms():
    v = build_vocabulary([list("aaaaabbbbcccdde")])
    assert top_terms(v, len(v)) == v
    t = top_terms(v, 2)
    assert t.terms == ["a", "b"]
    assert [e.rank for e in t] == [1, 2]
    with pytest.raises(IndexError):
        top_terms(v, 0)
    with pytest.raises(IndexError):
        top_terms(v, 6)


def test_top_terms_on_zipf_vocabulary_is_monotone():
    ranks = np.arange(1, 3001)
    freqs = np.maximum(1, np.round(1e5 / ranks)).astype(int)
    streams = [[f"w{r:05d}"] * int(f) for r, f in zip(ranks, freqs)]
    full = build_vocabulary(streams)
    top = top_terms(full, 1000)
    assert top.entries[-1].frequency >= full.entries[1000].frequency
    assert all(a >= b for a, b in zip(top.frequencies, top.frequencies[1:]))


def test_filter_terms_by_length():
    v = build_vocabulary([["a", "ab", "abc", "abc", "abcd"]])
    assert filter_terms(v, 3).terms == ["abc", "abcd"]
