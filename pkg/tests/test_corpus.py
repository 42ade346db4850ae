from datetime import date

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from moodmarket.corpus import (
    Corpus,
    Document,
    Lexicon,
    contains_term,
    documents,
    load_corpus,
    load_lexicon,
    negative_ratio,
    term_frequency_report,
    tokenize,
    write_corpus,
)
from moodmarket.errors import CorpusFormatError, EmptyLexicon, InputError

D = date(2011, 8, 5)


def doc(text, d=D):
    return Document(d, text)


# ---- tokenize


def test_tokenize_punctuation_and_case():
    assert tokenize("S&P Downgrades U.S. Debt") == ["s", "p", "downgrades", "u", "s", "debt"]


def test_tokenize_empty():
    assert tokenize("") == []


def test_tokenize_unicode_dash():
    assert tokenize("stocks   fall—again") == ["stocks", "fall", "again"]


def test_tokenize_underscore_is_separator():
    assert tokenize("bear_market") == ["bear", "market"]


@given(st.text())
def test_tokenize_idempotent_on_joined_output(text):
    toks = tokenize(text)
    assert tokenize(" ".join(toks)) == toks


@given(st.text())
def test_tokens_nonempty_alphanumeric(text):
    for t in tokenize(text):
        assert t and t.isalnum()


# ---- negative_ratio

NEG = Lexicon.of("downgrade", "cut", "crisis", "losses")


def test_negative_ratio_all_negative():
    assert negative_ratio(doc("downgrade cut crisis losses"), NEG) == 1.0


def test_negative_ratio_none():
    assert negative_ratio(doc("markets rally strongly today"), NEG) == 0.0


def test_negative_ratio_hand_count():
    assert negative_ratio(doc("downgrade fears hit stocks"), Lexicon.of("downgrade")) == 0.25


def test_negative_ratio_no_tokens():
    assert negative_ratio(doc("--- !!!"), NEG) == 0.0


words = st.sampled_from(["downgrade", "cut", "crisis", "rally", "stocks", "bank", "fears"])


@given(st.lists(words, min_size=1, max_size=20), st.sets(words, min_size=1))
def test_negative_ratio_bounds(tokens, lex_terms):
    lex = Lexicon(frozenset(lex_terms))
    r = negative_ratio(doc(" ".join(tokens)), lex)
    assert 0.0 <= r <= 1.0
    if not set(tokens) & lex_terms:
        assert r == 0.0
    if set(tokens) <= lex_terms:
        assert r == 1.0


@given(st.lists(words, min_size=1, max_size=20), words)
def test_contains_implies_positive_ratio(tokens, w):
    d = doc(" ".join(tokens))
    if contains_term(d, w):
        assert negative_ratio(d, Lexicon.of(w)) > 0


# ---- contains_term


def test_contains_single_word():
    assert contains_term(doc("feeling bullish on tech"), "bullish")


def test_contains_phrase():
    assert contains_term(doc("dow jones falls"), "dow jones")


def test_contains_whole_token_only():
    assert not contains_term(doc("bullishness abounds"), "bullish")


def test_contains_phrase_requires_contiguity():
    assert not contains_term(doc("dow and jones"), "dow jones")


# ---- term_frequency_report


def test_term_frequency_hand_count():
    c = documents([(D, "cut cut crisis")])
    assert term_frequency_report(c, Lexicon.of("cut", "crisis"), D, D) == [("cut", 2), ("crisis", 1)]


def test_term_frequency_empty_window():
    c = documents([(D, "cut cut crisis")])
    rep = term_frequency_report(c, Lexicon.of("cut", "crisis"), date(2012, 1, 1), date(2012, 1, 2))
    assert rep == [("crisis", 0), ("cut", 0)]


def test_term_frequency_across_docs():
    c = documents([(D, "losses"), (D, "losses"), (D, "downgrade")])
    assert term_frequency_report(c, Lexicon.of("losses", "downgrade"), D, D) == [
        ("losses", 2),
        ("downgrade", 1),
    ]


def test_term_frequency_phrase_counts():
    c = documents([(D, "dow jones up, dow jones down"), (D, "dow")])
    rep = dict(term_frequency_report(c, Lexicon.of("dow jones", "dow"), D, D))
    assert rep == {"dow jones": 2, "dow": 3}


@settings(max_examples=50)
@given(
    st.lists(
        st.tuples(st.integers(0, 5), st.lists(words, min_size=1, max_size=12)),
        max_size=100,
    ),
    st.integers(0, 5),
    st.integers(0, 5),
)
def test_term_frequency_matches_brute_force(recs, a, b):
    lo, hi = sorted((a, b))
    days = [date(2011, 8, 1 + i) for i in range(6)]
    corpus = documents([(days[i], " ".join(toks)) for i, toks in recs])
    lex = Lexicon.of("downgrade", "cut", "crisis", "bank")
    expected = {t: 0 for t in lex.terms}
    for i, toks in recs:
        if lo <= i <= hi:
            for tok in toks:
                if tok in expected:
                    expected[tok] += 1
    rep = term_frequency_report(corpus, lex, days[lo], days[hi])
    assert dict(rep) == expected
    assert rep == sorted(rep, key=lambda kv: (-kv[1], kv[0]))


# ---- types


def test_document_rejects_blank_text():
    with pytest.raises(InputError):
        Document(D, "   ")


def test_lexicon_rejects_uppercase():
    with pytest.raises(InputError):
        Lexicon(frozenset({"Crisis"}))


def test_corpus_sorted_stable():
    c = documents([(date(2011, 8, 5), "b"), (date(2011, 8, 4), "a"), (date(2011, 8, 5), "c")])
    assert [d.text for d in c] == ["a", "b", "c"]


# ---- file I/O


def test_load_lexicon_normalizes(tmp_path):
    p = tmp_path / "lex.txt"
    p.write_text("downgrade\nCrisis\n  cut \n", encoding="utf-8")
    assert load_lexicon(p).terms == {"downgrade", "crisis", "cut"}


def test_load_lexicon_skips_comments(tmp_path):
    p = tmp_path / "lex.txt"
    p.write_text("# header\nloss\n", encoding="utf-8")
    assert load_lexicon(p).terms == {"loss"}


def test_load_lexicon_empty_is_error(tmp_path):
    p = tmp_path / "lex.txt"
    p.write_text("\n\n", encoding="utf-8")
    with pytest.raises(EmptyLexicon):
        load_lexicon(p)


def test_load_corpus_sorts(tmp_path):
    p = tmp_path / "c.jsonl"
    p.write_text(
        '{"date": "2011-08-05", "text": "second"}\n{"date": "2011-08-04", "text": "first"}\n',
        encoding="utf-8",
    )
    c = load_corpus(p)
    assert [d.date for d in c] == [date(2011, 8, 4), date(2011, 8, 5)]


def test_load_corpus_bad_date_reports_line(tmp_path):
    p = tmp_path / "c.jsonl"
    p.write_text('{"date": "2011-08-05", "text": "ok"}\n{"date": "2011-13-40", "text": "bad"}\n')
    with pytest.raises(CorpusFormatError) as exc:
        load_corpus(p)
    assert exc.value.line_no == 2
    assert "2" in str(exc.value)


def test_load_corpus_empty_file(tmp_path):
    p = tmp_path / "c.tsv"
    p.write_text("")
    assert len(load_corpus(p)) == 0


def test_load_corpus_tsv_with_source(tmp_path):
    p = tmp_path / "c.tsv"
    p.write_text("2011-08-05\tmarkets tumble\twire\n2011-08-04\tdebt talks\n")
    c = load_corpus(p)
    assert [(d.text, d.source) for d in c] == [("debt talks", None), ("markets tumble", "wire")]


@pytest.mark.parametrize("suffix", [".jsonl", ".tsv"])
def test_corpus_round_trip(tmp_path, suffix):
    c = Corpus(
        (
            Document(date(2011, 8, 4), 'quote "this" and tabs', "a"),
            Document(date(2011, 8, 5), "café crème", None),
        )
    )
    p = tmp_path / f"c{suffix}"
    write_corpus(c, p)
    assert load_corpus(p).documents == c.documents
