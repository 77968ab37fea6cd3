import pytest

from sketchlet import (build_index, context_filter, evaluate,
                       freq_by_texttype, freq_node_forms, freq_tsv, kwic,
                       kwic_tsv)
from sketchlet.errors import UnknownAttribute

from .conftest import AMOUNT_PATTERN
from .gens import corpus_of


def words(tokens):
    return [t.word for t in tokens]


def test_kwic_window(toy_cc):
    m = evaluate(toy_cc, AMOUNT_PATTERN)
    lines = kwic(toy_cc, m, window=2)
    assert words(lines[0].left) == ["The"]
    assert words(lines[0].node) == ["amount", "of", "water"]
    assert words(lines[0].right) == ["increases", "."]
    assert lines[0].doc_id == "doc2"


def test_kwic_crosses_sentences_not_documents(toy_cc):
    m = evaluate(toy_cc, '[word="Seawater"]')
    ln = kwic(toy_cc, m, window=3)[0]
    # left context reaches back into the previous sentence of the same doc
    assert words(ln.left) == ["a", "graph", "."]
    m = evaluate(toy_cc, '[word="The"]')
    ln = kwic(toy_cc, m, window=3)[0]
    # but never into the previous document
    assert words(ln.left) == []


def test_kwic_meta_attached(toy_cc):
    m = evaluate(toy_cc, '[word="Rainfall"]')
    ln = kwic(toy_cc, m, window=1)[0]
    assert ln.meta.user == "General public" and ln.meta.year == 1999


def test_context_filter(toy_cc):
    m = evaluate(toy_cc, '[lemma="amount"]')
    kept = context_filter(toy_cc, m, "water", 3)
    assert [(x.start, x.end) for x in kept] == [(11, 12)]
    # idempotent
    assert context_filter(toy_cc, kept, "water", 3) == kept


def test_context_filter_excludes_node_span(toy_cc):
    m = evaluate(toy_cc, AMOUNT_PATTERN)
    # "water" sits inside the span (11, 14), which must not count
    kept = context_filter(toy_cc, m, "water", 3)
    assert kept == []


def test_context_filter_unknown_lemma(toy_cc):
    m = evaluate(toy_cc, '[lemma="amount"]')
    assert context_filter(toy_cc, m, "zzz", 5) == []


def test_context_filter_respects_document_edge():
    cc = build_index(corpus_of("a/DT/a ./SENT/.", "b/NN/b ./SENT/."))
    m = evaluate(cc, '[word="b"]')
    # lemma "a" is adjacent by offset but in the previous document
    assert context_filter(cc, m, "a", 5) == []


def test_node_forms(toy_cc):
    m = evaluate(toy_cc, '[lemma="amount"]')
    table = freq_node_forms(toy_cc, m)
    assert [(r.key, r.freq) for r in table.rows] == \
        [("amount", 2), ("amounts", 1)]
    assert table.total == 3
    assert all(r.rel is None for r in table.rows)


def test_node_forms_multiword(toy_cc):
    m = evaluate(toy_cc, AMOUNT_PATTERN)
    table = freq_node_forms(toy_cc, m)
    assert [(r.key, r.freq) for r in table.rows] == \
        [("Rainfall amount", 1), ("amount of water", 1), ("amounts of gas", 1)]


def test_freq_by_texttype_user(toy_cc):
    m = evaluate(toy_cc, '[lemma="amount"]')
    table = freq_by_texttype(toy_cc, m, "user")
    rows = {r.key: r for r in table.rows}
    assert rows["General public"].freq == 3
    assert rows["General public"].rel == pytest.approx(162.5, abs=1e-12)
    assert rows["Expert"].freq == 0 and rows["Expert"].rel == 0.0
    assert table.total == 3


def test_freq_by_texttype_includes_zero_buckets(toy_cc):
    m = evaluate(toy_cc, '[word="Seawater"]')
    table = freq_by_texttype(toy_cc, m, "genre")
    assert [(r.key, r.freq) for r in table.rows] == \
        [("article", 1), ("website", 0)]


def test_freq_by_texttype_year_keys_are_ints(toy_cc):
    m = evaluate(toy_cc, '[tag="N.*"]')
    table = freq_by_texttype(toy_cc, m, "year")
    assert sorted(r.key for r in table.rows) == [1999, 2010, 2015]


def test_freq_by_texttype_weighted_rel_identity(toy_cc):
    # sum over buckets of (tokens_b / N) * rel_b is 100 for non-empty input
    m = evaluate(toy_cc, '[tag="V.*"]')
    for attr in ("user", "variant", "genre", "country", "year"):
        table = freq_by_texttype(toy_cc, m, attr)
        sizes = {}
        ds = toy_cc.doc_start
        for i, doc in enumerate(toy_cc.corpus.documents):
            v = doc.meta.attr(attr)
            sizes[v] = sizes.get(v, 0) + int(ds[i + 1] - ds[i])
        acc = sum(sizes[r.key] / toy_cc.token_count * r.rel
                  for r in table.rows)
        assert acc == pytest.approx(100.0, abs=1e-9)


def test_freq_by_texttype_rejects_unknown_attr(toy_cc):
    with pytest.raises(UnknownAttribute):
        freq_by_texttype(toy_cc, [], "flavour")


def test_empty_matches(toy_cc):
    assert kwic(toy_cc, [], 5) == []
    assert freq_node_forms(toy_cc, []).total == 0
    table = freq_by_texttype(toy_cc, [], "user")
    assert all(r.freq == 0 and r.rel == 0.0 for r in table.rows)


def test_kwic_tsv(toy_cc):
    m = evaluate(toy_cc, '[word="Rainfall"]')
    out = kwic_tsv(kwic(toy_cc, m, window=2))
    assert out == "doc3\t\tRainfall\tamount matters\n"
    assert kwic_tsv([]) == ""


def test_freq_tsv(toy_cc):
    m = evaluate(toy_cc, '[lemma="amount"]')
    out = freq_tsv(freq_by_texttype(toy_cc, m, "user"))
    assert out == "General public\t3\t162.5\nExpert\t0\t0\n"
    out = freq_tsv(freq_node_forms(toy_cc, m))
    assert out == "amount\t2\t\namounts\t1\t\n"
