import pytest

from sketchlet import (build_index, keywords, keywords_tsv, wordlist,
                       wordlist_tsv)
from sketchlet.errors import (DomainError, EmptyScope, InvalidRegex,
                              UnknownAttribute)

from .gens import corpus_of


def rows(table):
    return [(r.key, r.freq) for r in table.rows]


def test_lemma_list(toy_cc):
    table = wordlist(toy_cc, "lemma", pos_filter="V.*")
    assert rows(table) == [("be", 1), ("contain", 1), ("escape", 1),
                           ("increase", 1), ("matter", 1)]
    assert table.total == 5


def test_word_vs_lc(toy_cc):
    words = dict(rows(wordlist(toy_cc, "word")))
    lcs = dict(rows(wordlist(toy_cc, "lc")))
    assert words["A"] == 1 and words["a"] == 1
    assert lcs["a"] == 2 and "A" not in lcs


def test_tag_list(toy_cc):
    table = wordlist(toy_cc, "tag", min_freq=5)
    assert rows(table) == [("NN", 9), ("SENT", 5)]


def test_sorting_freq_desc_then_key(toy_cc):
    table = wordlist(toy_cc, "lemma", regex="amount|of|be")
    assert rows(table) == [("amount", 3), ("of", 2), ("be", 1)]


def test_regex_is_anchored(toy_cc):
    assert rows(wordlist(toy_cc, "lemma", regex="amount")) == [("amount", 3)]
    assert rows(wordlist(toy_cc, "lemma", regex="amoun")) == []


def test_bigrams(toy_cc):
    table = wordlist(toy_cc, "lemma", n=2, regex="amount of")
    assert rows(table) == [("amount of", 2)]


def test_ngrams_do_not_cross_sentences(toy_cc):
    # ". seawater" would need to span the sentence break in doc1
    assert rows(wordlist(toy_cc, "lc", n=2, regex="\\. seawater")) == []


def test_pos_filter_applies_before_sliding():
    # nouns become adjacent after the determiner is dropped
    cc = build_index(corpus_of("the/DT/the dog/NN/dog barks/VBZ/bark "
                               "at/IN/at the/DT/the cat/NN/cat ./SENT/."))
    table = wordlist(cc, "lemma", n=2, pos_filter="N.*|V.*")
    assert rows(table) == [("bark cat", 1), ("dog bark", 1)]


def test_ngram_total_identity(toy_cc):
    # total equals sum over sentences of max(0, len - n + 1)
    for n in (1, 2, 3):
        table = wordlist(toy_cc, "lemma", n=n)
        expect = sum(max(0, len(s) - n + 1)
                     for doc in toy_cc.corpus.documents
                     for s in doc.sentences)
        assert table.total == expect, n


def test_ngram_total_identity_after_pos_filter(toy_cc):
    table = wordlist(toy_cc, "lemma", n=2, pos_filter="N.*")
    lens = []
    for doc in toy_cc.corpus.documents:
        for s in doc.sentences:
            lens.append(sum(1 for t in s if t.tag.startswith("N")))
    assert table.total == sum(max(0, ln - 1) for ln in lens)


def test_scope(toy_cc):
    table = wordlist(toy_cc, "lemma", scope=frozenset({0}), regex="amount")
    assert rows(table) == []
    table = wordlist(toy_cc, "lemma", scope=frozenset({2}))
    assert dict(rows(table))["amount"] == 1


def test_validation(toy_cc):
    with pytest.raises(UnknownAttribute):
        wordlist(toy_cc, "stem")
    with pytest.raises(DomainError):
        wordlist(toy_cc, "lemma", n=0)
    with pytest.raises(InvalidRegex):
        wordlist(toy_cc, "lemma", regex="(?i)x")


def test_keywords_against_self_is_flat(toy_cc):
    for row in keywords(toy_cc, None, toy_cc, None):
        assert row.score == 1.0


def test_keywords_focus_only_term(toy_cc):
    # "rainfall" appears once in doc3 (4 tokens) and nowhere else
    rows_ = keywords(toy_cc, frozenset({2}), toy_cc, frozenset({0, 1}))
    top = {r.key: r for r in rows_}
    assert top["rainfall"].freq_focus == 1 and top["rainfall"].freq_ref == 0
    assert top["rainfall"].fpm_focus == pytest.approx(1e6 / 4)
    assert top["rainfall"].score == pytest.approx((1e6 / 4 + 1) / 1)


def test_keywords_ordering(toy_cc):
    rows_ = keywords(toy_cc, frozenset({1}), toy_cc, frozenset({0}))
    scores = [r.score for r in rows_]
    assert scores == sorted(scores, reverse=True)
    # focus-only keys all rank above any shared key
    shared = [r.key for r in rows_ if r.freq_ref > 0]
    assert shared and all(r.score > rows_[-1].score or r is rows_[-1]
                          for r in rows_)


def test_keywords_smoothing_tames_scores():
    cc = build_index(corpus_of("rare/JJ/rare ./SENT/."))
    ref = build_index(corpus_of("other/JJ/other ./SENT/."))
    sharp = keywords(cc, None, ref, None, n_smooth=1.0)
    soft = keywords(cc, None, ref, None, n_smooth=100.0)
    assert sharp[0].score > soft[0].score


def test_keywords_empty_scope(toy_cc):
    with pytest.raises(EmptyScope):
        keywords(toy_cc, frozenset(), toy_cc, None)
    with pytest.raises(EmptyScope):
        keywords(toy_cc, None, toy_cc, frozenset())


def test_tsv_exports(toy_cc):
    out = wordlist_tsv(wordlist(toy_cc, "lemma", regex="amount|of"))
    assert out == "amount\t3\nof\t2\n"
    rows_ = keywords(toy_cc, frozenset({2}), toy_cc, frozenset({0, 1}))
    line = keywords_tsv(rows_).splitlines()[0]
    assert line.split("\t")[0] in ("rainfall", "matter", "matters")
    assert len(line.split("\t")) == 4
