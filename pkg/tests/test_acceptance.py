"""End-to-end checks of the headline behaviors, one test per guarantee.

The terminal summary prints one PASS/FAIL line per test here (see
conftest.pytest_terminal_summary).
"""

import dataclasses
import random
import time

import pytest
from fastapi.testclient import TestClient

from sketchlet import (Corpus, TextTypeFilter, build_index, compute_sketch,
                       default_grammar, evaluate, evaluate_bruteforce,
                       extract_krcs, freq_by_texttype, freq_node_forms,
                       keywords, load_index, logdice, parse_cql,
                       parse_vertical, resolve_scope, save_index, sketch_diff,
                       to_vertical)
from sketchlet.service import create_app

from .conftest import AMOUNT_PATTERN
from .gens import corpus_of, random_corpus, random_query

GRAMMAR = default_grammar()


# 1 -------------------------------------------------------------------------

def test_dual_route_equivalence_thousand_trials():
    rng = random.Random(0xC0FFEE)
    started = time.monotonic()
    cc = None
    for trial in range(1000):
        if trial % 10 == 0:
            cc = build_index(random_corpus(rng, max_tokens=200))
        query = random_query(rng, depth=3)
        ast = parse_cql(query)
        fast = evaluate(cc, ast)
        slow = evaluate_bruteforce(cc, ast)
        assert fast == slow, "trial %d: %s" % (trial, query)
    elapsed = time.monotonic() - started
    assert elapsed < 60.0, "equivalence run took %.1fs" % elapsed


# 2 -------------------------------------------------------------------------

def test_compound_and_partitive_noun_query(toy_cc):
    matches = evaluate(toy_cc, AMOUNT_PATTERN)
    forms = [" ".join(toy_cc.token_at(i).word
                      for i in range(m.start, m.end)) for m in matches]
    assert sorted(forms) == ["Rainfall amount", "amount of water",
                             "amounts of gas"]
    scope = resolve_scope(toy_cc, TextTypeFilter.make({"user": ["Expert"]}))
    assert evaluate(toy_cc, AMOUNT_PATTERN, scope) == []


# 3 -------------------------------------------------------------------------

def test_node_form_frequencies(toy_cc):
    matches = evaluate(toy_cc, '[lemma="amount"]')
    table = freq_node_forms(toy_cc, matches)
    assert [(r.key, r.freq) for r in table.rows] == \
        [("amount", 2), ("amounts", 1)]
    assert table.total == 3


# 4 -------------------------------------------------------------------------

def test_relative_frequency_percent(toy_cc):
    matches = evaluate(toy_cc, '[lemma="amount"]')
    rows = {r.key: r for r in freq_by_texttype(toy_cc, matches, "user").rows}
    assert rows["General public"].rel == pytest.approx(162.5, abs=1e-9)
    assert rows["Expert"].rel == 0.0
    # one-bucket corpus: the relative frequency is exactly 100
    cc = build_index(corpus_of("water/NN/water flows/VBZ/flow ./SENT/.",
                               "water/NN/water rises/VBZ/rise ./SENT/."))
    matches = evaluate(cc, '[lemma="water"]')
    table = freq_by_texttype(cc, matches, "user")
    assert [(r.key, r.rel) for r in table.rows] == [("Expert", 100.0)]


# 5 -------------------------------------------------------------------------

def test_association_score():
    assert logdice(1, 1, 1) == 14.0
    assert logdice(10, 100, 100) == pytest.approx(10.678, abs=1e-3)
    assert logdice(1, 10**6, 10**6) == pytest.approx(-5.93, abs=1e-2)
    rng = random.Random(5)
    for _ in range(100):
        f_x = rng.randint(2, 10**6)
        f_y = rng.randint(2, 10**6)
        f_xy = rng.randint(1, min(f_x, f_y) - 1)
        base = logdice(f_xy, f_x, f_y)
        assert logdice(7 * f_xy, 7 * f_x, 7 * f_y) == \
            pytest.approx(base, abs=1e-9)
        assert logdice(f_xy + 1, f_x, f_y) > base
        assert base <= 14.0


# 6 -------------------------------------------------------------------------

def test_definitional_relations_and_contexts(toy_cc):
    t = compute_sketch(toy_cc, GRAMMAR, "hydrograph")
    generic = {r.name: r for r in t.relations}["generic"]
    assert [(r.collocate, r.freq, r.score) for r in generic.rows] == \
        [("graph", 1, 14.0)]
    t = compute_sketch(toy_cc, GRAMMAR, "seawater")
    part = {r.name: r for r in t.relations}["part"]
    assert [(r.collocate, r.freq, r.score) for r in part.rows] == \
        [("sodium", 1, 14.0)]
    ks = extract_krcs(toy_cc, GRAMMAR, "hydrograph", relations=["generic"])
    doc1 = toy_cc.corpus.documents[0]
    assert ks[0].sentence == " ".join(t.word for t in doc1.sentences[0])
    assert ks[0].doc_id == "doc1"


# 7 -------------------------------------------------------------------------

def test_sketch_diff_classes(toy_cc):
    same = sketch_diff(toy_cc, GRAMMAR, "two-lemmas",
                       lemma_a="amount", lemma_b="amount")
    rows = [r for rel in same.relations for r in rel.rows]
    assert rows and not [r for r in rows if r.cls in ("a_only", "b_only")]
    forms = sketch_diff(toy_cc, GRAMMAR, "two-wordforms", lemma="amount",
                        form_a="amount", form_b="amounts")
    flat = {(rel.name, r.collocate): r.cls
            for rel in forms.relations for r in rel.rows}
    assert flat[("modifier", "large")] == "b_only"


# 8 -------------------------------------------------------------------------

def test_keyword_scores(toy_cc):
    assert all(r.score == 1.0 for r in keywords(toy_cc, None, toy_cc, None))

    # one hit in a 10000-token scope is exactly 100 per million
    filler = " ".join("x/NN/x" for _ in range(9999))
    focus = build_index(corpus_of("rareterm/NN/rareterm " + filler))
    ref = build_index(corpus_of("y/NN/y"))
    by_key = {r.key: r for r in keywords(focus, None, ref, None, n_smooth=1.0)}
    assert by_key["rareterm"].fpm_focus == 100.0
    assert by_key["rareterm"].score == 101.0
    by_key = {r.key: r
              for r in keywords(focus, None, ref, None, n_smooth=100.0)}
    assert by_key["rareterm"].score == 2.0


def test_keyword_scores_duplication_invariant(toy_corpus, toy_cc):
    doubled = []
    for doc in toy_corpus.documents:
        doubled.append(doc)
        meta = dataclasses.replace(doc.meta, doc_id=doc.meta.doc_id + "b")
        doubled.append(dataclasses.replace(doc, meta=meta))
    cc2 = build_index(Corpus(tuple(doubled)))
    ref = build_index(corpus_of("y/NN/y z/NN/z ./SENT/."))
    a = [(r.key, r.fpm_focus, r.fpm_ref, r.score)
         for r in keywords(toy_cc, None, ref, None)]
    b = [(r.key, r.fpm_focus, r.fpm_ref, r.score)
         for r in keywords(cc2, None, ref, None)]
    assert a == b  # per-million rates and scores identical, floats exact


# 9 -------------------------------------------------------------------------

def test_roundtrip_persistence(toy_corpus, tmp_path):
    assert parse_vertical(to_vertical(toy_corpus)) == toy_corpus

    rng = random.Random(99)
    corpus = random_corpus(rng, max_tokens=150)
    cc = build_index(corpus)
    path = str(tmp_path / "r.idx")
    save_index(cc, path)
    cc2 = load_index(path)
    checked = 0
    while checked < 50:
        query = random_query(rng, depth=2)
        assert evaluate(cc2, query) == evaluate(cc, query), query
        checked += 1


# 10 ------------------------------------------------------------------------

REPLAY_REQUESTS = [
    ("GET", "/api/corpus", None),
    ("GET", "/api/subcorpora", None),
    ("POST", "/api/search", {"query": {"lemma": "amount"}}),
    ("POST", "/api/search", {"query": {"cql": AMOUNT_PATTERN}, "window": 3}),
    ("POST", "/api/search", {"query": {"phrase": "amount of water"}}),
    ("POST", "/api/search", {"query": {"word": "Seawater"}}),
    ("POST", "/api/search", {"query": {"simple": "the amount"}}),
    ("POST", "/api/search", {"query": {"character": "ater"}}),
    ("POST", "/api/search", {"query": {"cql": "[]"},
                             "page": {"offset": 5, "limit": 10}}),
    ("POST", "/api/search", {"query": {"lemma": "amount"},
                             "filter": {"user": ["General public"]}}),
    ("POST", "/api/search", {"query": {"lemma": "amount"},
                             "subcorpus": "American English"}),
    ("POST", "/api/search", {"query": {"lemma": "amount"},
                             "context": {"lemma": "water", "window": 3}}),
    ("POST", "/api/freq", {"query": {"lemma": "amount"},
                           "group_by": "node_forms"}),
    ("POST", "/api/freq", {"query": {"lemma": "amount"},
                           "group_by": "texttype:user"}),
    ("POST", "/api/freq", {"query": {"cql": '[tag="N.*"]'},
                           "group_by": "texttype:year"}),
    ("POST", "/api/sketch", {"lemma": "amount"}),
    ("POST", "/api/sketch", {"lemma": "seawater", "min_freq": 1}),
    ("POST", "/api/sketchdiff", {"mode": "two-wordforms", "lemma": "amount",
                                 "form_a": "amount", "form_b": "amounts"}),
    ("POST", "/api/wordlist", {"attr": "lemma", "pos_filter": "V.*"}),
    ("POST", "/api/keywords", {
        "focus": {"filter": {"user": ["General public"]}},
        "ref": {"filter": {"user": ["Expert"]}}}),
]


def test_service_deterministic_replay(toy_corpus, tmp_path):
    path = str(tmp_path / "svc.idx")
    save_index(build_index(toy_corpus), path)

    def run_all(client):
        out = []
        for method, url, payload in REPLAY_REQUESTS:
            if method == "GET":
                r = client.get(url)
            else:
                r = client.post(url, json=payload)
            assert r.status_code == 200, (url, r.status_code)
            out.append(r.content)
        return out

    first = run_all(TestClient(create_app(index_path=path)))
    second = run_all(TestClient(create_app(index_path=path)))
    assert len(first) == 20
    assert first == second  # byte-identical across fresh loads


def test_service_pagination_concatenates(toy_corpus):
    client = TestClient(create_app(cc=build_index(toy_corpus)))
    whole = client.post("/api/search", json={"query": {"cql": "[]"}}).json()
    paged = []
    offset = 0
    while True:
        r = client.post("/api/search", json={
            "query": {"cql": "[]"},
            "page": {"offset": offset, "limit": 4}}).json()
        if not r["lines"]:
            break
        paged.extend(r["lines"])
        offset += 4
    assert paged == whole["lines"]
    assert whole["total"] == len(paged) == 26


# 11 ------------------------------------------------------------------------

def _synthetic_vertical(n_docs=1000, sents_per_doc=100, sent_len=10) -> str:
    words = ["water", "river", "flows", "the", "of", "erosion", "rock",
             "deltas", "sediment", "basin"]
    tags = ["NN", "NN", "VBZ", "DT", "IN", "NN", "NN", "NNS", "NN", "NN"]
    lines = []
    k = 0
    for d in range(n_docs):
        lines.append('<doc id="s%d" domain_code="2.1" domain_label="Hydrology" '
                     'user="Expert" variant="British" genre="article" '
                     'editor="scholar" year="%d" country="UK">'
                     % (d, 1980 + d % 30))
        for _ in range(sents_per_doc):
            lines.append("<s>")
            for _ in range(sent_len):
                w = words[k % 10]
                lines.append("%s\t%s\t%s" % (w, tags[k % 10], w.lower()))
                k += 1
            lines.append("</s>")
        lines.append("</doc>")
    return "\n".join(lines) + "\n"


def test_large_corpus_performance(tmp_path):
    text = _synthetic_vertical()
    started = time.monotonic()
    corpus = parse_vertical(text)
    cc = build_index(corpus)
    save_index(cc, str(tmp_path / "big.idx"))
    build_elapsed = time.monotonic() - started
    assert corpus.token_count == 1_000_000
    assert build_elapsed < 30.0, "compile took %.1fs" % build_elapsed

    query = parse_cql('[tag="DT"] [tag="IN"] [tag="NN"]')
    started = time.monotonic()
    matches = evaluate(cc, query)
    query_elapsed = time.monotonic() - started
    assert matches  # the cycle produces "the of erosion" sequences
    assert query_elapsed < 0.5, "query took %.3fs" % query_elapsed
