import random

import pytest

from sketchlet import (build_index, compile_simple_query, evaluate,
                       evaluate_bruteforce, parse_cql)
from sketchlet.errors import (CorpusTooLarge, InvalidRegex, QuerySyntaxError,
                              UnknownAttribute)

from .conftest import AMOUNT_PATTERN
from .gens import corpus_of, random_corpus, random_query


def both(cc, query, scope=None):
    """Evaluate through both routes and insist they agree exactly."""
    fast = evaluate(cc, query, scope)
    slow = evaluate_bruteforce(cc, query, scope)
    assert fast == slow, query
    return fast


def spans(matches):
    return [(m.start, m.end) for m in matches]


# -- parsing ---------------------------------------------------------------

@pytest.mark.parametrize("bad", [
    "", "[", "[lemma=", '[lemma="x"', "(", '([lemma="x"]', '[lemma="x"])',
    "[lemma]", '[lemma="x" tag="y"]', '[]{2,1}', '[]{,2}', "?", "|",
    '0:[lemma="x"]', '1:1:[lemma="x"]', '[lemma=="x"]', "[&]",
    '1:[lemma="x"] 1:[lemma="y"]',  # duplicate label in one branch
])
def test_syntax_errors(bad):
    with pytest.raises(QuerySyntaxError):
        parse_cql(bad)


def test_syntax_error_carries_position():
    with pytest.raises(QuerySyntaxError) as err:
        parse_cql('[lemma=')
    assert err.value.position == 7
    assert "position 7" in str(err.value)


def test_unknown_attribute():
    with pytest.raises(UnknownAttribute):
        parse_cql('[case="upper"]')


def test_bad_regex_rejected():
    for q in ('[word="(?i)x"]', '[word="(a)\\1"]', '[word="["]'):
        with pytest.raises(InvalidRegex):
            parse_cql(q)


def test_duplicate_label_allowed_across_branches():
    # the same label may recur in different alternatives
    parse_cql('(1:[lemma="a"]) | (1:[lemma="b"])')


def test_escaped_quote_inside_pattern():
    ast = parse_cql('[word="\\""]')
    assert ast is not None


# -- frozen results on the toy corpus --------------------------------------

def test_single_lemma(toy_cc):
    assert [m.start for m in both(toy_cc, '[lemma="amount"]')] == [11, 17, 23]


def test_tag_regex(toy_cc):
    assert [m.start for m in both(toy_cc, '[tag="N.*"]')] == \
        [1, 4, 6, 8, 11, 13, 17, 19, 22, 23]
    assert [m.start for m in both(toy_cc, '[tag="V.*"]')] == [2, 7, 14, 20, 24]


def test_empty_brackets_match_everything(toy_cc):
    assert len(both(toy_cc, '[]')) == 26


def test_negation(toy_cc):
    assert len(both(toy_cc, '[tag!="SENT"]')) == 21
    assert [m.start for m in both(toy_cc, '[lemma="amount" & tag="NNS"]')] \
        == [17]
    assert [m.start for m in both(toy_cc, '[lemma="amount" | lemma="water"]')] \
        == [11, 13, 17, 23]


def test_amount_pattern(toy_cc):
    got = both(toy_cc, AMOUNT_PATTERN)
    assert spans(got) == [(11, 14), (17, 20), (22, 24)]


def test_determiner_noun_sequences(toy_cc):
    got = both(toy_cc, '[tag="DT"] [tag="N.*"]+')
    assert spans(got) == [(0, 2), (3, 5), (10, 12)]


def test_matches_confined_to_sentence(toy_cc):
    # offsets 5 and 6 are adjacent but in different sentences
    assert both(toy_cc, '[word="."] [word="Seawater"]') == []
    # offsets 9 and 10 are adjacent but in different documents
    assert both(toy_cc, '[word="."] [word="The"]') == []


def test_scope_restriction(toy_cc):
    scope = frozenset({0})
    assert [m.start for m in both(toy_cc, '[tag="N.*"]', scope)] == \
        [1, 4, 6, 8]
    assert both(toy_cc, '[lemma="amount"]', frozenset()) == []


def test_captures(toy_cc):
    got = both(toy_cc, '1:[tag="DT"] 2:[tag="N.*"]')
    assert [(m.capture(1), m.capture(2)) for m in got] == \
        [(0, 1), (3, 4), (10, 11)]


def test_quantified_label_binds_last_repetition(toy_cc):
    got = both(toy_cc, '(1:[tag="N.*"])+')
    by_span = {(m.start, m.end): m.capture(1) for m in got}
    # "Rainfall amount" is two nouns: greedy span (22, 24), label on 23
    assert by_span[(22, 24)] == 23


def test_first_alternative_wins_per_span(toy_cc):
    got = both(toy_cc, '([tag="DT"]) | (1:[tag="DT"])')
    assert all(m.captures == () for m in got)
    flipped = both(toy_cc, '(1:[tag="DT"]) | ([tag="DT"])')
    assert all(m.capture(1) == m.start for m in flipped)


def test_optional_quantifier(toy_cc):
    # every distinct span is reported: with and without the optional token
    got = both(toy_cc, '[lemma="amount"] [word="of"]?')
    assert spans(got) == [(11, 12), (11, 13), (17, 18), (17, 19), (23, 24)]


def test_zero_width_matches_dropped(toy_cc):
    assert both(toy_cc, '[lemma="zzz"]*') == []
    assert both(toy_cc, '[lemma="zzz"]{0,3}') == []


def test_brace_quantifiers(toy_cc):
    assert spans(both(toy_cc, '[tag="N.*"]{2}')) == [(22, 24)]
    got = both(toy_cc, '[tag!="SENT"]{3,}')
    assert (0, 5) in spans(got) and (10, 15) in spans(got)


def test_exact_one_brace_equals_plain(toy_cc):
    for q in ('[tag="N.*"]', '[lemma="amount"] [word="of"]'):
        assert both(toy_cc, "(%s){1,1}" % q) == both(toy_cc, q)


def test_nullable_group_repeat_equals_plus(toy_cc):
    # repetitions must consume input, so ([x]?)+ collapses to [x]+
    assert both(toy_cc, '([tag="N.*"]?)+') == both(toy_cc, '[tag="N.*"]+')


def test_alternation_commutes_on_spans(toy_cc):
    a = spans(both(toy_cc, '([tag="DT"] [tag="N.*"]) | ([tag="N.*"] [tag="V.*"])'))
    b = spans(both(toy_cc, '([tag="N.*"] [tag="V.*"]) | ([tag="DT"] [tag="N.*"])'))
    assert sorted(a) == sorted(b)


def test_in_bracket_ops_equal_precedence(toy_cc):
    # a & b | c groups as (a & b) | c: left associative, no precedence
    got = both(toy_cc, '[lemma="amount" & tag="NNS" | lemma="water"]')
    assert [m.start for m in got] == [13, 17]


def test_group_alternation_inside_sequence():
    cc = build_index(corpus_of(
        "the/DT/the geological/JJ/geologic time/NN/time scale/NN/scale "
        "./SENT/. | a/DT/a geologic/JJ/geologic timescale/NN/timescale "
        "./SENT/."))
    q = ('[lemma="geologic.*"] '
         '(([lemma="timescale"]) | ([lemma="time"] [lemma="scale"]))')
    assert spans(both(cc, q)) == [(1, 4), (6, 8)]


def test_simple_query_kinds(toy_cc):
    cases = [
        ("lemma", "amount", [11, 17, 23]),
        ("word", "amounts", [17]),
        ("word", ".", [5, 9, 15, 21, 25]),  # regex metachar escaped
        ("phrase", "SEAWATER CONTAINS", [6]),
        ("simple", "the amount", [10]),
        ("character", "ater", [6, 13]),
    ]
    for kind, text, starts in cases:
        ast = compile_simple_query(kind, text)
        assert [m.start for m in both(toy_cc, ast)] == starts, (kind, text)


def test_simple_query_rejects_junk():
    with pytest.raises(QuerySyntaxError):
        compile_simple_query("phrase", "   ")
    with pytest.raises(QuerySyntaxError):
        compile_simple_query("nope", "x")


def test_bruteforce_guard(toy_cc, monkeypatch):
    from sketchlet import cql
    monkeypatch.setattr(cql, "BRUTEFORCE_MAX_TOKENS", 10)
    with pytest.raises(CorpusTooLarge):
        evaluate_bruteforce(toy_cc, '[]')


def test_evaluate_accepts_ast_or_text(toy_cc):
    ast = parse_cql('[lemma="amount"]')
    assert evaluate(toy_cc, ast) == evaluate(toy_cc, '[lemma="amount"]')


# -- randomized cross-checks (small here; the big run is in acceptance) ----

def test_random_equivalence_quick():
    rng = random.Random(20260816)
    cc = None
    for trial in range(150):
        if trial % 10 == 0:
            cc = build_index(random_corpus(rng, max_tokens=80))
        query = random_query(rng)
        try:
            ast = parse_cql(query)
        except QuerySyntaxError:
            continue
        assert evaluate(cc, ast) == evaluate_bruteforce(cc, ast), query


def test_random_scope_monotone():
    rng = random.Random(7)
    for _ in range(30):
        cc = build_index(random_corpus(rng, max_tokens=60))
        query = random_query(rng, depth=2)
        full = {(m.start, m.end) for m in evaluate(cc, query)}
        docs = frozenset(rng.sample(range(cc.doc_count),
                                    rng.randint(0, cc.doc_count)))
        sub = {(m.start, m.end) for m in evaluate(cc, query, docs)}
        assert sub <= full
