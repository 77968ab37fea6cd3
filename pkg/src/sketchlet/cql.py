"""Token-level query language: parser, evaluator, brute-force oracle.

Grammar (whitespace between items is insignificant)::

    query    := alt
    alt      := seq ('|' seq)*
    seq      := item+
    item     := (label ':')? atom quant?
    atom     := '[' boolexpr? ']' | '(' alt ')'
    boolexpr := test (('&' | '|') test)*
    test     := attr ('=' | '!=') '"' regex '"'
    quant    := '?' | '*' | '+' | '{' m (',' n?)? '}'

Attributes are word, lemma, tag, lc. Regex values match the whole attribute
value (fullmatch). In-bracket '&' and '|' apply left to right with equal
precedence; at query level '|' binds loosest, so parenthesize alternations
that sit inside a longer sequence.

Evaluation semantics: matches never cross a sentence boundary; every
distinct (start, end) span is reported, overlapping and nested ones
included; spans that consume no token are dropped. A quantified subpattern
repetition always consumes at least one token, so ``([x]?)+`` equals
``[x]+``. Captures follow the first derivation in leftmost-greedy order
(alternatives tried left to right, quantifiers longest first).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import CorpusTooLarge, QuerySyntaxError, UnknownAttribute
from .index import CompiledCorpus, TOKEN_ATTRS, compile_value_regex

BRUTEFORCE_MAX_TOKENS = 100_000

QUERY_KINDS = ("cql", "lemma", "word", "phrase", "simple", "character")


# --- AST ------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class AttrTest:
    attr: str
    negated: bool
    pattern: str


@dataclass(frozen=True, slots=True)
class BoolOp:
    op: str  # '&' or '|'
    left: object
    right: object


@dataclass(frozen=True, slots=True)
class TokenPattern:
    expr: object | None  # None is the universal pattern []


@dataclass(frozen=True, slots=True)
class Label:
    n: int
    child: object


@dataclass(frozen=True, slots=True)
class Seq:
    children: tuple


@dataclass(frozen=True, slots=True)
class Alt:
    branches: tuple


@dataclass(frozen=True, slots=True)
class Quant:
    child: object
    min: int
    max: int | None  # None = unbounded (sentence length caps it anyway)


# NamedTuple rather than a dataclass: result sets can run to hundreds of
# thousands of spans and tuple construction is several times cheaper.
class MatchSpan(NamedTuple):
    """One query hit: absolute token offsets [start, end), plus captures.

    sent_index is document-local. captures holds (label, abs_offset) pairs
    sorted by label.
    """

    doc_index: int
    sent_index: int
    start: int
    end: int
    captures: tuple[tuple[int, int], ...] = ()

    def capture(self, n: int) -> int | None:
        for lbl, off in self.captures:
            if lbl == n:
                return off
        return None


# --- tokenizer / parser ---------------------------------------------------

_SIMPLE_TOKENS = {
    "[": "LBRACKET", "]": "RBRACKET", "(": "LPAREN", ")": "RPAREN",
    "|": "PIPE", "&": "AMP", "?": "QUEST", "*": "STAR", "+": "PLUS",
    "{": "LBRACE", "}": "RBRACE", ",": "COMMA", ":": "COLON",
}


def _tokenize(text: str):
    toks = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c == '"':
            j = i + 1
            buf = []
            while j < n and text[j] != '"':
                if text[j] == "\\" and j + 1 < n:
                    buf.append(text[j])
                    buf.append(text[j + 1])
                    j += 2
                else:
                    buf.append(text[j])
                    j += 1
            if j >= n:
                raise QuerySyntaxError("unterminated string", i)
            toks.append(("STRING", "".join(buf), i))
            i = j + 1
            continue
        if c == "!":
            if i + 1 < n and text[i + 1] == "=":
                toks.append(("NEQ", "!=", i))
                i += 2
                continue
            raise QuerySyntaxError("expected '=' after '!'", i)
        if c == "=":
            toks.append(("EQ", "=", i))
            i += 1
            continue
        if c in _SIMPLE_TOKENS:
            toks.append((_SIMPLE_TOKENS[c], c, i))
            i += 1
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(("INT", int(text[i:j]), i))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(("IDENT", text[i:j], i))
            i = j
            continue
        raise QuerySyntaxError("unexpected character %r" % c, i)
    toks.append(("EOF", None, n))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind):
        t = self.next()
        if t[0] != kind:
            raise QuerySyntaxError("expected %s" % kind, t[2])
        return t

    def parse_query(self):
        node, _ = self.parse_alt()
        t = self.peek()
        if t[0] != "EOF":
            raise QuerySyntaxError("unexpected %r" % str(t[1]), t[2])
        return node

    def parse_alt(self):
        node, labels = self.parse_seq()
        branches = [node]
        lsets = [labels]
        while self.peek()[0] == "PIPE":
            self.next()
            b, ls = self.parse_seq()
            branches.append(b)
            lsets.append(ls)
        if len(branches) == 1:
            return branches[0], lsets[0]
        return Alt(tuple(branches)), frozenset().union(*lsets)

    def parse_seq(self):
        items = []
        labels: set[int] = set()
        while self.peek()[0] in ("LBRACKET", "LPAREN", "INT"):
            node, ls = self.parse_item()
            dup = labels & ls
            if dup:
                raise QuerySyntaxError("label %d bound twice in one branch"
                                       % min(dup), self.peek()[2])
            labels |= ls
            items.append(node)
        if not items:
            t = self.peek()
            raise QuerySyntaxError("expected a token pattern or group", t[2])
        if len(items) == 1:
            return items[0], frozenset(labels)
        return Seq(tuple(items)), frozenset(labels)

    def parse_item(self):
        label = None
        t = self.peek()
        if t[0] == "INT":
            lpos = t[2]
            self.next()
            self.expect("COLON")
            label = int(t[1])
            if label < 1:
                raise QuerySyntaxError("label must be a positive integer", lpos)
        node, labels = self.parse_atom()
        if label is not None:
            if label in labels:
                raise QuerySyntaxError("label %d bound twice in one branch"
                                       % label, t[2])
            node = Label(label, node)
            labels = labels | {label}
        q = self.parse_quant()
        if q is not None:
            node = Quant(node, q[0], q[1])
        return node, frozenset(labels)

    def parse_atom(self):
        t = self.next()
        if t[0] == "LPAREN":
            node, labels = self.parse_alt()
            self.expect("RPAREN")
            return node, labels
        if t[0] != "LBRACKET":
            raise QuerySyntaxError("expected '[' or '('", t[2])
        if self.peek()[0] == "RBRACKET":
            self.next()
            return TokenPattern(None), frozenset()
        expr = self.parse_test()
        while self.peek()[0] in ("AMP", "PIPE"):
            op = "&" if self.next()[0] == "AMP" else "|"
            expr = BoolOp(op, expr, self.parse_test())
        self.expect("RBRACKET")
        return TokenPattern(expr), frozenset()

    def parse_test(self):
        t = self.expect("IDENT")
        attr = t[1]
        if attr not in TOKEN_ATTRS:
            raise UnknownAttribute("unknown token attribute %r" % attr)
        op = self.next()
        if op[0] not in ("EQ", "NEQ"):
            raise QuerySyntaxError("expected '=' or '!='", op[2])
        val = self.expect("STRING")
        compile_value_regex(val[1])  # validates; raises InvalidRegex
        return AttrTest(attr, op[0] == "NEQ", val[1])

    def parse_quant(self):
        t = self.peek()
        if t[0] == "QUEST":
            self.next()
            return (0, 1)
        if t[0] == "STAR":
            self.next()
            return (0, None)
        if t[0] == "PLUS":
            self.next()
            return (1, None)
        if t[0] != "LBRACE":
            return None
        self.next()
        m = self.expect("INT")[1]
        mx: int | None = m
        if self.peek()[0] == "COMMA":
            self.next()
            if self.peek()[0] == "INT":
                mx = self.next()[1]
                if mx < m:
                    raise QuerySyntaxError("quantifier max below min", t[2])
            else:
                mx = None
        self.expect("RBRACE")
        return (m, mx)


def parse_cql(text: str):
    """Parse query text to an AST; raises QuerySyntaxError with a character
    position, UnknownAttribute, or InvalidRegex."""
    return _Parser(text).parse_query()


def compile_simple_query(kind: str, text: str) -> str:
    """Render one of the simple query types as query-language text.

    lemma and word match the given form on that attribute; phrase and
    simple lowercase each whitespace-separated token and match lc;
    character finds the sequence anywhere inside a surface form.
    """
    if kind == "cql":
        return text
    if kind == "lemma":
        return '[lemma="%s"]' % re.escape(text)
    if kind == "word":
        return '[word="%s"]' % re.escape(text)
    if kind in ("phrase", "simple"):
        parts = text.split()
        if not parts:
            raise QuerySyntaxError("empty query", 0)
        return " ".join('[lc="%s"]' % re.escape(p.lower()) for p in parts)
    if kind == "character":
        return '[word=".*%s.*"]' % re.escape(text)
    raise QuerySyntaxError("unknown query kind %r" % kind, 0)


# --- evaluation (index-assisted) ------------------------------------------

_EMPTY: dict = {}


class _Ctx:
    def __init__(self, cc: CompiledCorpus):
        self.cc = cc
        self.ids = cc.ids

    def test_token(self, expr, off: int) -> bool:
        if isinstance(expr, AttrTest):
            mask = self.cc.regex_value_mask(expr.attr, expr.pattern)
            ok = bool(mask[int(self.ids[expr.attr][off])])
            return (not ok) if expr.negated else ok
        left = self.test_token(expr.left, off)
        if expr.op == "&":
            return left and self.test_token(expr.right, off)
        return left or self.test_token(expr.right, off)

    def expr_vec(self, expr, offs: np.ndarray) -> np.ndarray:
        if isinstance(expr, AttrTest):
            mask = self.cc.regex_value_mask(expr.attr, expr.pattern)
            ok = mask[self.ids[expr.attr][offs]]
            return ~ok if expr.negated else ok
        left = self.expr_vec(expr.left, offs)
        right = self.expr_vec(expr.right, offs)
        return (left & right) if expr.op == "&" else (left | right)

    def expr_offsets(self, expr) -> np.ndarray | None:
        """Superset of offsets where expr can hold, or None if unbounded."""
        if expr is None:
            return None
        if isinstance(expr, AttrTest):
            if expr.negated:
                return None
            mask = self.cc.regex_value_mask(expr.attr, expr.pattern)
            vids = np.flatnonzero(mask)
            if len(vids) == 0:
                return np.zeros(0, dtype=np.int64)
            parts = [self.cc.postings_for_id(expr.attr, int(v)) for v in vids]
            out = np.concatenate(parts).astype(np.int64)
            out.sort()
            return out
        a = self.expr_offsets(expr.left)
        b = self.expr_offsets(expr.right)
        if expr.op == "&":
            if a is None:
                return b
            if b is None:
                return a
            return np.intersect1d(a, b)
        if a is None or b is None:
            return None
        return np.union1d(a, b)


def _derivs(node, pos, limit, ctx):
    """All derivations of node starting at pos, as (end, captures), in
    leftmost-greedy preference order. Ends never exceed limit."""
    if isinstance(node, TokenPattern):
        if pos < limit and (node.expr is None or ctx.test_token(node.expr, pos)):
            yield pos + 1, _EMPTY
        return
    if isinstance(node, Label):
        for end, caps in _derivs(node.child, pos, limit, ctx):
            if end > pos:
                merged = dict(caps)
                merged[node.n] = pos
                yield end, merged
            else:
                yield end, caps
        return
    if isinstance(node, Seq):
        children = node.children

        def rec(i, p, caps):
            if i == len(children):
                yield p, caps
                return
            for e, c in _derivs(children[i], p, limit, ctx):
                yield from rec(i + 1, e, {**caps, **c} if c else caps)

        yield from rec(0, pos, _EMPTY)
        return
    if isinstance(node, Alt):
        for br in node.branches:
            yield from _derivs(br, pos, limit, ctx)
        return
    child, mn, mx = node.child, node.min, node.max

    def rec(p, k, caps):
        if mx is None or k < mx:
            for e, c in _derivs(child, p, limit, ctx):
                if e > p:  # a repetition must consume
                    yield from rec(e, k + 1, {**caps, **c} if c else caps)
        if k >= mn:
            yield p, caps

    yield from rec(pos, 0, _EMPTY)


def _nullable(node) -> bool:
    if isinstance(node, TokenPattern):
        return False
    if isinstance(node, Label):
        return _nullable(node.child)
    if isinstance(node, Seq):
        return all(_nullable(c) for c in node.children)
    if isinstance(node, Alt):
        return any(_nullable(b) for b in node.branches)
    return node.min == 0  # repetitions always consume


def _first_exprs(node):
    """Token-pattern exprs that can match a derivation's first consumed
    token; None when unconstrained."""
    if isinstance(node, TokenPattern):
        return None if node.expr is None else [node.expr]
    if isinstance(node, Label):
        return _first_exprs(node.child)
    if isinstance(node, Alt):
        acc = []
        for br in node.branches:
            f = _first_exprs(br)
            if f is None:
                return None
            acc.extend(f)
        return acc
    if isinstance(node, Seq):
        acc = []
        for ch in node.children:
            f = _first_exprs(ch)
            if f is None:
                return None
            acc.extend(f)
            if not _nullable(ch):
                return acc
        return acc
    return _first_exprs(node.child)


def _fixed_chain(node):
    """[(expr, label), ...] when node is a plain sequence of single token
    patterns (no quantifiers, groups or alternation); else None."""
    items = node.children if isinstance(node, Seq) else (node,)
    chain = []
    for it in items:
        label = None
        if isinstance(it, Label):
            label, it = it.n, it.child
        if not isinstance(it, TokenPattern):
            return None
        chain.append((it.expr, label))
    return chain


def _scope_filter(cc, cand, scope):
    if scope is None or len(cand) == 0:
        return cand
    docmask = np.zeros(cc.doc_count, dtype=bool)
    for d in scope:
        if 0 <= d < cc.doc_count:
            docmask[d] = True
    di = np.searchsorted(cc.doc_start, cand, side="right") - 1
    return cand[docmask[di]]


def _eval_fixed(cc, ctx, chain, scope, found):
    n = cc.token_count
    length = len(chain)
    best = None
    for i, (expr, _) in enumerate(chain):
        offs = ctx.expr_offsets(expr)
        if offs is not None and (best is None or len(offs) < len(best[1])):
            best = (i, offs)
    if best is None:
        cand = np.arange(0, n - length + 1, dtype=np.int64) if n >= length \
            else np.zeros(0, dtype=np.int64)
    else:
        i, offs = best
        cand = offs.astype(np.int64) - i
        cand = cand[(cand >= 0) & (cand + length <= n)]
    if len(cand) == 0:
        return
    ss = cc.sent_start
    si = np.searchsorted(ss, cand, side="right")
    se = np.searchsorted(ss, cand + (length - 1), side="right")
    cand = cand[si == se]
    cand = _scope_filter(cc, cand, scope)
    if len(cand) == 0:
        return
    ok = np.ones(len(cand), dtype=bool)
    for i, (expr, _) in enumerate(chain):
        if expr is not None:
            ok &= ctx.expr_vec(expr, cand + i)
    cand = cand[ok]
    labeled = [(i, lbl) for i, (_, lbl) in enumerate(chain) if lbl is not None]
    for s in cand.tolist():
        key = (s, s + length)
        if key not in found:
            found[key] = {lbl: s + i for i, lbl in labeled}


def _eval_general(cc, ctx, ast, scope, found):
    n = cc.token_count
    fexprs = _first_exprs(ast)
    cand = None
    if fexprs is not None:
        sets = []
        for ex in fexprs:
            offs = ctx.expr_offsets(ex)
            if offs is None:
                sets = None
                break
            sets.append(offs.astype(np.int64))
        if sets is not None:
            cand = np.unique(np.concatenate(sets)) if sets \
                else np.zeros(0, dtype=np.int64)
    if cand is None:
        cand = np.arange(n, dtype=np.int64)
    cand = _scope_filter(cc, cand, scope)
    if len(cand) == 0:
        return
    ss = cc.sent_start
    limits = ss[np.searchsorted(ss, cand, side="right")]
    for idx in range(len(cand)):
        start = int(cand[idx])
        limit = int(limits[idx])
        for end, caps in _derivs(ast, start, limit, ctx):
            if end > start:
                key = (start, end)
                if key not in found:
                    found[key] = caps
        # no cleanup needed; captures dicts are never mutated


def _eval_into(cc, ctx, ast, scope, found):
    if isinstance(ast, Alt):
        for br in ast.branches:
            _eval_into(cc, ctx, br, scope, found)
        return
    chain = _fixed_chain(ast)
    if chain is not None:
        _eval_fixed(cc, ctx, chain, scope, found)
    else:
        _eval_general(cc, ctx, ast, scope, found)


def evaluate(cc: CompiledCorpus, query, scope=None) -> list[MatchSpan]:
    """All sentence-confined matches of the query, sorted by (start, end).

    query is an AST or query text; scope is an optional set of document
    indexes. Spans are deduplicated on (start, end); captures come from the
    preferred derivation.
    """
    ast = parse_cql(query) if isinstance(query, str) else query
    if cc.token_count == 0:
        return []
    ctx = _Ctx(cc)
    found: dict[tuple[int, int], dict] = {}
    _eval_into(cc, ctx, ast, scope, found)
    if not found:
        return []
    keys = sorted(found)
    # resolve document and sentence for all spans in one vectorized pass
    starts = np.fromiter((k[0] for k in keys), dtype=np.int64, count=len(keys))
    docs = np.searchsorted(cc.doc_start, starts, side="right") - 1
    local = (np.searchsorted(cc.sent_start, starts, side="right") - 1
             - cc.doc_first_sent[docs])
    dl = docs.tolist()
    ll = local.tolist()
    spans = []
    for i, (s, e) in enumerate(keys):
        caps = found[(s, e)]
        spans.append(MatchSpan(dl[i], ll[i], s, e,
                               tuple(sorted(caps.items())) if caps else ()))
    return spans


# --- brute-force oracle ----------------------------------------------------
#
# Deliberately separate from the index path: works straight off the token
# records with re.fullmatch, trying every (sentence, start, end) and testing
# acceptance by recursive descent. Used to cross-check evaluate().

def _bf_test(expr, tok) -> bool:
    if expr is None:
        return True
    if isinstance(expr, AttrTest):
        ok = re.fullmatch(expr.pattern, getattr(tok, expr.attr)) is not None
        return (not ok) if expr.negated else ok
    left = _bf_test(expr.left, tok)
    if expr.op == "&":
        return left and _bf_test(expr.right, tok)
    return left or _bf_test(expr.right, tok)


def _bf_derivs(node, pos, sent):
    if isinstance(node, TokenPattern):
        if pos < len(sent) and _bf_test(node.expr, sent[pos]):
            yield pos + 1, {}
        return
    if isinstance(node, Label):
        for m, c in _bf_derivs(node.child, pos, sent):
            if m > pos:
                c = dict(c)
                c[node.n] = pos
            yield m, c
        return
    if isinstance(node, Seq):
        chs = node.children

        def rec(i, p, caps):
            if i == len(chs):
                yield p, caps
                return
            for m, c in _bf_derivs(chs[i], p, sent):
                yield from rec(i + 1, m, {**caps, **c})

        yield from rec(0, pos, {})
        return
    if isinstance(node, Alt):
        for br in node.branches:
            yield from _bf_derivs(br, pos, sent)
        return
    child, mn, mx = node.child, node.min, node.max

    def rec(p, k, caps):
        if mx is None or k < mx:
            for m, c in _bf_derivs(child, p, sent):
                if m > p:
                    yield from rec(m, k + 1, {**caps, **c})
        if k >= mn:
            yield p, caps

    yield from rec(pos, 0, {})


def _bf_exact(node, pos, end, sent):
    """Captures if node consumes exactly [pos, end), else None; first
    derivation in the same preference order as the evaluator."""
    if isinstance(node, TokenPattern):
        if end == pos + 1 and pos < len(sent) and _bf_test(node.expr, sent[pos]):
            return {}
        return None
    if isinstance(node, Label):
        r = _bf_exact(node.child, pos, end, sent)
        if r is None:
            return None
        if end > pos:
            r = dict(r)
            r[node.n] = pos
        return r
    if isinstance(node, Seq):
        chs = node.children

        def rec(i, p):
            if i == len(chs):
                return {} if p == end else None
            for m, c in _bf_derivs(chs[i], p, sent):
                if m > end:
                    continue
                r = rec(i + 1, m)
                if r is not None:
                    return {**c, **r}
            return None

        return rec(0, pos)
    if isinstance(node, Alt):
        for br in node.branches:
            r = _bf_exact(br, pos, end, sent)
            if r is not None:
                return r
        return None
    child, mn, mx = node.child, node.min, node.max

    def rec(p, k):
        if mx is None or k < mx:
            for m, c in _bf_derivs(child, p, sent):
                if p < m <= end:
                    r = rec(m, k + 1)
                    if r is not None:
                        return {**c, **r}
        if k >= mn and p == end:
            return {}
        return None

    return rec(pos, 0)


def evaluate_bruteforce(cc: CompiledCorpus, query, scope=None) -> list[MatchSpan]:
    """Oracle twin of evaluate(): exhaustive scan, no index involvement."""
    ast = parse_cql(query) if isinstance(query, str) else query
    if cc.token_count > BRUTEFORCE_MAX_TOKENS:
        raise CorpusTooLarge("brute-force evaluation is capped at %d tokens"
                             % BRUTEFORCE_MAX_TOKENS)
    spans = []
    base = 0
    for di, doc in enumerate(cc.corpus.documents):
        for si, sent in enumerate(doc.sentences):
            if scope is not None and di not in scope:
                base += len(sent)
                continue
            for st in range(len(sent)):
                for en in range(st + 1, len(sent) + 1):
                    caps = _bf_exact(ast, st, en, sent)
                    if caps is not None:
                        spans.append(MatchSpan(
                            di, si, base + st, base + en,
                            tuple(sorted((lbl, base + off)
                                         for lbl, off in caps.items()))))
            base += len(sent)
    return spans
