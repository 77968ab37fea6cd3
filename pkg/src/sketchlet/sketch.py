"""Word sketches: grammar-driven collocate tables, diffs, and the
definition-like contexts behind them.

A sketch grammar is a plain-text file: ``=name`` or ``=name|display``
starts a relation (the display template shows the headword as ``%w``);
each following indented non-empty line is one query pattern in which label
1 marks the headword slot and label 2 the collocate slot. A blank line or
the next ``=`` ends the relation. ``#`` lines are comments.

Collocates are scored with logDice = 14 + log2(2*f_xy / (f_x + f_y)),
where both marginals count matches of the same relation over the same
scope. The score never exceeds 14 and is invariant under proportional
scaling of all three frequencies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .cql import parse_cql, evaluate
from .errors import (BadMode, DomainError, DuplicateRelation, MalformedLine,
                     MissingSlotLabel)
from .index import CompiledCorpus, get_subcorpus

DEFAULT_MIN_FREQ = 1
DEFAULT_MAX_ROWS = 25

HEAD_SLOT = 1
COLL_SLOT = 2


@dataclass(frozen=True)
class Relation:
    name: str
    display: str
    patterns: tuple[tuple[str, object], ...]  # (source text, parsed ast)


@dataclass(frozen=True)
class SketchGrammar:
    relations: tuple[Relation, ...]

    def get(self, name: str) -> Relation | None:
        for r in self.relations:
            if r.name == name:
                return r
        return None

    @property
    def names(self) -> list[str]:
        return [r.name for r in self.relations]


@dataclass(frozen=True)
class SketchRow:
    collocate: str
    freq: int
    score: float


@dataclass(frozen=True)
class SketchRelation:
    name: str
    display: str
    total: int  # headword hits in this relation
    rows: tuple[SketchRow, ...]


@dataclass(frozen=True)
class SketchTable:
    headword: str
    scope: str
    overall_total: int
    relations: tuple[SketchRelation, ...]


@dataclass(frozen=True)
class KnowledgeRichContext:
    relation: str
    doc_id: str
    sentence: str
    headword_offset: int
    collocate_offset: int


@dataclass(frozen=True)
class DiffRow:
    collocate: str
    freq_a: int
    freq_b: int
    score_a: float | None
    score_b: float | None
    cls: str  # a_only, b_only, shared


@dataclass(frozen=True)
class DiffRelation:
    name: str
    display: str
    rows: tuple[DiffRow, ...]


@dataclass(frozen=True)
class SketchDiff:
    mode: str
    side_a: str
    side_b: str
    relations: tuple[DiffRelation, ...]


def logdice(f_xy: int, f_x: int, f_y: int) -> float:
    """Association score of a collocation given joint and marginal counts."""
    if f_xy <= 0 or f_x <= 0 or f_y <= 0:
        raise DomainError("logdice needs positive frequencies")
    if f_xy > f_x or f_xy > f_y:
        raise DomainError("joint frequency exceeds a marginal")
    return 14.0 + math.log2(2.0 * f_xy / (f_x + f_y))


def _slot_counts(node, counts=None):
    """label -> (min, max) occurrence bounds across derivations."""
    from . import cql as q
    if isinstance(node, q.TokenPattern):
        return {}
    if isinstance(node, q.Label):
        inner = _slot_counts(node.child)
        lo, hi = inner.get(node.n, (0, 0))
        inner[node.n] = (lo + 1, hi + 1)
        return inner
    if isinstance(node, q.Seq):
        out: dict[int, tuple[int, int]] = {}
        for ch in node.children:
            for lbl, (lo, hi) in _slot_counts(ch).items():
                plo, phi = out.get(lbl, (0, 0))
                out[lbl] = (plo + lo, phi + hi)
        return out
    if isinstance(node, q.Alt):
        out = {}
        keys = set()
        branch_counts = [_slot_counts(b) for b in node.branches]
        for bc in branch_counts:
            keys |= set(bc)
        for lbl in keys:
            los = [bc.get(lbl, (0, 0))[0] for bc in branch_counts]
            his = [bc.get(lbl, (0, 0))[1] for bc in branch_counts]
            out[lbl] = (min(los), max(his))
        return out
    # Quant: an unbounded max counts as "more than once" whenever the
    # child can bind at all, which is enough to fail the exactly-once check
    inner = _slot_counts(node.child)
    out = {}
    for lbl, (lo, hi) in inner.items():
        hi_reps = node.max if node.max is not None else (2 if hi else 0)
        out[lbl] = (lo * node.min, hi * hi_reps)
    return out


def _validate_pattern(relname: str, text: str, ast, line: int):
    counts = _slot_counts(ast)
    for slot in (HEAD_SLOT, COLL_SLOT):
        if counts.get(slot) != (1, 1):
            raise MissingSlotLabel(
                "relation %r line %d: pattern must bind label %d: exactly "
                "once per alternative" % (relname, line, slot))


def load_grammar_text(text: str) -> SketchGrammar:
    """Parse sketch-grammar source text."""
    relations: list[Relation] = []
    seen: set[str] = set()
    name = None
    display = None
    patterns: list[tuple[str, object]] = []

    def flush():
        nonlocal name, display, patterns
        if name is not None:
            relations.append(Relation(name, display, tuple(patterns)))
        name, display, patterns = None, None, []

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.rstrip()
        if not line.strip():
            flush()
            continue
        if line.startswith("#"):
            continue
        if line.startswith("="):
            flush()
            head = line[1:].strip()
            if "|" in head:
                name, display = (part.strip() for part in head.split("|", 1))
            else:
                name, display = head, head
            if not name:
                raise MalformedLine("empty relation name", lineno)
            if name in seen:
                raise DuplicateRelation("relation %r defined twice" % name)
            seen.add(name)
            continue
        if line[0] not in (" ", "\t"):
            raise MalformedLine("expected an indented pattern line", lineno)
        if name is None:
            raise MalformedLine("pattern outside any relation", lineno)
        ptext = line.strip()
        ast = parse_cql(ptext)
        _validate_pattern(name, ptext, ast, lineno)
        patterns.append((ptext, ast))
    flush()
    return SketchGrammar(tuple(relations))


def load_grammar(path) -> SketchGrammar:
    return load_grammar_text(Path(path).read_text(encoding="utf-8"))


def default_grammar() -> SketchGrammar:
    """The grammar bundled with the package."""
    text = resources.files("sketchlet").joinpath("data/mini-essg.skg") \
        .read_text(encoding="utf-8")
    return load_grammar_text(text)


def _relation_matches(cc, relation, scope):
    """Deduplicated (head_offset, coll_offset, span) triples of a relation."""
    out = []
    seen = set()
    for _, ast in relation.patterns:
        for span in evaluate(cc, ast, scope):
            o1 = span.capture(HEAD_SLOT)
            o2 = span.capture(COLL_SLOT)
            if o1 is None or o2 is None:
                continue
            key = (span.start, span.end, o1, o2)
            if key not in seen:
                seen.add(key)
                out.append((o1, o2, span))
    return out


def _scope_desc(scope) -> str:
    if scope is None:
        return "whole corpus"
    return "%d documents" % len(scope)


def compute_sketch(cc: CompiledCorpus, grammar: SketchGrammar, headword: str,
                   scope=None, min_freq: int = DEFAULT_MIN_FREQ,
                   max_rows: int | None = DEFAULT_MAX_ROWS,
                   headword_form: str | None = None,
                   scope_desc: str | None = None) -> SketchTable:
    """Collocates of headword per grammar relation, scored with logDice.

    f_xy counts relation matches whose slot-1 lemma is the headword (and
    whose slot-1 surface form equals headword_form, when given) with the
    given slot-2 lemma; f_x is the headword marginal under the same
    constraint; f_y counts relation matches with that slot-2 lemma under
    any headword. Rows are sorted by score, then frequency, then lemma.
    """
    rels = []
    overall = 0
    for relation in grammar.relations:
        matches = _relation_matches(cc, relation, scope)
        head = []
        coll_marginal: dict[str, int] = {}
        for o1, o2, span in matches:
            c2 = cc.token_at(o2).lemma
            coll_marginal[c2] = coll_marginal.get(c2, 0) + 1
            t1 = cc.token_at(o1)
            if t1.lemma != headword:
                continue
            if headword_form is not None and t1.word != headword_form:
                continue
            head.append((o1, o2, c2))
        f_x = len(head)
        joint: dict[str, int] = {}
        for _, _, c2 in head:
            joint[c2] = joint.get(c2, 0) + 1
        rows = [
            SketchRow(c2, f, logdice(f, f_x, coll_marginal[c2]))
            for c2, f in joint.items() if f >= min_freq
        ]
        rows.sort(key=lambda r: (-r.score, -r.freq, r.collocate))
        if max_rows is not None:
            rows = rows[:max_rows]
        rels.append(SketchRelation(relation.name, relation.display,
                                   f_x, tuple(rows)))
        overall += f_x
    return SketchTable(headword, scope_desc or _scope_desc(scope),
                       overall, tuple(rels))


def extract_krcs(cc: CompiledCorpus, grammar: SketchGrammar, headword: str,
                 scope=None, relations=None,
                 collocate: str | None = None) -> list[KnowledgeRichContext]:
    """Sentences that instantiate a grammar relation for the headword.

    relations optionally restricts to a set of relation names; collocate
    optionally pins the slot-2 lemma. One context per retained match, in
    grammar then corpus order.
    """
    wanted = set(relations) if relations is not None else None
    out = []
    dfs = cc.doc_first_sent
    for relation in grammar.relations:
        if wanted is not None and relation.name not in wanted:
            continue
        for o1, o2, span in _relation_matches(cc, relation, scope):
            t1 = cc.token_at(o1)
            if t1.lemma != headword:
                continue
            if collocate is not None and cc.token_at(o2).lemma != collocate:
                continue
            doc = cc.corpus.documents[span.doc_index]
            sent = doc.sentences[span.sent_index]
            out.append(KnowledgeRichContext(
                relation.name, doc.meta.doc_id,
                " ".join(t.word for t in sent), o1, o2))
    return out


def _diff_order(rows: list[DiffRow]) -> list[DiffRow]:
    a_only = [r for r in rows if r.cls == "a_only"]
    shared = [r for r in rows if r.cls == "shared"]
    b_only = [r for r in rows if r.cls == "b_only"]
    a_only.sort(key=lambda r: (-r.score_a, -r.freq_a, r.collocate))
    shared.sort(key=lambda r: (abs(r.score_a - r.score_b), r.collocate))
    b_only.sort(key=lambda r: (-r.score_b, -r.freq_b, r.collocate))
    return a_only + shared + b_only


def sketch_diff(cc: CompiledCorpus, grammar: SketchGrammar, mode: str,
                scope=None, min_freq: int = DEFAULT_MIN_FREQ,
                lemma: str | None = None,
                lemma_a: str | None = None, lemma_b: str | None = None,
                subcorpus_a: str | None = None, subcorpus_b: str | None = None,
                form_a: str | None = None, form_b: str | None = None) -> SketchDiff:
    """Compare two sketches relation by relation.

    Modes: two-lemmas (lemma_a vs lemma_b over one scope), two-subcorpora
    (one lemma over two named subcorpora), two-wordforms (one lemma, slot-1
    surface form pinned per side). Rows present on only one side class as
    a_only/b_only; both-sides rows class as shared. Ordering: a_only by
    score_a descending, shared by score gap ascending, b_only by score_b
    descending.
    """
    if mode == "two-lemmas":
        if not lemma_a or not lemma_b:
            raise BadMode("two-lemmas needs lemma_a and lemma_b")
        side_a = compute_sketch(cc, grammar, lemma_a, scope,
                                min_freq=1, max_rows=None)
        side_b = compute_sketch(cc, grammar, lemma_b, scope,
                                min_freq=1, max_rows=None)
        desc_a, desc_b = lemma_a, lemma_b
    elif mode == "two-subcorpora":
        if not lemma or not subcorpus_a or not subcorpus_b:
            raise BadMode("two-subcorpora needs lemma, subcorpus_a, subcorpus_b")
        sc_a = get_subcorpus(cc, subcorpus_a).doc_indexes
        sc_b = get_subcorpus(cc, subcorpus_b).doc_indexes
        side_a = compute_sketch(cc, grammar, lemma, sc_a,
                                min_freq=1, max_rows=None)
        side_b = compute_sketch(cc, grammar, lemma, sc_b,
                                min_freq=1, max_rows=None)
        desc_a = "%s in %s" % (lemma, subcorpus_a)
        desc_b = "%s in %s" % (lemma, subcorpus_b)
    elif mode == "two-wordforms":
        if not lemma or not form_a or not form_b:
            raise BadMode("two-wordforms needs lemma, form_a, form_b")
        side_a = compute_sketch(cc, grammar, lemma, scope,
                                min_freq=1, max_rows=None, headword_form=form_a)
        side_b = compute_sketch(cc, grammar, lemma, scope,
                                min_freq=1, max_rows=None, headword_form=form_b)
        desc_a, desc_b = form_a, form_b
    else:
        raise BadMode("unknown diff mode %r" % mode)

    rels = []
    for rel_a, rel_b in zip(side_a.relations, side_b.relations):
        index_a = {r.collocate: r for r in rel_a.rows}
        index_b = {r.collocate: r for r in rel_b.rows}
        rows = []
        for coll in set(index_a) | set(index_b):
            ra = index_a.get(coll)
            rb = index_b.get(coll)
            fa = ra.freq if ra else 0
            fb = rb.freq if rb else 0
            if fa < min_freq and fb < min_freq:
                continue
            cls = "shared" if (fa and fb) else ("a_only" if fa else "b_only")
            rows.append(DiffRow(coll, fa, fb,
                                ra.score if ra else None,
                                rb.score if rb else None, cls))
        rels.append(DiffRelation(rel_a.name, rel_a.display,
                                 tuple(_diff_order(rows))))
    return SketchDiff(mode, desc_a, desc_b, tuple(rels))
