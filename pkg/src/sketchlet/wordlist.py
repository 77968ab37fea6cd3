"""Frequency lists over token attributes, n-grams, and one-vs-reference
keyword extraction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .concord import FreqRow, FreqTable
from .errors import DomainError, EmptyScope, UnknownAttribute
from .index import CompiledCorpus, compile_value_regex, scope_token_count

LIST_ATTRS = ("word", "lemma", "lc", "tag")
DEFAULT_SMOOTH = 1.0


@dataclass(frozen=True)
class KeywordRow:
    key: str
    freq_focus: int
    freq_ref: int
    fpm_focus: float
    fpm_ref: float
    score: float


def _unigram_counts(cc: CompiledCorpus, attr: str, scope) -> dict[str, int]:
    ids = cc.ids[attr]
    if scope is not None:
        ds = cc.doc_start
        parts = [ids[int(ds[d]):int(ds[d + 1])] for d in sorted(scope)]
        ids = np.concatenate(parts) if parts else ids[:0]
    counts = np.bincount(ids, minlength=len(cc.values[attr]))
    vals = cc.values[attr]
    return {vals[i]: int(counts[i]) for i in np.nonzero(counts)[0]}


def wordlist(cc: CompiledCorpus, attr: str = "lemma", scope=None,
             regex: str | None = None, n: int = 1,
             pos_filter: str | None = None, min_freq: int = 1) -> FreqTable:
    """Frequency table of attribute values or n-grams of them.

    pos_filter drops tokens whose tag does not match the given pattern
    before n-grams are formed, so an n-gram may span dropped tokens.
    n-grams never cross sentence boundaries. regex keeps only keys it
    fully matches (keys are attribute values joined by single spaces).
    """
    if attr not in LIST_ATTRS:
        raise UnknownAttribute("not a token attribute: %r" % attr)
    if n < 1:
        raise DomainError("n-gram size must be at least 1")
    key_rx = compile_value_regex(regex) if regex is not None else None
    tag_rx = compile_value_regex(pos_filter) if pos_filter is not None else None

    counts: dict[str, int] = {}
    if n == 1 and tag_rx is None:
        counts = _unigram_counts(cc, attr, scope)
    else:
        for d, doc in enumerate(cc.corpus.documents):
            if scope is not None and d not in scope:
                continue
            for sent in doc.sentences:
                vals = [getattr(t, attr) for t in sent
                        if tag_rx is None or tag_rx.fullmatch(t.tag)]
                for i in range(len(vals) - n + 1):
                    key = " ".join(vals[i:i + n])
                    counts[key] = counts.get(key, 0) + 1

    rows = [FreqRow(k, f, None) for k, f in counts.items()
            if f >= min_freq and (key_rx is None or key_rx.fullmatch(k))]
    rows.sort(key=lambda r: (-r.freq, r.key))
    return FreqTable(tuple(rows), sum(r.freq for r in rows))


def keywords(cc_focus: CompiledCorpus, scope_focus,
             cc_ref: CompiledCorpus, scope_ref,
             attr: str = "lemma",
             n_smooth: float = DEFAULT_SMOOTH) -> list[KeywordRow]:
    """Terms typical of the focus scope against a reference scope.

    Frequencies are normalized per million tokens of each scope (all
    tokens count, punctuation included) and scored as
    (fpm_focus + N) / (fpm_ref + N). One row per distinct focus-scope
    value, sorted by score, then focus fpm, then key.
    """
    if attr not in LIST_ATTRS:
        raise UnknownAttribute("not a token attribute: %r" % attr)
    n_focus = scope_token_count(cc_focus, scope_focus)
    n_ref = scope_token_count(cc_ref, scope_ref)
    if n_focus == 0 or n_ref == 0:
        raise EmptyScope("both scopes need at least one token")
    focus = _unigram_counts(cc_focus, attr, scope_focus)
    ref = _unigram_counts(cc_ref, attr, scope_ref)
    rows = []
    for key, f in focus.items():
        r = ref.get(key, 0)
        fpm_f = f / n_focus * 1e6
        fpm_r = r / n_ref * 1e6
        rows.append(KeywordRow(key, f, r, fpm_f, fpm_r,
                               (fpm_f + n_smooth) / (fpm_r + n_smooth)))
    rows.sort(key=lambda kw: (-kw.score, -kw.fpm_focus, kw.key))
    return rows


def wordlist_tsv(table: FreqTable) -> str:
    out = ["%s\t%d" % (r.key, r.freq) for r in table.rows]
    return "\n".join(out) + ("\n" if out else "")


def keywords_tsv(rows: list[KeywordRow]) -> str:
    out = ["%s\t%g\t%g\t%g" % (r.key, r.fpm_focus, r.fpm_ref, r.score)
           for r in rows]
    return "\n".join(out) + ("\n" if out else "")
