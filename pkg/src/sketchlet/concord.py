"""Concordancing: KWIC lines, context filtering, and frequency breakdowns
over the matches of a query.
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import TEXT_TYPE_ATTRS, DocumentMeta, TokenRecord
from .cql import MatchSpan
from .errors import UnknownAttribute
from .index import CompiledCorpus


@dataclass(frozen=True)
class KwicLine:
    doc_id: str
    meta: DocumentMeta
    left: tuple[TokenRecord, ...]
    node: tuple[TokenRecord, ...]
    right: tuple[TokenRecord, ...]
    match: MatchSpan


@dataclass(frozen=True)
class FreqRow:
    key: object  # str for most attrs, int for year
    freq: int
    rel: float | None  # relative-frequency percent, when defined


@dataclass(frozen=True)
class FreqTable:
    rows: tuple[FreqRow, ...]
    total: int


def kwic(cc: CompiledCorpus, matches: list[MatchSpan],
         window: int = 15) -> list[KwicLine]:
    """Keyword-in-context lines, one per match.

    Context windows extend up to `window` tokens each side and are
    clipped at document boundaries, so context may cross sentences but
    never documents.
    """
    out = []
    ds = cc.doc_start
    for m in matches:
        doc = cc.corpus.documents[m.doc_index]
        lo = int(ds[m.doc_index])
        hi = int(ds[m.doc_index + 1])
        left = tuple(cc.token_at(i)
                     for i in range(max(lo, m.start - window), m.start))
        node = tuple(cc.token_at(i) for i in range(m.start, m.end))
        right = tuple(cc.token_at(i)
                      for i in range(m.end, min(hi, m.end + window)))
        out.append(KwicLine(doc.meta.doc_id, doc.meta, left, node, right, m))
    return out


def context_filter(cc: CompiledCorpus, matches: list[MatchSpan], lemma: str,
                   window: int) -> list[MatchSpan]:
    """Keep matches that have a token with the given lemma within `window`
    tokens before the span or after it, inside the same document and
    outside the span itself. Applying the same filter twice is a no-op.
    """
    lid = cc.value_ids["lemma"].get(lemma)
    if lid is None:
        return []
    ids = cc.ids["lemma"]
    ds = cc.doc_start
    out = []
    for m in matches:
        lo = max(int(ds[m.doc_index]), m.start - window)
        hi = min(int(ds[m.doc_index + 1]), m.end + window)
        if (ids[lo:m.start] == lid).any() or (ids[m.end:hi] == lid).any():
            out.append(m)
    return out


def freq_node_forms(cc: CompiledCorpus, matches: list[MatchSpan]) -> FreqTable:
    """Frequency of the distinct surface forms of the matched spans,
    case-sensitive, tokens joined by single spaces."""
    counts: dict[str, int] = {}
    for m in matches:
        key = " ".join(cc.token_at(i).word for i in range(m.start, m.end))
        counts[key] = counts.get(key, 0) + 1
    rows = [FreqRow(k, f, None) for k, f in counts.items()]
    rows.sort(key=lambda r: (-r.freq, r.key))
    return FreqTable(tuple(rows), len(matches))


def freq_by_texttype(cc: CompiledCorpus, matches: list[MatchSpan],
                     attr: str) -> FreqTable:
    """Distribution of matches over the values of one text-type attribute.

    Every value present in the corpus gets a row, including zero-hit ones.
    rel is the relative-frequency percent: 100 * (f_bucket / tokens_bucket)
    / (f_total / tokens_total), with f_total the number of input matches
    and tokens_total the whole corpus. A single-bucket corpus therefore
    always shows rel == 100 for a non-empty result.
    """
    if attr not in TEXT_TYPE_ATTRS:
        raise UnknownAttribute("not a text-type attribute: %r" % attr)
    ds = cc.doc_start
    bucket_tokens: dict[object, int] = {}
    for i, doc in enumerate(cc.corpus.documents):
        v = doc.meta.attr(attr)
        bucket_tokens[v] = bucket_tokens.get(v, 0) + int(ds[i + 1] - ds[i])
    bucket_hits: dict[object, int] = {v: 0 for v in bucket_tokens}
    for m in matches:
        v = cc.corpus.documents[m.doc_index].meta.attr(attr)
        bucket_hits[v] += 1
    f_total = len(matches)
    n_total = cc.token_count
    rows = []
    for v, f in bucket_hits.items():
        if f == 0 or f_total == 0:
            rel = 0.0
        else:
            # ratio first: a bucket that covers the whole corpus divides
            # identical doubles and lands on exactly 100.0
            rel = 100.0 * ((f / bucket_tokens[v]) / (f_total / n_total))
        rows.append(FreqRow(v, f, rel))
    rows.sort(key=lambda r: (-r.freq, r.key))
    return FreqTable(tuple(rows), f_total)


def kwic_tsv(lines: list[KwicLine]) -> str:
    """doc_id, left, node, right per line; token words joined by spaces."""
    out = []
    for ln in lines:
        out.append("\t".join((
            ln.doc_id,
            " ".join(t.word for t in ln.left),
            " ".join(t.word for t in ln.node),
            " ".join(t.word for t in ln.right),
        )))
    return "\n".join(out) + ("\n" if out else "")


def freq_tsv(table: FreqTable) -> str:
    """key, freq, rel per line; rel column empty when undefined."""
    out = []
    for r in table.rows:
        rel = "" if r.rel is None else ("%g" % r.rel)
        out.append("%s\t%d\t%s" % (r.key, r.freq, rel))
    return "\n".join(out) + ("\n" if out else "")
