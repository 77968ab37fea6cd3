"""Positional index over a corpus: postings, text-type filters, subcorpora.

A CompiledCorpus is immutable once built and can be shared across threads;
the only mutable part is the named-subcorpus store, which takes a lock for
writes. Offsets are absolute 0-based token positions over the concatenated
corpus; documents and sentences are contiguous offset ranges.
"""

from __future__ import annotations

import io
import json
import os
import re
import threading
from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from .corpus import (Corpus, Document, DocumentMeta, TokenRecord,
                     TEXT_TYPE_ATTRS, USER_TYPES, VARIANTS)
from .errors import (DuplicateName, IndexFormatError, InvalidRegex,
                     UnknownAttribute, UnknownEnumValue, UnknownSubcorpus,
                     VersionMismatch)

TOKEN_ATTRS = ("word", "tag", "lemma", "lc")

MAGIC = b"SKLT"
FORMAT_VERSION = 1

# default subcorpora created on compile when the metadata matches
DEFAULT_SUBCORPORA = (
    ("American English", {"variant": ["American"]}, None),
    ("British English", {"variant": ["British"]}, None),
    ("Year 1973-1999", {}, (1973, 1999)),
    ("Year 2000-2009", {}, (2000, 2009)),
    ("Year 2010-2016", {}, (2010, 2016)),
)

_ENUM_VALUES = {"user": USER_TYPES, "variant": VARIANTS}


@dataclass(frozen=True, slots=True)
class Position:
    """A token offset resolved to document/sentence coordinates."""
    doc_index: int
    sent_index: int     # within the document
    token_index: int    # within the sentence
    abs_offset: int


@dataclass(frozen=True)
class TextTypeFilter:
    """Conjunction over metadata attributes plus an optional year range.

    ``values`` maps attribute name -> accepted value set (OR within an
    attribute, AND across attributes). ``year_range`` is an inclusive
    (lo, hi) pair. An empty filter selects every document.
    """

    values: tuple[tuple[str, tuple[str, ...]], ...] = ()
    year_range: tuple[int, int] | None = None

    @classmethod
    def make(cls, values: dict[str, object] | None = None,
             year_range: tuple[int, int] | None = None) -> "TextTypeFilter":
        norm = []
        for attr, vals in sorted((values or {}).items()):
            if attr == "year_range":
                raise UnknownAttribute("pass year_range separately, not as a value set")
            if attr not in TEXT_TYPE_ATTRS or attr == "year":
                raise UnknownAttribute("not a filterable text-type attribute: %r" % attr)
            if isinstance(vals, str):
                vals = [vals]
            vals = tuple(sorted(set(str(v) for v in vals)))
            allowed = _ENUM_VALUES.get(attr)
            if allowed is not None:
                for v in vals:
                    if v not in allowed:
                        raise UnknownEnumValue("unknown %s value %r" % (attr, v))
            norm.append((attr, vals))
        if year_range is not None:
            lo, hi = int(year_range[0]), int(year_range[1])
            year_range = (lo, hi)
        return cls(tuple(norm), year_range)

    def matches(self, meta: DocumentMeta) -> bool:
        for attr, vals in self.values:
            if str(meta.attr(attr)) not in vals:
                return False
        if self.year_range is not None:
            lo, hi = self.year_range
            if not (lo <= meta.year <= hi):
                return False
        return True

    def to_json(self) -> dict:
        out: dict[str, object] = {a: list(v) for a, v in self.values}
        if self.year_range is not None:
            out["year_range"] = list(self.year_range)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "TextTypeFilter":
        if not isinstance(obj, dict):
            raise UnknownAttribute("filter must be an object")
        obj = dict(obj)
        yr = obj.pop("year_range", None)
        if yr is not None:
            if (not isinstance(yr, (list, tuple)) or len(yr) != 2
                    or not all(isinstance(y, int) for y in yr)):
                raise UnknownAttribute("year_range must be [lo, hi]")
            yr = (yr[0], yr[1])
        return cls.make(obj, yr)


@dataclass(frozen=True)
class Subcorpus:
    """A frozen document set materialized from a filter."""
    name: str
    filter: TextTypeFilter
    doc_indexes: frozenset[int]
    token_size: int


class CompiledCorpus:
    """Corpus plus per-attribute lexicons, postings and boundary tables."""

    def __init__(self, corpus: Corpus, values, ids, post_order, post_bounds,
                 doc_start, sent_start, sent_doc, doc_first_sent):
        self.corpus = corpus
        self.values = values            # attr -> list[str], id -> value
        self.value_ids = {a: {v: i for i, v in enumerate(vs)}
                          for a, vs in values.items()}
        self.ids = ids                  # attr -> uint32 array, offset -> id
        self.post_order = post_order    # attr -> offsets sorted by (id, offset)
        self.post_bounds = post_bounds  # attr -> int64 array, len(values)+1
        self.doc_start = doc_start      # int64 array, len = docs+1
        self.sent_start = sent_start    # int64 array, len = sentences+1
        self.sent_doc = sent_doc        # int64 array, sentence -> doc
        self.doc_first_sent = doc_first_sent  # int64 array, len = docs+1
        self.subcorpora: dict[str, Subcorpus] = {}
        self._subc_lock = threading.Lock()
        self._mask_cache: dict[tuple[str, str], np.ndarray] = {}

    @property
    def token_count(self) -> int:
        return int(self.doc_start[-1])

    @property
    def doc_count(self) -> int:
        return len(self.doc_start) - 1

    def doc_of(self, offset: int) -> int:
        return int(np.searchsorted(self.doc_start, offset, side="right")) - 1

    def sent_of(self, offset: int) -> int:
        """Global sentence number containing the offset."""
        return int(np.searchsorted(self.sent_start, offset, side="right")) - 1

    def position_of(self, offset: int) -> Position:
        d = self.doc_of(offset)
        s = self.sent_of(offset)
        return Position(d, s - int(self.doc_first_sent[d]),
                        offset - int(self.sent_start[s]), offset)

    def doc_tokens(self, doc_index: int) -> list[TokenRecord]:
        toks = []
        for sent in self.corpus.documents[doc_index].sentences:
            toks.extend(sent)
        return toks

    def token_at(self, offset: int) -> TokenRecord:
        d = self.doc_of(offset)
        s = self.sent_of(offset)
        sent = self.corpus.documents[d].sentences[s - int(self.doc_first_sent[d])]
        return sent[offset - int(self.sent_start[s])]

    def regex_value_mask(self, attr: str, pattern: str) -> np.ndarray:
        """Boolean mask over the attr lexicon: which values fully match."""
        if attr not in TOKEN_ATTRS:
            raise UnknownAttribute("unknown token attribute %r" % attr)
        key = (attr, pattern)
        mask = self._mask_cache.get(key)
        if mask is None:
            rx = compile_value_regex(pattern)
            vs = self.values[attr]
            mask = np.fromiter((rx.fullmatch(v) is not None for v in vs),
                               dtype=bool, count=len(vs))
            self._mask_cache[key] = mask
        return mask

    def postings_for_id(self, attr: str, vid: int) -> np.ndarray:
        b = self.post_bounds[attr]
        return self.post_order[attr][int(b[vid]):int(b[vid + 1])]


# regex values: a conservative dialect, anchored with fullmatch
_FORBIDDEN_RX = re.compile(r"\(\?|\\[0-9]")


def compile_value_regex(pattern: str):
    if _FORBIDDEN_RX.search(pattern):
        raise InvalidRegex("unsupported regex construct in %r" % pattern)
    try:
        return re.compile(pattern)
    except re.error as exc:
        raise InvalidRegex("bad regex %r: %s" % (pattern, exc)) from None


def build_index(corpus: Corpus) -> CompiledCorpus:
    """Compile a corpus: lexicons, sorted postings, boundary tables.

    Also materializes the stock subcorpora (regional variants and year
    bands) whenever the metadata yields a non-empty document set.
    """
    n = corpus.token_count
    doc_start = np.zeros(len(corpus.documents) + 1, dtype=np.int64)
    sent_starts: list[int] = []
    sent_doc: list[int] = []
    doc_first_sent = np.zeros(len(corpus.documents) + 1, dtype=np.int64)
    pos = 0
    for di, doc in enumerate(corpus.documents):
        doc_start[di] = pos
        doc_first_sent[di] = len(sent_starts)
        for sent in doc.sentences:
            sent_starts.append(pos)
            sent_doc.append(di)
            pos += len(sent)
    doc_start[-1] = pos
    doc_first_sent[-1] = len(sent_starts)
    sent_start = np.array(sent_starts + [pos], dtype=np.int64)

    values: dict[str, list[str]] = {}
    ids: dict[str, np.ndarray] = {}
    post_order: dict[str, np.ndarray] = {}
    post_bounds: dict[str, np.ndarray] = {}
    for attr in TOKEN_ATTRS:
        col: list[str] = []
        for doc in corpus.documents:
            for sent in doc.sentences:
                for tok in sent:
                    col.append(getattr(tok, attr))
        if col:
            arr = np.array(col, dtype=object)
            uniq, inverse = np.unique(arr, return_inverse=True)
            vals = [str(v) for v in uniq]
            idarr = inverse.astype(np.uint32)
        else:
            vals = []
            idarr = np.zeros(0, dtype=np.uint32)
        values[attr] = vals
        ids[attr] = idarr
        order = np.argsort(idarr, kind="stable").astype(np.uint32)
        counts = np.bincount(idarr, minlength=len(vals)).astype(np.int64)
        bounds = np.zeros(len(vals) + 1, dtype=np.int64)
        np.cumsum(counts, out=bounds[1:])
        post_order[attr] = order
        post_bounds[attr] = bounds

    cc = CompiledCorpus(corpus, values, ids, post_order, post_bounds,
                        doc_start, sent_start,
                        np.array(sent_doc, dtype=np.int64), doc_first_sent)
    for name, vals, yr in DEFAULT_SUBCORPORA:
        filt = TextTypeFilter.make(vals, yr)
        docs = resolve_filter(cc, filt)
        if docs:
            _store_subcorpus(cc, name, filt, docs)
    return cc


def lookup_exact(cc: CompiledCorpus, attr: str, value: str) -> np.ndarray:
    """Sorted offsets of tokens whose attribute equals value exactly."""
    if attr not in TOKEN_ATTRS:
        raise UnknownAttribute("unknown token attribute %r" % attr)
    vid = cc.value_ids[attr].get(value)
    if vid is None:
        return np.zeros(0, dtype=np.uint32)
    return cc.postings_for_id(attr, vid)


def lookup_regex(cc: CompiledCorpus, attr: str, pattern: str) -> np.ndarray:
    """Sorted offsets of tokens whose attribute fully matches the regex."""
    mask = cc.regex_value_mask(attr, pattern)
    vids = np.flatnonzero(mask)
    if len(vids) == 0:
        return np.zeros(0, dtype=np.uint32)
    parts = [cc.postings_for_id(attr, int(v)) for v in vids]
    out = np.concatenate(parts)
    out.sort()
    return out


def resolve_filter(cc: CompiledCorpus, filt: TextTypeFilter) -> frozenset[int]:
    """Document indexes whose metadata satisfies the filter."""
    return frozenset(
        di for di, doc in enumerate(cc.corpus.documents)
        if filt.matches(doc.meta)
    )


def _store_subcorpus(cc, name, filt, docs) -> Subcorpus:
    size = sum(int(cc.doc_start[d + 1] - cc.doc_start[d]) for d in docs)
    sub = Subcorpus(name, filt, frozenset(docs), size)
    with cc._subc_lock:
        if name in cc.subcorpora:
            raise DuplicateName("subcorpus %r already exists" % name)
        cc.subcorpora[name] = sub
    return sub


def define_subcorpus(cc: CompiledCorpus, name: str, filt: TextTypeFilter) -> Subcorpus:
    """Materialize and store a named subcorpus; names are unique."""
    return _store_subcorpus(cc, name, filt, resolve_filter(cc, filt))


def get_subcorpus(cc: CompiledCorpus, name: str) -> Subcorpus:
    sub = cc.subcorpora.get(name)
    if sub is None:
        raise UnknownSubcorpus("no subcorpus named %r" % name)
    return sub


def resolve_scope(cc: CompiledCorpus, filt: TextTypeFilter | None = None,
                  subcorpus: str | None = None) -> frozenset[int] | None:
    """Combine an optional filter and subcorpus into a document scope.

    None means the whole corpus. When both are given the scope is their
    intersection.
    """
    scope: frozenset[int] | None = None
    if subcorpus is not None:
        scope = get_subcorpus(cc, subcorpus).doc_indexes
    if filt is not None:
        docs = resolve_filter(cc, filt)
        scope = docs if scope is None else scope & docs
    return scope


def scope_token_count(cc: CompiledCorpus, scope: frozenset[int] | None) -> int:
    if scope is None:
        return cc.token_count
    return sum(int(cc.doc_start[d + 1] - cc.doc_start[d]) for d in scope)


# --- persistence ---------------------------------------------------------
#
# Layout (all integers little-endian; see docs/index-format.md):
#   magic  4 bytes  "SKLT"
#   version 1 byte
#   section count  u32
#   per section: name length u8, name ascii, payload length u64, payload
# Sections: "meta" (JSON), "lexicons" (JSON), "postings" (u32 arrays),
# "bounds" (i64 arrays), "subcorpora" (JSON).

def _pack_u32(arr: np.ndarray) -> bytes:
    return np.asarray(arr, dtype="<u4").tobytes()


def _pack_i64(arr: np.ndarray) -> bytes:
    return np.asarray(arr, dtype="<i8").tobytes()


def save_index(cc: CompiledCorpus, path: str) -> None:
    """Write the compiled corpus to a single binary file."""
    meta = {
        "documents": [_meta_json(d.meta) for d in cc.corpus.documents],
        "sentence_lengths": [
            [len(s) for s in d.sentences] for d in cc.corpus.documents
        ],
    }
    lexicons = {a: cc.values[a] for a in ("word", "tag", "lemma")}
    postings = io.BytesIO()
    for attr in ("word", "tag", "lemma"):
        b = _pack_u32(cc.post_order[attr])
        postings.write(len(b).to_bytes(8, "little"))
        postings.write(b)
        bb = _pack_i64(cc.post_bounds[attr])
        postings.write(len(bb).to_bytes(8, "little"))
        postings.write(bb)
    bounds = io.BytesIO()
    for arr, pack in ((cc.doc_start, _pack_i64), (cc.sent_start, _pack_i64),
                      (cc.sent_doc, _pack_i64), (cc.doc_first_sent, _pack_i64)):
        b = pack(arr)
        bounds.write(len(b).to_bytes(8, "little"))
        bounds.write(b)
    subcorpora = [
        {"name": s.name, "filter": s.filter.to_json()}
        for s in cc.subcorpora.values()
    ]
    sections = [
        ("meta", json.dumps(meta, ensure_ascii=False).encode("utf-8")),
        ("lexicons", json.dumps(lexicons, ensure_ascii=False).encode("utf-8")),
        ("postings", postings.getvalue()),
        ("bounds", bounds.getvalue()),
        ("subcorpora", json.dumps(subcorpora, ensure_ascii=False).encode("utf-8")),
    ]
    buf = io.BytesIO()
    buf.write(MAGIC)
    buf.write(bytes([FORMAT_VERSION]))
    buf.write(len(sections).to_bytes(4, "little"))
    for name, payload in sections:
        nb = name.encode("ascii")
        buf.write(bytes([len(nb)]))
        buf.write(nb)
        buf.write(len(payload).to_bytes(8, "little"))
        buf.write(payload)
    tmp = path + ".tmp"
    with open(tmp, "wb") as f:
        f.write(buf.getvalue())
    os.replace(tmp, path)


def _meta_json(m: DocumentMeta) -> dict:
    out = {
        "id": m.doc_id, "domain_code": m.domain_code,
        "domain_label": m.domain_label, "user": m.user, "variant": m.variant,
        "genre": m.genre, "editor": m.editor, "year": m.year,
        "country": m.country,
    }
    if m.title is not None:
        out["title"] = m.title
    return out


def _read_chunks(payload: bytes) -> list[bytes]:
    chunks = []
    pos = 0
    while pos < len(payload):
        ln = int.from_bytes(payload[pos:pos + 8], "little")
        pos += 8
        chunks.append(payload[pos:pos + ln])
        pos += ln
    return chunks


def load_index(path: str) -> CompiledCorpus:
    """Read an index file written by save_index.

    Raises VersionMismatch when the format version differs and
    IndexFormatError on anything else that does not look like an index.
    """
    with open(path, "rb") as f:
        data = f.read()
    if data[:4] != MAGIC:
        raise IndexFormatError("not an index file (bad magic)")
    if data[4] != FORMAT_VERSION:
        raise VersionMismatch("index format version %d, expected %d"
                              % (data[4], FORMAT_VERSION))
    nsec = int.from_bytes(data[5:9], "little")
    pos = 9
    sections: dict[str, bytes] = {}
    for _ in range(nsec):
        if pos + 1 > len(data):
            raise IndexFormatError("truncated index file")
        nlen = data[pos]
        pos += 1
        name = data[pos:pos + nlen].decode("ascii", errors="replace")
        pos += nlen
        if pos + 8 > len(data):
            raise IndexFormatError("truncated index file")
        plen = int.from_bytes(data[pos:pos + 8], "little")
        pos += 8
        if pos + plen > len(data):
            raise IndexFormatError("truncated index file")
        sections[name] = data[pos:pos + plen]
        pos += plen
    for required in ("meta", "lexicons", "postings", "bounds", "subcorpora"):
        if required not in sections:
            raise IndexFormatError("missing section %r" % required)

    meta = json.loads(sections["meta"].decode("utf-8"))
    lexicons = json.loads(sections["lexicons"].decode("utf-8"))
    pchunks = _read_chunks(sections["postings"])
    bchunks = _read_chunks(sections["bounds"])
    doc_start = np.frombuffer(bchunks[0], dtype="<i8").astype(np.int64)
    n = int(doc_start[-1])

    # rebuild per-token value ids from the postings permutations
    ids = {}
    post_order = {}
    post_bounds = {}
    for i, attr in enumerate(("word", "tag", "lemma")):
        order = np.frombuffer(pchunks[2 * i], dtype="<u4").astype(np.uint32)
        bounds = np.frombuffer(pchunks[2 * i + 1], dtype="<i8").astype(np.int64)
        vcount = len(bounds) - 1
        counts = np.diff(bounds)
        vid_sorted = np.repeat(np.arange(vcount, dtype=np.uint32), counts)
        idarr = np.zeros(n, dtype=np.uint32)
        idarr[order] = vid_sorted
        ids[attr] = idarr
        post_order[attr] = order
        post_bounds[attr] = bounds

    # the lc attribute is derived from the word lexicon, not stored
    words = [str(w) for w in lexicons["word"]]
    lowered = [w.lower() for w in words]
    lc_values = sorted(set(lowered))
    lc_index = {v: i for i, v in enumerate(lc_values)}
    word_to_lc = np.array([lc_index[v] for v in lowered], dtype=np.uint32)
    if n:
        lc_ids = word_to_lc[ids["word"]]
    else:
        lc_ids = np.zeros(0, dtype=np.uint32)
    ids["lc"] = lc_ids
    post_order["lc"] = np.argsort(lc_ids, kind="stable").astype(np.uint32)
    lc_counts = np.bincount(lc_ids, minlength=len(lc_values)).astype(np.int64)
    lc_bounds = np.zeros(len(lc_values) + 1, dtype=np.int64)
    np.cumsum(lc_counts, out=lc_bounds[1:])
    post_bounds["lc"] = lc_bounds

    values = {
        "word": words,
        "tag": [str(v) for v in lexicons["tag"]],
        "lemma": [str(v) for v in lexicons["lemma"]],
        "lc": lc_values,
    }

    # reconstruct the corpus objects
    tags = values["tag"]
    lemmas = values["lemma"]
    lc_of_word = dict(zip(words, lowered))
    sent_lengths = meta["sentence_lengths"]
    docs = []
    off = 0
    wid, tid, lid = ids["word"], ids["tag"], ids["lemma"]
    for mdoc, slens in zip(meta["documents"], sent_lengths):
        dm = DocumentMeta(
            doc_id=mdoc["id"], domain_code=mdoc["domain_code"],
            domain_label=mdoc["domain_label"], user=mdoc["user"],
            variant=mdoc["variant"], genre=mdoc["genre"],
            editor=mdoc["editor"], year=mdoc["year"],
            country=mdoc["country"], title=mdoc.get("title"),
        )
        sents = []
        for ln in slens:
            toks = []
            for k in range(off, off + ln):
                w = words[wid[k]]
                toks.append(TokenRecord(w, tags[tid[k]], lemmas[lid[k]],
                                        lc_of_word[w]))
            off += ln
            sents.append(tuple(toks))
        docs.append(Document(dm, tuple(sents)))
    corpus = Corpus(tuple(docs))

    sent_start = np.frombuffer(bchunks[1], dtype="<i8").astype(np.int64)
    sent_doc = np.frombuffer(bchunks[2], dtype="<i8").astype(np.int64)
    doc_first_sent = np.frombuffer(bchunks[3], dtype="<i8").astype(np.int64)
    cc = CompiledCorpus(corpus, values, ids, post_order, post_bounds,
                        doc_start, sent_start, sent_doc, doc_first_sent)
    for entry in json.loads(sections["subcorpora"].decode("utf-8")):
        define_subcorpus(cc, entry["name"],
                         TextTypeFilter.from_json(entry["filter"]))
    return cc
