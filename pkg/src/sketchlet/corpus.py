"""Vertical-format corpus model: parsing, serialization, summary statistics.

The vertical format is line-oriented UTF-8 text. One token per line as
``word<TAB>tag<TAB>lemma``; structural lines ``<doc ...>``, ``</doc>``,
``<s>``, ``</s>`` mark document and sentence boundaries. Inside attribute
values ``&`` and ``"`` are escaped as ``&amp;`` and ``&quot;``. Lines starting
with ``#`` outside a sentence are comments (inside ``<s>`` they are token
lines, since ``#`` is a legal word).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import DuplicateDocId, MalformedLine, UnclosedStructure, UnknownEnumValue

USER_TYPES = ("Expert", "Semi-expert", "General public")
VARIANTS = ("American", "British", "Euro")

# text-type attributes usable in filters and frequency breakdowns
TEXT_TYPE_ATTRS = (
    "domain_code", "domain_label", "user", "variant",
    "genre", "editor", "year", "country",
)

_DOC_ATTRS = ("id", "domain_code", "domain_label", "user", "variant",
              "genre", "editor", "year", "country")

DOMAIN_CODE_RE = re.compile(r"[0-9]+(\.[0-9]+)*")
_ATTR_PAIR_RE = re.compile(r'\s*([A-Za-z_][A-Za-z0-9_]*)="([^"]*)"')

YEAR_MIN, YEAR_MAX = 1000, 9999


def _escape(value: str) -> str:
    return value.replace("&", "&amp;").replace('"', "&quot;")


def _unescape(value: str) -> str:
    # inverse of _escape; &quot; first so the & it contains survives
    return value.replace("&quot;", '"').replace("&amp;", "&")


@dataclass(frozen=True, slots=True)
class TokenRecord:
    """One corpus position: surface form, part-of-speech tag, lemma.

    ``lc`` is the lowercased surface form, stored so it can be indexed like
    the other attributes.
    """

    word: str
    tag: str
    lemma: str
    lc: str

    @classmethod
    def make(cls, word: str, tag: str, lemma: str) -> "TokenRecord":
        return cls(word, tag, lemma, word.lower())


@dataclass(frozen=True, slots=True)
class DocumentMeta:
    """Per-document text-type metadata.

    ``user`` and ``variant`` are closed vocabularies; the remaining string
    attributes are open. ``year`` must lie in [1000, 9999] and
    ``domain_code`` must look like a dotted numeric path (e.g. "3.5.1").
    """

    doc_id: str
    domain_code: str
    domain_label: str
    user: str
    variant: str
    genre: str
    editor: str
    year: int
    country: str
    title: str | None = None

    def __post_init__(self):
        if self.user not in USER_TYPES:
            raise UnknownEnumValue("unknown user type %r" % (self.user,))
        if self.variant not in VARIANTS:
            raise UnknownEnumValue("unknown variant %r" % (self.variant,))
        if not (YEAR_MIN <= self.year <= YEAR_MAX):
            raise MalformedLine("year %r out of range" % (self.year,))
        if DOMAIN_CODE_RE.fullmatch(self.domain_code) is None:
            raise MalformedLine("bad domain_code %r" % (self.domain_code,))

    def attr(self, name: str):
        """Text-type attribute by public name (doc_id excluded)."""
        if name not in TEXT_TYPE_ATTRS:
            raise KeyError(name)
        return getattr(self, name)


Sentence = tuple[TokenRecord, ...]


@dataclass(frozen=True, slots=True)
class Document:
    meta: DocumentMeta
    sentences: tuple[Sentence, ...]

    @property
    def token_count(self) -> int:
        return sum(len(s) for s in self.sentences)


@dataclass(frozen=True, slots=True)
class Corpus:
    documents: tuple[Document, ...]

    @property
    def token_count(self) -> int:
        return sum(d.token_count for d in self.documents)

    @property
    def sentence_count(self) -> int:
        return sum(len(d.sentences) for d in self.documents)


@dataclass(frozen=True, slots=True)
class CorpusStats:
    documents: int
    sentences: int
    tokens: int
    distinct_lemmas: int
    # attr -> value -> token count; every token of a document counts toward
    # the document's value of each attribute, punctuation included
    texttype_tokens: dict[str, dict[object, int]]


def _parse_doc_open(line: str, lineno: int) -> DocumentMeta:
    body = line[len("<doc"):-1].strip()
    attrs = {}
    pos = 0
    while pos < len(body):
        m = _ATTR_PAIR_RE.match(body, pos)
        if m is None:
            raise MalformedLine("bad doc attribute syntax", lineno)
        name, raw = m.group(1), m.group(2)
        if name in attrs:
            raise MalformedLine("duplicate doc attribute %r" % name, lineno)
        attrs[name] = _unescape(raw)
        pos = m.end()
    missing = [a for a in _DOC_ATTRS if a not in attrs]
    if missing:
        raise MalformedLine("doc is missing attributes: %s" % ", ".join(missing), lineno)
    extra = set(attrs) - set(_DOC_ATTRS) - {"title"}
    if extra:
        raise MalformedLine("unknown doc attributes: %s" % ", ".join(sorted(extra)), lineno)
    try:
        year = int(attrs["year"])
    except ValueError:
        raise MalformedLine("year is not an integer: %r" % attrs["year"], lineno) from None
    try:
        return DocumentMeta(
            doc_id=attrs["id"],
            domain_code=attrs["domain_code"],
            domain_label=attrs["domain_label"],
            user=attrs["user"],
            variant=attrs["variant"],
            genre=attrs["genre"],
            editor=attrs["editor"],
            year=year,
            country=attrs["country"],
            title=attrs.get("title"),
        )
    except MalformedLine as exc:
        raise MalformedLine(str(exc), lineno) from None


def parse_vertical(text) -> Corpus:
    """Parse vertical-format text (a string or a line iterable) into a Corpus.

    Raises MalformedLine, UnclosedStructure, UnknownEnumValue or
    DuplicateDocId; the same input always yields an equal Corpus.
    """
    if isinstance(text, str):
        lines = text.splitlines()
    elif isinstance(text, bytes):
        lines = text.decode("utf-8").splitlines()
    else:
        lines = [ln.rstrip("\n").rstrip("\r") for ln in text]

    documents: list[Document] = []
    seen_ids: set[str] = set()
    meta: DocumentMeta | None = None
    sentences: list[Sentence] | None = None
    tokens: list[TokenRecord] | None = None
    # share string objects across tokens: vertical files repeat values heavily
    istr: dict[str, str] = {}

    def intern(s: str) -> str:
        return istr.setdefault(s, s)

    for lineno, line in enumerate(lines, 1):
        if tokens is None:
            # outside <s>: structure lines, comments, blank padding
            if not line.strip() or line.startswith("#"):
                continue
            if line.startswith("<doc ") and line.endswith(">"):
                if meta is not None:
                    raise MalformedLine("nested <doc>", lineno)
                meta = _parse_doc_open(line, lineno)
                if meta.doc_id in seen_ids:
                    raise DuplicateDocId("duplicate doc id %r" % meta.doc_id)
                sentences = []
                continue
            if line.strip() == "</doc>":
                if meta is None:
                    raise MalformedLine("</doc> without open <doc>", lineno)
                seen_ids.add(meta.doc_id)
                documents.append(Document(meta, tuple(sentences)))
                meta, sentences = None, None
                continue
            if line.strip() == "<s>":
                if meta is None:
                    raise MalformedLine("<s> outside <doc>", lineno)
                tokens = []
                continue
            if line.strip() == "</s>":
                raise MalformedLine("</s> without open <s>", lineno)
            raise MalformedLine("unexpected line %r" % line[:60], lineno)

        # inside <s>: token lines until </s>
        if line == "</s>":
            if not tokens:
                raise MalformedLine("empty sentence", lineno)
            sentences.append(tuple(tokens))
            tokens = None
            continue
        if line == "</doc>" or line == "<s>" or line.startswith("<doc "):
            raise UnclosedStructure("sentence not closed before %r" % line[:20])
        cols = line.split("\t")
        if len(cols) != 3:
            raise MalformedLine("expected 3 tab-separated columns, got %d" % len(cols), lineno)
        word, tag, lemma = cols
        if not word or not tag or not lemma:
            raise MalformedLine("empty token field", lineno)
        tokens.append(TokenRecord(intern(word), intern(tag), intern(lemma),
                                  intern(word.lower())))

    if tokens is not None:
        raise UnclosedStructure("unterminated <s> at end of input")
    if meta is not None:
        raise UnclosedStructure("unterminated <doc id=%r> at end of input" % meta.doc_id)
    return Corpus(tuple(documents))


def to_vertical(corpus: Corpus) -> str:
    """Serialize a Corpus back to vertical format (inverse of parse_vertical)."""
    out: list[str] = []
    for doc in corpus.documents:
        m = doc.meta
        attrs = [
            ("id", m.doc_id), ("domain_code", m.domain_code),
            ("domain_label", m.domain_label), ("user", m.user),
            ("variant", m.variant), ("genre", m.genre), ("editor", m.editor),
            ("year", str(m.year)), ("country", m.country),
        ]
        if m.title is not None:
            attrs.append(("title", m.title))
        out.append("<doc %s>" % " ".join('%s="%s"' % (k, _escape(v)) for k, v in attrs))
        for sent in doc.sentences:
            out.append("<s>")
            for t in sent:
                out.append("%s\t%s\t%s" % (t.word, t.tag, t.lemma))
            out.append("</s>")
        out.append("</doc>")
    return "\n".join(out) + ("\n" if out else "")


def corpus_stats(corpus: Corpus) -> CorpusStats:
    """Summary counts plus per-text-type token sizes.

    For any attribute the per-value sizes sum to the corpus token count,
    since each document carries exactly one value.
    """
    lemmas: set[str] = set()
    by_attr: dict[str, dict[object, int]] = {a: {} for a in TEXT_TYPE_ATTRS}
    sentences = 0
    tokens = 0
    for doc in corpus.documents:
        n = doc.token_count
        sentences += len(doc.sentences)
        tokens += n
        for sent in doc.sentences:
            for t in sent:
                lemmas.add(t.lemma)
        for attr in TEXT_TYPE_ATTRS:
            val = doc.meta.attr(attr)
            bucket = by_attr[attr]
            bucket[val] = bucket.get(val, 0) + n
    return CorpusStats(
        documents=len(corpus.documents),
        sentences=sentences,
        tokens=tokens,
        distinct_lemmas=len(lemmas),
        texttype_tokens=by_attr,
    )
