"""JSON service over a compiled corpus.

All endpoints live under /api and exchange snake_case JSON. Errors come
back as {"code", "message", "position"?} with a status that reflects the
code: 400 for bad queries, filters, or request shapes, 404 for unknown
subcorpora, 409 for duplicate names, 503 when no corpus is loaded.
Request bodies are validated by hand so the error wire format stays
stable no matter where the problem is caught.
"""

from __future__ import annotations

import os

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .concord import freq_by_texttype, freq_node_forms, kwic
from .corpus import TEXT_TYPE_ATTRS
from .cql import QUERY_KINDS, compile_simple_query, evaluate, parse_cql
from .errors import (BadMode, DomainError, DuplicateName, DuplicateRelation,
                     EmptyScope, InvalidRegex, MalformedLine, MissingSlotLabel,
                     NoCorpusLoaded, QuerySyntaxError, SketchletError,
                     UnknownAttribute, UnknownEnumValue, UnknownSubcorpus)
from .index import (TextTypeFilter, define_subcorpus, load_index,
                    resolve_scope, save_index)
from .sketch import default_grammar, compute_sketch, extract_krcs, sketch_diff
from .wordlist import keywords, wordlist
from . import concord

DEFAULT_PORT = 8080
MAX_PAGE_LIMIT = 1000
DEFAULT_PAGE_LIMIT = 100
DEFAULT_KWIC_WINDOW = 15


class BadRequest(SketchletError):
    """Request body malformed at the wire level."""
    code = "BadRequest"


_STATUS = {
    "SyntaxError": 400, "InvalidRegex": 400, "UnknownAttribute": 400,
    "UnknownEnumValue": 400, "MalformedLine": 400, "BadMode": 400,
    "DomainError": 400, "EmptyScope": 400, "MissingSlotLabel": 400,
    "DuplicateRelation": 400, "BadRequest": 400,
    "UnknownSubcorpus": 404,
    "DuplicateName": 409,
    "NoCorpusLoaded": 503,
}


def _error_response(exc: SketchletError) -> JSONResponse:
    body = {"code": exc.code, "message": str(exc)}
    position = getattr(exc, "position", None)
    if position is not None:
        body["position"] = position
    return JSONResponse(body, status_code=_STATUS.get(exc.code, 400))


def _require(cond: bool, message: str):
    if not cond:
        raise BadRequest(message)


async def _json_body(request: Request) -> dict:
    try:
        body = await request.json()
    except Exception:
        raise BadRequest("request body is not valid JSON")
    _require(isinstance(body, dict), "request body must be a JSON object")
    return body


def _meta_json(meta) -> dict:
    out = {
        "id": meta.doc_id, "domain_code": meta.domain_code,
        "domain_label": meta.domain_label, "user": meta.user,
        "variant": meta.variant, "genre": meta.genre, "editor": meta.editor,
        "year": meta.year, "country": meta.country,
    }
    if meta.title is not None:
        out["title"] = meta.title
    return out


def _parse_filter(body) -> TextTypeFilter | None:
    spec = body.get("filter")
    if spec is None:
        return None
    _require(isinstance(spec, dict), "filter must be an object")
    return TextTypeFilter.from_json(spec)


def _parse_scope(cc, body):
    filt = _parse_filter(body)
    name = body.get("subcorpus")
    if name is not None:
        _require(isinstance(name, str), "subcorpus must be a string")
    return resolve_scope(cc, filt, name)


def _parse_query(body):
    spec = body.get("query")
    _require(isinstance(spec, dict), "query must be an object")
    kinds = [k for k in spec if k in QUERY_KINDS]
    _require(len(kinds) == 1 and len(spec) == 1,
             "query must have exactly one of: %s" % ", ".join(QUERY_KINDS))
    kind = kinds[0]
    text = spec[kind]
    _require(isinstance(text, str), "query text must be a string")
    if kind == "cql":
        return parse_cql(text)
    return compile_simple_query(kind, text)


def _parse_page(body) -> tuple[int, int]:
    page = body.get("page", {})
    _require(isinstance(page, dict), "page must be an object")
    offset = page.get("offset", 0)
    limit = page.get("limit", DEFAULT_PAGE_LIMIT)
    _require(isinstance(offset, int) and not isinstance(offset, bool)
             and offset >= 0, "page.offset must be a non-negative integer")
    _require(isinstance(limit, int) and not isinstance(limit, bool)
             and 1 <= limit <= MAX_PAGE_LIMIT,
             "page.limit must be an integer in 1..%d" % MAX_PAGE_LIMIT)
    return offset, limit


def _parse_int(body, key, default, lo=0):
    v = body.get(key, default)
    _require(isinstance(v, int) and not isinstance(v, bool) and v >= lo,
             "%s must be an integer >= %d" % (key, lo))
    return v


def _parse_opt_str(body, key):
    v = body.get(key)
    if v is not None:
        _require(isinstance(v, str), "%s must be a string" % key)
    return v


def _run_search(cc, body):
    """Shared query pipeline: parse, evaluate, context-filter."""
    ast = _parse_query(body)
    scope = _parse_scope(cc, body)
    matches = evaluate(cc, ast, scope)
    ctx = body.get("context")
    if ctx is not None:
        _require(isinstance(ctx, dict), "context must be an object")
        lemma = ctx.get("lemma")
        _require(isinstance(lemma, str) and lemma, "context.lemma is required")
        window = ctx.get("window", DEFAULT_KWIC_WINDOW)
        _require(isinstance(window, int) and not isinstance(window, bool)
                 and window >= 1, "context.window must be a positive integer")
        matches = concord.context_filter(cc, matches, lemma, window)
    return matches


def create_app(index_path: str | None = None, cc=None,
               cors_origin: str | None = None,
               ui_dir: str | None = None) -> FastAPI:
    """Build the service. Loads the index at index_path unless a compiled
    corpus is passed directly; with neither, every /api call answers 503.
    """
    app = FastAPI(openapi_url=None, docs_url=None, redoc_url=None)
    if cc is None and index_path is not None:
        cc = load_index(index_path)
    app.state.cc = cc
    app.state.index_path = index_path
    app.state.grammar = default_grammar()

    if cors_origin:
        from fastapi.middleware.cors import CORSMiddleware
        app.add_middleware(CORSMiddleware, allow_origins=[cors_origin],
                           allow_methods=["*"], allow_headers=["*"])

    @app.exception_handler(SketchletError)
    async def _on_error(request, exc):
        return _error_response(exc)

    def _cc():
        if app.state.cc is None:
            raise NoCorpusLoaded("no corpus index is loaded")
        return app.state.cc

    @app.get("/api/corpus")
    async def corpus_info():
        cc = _cc()
        docs = cc.corpus.documents
        text_types = {}
        sizes = {}
        ds = cc.doc_start
        for attr in TEXT_TYPE_ATTRS:
            per = {}
            for i, doc in enumerate(docs):
                v = doc.meta.attr(attr)
                per[v] = per.get(v, 0) + int(ds[i + 1] - ds[i])
            text_types[attr] = sorted(per)
            sizes[attr] = {str(v): per[v] for v in sorted(per)}
        distinct_lemmas = len(cc.values["lemma"])
        return {
            "documents": len(docs),
            "sentences": cc.corpus.sentence_count,
            "tokens": cc.token_count,
            "distinct_lemmas": distinct_lemmas,
            "text_types": text_types,
            "texttype_sizes": sizes,
            "subcorpora": [
                {"name": s.name, "token_size": s.token_size,
                 "documents": len(s.doc_indexes)}
                for s in app.state.cc.subcorpora.values()
            ],
        }

    @app.post("/api/search")
    async def search(request: Request):
        cc = _cc()
        body = await _json_body(request)
        matches = _run_search(cc, body)
        offset, limit = _parse_page(body)
        window = _parse_int(body, "window", DEFAULT_KWIC_WINDOW, lo=1)
        page = matches[offset:offset + limit]
        lines = kwic(cc, page, window)
        return {
            "total": len(matches), "offset": offset, "limit": limit,
            "lines": [
                {"doc_id": ln.doc_id,
                 "left": [t.word for t in ln.left],
                 "node": [t.word for t in ln.node],
                 "right": [t.word for t in ln.right],
                 "start": ln.match.start, "end": ln.match.end,
                 "meta": _meta_json(ln.meta)}
                for ln in lines
            ],
        }

    @app.post("/api/freq")
    async def freq(request: Request):
        cc = _cc()
        body = await _json_body(request)
        matches = _run_search(cc, body)
        group_by = body.get("group_by")
        _require(isinstance(group_by, str), "group_by is required")
        if group_by == "node_forms":
            table = freq_node_forms(cc, matches)
        elif group_by.startswith("texttype:"):
            table = freq_by_texttype(cc, matches, group_by.split(":", 1)[1])
        else:
            raise BadRequest(
                "group_by must be node_forms or texttype:<attribute>")
        return {
            "total": table.total,
            "rows": [{"key": r.key, "freq": r.freq, "rel": r.rel}
                     for r in table.rows],
        }

    @app.post("/api/sketch")
    async def sketch(request: Request):
        cc = _cc()
        body = await _json_body(request)
        lemma = body.get("lemma")
        _require(isinstance(lemma, str) and lemma, "lemma is required")
        form = _parse_opt_str(body, "form")
        min_freq = _parse_int(body, "min_freq", 1, lo=1)
        max_rows = _parse_int(body, "max_rows", 25, lo=1)
        scope = _parse_scope(cc, body)
        table = compute_sketch(cc, app.state.grammar, lemma, scope,
                               min_freq=min_freq, max_rows=max_rows,
                               headword_form=form)
        return {
            "headword": table.headword, "scope": table.scope,
            "overall_total": table.overall_total,
            "relations": [
                {"name": rel.name, "display": rel.display, "total": rel.total,
                 "rows": [{"collocate": r.collocate, "freq": r.freq,
                           "score": r.score} for r in rel.rows]}
                for rel in table.relations
            ],
        }

    @app.post("/api/sketchdiff")
    async def sketchdiff(request: Request):
        cc = _cc()
        body = await _json_body(request)
        mode = body.get("mode")
        _require(isinstance(mode, str), "mode is required")
        scope = _parse_scope(cc, body)
        diff = sketch_diff(
            cc, app.state.grammar, mode, scope,
            min_freq=_parse_int(body, "min_freq", 1, lo=1),
            lemma=_parse_opt_str(body, "lemma"),
            lemma_a=_parse_opt_str(body, "lemma_a"),
            lemma_b=_parse_opt_str(body, "lemma_b"),
            subcorpus_a=_parse_opt_str(body, "subcorpus_a"),
            subcorpus_b=_parse_opt_str(body, "subcorpus_b"),
            form_a=_parse_opt_str(body, "form_a"),
            form_b=_parse_opt_str(body, "form_b"))
        return {
            "mode": diff.mode, "side_a": diff.side_a, "side_b": diff.side_b,
            "relations": [
                {"name": rel.name, "display": rel.display,
                 "rows": [{"collocate": r.collocate,
                           "freq_a": r.freq_a, "freq_b": r.freq_b,
                           "score_a": r.score_a, "score_b": r.score_b,
                           "class": r.cls} for r in rel.rows]}
                for rel in diff.relations
            ],
        }

    @app.post("/api/krcs")
    async def krcs(request: Request):
        cc = _cc()
        body = await _json_body(request)
        lemma = body.get("lemma")
        _require(isinstance(lemma, str) and lemma, "lemma is required")
        relation = _parse_opt_str(body, "relation")
        collocate = _parse_opt_str(body, "collocate")
        scope = _parse_scope(cc, body)
        found = extract_krcs(cc, app.state.grammar, lemma, scope,
                             relations=[relation] if relation else None,
                             collocate=collocate)
        return {
            "krcs": [
                {"relation": k.relation, "doc_id": k.doc_id,
                 "sentence": k.sentence,
                 "headword_offset": k.headword_offset,
                 "collocate_offset": k.collocate_offset}
                for k in found
            ],
        }

    @app.post("/api/wordlist")
    async def wordlist_ep(request: Request):
        cc = _cc()
        body = await _json_body(request)
        attr = body.get("attr", "lemma")
        _require(isinstance(attr, str), "attr must be a string")
        table = wordlist(
            cc, attr, _parse_scope(cc, body),
            regex=_parse_opt_str(body, "regex"),
            n=_parse_int(body, "ngram", 1, lo=1),
            pos_filter=_parse_opt_str(body, "pos_filter"),
            min_freq=_parse_int(body, "min_freq", 1, lo=1))
        return {
            "total": table.total,
            "rows": [{"key": r.key, "freq": r.freq} for r in table.rows],
        }

    @app.post("/api/keywords")
    async def keywords_ep(request: Request):
        cc = _cc()
        body = await _json_body(request)
        focus = body.get("focus", {})
        ref = body.get("ref", {})
        _require(isinstance(focus, dict), "focus must be an object")
        _require(isinstance(ref, dict), "ref must be an object")
        attr = body.get("attr", "lemma")
        _require(isinstance(attr, str), "attr must be a string")
        smooth = body.get("smooth", 1.0)
        _require(isinstance(smooth, (int, float)) and not isinstance(smooth, bool)
                 and smooth > 0, "smooth must be a positive number")
        rows = keywords(cc, _parse_scope(cc, focus), cc, _parse_scope(cc, ref),
                        attr=attr, n_smooth=float(smooth))
        return {
            "rows": [
                {"key": r.key, "freq_focus": r.freq_focus,
                 "freq_ref": r.freq_ref, "fpm_focus": r.fpm_focus,
                 "fpm_ref": r.fpm_ref, "score": r.score}
                for r in rows
            ],
        }

    @app.get("/api/subcorpora")
    async def subcorpora_list():
        cc = _cc()
        return {
            "subcorpora": [
                {"name": s.name, "token_size": s.token_size,
                 "documents": len(s.doc_indexes),
                 "filter": s.filter.to_json() if s.filter else None}
                for s in cc.subcorpora.values()
            ],
        }

    @app.post("/api/subcorpora")
    async def subcorpora_create(request: Request):
        cc = _cc()
        body = await _json_body(request)
        name = body.get("name")
        _require(isinstance(name, str) and name.strip(), "name is required")
        spec = body.get("filter")
        _require(isinstance(spec, dict), "filter is required")
        filt = TextTypeFilter.from_json(spec)
        sub = define_subcorpus(cc, name.strip(), filt)
        if app.state.index_path:
            save_index(cc, app.state.index_path)
        return {"name": sub.name, "token_size": sub.token_size,
                "documents": len(sub.doc_indexes)}

    if ui_dir and os.path.isdir(ui_dir):
        from fastapi.staticfiles import StaticFiles
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
