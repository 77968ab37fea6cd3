"""Command-line interface.

Exit codes: 0 on success, 1 for usage errors, 2 for data errors (bad
corpus files, bad queries, unknown names).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .concord import (context_filter, freq_by_texttype, freq_node_forms,
                      freq_tsv, kwic, kwic_tsv)
from .corpus import corpus_stats, parse_vertical
from .cql import compile_simple_query, evaluate, parse_cql
from .errors import SketchletError
from .index import (TextTypeFilter, build_index, load_index, resolve_scope,
                    save_index)
from .sketch import (compute_sketch, default_grammar, load_grammar,
                     sketch_diff)
from .wordlist import keywords, keywords_tsv, wordlist, wordlist_tsv


class _Parser(argparse.ArgumentParser):
    # usage problems exit 1; data problems exit 2 (handled in main)
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, "%s: error: %s\n" % (self.prog, message))


def _group_by(value: str) -> str:
    if value == "node_forms" or value.startswith("texttype:"):
        return value
    raise argparse.ArgumentTypeError(
        "must be node_forms or texttype:<attribute>")


def _add_query_flags(p: _Parser):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--cql", help="structured token query")
    g.add_argument("--lemma", help="all forms of a lemma")
    g.add_argument("--word", help="exact surface form")
    g.add_argument("--phrase", help="token sequence, case-insensitive")
    g.add_argument("--simple", help="like --phrase")
    g.add_argument("--character", help="forms containing a substring")


def _add_scope_flags(p: _Parser):
    p.add_argument("--filter", action="append", default=[],
                   metavar="ATTR=VALUE",
                   help="text-type restriction; repeatable; year=LO-HI")
    p.add_argument("--subcorpus", help="named subcorpus")


def _parse_filter_args(pairs: list[str]) -> TextTypeFilter | None:
    if not pairs:
        return None
    values: dict[str, list[str]] = {}
    year_range = None
    for pair in pairs:
        if "=" not in pair:
            raise SketchletError("bad --filter %r, expected ATTR=VALUE" % pair)
        attr, _, val = pair.partition("=")
        if attr == "year":
            lo, dash, hi = val.partition("-")
            try:
                year_range = (int(lo), int(hi) if dash else int(lo))
            except ValueError:
                raise SketchletError("bad --filter year value %r" % val)
        else:
            values.setdefault(attr, []).append(val)
    return TextTypeFilter.make(values, year_range)


def _scope_of(cc, args):
    return resolve_scope(cc, _parse_filter_args(args.filter), args.subcorpus)


def _query_ast(args):
    for kind in ("cql", "lemma", "word", "phrase", "simple", "character"):
        text = getattr(args, kind)
        if text is not None:
            if kind == "cql":
                return parse_cql(text)
            return compile_simple_query(kind, text)
    raise SketchletError("no query given")


def _run_query(cc, args):
    matches = evaluate(cc, _query_ast(args), _scope_of(cc, args))
    if args.context:
        lemma, _, n = args.context.partition(":")
        window = int(n) if n else 15
        matches = context_filter(cc, matches, lemma, window)
    return matches


def _grammar_of(args):
    return load_grammar(args.grammar) if args.grammar else default_grammar()


def _score(v) -> str:
    return "--" if v is None else "%g" % v


def cmd_compile(args) -> int:
    text = Path(args.vertical).read_text(encoding="utf-8")
    corpus = parse_vertical(text)
    cc = build_index(corpus)
    save_index(cc, args.output)
    st = corpus_stats(corpus)
    print("compiled %d documents, %d sentences, %d tokens -> %s"
          % (st.documents, st.sentences, st.tokens, args.output))
    return 0


def cmd_query(args) -> int:
    cc = load_index(args.index)
    matches = _run_query(cc, args)
    lines = kwic(cc, matches, args.window)
    if args.format == "json":
        out = [{"doc_id": ln.doc_id,
                "left": [t.word for t in ln.left],
                "node": [t.word for t in ln.node],
                "right": [t.word for t in ln.right],
                "start": ln.match.start, "end": ln.match.end}
               for ln in lines]
        print(json.dumps({"total": len(matches), "lines": out},
                         ensure_ascii=False))
    else:
        sys.stdout.write(kwic_tsv(lines))
    return 0


def cmd_freq(args) -> int:
    cc = load_index(args.index)
    matches = _run_query(cc, args)
    if args.group_by == "node_forms":
        table = freq_node_forms(cc, matches)
    else:
        table = freq_by_texttype(cc, matches, args.group_by.split(":", 1)[1])
    if args.format == "json":
        print(json.dumps({
            "total": table.total,
            "rows": [{"key": r.key, "freq": r.freq, "rel": r.rel}
                     for r in table.rows]}, ensure_ascii=False))
    else:
        sys.stdout.write(freq_tsv(table))
    return 0


def cmd_sketch(args) -> int:
    cc = load_index(args.index)
    table = compute_sketch(cc, _grammar_of(args), args.lemma,
                           _scope_of(cc, args), min_freq=args.min_freq,
                           max_rows=args.max_rows, headword_form=args.form)
    if args.format == "json":
        print(json.dumps({
            "headword": table.headword, "overall_total": table.overall_total,
            "relations": [
                {"name": rel.name, "display": rel.display, "total": rel.total,
                 "rows": [{"collocate": r.collocate, "freq": r.freq,
                           "score": r.score} for r in rel.rows]}
                for rel in table.relations]}, ensure_ascii=False))
    else:
        for rel in table.relations:
            for r in rel.rows:
                print("%s\t%s\t%d\t%s"
                      % (rel.name, r.collocate, r.freq, _score(r.score)))
    return 0


def cmd_diff(args) -> int:
    cc = load_index(args.index)
    diff = sketch_diff(cc, _grammar_of(args), args.mode, _scope_of(cc, args),
                       min_freq=args.min_freq, lemma=args.lemma,
                       lemma_a=args.lemma_a, lemma_b=args.lemma_b,
                       subcorpus_a=args.subcorpus_a,
                       subcorpus_b=args.subcorpus_b,
                       form_a=args.form_a, form_b=args.form_b)
    if args.format == "json":
        print(json.dumps({
            "mode": diff.mode, "side_a": diff.side_a, "side_b": diff.side_b,
            "relations": [
                {"name": rel.name,
                 "rows": [{"collocate": r.collocate, "freq_a": r.freq_a,
                           "freq_b": r.freq_b, "score_a": r.score_a,
                           "score_b": r.score_b, "class": r.cls}
                          for r in rel.rows]}
                for rel in diff.relations]}, ensure_ascii=False))
    else:
        for rel in diff.relations:
            for r in rel.rows:
                print("%s\t%s\t%s\t%d\t%d\t%s\t%s"
                      % (rel.name, r.collocate, r.cls, r.freq_a, r.freq_b,
                         _score(r.score_a), _score(r.score_b)))
    return 0


def cmd_wordlist(args) -> int:
    cc = load_index(args.index)
    table = wordlist(cc, args.attr, _scope_of(cc, args), regex=args.regex,
                     n=args.ngram, pos_filter=args.pos_filter,
                     min_freq=args.min_freq)
    if args.format == "json":
        print(json.dumps({
            "total": table.total,
            "rows": [{"key": r.key, "freq": r.freq} for r in table.rows]},
            ensure_ascii=False))
    else:
        sys.stdout.write(wordlist_tsv(table))
    return 0


def cmd_keywords(args) -> int:
    cc = load_index(args.index)
    cc_ref = load_index(args.ref_index) if args.ref_index else cc
    focus = resolve_scope(cc, _parse_filter_args(args.filter), args.subcorpus)
    ref = resolve_scope(cc_ref, _parse_filter_args(args.ref_filter),
                        args.ref_subcorpus)
    rows = keywords(cc, focus, cc_ref, ref, attr=args.attr,
                    n_smooth=args.smooth)
    if args.format == "json":
        print(json.dumps({"rows": [
            {"key": r.key, "freq_focus": r.freq_focus, "freq_ref": r.freq_ref,
             "fpm_focus": r.fpm_focus, "fpm_ref": r.fpm_ref,
             "score": r.score} for r in rows]}, ensure_ascii=False))
    else:
        sys.stdout.write(keywords_tsv(rows))
    return 0


def cmd_serve(args) -> int:
    import uvicorn
    from .service import create_app
    ui = args.ui_dir
    if ui is None and os.path.isdir("frontend/dist"):
        ui = "frontend/dist"
    app = create_app(index_path=args.index, cors_origin=args.cors_origin,
                     ui_dir=ui)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> _Parser:
    p = _Parser(prog="sketchlet",
                description="corpus query engine over vertical files")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compile", parents=[], help="build an index",
                       add_help=True)
    c.add_argument("vertical", help="vertical corpus file")
    c.add_argument("-o", "--output", required=True, help="index file to write")
    c.set_defaults(fn=cmd_compile)

    def common(name, help_text, query=True):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--index", required=True, help="compiled index file")
        if query:
            _add_query_flags(sp)
            sp.add_argument("--context", metavar="LEMMA:N",
                            help="keep matches with LEMMA within N tokens")
        _add_scope_flags(sp)
        sp.add_argument("--format", choices=("tsv", "json"), default="tsv")
        return sp

    q = common("query", "run a query, print kwic lines")
    q.add_argument("--window", type=int, default=15,
                   help="context tokens each side")
    q.set_defaults(fn=cmd_query)

    f = common("freq", "frequency breakdown of query matches")
    f.add_argument("--group-by", required=True, type=_group_by,
                   metavar="node_forms|texttype:ATTR")
    f.set_defaults(fn=cmd_freq)

    s = common("sketch", "collocates per grammatical relation", query=False)
    s.add_argument("--lemma", required=True)
    s.add_argument("--form", help="restrict headword surface form")
    s.add_argument("--grammar", help="sketch grammar file")
    s.add_argument("--min-freq", type=int, default=1)
    s.add_argument("--max-rows", type=int, default=25)
    s.set_defaults(fn=cmd_sketch)

    d = common("diff", "compare two word sketches", query=False)
    d.add_argument("--mode", required=True,
                   choices=("two-lemmas", "two-subcorpora", "two-wordforms"))
    d.add_argument("--lemma")
    d.add_argument("--lemma-a")
    d.add_argument("--lemma-b")
    d.add_argument("--subcorpus-a")
    d.add_argument("--subcorpus-b")
    d.add_argument("--form-a")
    d.add_argument("--form-b")
    d.add_argument("--grammar", help="sketch grammar file")
    d.add_argument("--min-freq", type=int, default=1)
    d.set_defaults(fn=cmd_diff)

    w = common("wordlist", "attribute or n-gram frequency list", query=False)
    w.add_argument("--attr", default="lemma",
                   choices=("word", "lemma", "lc", "tag"))
    w.add_argument("--regex", help="keep keys fully matching this pattern")
    w.add_argument("--ngram", type=int, default=1)
    w.add_argument("--pos-filter", help="keep tokens whose tag matches")
    w.add_argument("--min-freq", type=int, default=1)
    w.set_defaults(fn=cmd_wordlist)

    k = common("keywords", "terms typical of a focus scope", query=False)
    k.add_argument("--ref-index", help="reference index (default: same)")
    k.add_argument("--ref-filter", action="append", default=[],
                   metavar="ATTR=VALUE")
    k.add_argument("--ref-subcorpus")
    k.add_argument("--attr", default="lemma",
                   choices=("word", "lemma", "lc", "tag"))
    k.add_argument("--smooth", type=float, default=1.0)
    k.set_defaults(fn=cmd_keywords)

    v = sub.add_parser("serve", help="run the JSON service")
    v.add_argument("--index", required=True)
    v.add_argument("--host", default="127.0.0.1")
    v.add_argument("--port", type=int,
                   default=int(os.environ.get("SKETCHLET_PORT", "8080")))
    v.add_argument("--cors-origin")
    v.add_argument("--ui-dir", help="static files mounted at /ui")
    v.set_defaults(fn=cmd_serve)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SketchletError as exc:
        print("error: %s: %s" % (exc.code, exc), file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print("error: file not found: %s" % exc.filename, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
