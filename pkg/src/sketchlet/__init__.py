"""Query engine for vertical-format annotated corpora: positional index,
structured token queries, concordances, word sketches, and keyword lists,
with a command-line tool and a JSON service on top.
"""

from .corpus import (Corpus, CorpusStats, Document, DocumentMeta, TokenRecord,
                     corpus_stats, parse_vertical, to_vertical)
from .cql import (MatchSpan, compile_simple_query, evaluate,
                  evaluate_bruteforce, parse_cql)
from .concord import (FreqRow, FreqTable, KwicLine, context_filter,
                      freq_by_texttype, freq_node_forms, freq_tsv, kwic,
                      kwic_tsv)
from .index import (CompiledCorpus, Subcorpus, TextTypeFilter, build_index,
                    define_subcorpus, get_subcorpus, load_index,
                    resolve_scope, save_index)
from .sketch import (KnowledgeRichContext, SketchDiff, SketchGrammar,
                     SketchTable, compute_sketch, default_grammar,
                     extract_krcs, load_grammar, load_grammar_text, logdice,
                     sketch_diff)
from .wordlist import (KeywordRow, keywords, keywords_tsv, wordlist,
                       wordlist_tsv)

__version__ = "0.1.0"

__all__ = [
    "Corpus", "CorpusStats", "Document", "DocumentMeta", "TokenRecord",
    "parse_vertical", "to_vertical", "corpus_stats",
    "MatchSpan", "parse_cql", "compile_simple_query", "evaluate",
    "evaluate_bruteforce",
    "FreqRow", "FreqTable", "KwicLine", "kwic", "kwic_tsv", "context_filter",
    "freq_node_forms", "freq_by_texttype", "freq_tsv",
    "CompiledCorpus", "Subcorpus", "TextTypeFilter", "build_index",
    "save_index", "load_index", "define_subcorpus", "get_subcorpus",
    "resolve_scope",
    "SketchGrammar", "SketchTable", "SketchDiff", "KnowledgeRichContext",
    "load_grammar", "load_grammar_text", "default_grammar", "compute_sketch",
    "extract_krcs", "sketch_diff", "logdice",
    "KeywordRow", "wordlist", "keywords", "wordlist_tsv", "keywords_tsv",
    "__version__",
]
