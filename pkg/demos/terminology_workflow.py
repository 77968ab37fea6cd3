"""A terminologist's session over the demo corpus, using the library API.

Starts from a raw vertical file and walks the loop an analyst actually
follows: concordance a candidate term, see who writes about it, pull its
word sketch, read the defining sentences, then compare usage between two
document populations. Run from the repository root:

    python3 demos/terminology_workflow.py
"""

from pathlib import Path

from sketchlet import (build_index, compute_sketch, default_grammar,
                       evaluate, extract_krcs, freq_by_texttype,
                       freq_node_forms, kwic, parse_vertical, resolve_scope,
                       sketch_diff)
from sketchlet.index import TextTypeFilter

ROOT = Path(__file__).resolve().parent.parent

corpus = parse_vertical((ROOT / "corpora" / "enviro.vert").read_text("utf-8"))
cc = build_index(corpus)
grammar = default_grammar()

print("corpus: %d documents, %d tokens" % (len(corpus.documents),
                                           cc.token_count))

# 1. Concordance the term. A structured query keeps noun readings only.
matches = evaluate(cc, '[lemma="erosion" & tag="N.*"]')
print("\n'erosion' as a noun: %d hits" % len(matches))


def words(tokens):
    return " ".join(t.word for t in tokens)


for line in kwic(cc, matches, window=4):
    print("  %-4s %28s  [%s]  %s" % (line.doc_id, words(line.left),
                                     words(line.node), words(line.right)))

# 2. Who writes about it? Relative density > 100 means the text type
#    mentions the term more often than the corpus average.
table = freq_by_texttype(cc, matches, "user")
print("\nby intended reader:")
for row in table.rows:
    print("  %-15s f=%d  rel=%.1f%%" % (row.key, row.freq, row.rel))

# 3. Its surface forms.
forms = freq_node_forms(cc, matches)
print("\nsurface forms: " +
      ", ".join("%s (%d)" % (r.key, r.freq) for r in forms.rows))

# 4. The word sketch: collocates grouped by grammatical/semantic relation.
sketch = compute_sketch(cc, grammar, "erosion")
print("\nword sketch for 'erosion':")
for rel in sketch.relations:
    if rel.rows:
        cells = ", ".join("%s %.2f" % (r.collocate, r.score)
                          for r in rel.rows)
        print("  %-12s %s" % (rel.name, cells))

# 5. Knowledge-rich contexts: the sentences behind the 'generic' column,
#    i.e. candidate definitions.
print("\ndefining sentences:")
for krc in extract_krcs(cc, grammar, "erosion", relations={"generic"}):
    print("  %s: %s" % (krc.doc_id, krc.sentence))

# 6. Compare expert against general-public usage of the term.
experts = resolve_scope(cc, TextTypeFilter.make({"user": ["Expert"]}))
public = resolve_scope(cc, TextTypeFilter.make({"user": ["General public"]}))
diff = sketch_diff(cc, grammar, "two-subcorpora", lemma="erosion",
                   subcorpus_a="British English",
                   subcorpus_b="American English")
print("\n'erosion' in British vs American documents:")
for rel in diff.relations:
    for row in rel.rows:
        side = {"a_only": "British only", "b_only": "American only",
                "shared": "both"}[row.cls]
        print("  %-12s %-12s %s" % (rel.name, row.collocate, side))

# resolve_scope also feeds evaluate() directly for ad-hoc subsets:
print("\nexpert-only hits: %d; general-public hits: %d"
      % (len(evaluate(cc, '[lemma="erosion"]', experts)),
         len(evaluate(cc, '[lemma="erosion"]', public))))
