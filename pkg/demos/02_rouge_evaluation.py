"""
Scoring summarization strategies with ROUGE
===========================================

Runs the evaluation harness over the bundled mini-corpus (documents
paired with hand-written reference summaries) and prints the same
f/p/r tables the CLI's `eval` subcommand produces.
"""

from deckforge import SummaryConfig
from deckforge.pipeline import bundled_corpus_dir, eval_corpus
from deckforge.rougeval import render_comparison, rouge_l, rouge_n

# A single pair first: candidate vs. reference token lists.
candidate = "the cat sat on the mat".split()
reference = "the cat lay on the mat".split()
print("rouge-1:", rouge_n(candidate, reference, 1))
print("rouge-l:", rouge_l(candidate, reference))

# Now the whole corpus.  Each document is summarized by every strategy;
# the candidate summary is scored against the reference, then averaged.
report = eval_corpus(
    bundled_corpus_dir(),
    strategies=["centroid", "textrank", "random"],
    cfg=SummaryConfig(seed=42),
)

print(f"\nmean scores over {len(report.per_document)} documents\n")
print(render_comparison(report.means))

print("per-document rouge-l f:")
for stem, reports in report.per_document.items():
    row = "  ".join(f"{name}={rep.rougeL.f:.3f}" for name, rep in reports.items())
    print(f"  {stem:12s} {row}")
