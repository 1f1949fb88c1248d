"""
The whole pipeline in one call
==============================

parse -> summarize -> deck -> narrate -> audio, with a manifest of every
artifact.  Audio uses the offline stub synthesizer, so two runs of this
script produce byte-identical outputs (compare the manifests).

The CLI equivalent:

    deckforge build --input <paper.md> --format markdown \
        --strategy centroid --out demo_output/run --emit md,json,pptx \
        --audio stub --base-url paper.html
"""

from deckforge.pipeline import (
    PipelineConfig,
    fixture_paper_path,
    run,
    verify_manifest,
)
from deckforge.summarize import SummaryConfig

cfg = PipelineConfig(
    input_path=str(fixture_paper_path()),
    source_format="markdown",
    out_dir="demo_output/run",
    summary=SummaryConfig(strategy="centroid", ratio=0.2, seed=42),
    base_url="paper.html",
    audio_mode="stub",
    emit_markdown=True,
    emit_json=True,
    emit_pptx=True,
)

report = run(cfg)

print(f"sections parsed:  {report.section_count}")
print(f"slides built:     {report.slide_count}")
print(f"wavs rendered:    {report.wav_count}")
print("artifacts:")
for name in report.artifacts:
    print(f"  {report.out_dir}/{name}")
print(f"manifest:         {report.manifest_path}")
print("stage timings:    "
      + "  ".join(f"{k}={v:.2f}s" for k, v in report.stage_seconds.items()))

# The manifest holds a SHA-256 per artifact; verification reports any
# file that changed since the run.
mismatches = verify_manifest(report.out_dir)
print(f"manifest verification mismatches: {mismatches or 'none'}")
