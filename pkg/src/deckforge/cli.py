"""Command-line interface.

    deckforge build --input paper.md --format markdown --strategy centroid \
        --out out/ --emit md,json,pptx --audio stub
    deckforge eval --corpus corpus/ --strategies centroid,textrank,random

A key=value config file (UTF-8) can supply any flag via --config; explicit
flags override file values.  Exit codes: 0 success, 2 input error, 3 stage
failure, 4 synthesis service unreachable.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import (
    DeckforgeError,
    EmptyInputError,
    NoSectionsFoundError,
    PipelineStageError,
    ServiceUnreachableError,
    SynthesisTimeoutError,
    UnpairedDocumentError,
)
from .pipeline import PipelineConfig, eval_corpus, run
from .rougeval import render_comparison
from .summarize import SummaryConfig

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_STAGE = 3
EXIT_SERVICE = 4

_INPUT_ERROR_TYPES = (
    FileNotFoundError,
    NotADirectoryError,
    IsADirectoryError,
    UnicodeDecodeError,
    EmptyInputError,
    NoSectionsFoundError,
    UnpairedDocumentError,
    ValueError,
)

# config-file keys that need casting before argparse defaults pick them up
_CASTS = {"ratio": float, "seed": int}


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="deckforge",
        description="Turn a structured document into a summarized, narrated slide deck.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    build = sub.add_parser("build", help="build deck artifacts from one document")
    build.add_argument("--config", help="key=value file supplying defaults for any flag")
    build.add_argument("--input", required=False, help="input document path")
    build.add_argument(
        "--format",
        choices=["plain", "markdown", "latex-min"],
        default="markdown",
        dest="source_format",
    )
    build.add_argument(
        "--strategy",
        choices=["centroid", "textrank", "regression"],
        default="centroid",
    )
    build.add_argument("--ratio", type=float, default=0.2)
    build.add_argument("--out", default="out")
    build.add_argument(
        "--emit",
        default="md",
        help="comma list from {md,json,pptx}",
    )
    build.add_argument("--audio", choices=["off", "stub", "service"], default="off")
    build.add_argument("--endpoint", default="", help="synthesis service URL")
    build.add_argument("--voice-ref", default="", help="reference audio for enrollment")
    build.add_argument("--base-url", default="", help="hyperlink base for source anchors")
    build.add_argument("--seed", type=int, default=42)
    build.add_argument("--model", default="", help="trained regressor file (strategy=regression)")

    ev = sub.add_parser("eval", help="score strategies on a paired corpus")
    ev.add_argument("--config", help="key=value file supplying defaults for any flag")
    ev.add_argument("--corpus", required=False, help="directory of X.txt/X.md + X.ref.txt pairs")
    ev.add_argument(
        "--strategies",
        default="centroid,textrank,regression",
        help="comma list from {centroid,textrank,regression,random}",
    )
    ev.add_argument("--ratio", type=float, default=0.2)
    ev.add_argument("--seed", type=int, default=42)
    ev.add_argument("--out", default="eval_report", help="report directory")
    return parser, {"build": build, "eval": ev}


def load_config_file(path: str) -> dict[str, str]:
    """Parse a key=value config file; '#' starts a comment line."""
    values: dict[str, str] = {}
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"malformed config line (expected key=value): {raw!r}")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return values


def _parse_args(argv: list[str]) -> argparse.Namespace:
    parser, subparsers = _build_parser()
    args = parser.parse_args(argv)
    if args.config:
        defaults = {}
        for key, value in load_config_file(args.config).items():
            dest = {"format": "source_format"}.get(key, key.replace("-", "_"))
            defaults[dest] = _CASTS.get(key, str)(value)
        subparsers[args.command].set_defaults(**defaults)
        args = parser.parse_args(argv)  # explicit flags still win
    return args


def _cmd_build(args: argparse.Namespace) -> int:
    if not args.input:
        print("error: --input is required (flag or config file)", file=sys.stderr)
        return EXIT_INPUT
    emit = {part.strip() for part in args.emit.split(",") if part.strip()}
    unknown = emit - {"md", "json", "pptx"}
    if unknown:
        print(f"error: unknown emit target(s): {sorted(unknown)}", file=sys.stderr)
        return EXIT_INPUT
    cfg = PipelineConfig(
        input_path=args.input,
        source_format=args.source_format,
        out_dir=args.out,
        summary=SummaryConfig(strategy=args.strategy, ratio=args.ratio, seed=args.seed),
        base_url=args.base_url,
        audio_mode=args.audio,
        endpoint=args.endpoint,
        voice_ref=args.voice_ref,
        emit_markdown="md" in emit,
        emit_json="json" in emit,
        emit_pptx="pptx" in emit,
        model_path=args.model,
    )
    report = run(cfg)
    print(f"sections: {report.section_count}  slides: {report.slide_count}")
    for name in report.artifacts:
        print(f"wrote {Path(report.out_dir) / name}")
    print(f"manifest: {report.manifest_path}")
    timing = "  ".join(f"{k}={v:.3f}s" for k, v in report.stage_seconds.items())
    print(f"timings: {timing}")
    if report.audio_errors:
        for message in report.audio_errors:
            print(f"audio error: {message}", file=sys.stderr)
        return EXIT_SERVICE if report.service_unreachable else EXIT_STAGE
    return EXIT_OK


def _cmd_eval(args: argparse.Namespace) -> int:
    if not args.corpus:
        print("error: --corpus is required (flag or config file)", file=sys.stderr)
        return EXIT_INPUT
    strategies = [s.strip() for s in args.strategies.split(",") if s.strip()]
    allowed = {"centroid", "textrank", "regression", "random"}
    unknown = set(strategies) - allowed
    if unknown:
        print(f"error: unknown strategies: {sorted(unknown)}", file=sys.stderr)
        return EXIT_INPUT
    cfg = SummaryConfig(ratio=args.ratio, seed=args.seed)
    report = eval_corpus(args.corpus, strategies, cfg, out_dir=args.out)
    print(f"mean scores over {len(report.per_document)} documents\n")
    print(render_comparison(report.means), end="")
    for path in report.paths:
        print(f"wrote {path}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    try:
        args = _parse_args(argv)
        if args.command == "build":
            return _cmd_build(args)
        return _cmd_eval(args)
    except PipelineStageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        cause = exc.cause
        if isinstance(cause, (ServiceUnreachableError, SynthesisTimeoutError)):
            return EXIT_SERVICE
        if isinstance(cause, _INPUT_ERROR_TYPES):
            return EXIT_INPUT
        return EXIT_STAGE
    except (ServiceUnreachableError, SynthesisTimeoutError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SERVICE
    except _INPUT_ERROR_TYPES as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DeckforgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STAGE


def entrypoint() -> None:
    sys.exit(main())
