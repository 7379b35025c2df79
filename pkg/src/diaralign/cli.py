"""Command-line interface.

Subcommands:
    align      write the alignment JSON for a transcript pair
    evaluate   write the full evaluation bundle (alignment, mapping, metrics)
    serve      run the HTTP evaluation service

Exit codes: 0 success, 1 internal/resource error, 2 input validation error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import BudgetError, SchemaError
from .model import NormalizationConfig, extract_sequences, parse_transcript
from .msa.engine import MatchParams, SegmentationConfig, align_sequences, alignment_to_obj
from .pipeline import evaluate_pair, segments_from_obj, to_json_bytes

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INVALID = 2


def _add_common_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--ref", required=True, help="reference transcript JSON path")
    parser.add_argument("--hyp", required=True, help="hypothesis transcript JSON path")
    parser.add_argument("--out", help="output path (default: stdout)")
    parser.add_argument("--distance", type=int, default=1, metavar="D",
                        help="Levenshtein threshold for partial matches (default 1)")
    parser.add_argument("--no-strip-punct", action="store_true",
                        help="keep punctuation during normalization")
    parser.add_argument("--no-case-fold", action="store_true",
                        help="keep letter case during normalization")
    parser.add_argument("--segment-len", type=int, default=30, metavar="L",
                        help="minimum hypothesis tokens per segment (default 30)")
    parser.add_argument("--barrier-len", type=int, default=3, metavar="B",
                        help="minimum anchors per barrier (default 3)")
    parser.add_argument("--no-segment", action="store_true",
                        help="disable barrier segmentation")
    parser.add_argument("--cell-budget", type=int, default=SegmentationConfig().cell_budget,
                        help="maximum scoring-matrix cells per segment")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diaralign",
        description="Transcript alignment and text-based diarization metrics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_align = sub.add_parser("align", help="align a transcript pair")
    _add_common_options(p_align)

    p_eval = sub.add_parser("evaluate", help="align, map speakers, compute metrics")
    _add_common_options(p_eval)
    p_eval.add_argument("--metrics", metavar="LIST",
                        help="comma-separated subset of wer,wder,tder,df1,error_counts,der")
    p_eval.add_argument("--segments", metavar="PATH",
                        help="segment-annotation JSON for DER "
                             '(list of {"dur","n_ref","n_hyp","n_correct"})')

    p_serve = sub.add_parser("serve", help="run the evaluation service")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--host", default="127.0.0.1")
    return parser


def _load_configs(args):
    normalization = NormalizationConfig(
        strip_punctuation=not args.no_strip_punct,
        case_fold=not args.no_case_fold,
    )
    params = MatchParams(distance_threshold=args.distance)
    segmentation = SegmentationConfig(
        enabled=not args.no_segment,
        barrier_len=args.barrier_len,
        min_segment_len=args.segment_len,
        cell_budget=args.cell_budget,
    )
    return normalization, params, segmentation


def _read_transcript(path: str, role: str, normalization: NormalizationConfig):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError(path, f"cannot read file: {exc}") from exc
    return parse_transcript(text, role, normalization)


def _emit(data: bytes, out: str | None) -> None:
    if out:
        Path(out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)


def _cmd_align(args) -> int:
    normalization, params, segmentation = _load_configs(args)
    reference = _read_transcript(args.ref, "reference", normalization)
    hypothesis = _read_transcript(args.hyp, "hypothesis", normalization)
    alignment = align_sequences(extract_sequences(reference, hypothesis), params, segmentation)
    _emit(to_json_bytes(alignment_to_obj(alignment)), args.out)
    return EXIT_OK


def _cmd_evaluate(args) -> int:
    normalization, params, segmentation = _load_configs(args)
    reference = _read_transcript(args.ref, "reference", normalization)
    hypothesis = _read_transcript(args.hyp, "hypothesis", normalization)
    segments = None
    if args.segments:
        try:
            raw = json.loads(Path(args.segments).read_text(encoding="utf-8"))
        except OSError as exc:
            raise SchemaError(args.segments, f"cannot read file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise SchemaError(args.segments, f"invalid JSON: {exc}") from exc
        segments = segments_from_obj(raw)
    metric_names = None
    if args.metrics:
        metric_names = [name.strip() for name in args.metrics.split(",") if name.strip()]
    bundle = evaluate_pair(reference, hypothesis, params, segmentation,
                           metric_names=metric_names, segments=segments)
    _emit(to_json_bytes(bundle), args.out)
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {"align": _cmd_align, "evaluate": _cmd_evaluate, "serve": _cmd_serve}
    try:
        return handlers[args.command](args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except BudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
