"""End-to-end evaluation: align, map speakers, compute selected metrics.

Both the CLI and the HTTP service build their responses here so the two
surfaces emit byte-identical JSON for identical inputs.
"""

from __future__ import annotations

import json

from . import metrics as metrics_mod
from .errors import MetricUndefinedError, SchemaError
from .mapping import map_speakers, mapping_to_obj
from .metrics import SegmentAnnotation
from .model import (
    NormalizationConfig,
    Transcript,
    extract_sequences,
    transcript_to_obj,
)
from .msa.engine import (
    AlignmentMatrix,
    MatchParams,
    SegmentationConfig,
    align_sequences,
    alignment_to_obj,
)

METRIC_NAMES = ("wer", "wder", "tder", "df1", "error_counts", "der")
DEFAULT_METRICS = ("wer", "wder", "tder", "df1", "error_counts")


def options_from_obj(obj: dict | None, path: str = "options"):
    """Parse shared alignment options into config objects."""
    obj = obj or {}
    if not isinstance(obj, dict):
        raise SchemaError(path, "must be an object")

    def _bool(key: str, default: bool) -> bool:
        value = obj.get(key, default)
        if not isinstance(value, bool):
            raise SchemaError(f"{path}.{key}", "must be a boolean")
        return value

    def _int(container: dict, key: str, default: int, minimum: int, where: str) -> int:
        value = container.get(key, default)
        if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
            raise SchemaError(f"{where}.{key}", f"must be an integer >= {minimum}")
        return value

    normalization = NormalizationConfig(
        strip_punctuation=_bool("strip_punctuation", True),
        case_fold=_bool("case_fold", True),
    )
    params = MatchParams(distance_threshold=_int(obj, "distance", 1, 0, path))
    seg_obj = obj.get("segmentation", {})
    if not isinstance(seg_obj, dict):
        raise SchemaError(f"{path}.segmentation", "must be an object")
    seg_path = f"{path}.segmentation"
    enabled = seg_obj.get("enabled", True)
    if not isinstance(enabled, bool):
        raise SchemaError(f"{seg_path}.enabled", "must be a boolean")
    try:
        segmentation = SegmentationConfig(
            enabled=enabled,
            barrier_len=_int(seg_obj, "barrier_len", 3, 1, seg_path),
            min_segment_len=_int(seg_obj, "min_segment_len", 30, 1, seg_path),
            cell_budget=_int(seg_obj, "cell_budget", SegmentationConfig().cell_budget, 1, seg_path),
        )
    except ValueError as exc:
        raise SchemaError(seg_path, str(exc)) from exc
    return normalization, params, segmentation


def segments_from_obj(items, path: str = "segments") -> list[SegmentAnnotation]:
    if not isinstance(items, list):
        raise SchemaError(path, "must be a list of segment annotations")
    segments = []
    for i, raw in enumerate(items):
        where = f"{path}[{i}]"
        if not isinstance(raw, dict):
            raise SchemaError(where, "must be an object")
        try:
            segments.append(SegmentAnnotation(
                dur=float(raw["dur"]),
                n_ref=int(raw["n_ref"]),
                n_hyp=int(raw["n_hyp"]),
                n_correct=int(raw["n_correct"]),
            ))
        except KeyError as exc:
            raise SchemaError(where, f"missing field {exc.args[0]!r}") from exc
        except (TypeError, ValueError) as exc:
            raise SchemaError(where, str(exc)) from exc
    return segments


def select_metrics(names, segments) -> tuple[str, ...]:
    if names is None:
        selected = list(DEFAULT_METRICS)
        if segments is not None:
            selected.append("der")
        return tuple(selected)
    out = []
    for name in names:
        if name not in METRIC_NAMES:
            raise SchemaError("metrics", f"unknown metric {name!r}; options: {', '.join(METRIC_NAMES)}")
        if name not in out:
            out.append(name)
    if not out:
        raise SchemaError("metrics", "metric selection must not be empty")
    if "der" in out and segments is None:
        raise SchemaError("metrics", "der requires segment annotations")
    return tuple(out)


def build_report(alignment: AlignmentMatrix, mapping, reference: Transcript,
                 selected, segments=None) -> dict:
    """Metric report over one alignment; undefined metrics are reported
    per metric without aborting the others."""
    report: dict = {}
    undefined: dict[str, str] = {}

    def _run(name, fn):
        try:
            return fn()
        except MetricUndefinedError as exc:
            undefined[name] = str(exc)
            return None

    if "wer" in selected:
        report["wer"] = _run("wer", lambda: metrics_mod.wer(alignment))
    if "wder" in selected:
        report["wder"] = _run("wder", lambda: metrics_mod.wder(alignment, mapping))
    if "tder" in selected:
        result = _run("tder", lambda: metrics_mod.tder(alignment, mapping, reference))
        if result is None:
            report["tder"] = None
            report["tder_decomposition"] = None
        else:
            rate, breakdown = result
            report["tder"] = rate
            report["tder_decomposition"] = {
                "speaker_error": breakdown.speaker_error,
                "false_alarm": breakdown.false_alarm,
                "missed_speech": breakdown.missed_speech,
            }
    if "df1" in selected:
        result = _run("df1", lambda: metrics_mod.df1(alignment, mapping))
        report["df1"] = None if result is None else {
            "precision": result.precision, "recall": result.recall, "f1": result.f1,
        }
    if "error_counts" in selected:
        counts = metrics_mod.classify_errors(alignment, reference)
        report["error_counts"] = {
            "missing": counts.missing,
            "extra": counts.extra,
            "substitution": counts.substitution,
            "overlap": counts.overlap,
            "ref_tokens": counts.ref_tokens,
            "percent": counts.percentages(),
        }
    if "der" in selected:
        result = _run("der", lambda: metrics_mod.der(segments))
        if result is None:
            report["der"] = None
            report["der_decomposition"] = None
        else:
            rate, breakdown = result
            report["der"] = rate
            report["der_decomposition"] = {
                "speaker_error": breakdown.speaker_error,
                "false_alarm": breakdown.false_alarm,
                "missed_speech": breakdown.missed_speech,
            }
    report["undefined"] = undefined
    return report


def evaluate_pair(reference: Transcript, hypothesis: Transcript,
                  params: MatchParams | None = None,
                  segmentation: SegmentationConfig | None = None,
                  metric_names=None, segments=None) -> dict:
    """Produce the full evaluation bundle for one transcript pair."""
    params = params or MatchParams()
    segmentation = segmentation or SegmentationConfig()
    selected = select_metrics(metric_names, segments)
    seqs = extract_sequences(reference, hypothesis)
    alignment = align_sequences(seqs, params, segmentation)
    mapping = map_speakers(alignment)
    report = build_report(alignment, mapping, reference, selected, segments)
    return {
        "reference": transcript_to_obj(reference),
        "hypothesis": transcript_to_obj(hypothesis),
        "stats": {
            "reference": {
                "tokens": reference.token_count(),
                "speakers": len(reference.speakers),
            },
            "hypothesis": {
                "tokens": hypothesis.token_count(),
                "speakers": len(hypothesis.speakers),
            },
        },
        "alignment": alignment_to_obj(alignment),
        "mapping": mapping_to_obj(mapping),
        "report": report,
    }


def to_json_bytes(obj: dict) -> bytes:
    """Canonical JSON rendering shared by the CLI and the service."""
    return (json.dumps(obj, ensure_ascii=False, indent=2) + "\n").encode("utf-8")
