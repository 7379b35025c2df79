"""Transcript alignment and text-based speaker-diarization evaluation.

The toolkit aligns a hypothesis transcript against a multi-speaker reference
with an n-dimensional Needleman-Wunsch extension, maps hypothesis speakers to
reference speakers with the Hungarian algorithm, and computes word- and
utterance-level quality metrics (WER, WDER, TDER, DF1, DER, error taxonomy).
"""

from .errors import BudgetError, DiaralignError, MetricUndefinedError, SchemaError
from .mapping import SpeakerMapping, build_cost_matrix, hungarian, map_speakers
from .metrics import (
    SegmentAnnotation,
    alignment_accuracy,
    classify_errors,
    der,
    df1,
    tder,
    wder,
    wer,
)
from .model import (
    NormalizationConfig,
    Transcript,
    extract_sequences,
    normalize,
    parse_transcript,
    serialize_transcript,
)
from .msa import (
    AlignmentMatrix,
    MatchParams,
    ScoringMatrix,
    SegmentationConfig,
    align,
    backtrack,
    levenshtein,
    pairwise_nw,
    populate,
)

__version__ = "0.1.0"

__all__ = [
    "AlignmentMatrix",
    "BudgetError",
    "DiaralignError",
    "MatchParams",
    "MetricUndefinedError",
    "NormalizationConfig",
    "SchemaError",
    "ScoringMatrix",
    "SegmentAnnotation",
    "SegmentationConfig",
    "SpeakerMapping",
    "Transcript",
    "align",
    "alignment_accuracy",
    "backtrack",
    "build_cost_matrix",
    "classify_errors",
    "der",
    "df1",
    "extract_sequences",
    "hungarian",
    "levenshtein",
    "map_speakers",
    "normalize",
    "pairwise_nw",
    "parse_transcript",
    "populate",
    "serialize_transcript",
    "tder",
    "wder",
    "wer",
]
