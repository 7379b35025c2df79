"""Multi-sequence alignment: scoring-matrix DP, backtracking, segmentation."""

from .backend import backend_name
from .engine import (
    AlignmentColumn,
    AlignmentMatrix,
    MatchParams,
    PairwiseAlignment,
    ScoringMatrix,
    SegmentationConfig,
    align,
    align_sequences,
    alignment_to_obj,
    backtrack,
    combinations,
    index_perm,
    levenshtein,
    match,
    pairwise_nw,
    populate,
    score_cell,
)
from .segmentation import detect_barriers

__all__ = [
    "AlignmentColumn",
    "AlignmentMatrix",
    "MatchParams",
    "PairwiseAlignment",
    "ScoringMatrix",
    "SegmentationConfig",
    "align",
    "align_sequences",
    "alignment_to_obj",
    "backend_name",
    "backtrack",
    "combinations",
    "detect_barriers",
    "index_perm",
    "levenshtein",
    "match",
    "pairwise_nw",
    "populate",
    "score_cell",
]
