"""Multi-sequence alignment engine.

Aligns the hypothesis token sequence against one sequence per reference
speaker with an n-dimensional extension of Needleman-Wunsch. A cell move
either pairs the hypothesis token with exactly one reference token (scored by
Levenshtein-thresholded match classes) or advances a single row against a
gap; two reference tokens are never paired with each other, and one
hypothesis token never pairs with more than one reference token. Interior
cells therefore consult 2*n'-1 predecessors for n' rows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import BudgetError
from ..model import SeqToken, SequenceSet, SpeakerSequence
from . import dp
from .backend import kernels

DEFAULT_CELL_BUDGET = 500_000_000

COL_FULL = "full"
COL_PARTIAL = "partial"
COL_MISMATCH = "mismatch"
COL_GAP_HYP = "gap_hyp"  # hypothesis token with no reference partner (insertion)
COL_GAP_REF = "gap_ref"  # reference token with no hypothesis partner (deletion)

PAIR_CLASSES = (COL_FULL, COL_PARTIAL, COL_MISMATCH)


@dataclass(frozen=True)
class MatchParams:
    """Token match scoring: full / partial / mismatch classes plus gaps.

    Two tokens match fully when their edit distance is 0, partially when it
    is at most ``distance_threshold``, and mismatch otherwise. A token kept
    against a gap always scores ``score_gap``.
    """

    distance_threshold: int = 1
    score_full: int = 2
    score_partial: int = 1
    score_mismatch: int = -1
    score_gap: int = -1

    def __post_init__(self):
        if self.distance_threshold < 0:
            raise ValueError("distance_threshold must be >= 0")
        if not (self.score_full > self.score_partial > self.score_mismatch):
            raise ValueError("scores must satisfy full > partial > mismatch")
        if self.score_gap >= 0:
            raise ValueError("score_gap must be negative")


DEFAULT_PARAMS = MatchParams()


@dataclass(frozen=True)
class SegmentationConfig:
    """Barrier-based segmentation of long inputs to bound matrix memory."""

    enabled: bool = True
    barrier_len: int = 3
    min_segment_len: int = 30
    cell_budget: int = DEFAULT_CELL_BUDGET

    def __post_init__(self):
        if self.barrier_len < 1:
            raise ValueError("barrier_len must be >= 1")
        if self.min_segment_len < self.barrier_len:
            raise ValueError("min_segment_len must be >= barrier_len")
        if self.cell_budget < 1:
            raise ValueError("cell_budget must be positive")


DEFAULT_SEGMENTATION = SegmentationConfig()


def levenshtein(a: str, b: str) -> int:
    """Unit-cost edit distance between two strings."""
    return kernels.levenshtein(a, b)


def match(tokens, params: MatchParams = DEFAULT_PARAMS) -> int:
    """Score one token against a gap, or a hypothesis/reference token pair."""
    items = list(tokens)
    if len(items) == 1:
        return params.score_gap
    if len(items) == 2:
        return _match_score(items[0], items[1], params)
    raise ValueError("match takes one or two tokens, got %d" % len(items))


def _match_score(a: str, b: str, params: MatchParams) -> int:
    if a == b:
        return params.score_full
    d = params.distance_threshold
    if d > 0 and kernels.bounded_levenshtein(a, b, d) <= d:
        return params.score_partial
    return params.score_mismatch


def _pair_class(a: str, b: str, params: MatchParams) -> str:
    if a == b:
        return COL_FULL
    d = params.distance_threshold
    if d > 0 and kernels.bounded_levenshtein(a, b, d) <= d:
        return COL_PARTIAL
    return COL_MISMATCH


def combinations(n_refs: int) -> list[tuple[int, ...]]:
    """Fill order over row subsets: all non-empty subsets of {0..n_refs},
    smaller subsets first so boundary cells precede the interiors they feed."""
    if n_refs < 0:
        raise ValueError("n_refs must be >= 0")
    return dp.subset_order(n_refs)


def index_perm(subset: tuple[int, ...], seqs: SequenceSet) -> list[tuple[int, ...]]:
    """Index tuples generated by one subset: chosen rows range 1..len, others 0."""
    return list(dp.iter_index_tuples(tuple(subset), seqs.lengths()))


@dataclass(frozen=True)
class ScoringMatrix:
    """Dense n-dimensional score table with row-major stride indexing."""

    dims: tuple[int, ...]
    strides: tuple[int, ...]
    cells: np.ndarray  # flat int32, length prod(dims)

    def __getitem__(self, idx: tuple[int, ...]) -> int:
        flat = 0
        for m, v in enumerate(idx):
            if not 0 <= v < self.dims[m]:
                raise IndexError(f"index {idx} out of bounds for dims {self.dims}")
            flat += v * self.strides[m]
        return int(self.cells[flat])

    @property
    def terminal(self) -> tuple[int, ...]:
        return tuple(d - 1 for d in self.dims)

    @property
    def size(self) -> int:
        return int(self.cells.shape[0])


def matrix_cells_required(seqs: SequenceSet) -> int:
    total = 1
    for n in seqs.lengths():
        total *= n + 1
    return total


def populate(seqs: SequenceSet, params: MatchParams = DEFAULT_PARAMS,
             cell_budget: int = DEFAULT_CELL_BUDGET) -> ScoringMatrix:
    """Fill the scoring matrix for the given sequences.

    Raises :class:`BudgetError` when the matrix would exceed ``cell_budget``
    cells; enable segmentation (see :func:`align`) for such inputs.
    """
    total = matrix_cells_required(seqs)
    if total > cell_budget:
        raise BudgetError(
            f"scoring matrix needs {total} cells, budget is {cell_budget}; "
            "enable segmentation to bound memory"
        )
    dims = tuple(n + 1 for n in seqs.lengths())
    strides = tuple(dp._strides(list(dims)))
    cells = kernels.populate_flat(
        seqs.texts(), params.distance_threshold, params.score_full,
        params.score_partial, params.score_mismatch, params.score_gap,
    )
    return ScoringMatrix(dims=dims, strides=strides, cells=cells)


def admissible_moves(idx: tuple[int, ...]) -> list[tuple[str, int, tuple[int, ...]]]:
    """Predecessors a cell may extend: ``(kind, row, predecessor index)``.

    ``gap`` moves advance one row alone; ``pair`` moves advance the
    hypothesis row together with one reference row. Interior cells (all
    indices >= 1) have exactly 2*n'-1 of them for n' rows; moves needing an
    index below zero are excluded.
    """
    moves = []
    if idx[0] >= 1:
        moves.append(("gap", 0, (idx[0] - 1,) + idx[1:]))
    for m in range(1, len(idx)):
        if idx[m] >= 1:
            moves.append(("gap", m, tuple(v - 1 if k == m else v for k, v in enumerate(idx))))
    if idx[0] >= 1:
        for m in range(1, len(idx)):
            if idx[m] >= 1:
                moves.append(
                    ("pair", m, tuple(v - 1 if k in (0, m) else v for k, v in enumerate(idx))))
    return moves


def score_cell(idx: tuple[int, ...], seqs: SequenceSet, matrix: ScoringMatrix,
               params: MatchParams = DEFAULT_PARAMS) -> int:
    """Recompute one cell's score from its predecessors.

    All predecessors of ``idx`` must already hold their final values; the
    subset fill order (see :func:`combinations`) guarantees that.
    """
    rows = seqs.texts()
    best = None
    for kind, m, prev in admissible_moves(idx):
        if kind == "gap":
            cand = matrix[prev] + params.score_gap
        else:
            cand = matrix[prev] + _match_score(rows[0][idx[0] - 1], rows[m][idx[m] - 1], params)
        if best is None or cand > best:
            best = cand
    if best is None:
        raise ValueError("the origin cell has no predecessors")
    return best


@dataclass(frozen=True)
class AlignmentColumn:
    """One alignment column: per-row token positions (None = gap).

    Exactly one or two entries are set; two-entry columns always include the
    hypothesis row. ``label`` is one of full/partial/mismatch for pairs,
    gap_hyp for an unpaired hypothesis token, gap_ref for an unpaired
    reference token.
    """

    entries: tuple[int | None, ...]
    label: str

    @property
    def hyp_position(self) -> int | None:
        return self.entries[0]

    def ref_entry(self) -> tuple[int, int] | None:
        """(reference row, position) of the reference token, if any."""
        for m in range(1, len(self.entries)):
            if self.entries[m] is not None:
                return m, self.entries[m]
        return None


@dataclass(frozen=True)
class AlignmentMatrix:
    """Column-oriented alignment of the hypothesis row against n reference rows."""

    sequences: SequenceSet
    columns: tuple[AlignmentColumn, ...]
    score: int

    @property
    def n_rows(self) -> int:
        return 1 + self.sequences.n_refs

    @property
    def width(self) -> int:
        return len(self.columns)

    def row_positions(self, row: int) -> list[int]:
        """Non-gap positions of one row, in column order."""
        return [c.entries[row] for c in self.columns if c.entries[row] is not None]

    def column_score(self, col: AlignmentColumn, params: MatchParams = DEFAULT_PARAMS) -> int:
        if col.label == COL_FULL:
            return params.score_full
        if col.label == COL_PARTIAL:
            return params.score_partial
        if col.label == COL_MISMATCH:
            return params.score_mismatch
        return params.score_gap

    def hyp_token(self, col: AlignmentColumn) -> SeqToken | None:
        pos = col.hyp_position
        return None if pos is None else self.sequences.hypothesis[pos]

    def ref_token(self, col: AlignmentColumn) -> SeqToken | None:
        entry = col.ref_entry()
        if entry is None:
            return None
        row, pos = entry
        return self.sequences.references[row - 1].tokens[pos]


def _moves_to_columns(seqs: SequenceSet, moves, params: MatchParams,
                      offsets: tuple[int, ...] | None = None) -> list[AlignmentColumn]:
    n_rows = 1 + seqs.n_refs
    base = offsets or (0,) * n_rows
    counters = [0] * n_rows
    rows = seqs.texts()
    columns = []
    for kind, dim in moves:
        entries: list[int | None] = [None] * n_rows
        if kind == 0:
            label = _pair_class(rows[0][counters[0]], rows[dim][counters[dim]], params)
            entries[0] = base[0] + counters[0]
            entries[dim] = base[dim] + counters[dim]
            counters[0] += 1
            counters[dim] += 1
        elif dim == 0:
            label = COL_GAP_HYP
            entries[0] = base[0] + counters[0]
            counters[0] += 1
        else:
            label = COL_GAP_REF
            entries[dim] = base[dim] + counters[dim]
            counters[dim] += 1
        columns.append(AlignmentColumn(entries=tuple(entries), label=label))
    return columns


def backtrack(seqs: SequenceSet, matrix: ScoringMatrix,
              params: MatchParams = DEFAULT_PARAMS) -> AlignmentMatrix:
    """Recover the optimal alignment from a populated scoring matrix.

    Walks from the terminal cell to the origin choosing the predecessor that
    produced each cell's score; ties take the first maximum in recurrence
    order (hypothesis gap, reference gaps by row, then pairing moves by row).
    """
    moves = kernels.backtrack_moves(
        seqs.texts(), matrix.cells, params.distance_threshold, params.score_full,
        params.score_partial, params.score_mismatch, params.score_gap,
    )
    columns = _moves_to_columns(seqs, moves, params)
    return AlignmentMatrix(sequences=seqs, columns=tuple(columns),
                           score=matrix[matrix.terminal])


def _slice_sequences(seqs: SequenceSet, lo: tuple[int, ...], hi: tuple[int, ...]) -> SequenceSet:
    refs = tuple(
        SpeakerSequence(r.speaker, r.tokens[lo[m + 1]:hi[m + 1]])
        for m, r in enumerate(seqs.references)
    )
    return SequenceSet(hypothesis=seqs.hypothesis[lo[0]:hi[0]], references=refs,
                       hyp_speakers=seqs.hyp_speakers)


def _align_part(seqs: SequenceSet, base: tuple[int, ...], params: MatchParams,
                cfg: SegmentationConfig, allow_cut: bool):
    """Align one segment; recursively re-segment if it exceeds the budget."""
    from .segmentation import detect_barriers  # local import avoids a cycle

    if matrix_cells_required(seqs) <= cfg.cell_budget:
        matrix = populate(seqs, params, cfg.cell_budget)
        moves = kernels.backtrack_moves(
            seqs.texts(), matrix.cells, params.distance_threshold, params.score_full,
            params.score_partial, params.score_mismatch, params.score_gap,
        )
        return _moves_to_columns(seqs, moves, params, offsets=base), matrix[matrix.terminal]
    if not allow_cut:
        raise BudgetError(
            f"scoring matrix needs {matrix_cells_required(seqs)} cells, "
            f"budget is {cfg.cell_budget}; enable segmentation to bound memory"
        )
    cuts = detect_barriers(seqs, cfg)
    if not cuts:
        raise BudgetError(
            "segment exceeds the cell budget and no barrier cut positions "
            "were found to split it further"
        )
    return _align_parts(seqs, cuts, base, params, cfg)


def _align_parts(seqs: SequenceSet, cuts, base: tuple[int, ...], params: MatchParams,
                 cfg: SegmentationConfig):
    n_rows = 1 + seqs.n_refs
    bounds = [(0,) * n_rows] + list(cuts) + [seqs.lengths()]
    columns: list[AlignmentColumn] = []
    total = 0
    for lo, hi in zip(bounds, bounds[1:]):
        part = _slice_sequences(seqs, lo, hi)
        part_base = tuple(base[m] + lo[m] for m in range(n_rows))
        cols, score = _align_part(part, part_base, params, cfg, allow_cut=True)
        columns.extend(cols)
        total += score
    return columns, total


def align_sequences(seqs: SequenceSet, params: MatchParams = DEFAULT_PARAMS,
                    segmentation: SegmentationConfig = DEFAULT_SEGMENTATION) -> AlignmentMatrix:
    """Align extracted sequences, segmenting at barriers when enabled."""
    from .segmentation import detect_barriers

    n_rows = 1 + seqs.n_refs
    zero = (0,) * n_rows
    if segmentation.enabled:
        cuts = detect_barriers(seqs, segmentation)
        if cuts:
            columns, total = _align_parts(seqs, cuts, zero, params, segmentation)
        else:
            columns, total = _align_part(seqs, zero, params, segmentation, allow_cut=True)
    else:
        columns, total = _align_part(seqs, zero, params, segmentation, allow_cut=False)
    return AlignmentMatrix(sequences=seqs, columns=tuple(columns), score=total)


def align(reference, hypothesis, params: MatchParams = DEFAULT_PARAMS,
          segmentation: SegmentationConfig = DEFAULT_SEGMENTATION) -> AlignmentMatrix:
    """End-to-end alignment of a validated transcript pair."""
    from ..model import extract_sequences

    return align_sequences(extract_sequences(reference, hypothesis), params, segmentation)


@dataclass(frozen=True)
class PairwiseAlignment:
    """Classic two-sequence alignment; the multi-sequence baselines use it."""

    pairs: tuple[tuple[int | None, int | None], ...]
    score: int


def pairwise_nw(a, b, params: MatchParams = DEFAULT_PARAMS) -> PairwiseAlignment:
    """Textbook two-row Needleman-Wunsch over arbitrary string sequences.

    Shares the match scoring of the multi-sequence engine but none of its
    implementation, so it doubles as an independent check for the n=1 case.
    """
    a = list(a)
    b = list(b)
    la, lb = len(a), len(b)
    gap = params.score_gap
    score = [[0] * (lb + 1) for _ in range(la + 1)]
    for i in range(1, la + 1):
        score[i][0] = i * gap
    for j in range(1, lb + 1):
        score[0][j] = j * gap
    for i in range(1, la + 1):
        ai = a[i - 1]
        row = score[i]
        prev = score[i - 1]
        for j in range(1, lb + 1):
            row[j] = max(prev[j - 1] + _match_score(ai, b[j - 1], params),
                         prev[j] + gap, row[j - 1] + gap)
    pairs: list[tuple[int | None, int | None]] = []
    i, j = la, lb
    while i or j:
        if i and j and score[i][j] == score[i - 1][j - 1] + _match_score(a[i - 1], b[j - 1], params):
            pairs.append((i - 1, j - 1))
            i -= 1
            j -= 1
        elif i and score[i][j] == score[i - 1][j] + gap:
            pairs.append((i - 1, None))
            i -= 1
        else:
            pairs.append((None, j - 1))
            j -= 1
    pairs.reverse()
    return PairwiseAlignment(pairs=tuple(pairs), score=score[la][lb])


def alignment_to_obj(matrix: AlignmentMatrix) -> dict:
    """Serialize an alignment to its JSON schema (dict form).

    Gaps render as null; ``class`` carries the match class or gap direction.
    """
    columns = []
    for col in matrix.columns:
        hyp = matrix.hyp_token(col)
        ref = matrix.ref_token(col)
        columns.append({
            "hyp": None if hyp is None else {"utt": hyp.utterance_index, "tok": hyp.token_index},
            "ref": None if ref is None else {
                "speaker": ref.speaker, "utt": ref.utterance_index, "tok": ref.token_index,
            },
            "class": col.label,
        })
    return {"rows": matrix.n_rows, "columns": columns}
