"""Barrier detection for memory-bounded segmented alignment.

A barrier is a short run of tokens that can only align one way: each token in
the run occurs exactly once in the hypothesis and exactly once across all
reference rows (an *anchor*), the run is consecutive in the hypothesis and in
one reference row, and it belongs to the longest chain of anchors whose
hypothesis order agrees with reference document order. Cutting at the middle
anchor of every sufficiently long run splits the alignment problem into
independent segments whose scoring matrices stay small.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from collections import Counter
from dataclasses import dataclass

from ..model import SequenceSet
from .engine import SegmentationConfig


@dataclass(frozen=True)
class _Anchor:
    hyp_pos: int
    ref_row: int  # 1-based alignment row
    ref_pos: int
    doc: tuple[int, int]  # reference document position


def _collect_anchors(seqs: SequenceSet) -> list[_Anchor]:
    hyp_texts = [t.text for t in seqs.hypothesis]
    hyp_counts = Counter(hyp_texts)
    ref_counts: Counter[str] = Counter()
    for ref in seqs.references:
        ref_counts.update(t.text for t in ref.tokens)
    unique = {
        text for text, n in hyp_counts.items() if n == 1 and ref_counts.get(text) == 1
    }
    if not unique:
        return []
    ref_where: dict[str, tuple[int, int, tuple[int, int]]] = {}
    for m, ref in enumerate(seqs.references, start=1):
        for p, tok in enumerate(ref.tokens):
            if tok.text in unique:
                ref_where[tok.text] = (m, p, tok.doc_position)
    anchors = []
    for px, text in enumerate(hyp_texts):
        if text in unique:
            m, p, doc = ref_where[text]
            anchors.append(_Anchor(hyp_pos=px, ref_row=m, ref_pos=p, doc=doc))
    return anchors  # already sorted by hypothesis position


def _longest_chain(anchors: list[_Anchor]) -> list[_Anchor]:
    """Longest subsequence whose reference document positions increase.

    Anchors arrive sorted by hypothesis position, so this keeps exactly the
    anchors consistent with both orders (patience-style LIS).
    """
    if not anchors:
        return []
    tails: list[tuple[int, int]] = []  # doc positions of smallest chain tails
    tail_idx: list[int] = []
    parents = [-1] * len(anchors)
    for i, anchor in enumerate(anchors):
        pos = bisect_left(tails, anchor.doc)
        if pos == len(tails):
            tails.append(anchor.doc)
            tail_idx.append(i)
        else:
            tails[pos] = anchor.doc
            tail_idx[pos] = i
        parents[i] = tail_idx[pos - 1] if pos > 0 else -1
    chain = []
    i = tail_idx[-1]
    while i != -1:
        chain.append(anchors[i])
        i = parents[i]
    chain.reverse()
    return chain


def _runs(chain: list[_Anchor], min_len: int) -> list[list[_Anchor]]:
    """Maximal runs consecutive in the hypothesis and in one reference row."""
    runs = []
    current: list[_Anchor] = []
    for anchor in chain:
        if (
            current
            and anchor.hyp_pos == current[-1].hyp_pos + 1
            and anchor.ref_row == current[-1].ref_row
            and anchor.ref_pos == current[-1].ref_pos + 1
        ):
            current.append(anchor)
        else:
            if len(current) >= min_len:
                runs.append(current)
            current = [anchor]
    if len(current) >= min_len:
        runs.append(current)
    return runs


def detect_barriers(seqs: SequenceSet, cfg: SegmentationConfig) -> list[tuple[int, ...]]:
    """Cut positions splitting every row of the alignment input.

    Each cut is an index tuple (hypothesis count, per-reference-row counts):
    the number of leading tokens of each row that fall in the earlier
    segment. Cuts whose segments would hold fewer than ``min_segment_len``
    hypothesis tokens are discarded.
    """
    anchors = _collect_anchors(seqs)
    chain = _longest_chain(anchors)
    runs = _runs(chain, cfg.barrier_len)
    if not runs:
        return []

    ref_docs = [[t.doc_position for t in ref.tokens] for ref in seqs.references]
    n_hyp = len(seqs.hypothesis)
    cuts: list[tuple[int, ...]] = []
    prev_x = 0
    for run in runs:
        mid = run[len(run) // 2]
        cut_x = mid.hyp_pos + 1
        if cut_x - prev_x < cfg.min_segment_len or cut_x >= n_hyp:
            continue
        cut = (cut_x,) + tuple(bisect_right(docs, mid.doc) for docs in ref_docs)
        cuts.append(cut)
        prev_x = cut_x
    while cuts and n_hyp - cuts[-1][0] < cfg.min_segment_len:
        cuts.pop()
    return cuts
