"""Optimal hypothesis-to-reference speaker mapping.

The alignment pairs individual tokens; aggregating pairing columns per
(hypothesis speaker, reference speaker) yields an agreement count matrix.
Negating it turns the mapping problem into a minimum-cost assignment, solved
exactly with the Hungarian algorithm. Speakers assigned to padding rows or
columns, or whose assignment carries no agreement at all, stay unmapped.
"""

from __future__ import annotations

from dataclasses import dataclass

from .msa.engine import AlignmentMatrix


@dataclass(frozen=True)
class CostMatrix:
    """Square assignment costs: rows are hypothesis speakers, columns are
    reference speakers, padded with zero-cost dummies to square shape."""

    hyp_speakers: tuple[str, ...]
    ref_speakers: tuple[str, ...]
    costs: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.costs)


@dataclass(frozen=True)
class SpeakerMapping:
    """Injective partial mapping from hypothesis to reference speakers."""

    mapped: dict[str, str]
    unmapped_hyp: tuple[str, ...]
    unmapped_ref: tuple[str, ...]

    def reverse(self) -> dict[str, str]:
        return {ref: hyp for hyp, ref in self.mapped.items()}


def build_cost_matrix(alignment: AlignmentMatrix) -> CostMatrix:
    """Negated pairing counts between hypothesis and reference speakers.

    Every column that pairs a hypothesis token with a reference token
    (full, partial or mismatch) contributes -1 to the corresponding cell.
    """
    hyp_speakers = list(alignment.sequences.hyp_speakers)
    ref_speakers = [r.speaker for r in alignment.sequences.references]
    hyp_index = {s: i for i, s in enumerate(hyp_speakers)}
    ref_index = {s: i for i, s in enumerate(ref_speakers)}
    n = max(len(hyp_speakers), len(ref_speakers), 1)
    counts = [[0] * n for _ in range(n)]
    for col in alignment.columns:
        hyp_tok = alignment.hyp_token(col)
        ref_tok = alignment.ref_token(col)
        if hyp_tok is None or ref_tok is None:
            continue
        counts[hyp_index[hyp_tok.speaker]][ref_index[ref_tok.speaker]] -= 1
    return CostMatrix(
        hyp_speakers=tuple(hyp_speakers),
        ref_speakers=tuple(ref_speakers),
        costs=tuple(tuple(row) for row in counts),
    )


def _assignment_min_cost(costs: list[list[int]]) -> int:
    """Minimum assignment cost of a square matrix (O(n^3) potentials method)."""
    n = len(costs)
    if n == 0:
        return 0
    INF = float("inf")
    u = [0] * (n + 1)
    v = [0] * (n + 1)
    match_of_col = [0] * (n + 1)  # 1-based row matched to each column, 0 = free
    for row in range(1, n + 1):
        match_of_col[0] = row
        j0 = 0
        minv = [INF] * (n + 1)
        used = [False] * (n + 1)
        way = [0] * (n + 1)
        while True:
            used[j0] = True
            i0 = match_of_col[j0]
            delta = INF
            j1 = 0
            for j in range(1, n + 1):
                if used[j]:
                    continue
                cur = costs[i0 - 1][j - 1] - u[i0] - v[j]
                if cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[match_of_col[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if match_of_col[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            match_of_col[j0] = match_of_col[j1]
            j0 = j1
    total = 0
    for j in range(1, n + 1):
        total += costs[match_of_col[j] - 1][j - 1]
    return total


def solve_assignment(costs) -> list[int]:
    """Optimal assignment (column per row), lexicographically smallest.

    Among all minimum-cost assignments, picks the one whose column vector is
    smallest row by row: row 0 takes the lowest column that still permits an
    optimal completion, then row 1, and so on.
    """
    matrix = [list(row) for row in costs]
    n = len(matrix)
    target = _assignment_min_cost(matrix)
    cols_left = list(range(n))
    rows_left = list(range(n))
    assigned = [0] * n
    fixed = 0
    for r in range(n):
        rows_left.remove(r)
        for c in cols_left:
            rest = [[matrix[rr][cc] for cc in cols_left if cc != c] for rr in rows_left]
            if fixed + matrix[r][c] + _assignment_min_cost(rest) == target:
                assigned[r] = c
                fixed += matrix[r][c]
                cols_left.remove(c)
                break
        else:  # pragma: no cover - optimal completion always exists
            raise AssertionError("no optimal assignment completion found")
    return assigned


def hungarian(cost: CostMatrix) -> SpeakerMapping:
    """Solve the speaker assignment and report unmapped speakers.

    Dummy assignments and zero-agreement assignments both leave the involved
    speakers unmapped: a mapping asserts observed token agreement.
    """
    assignment = solve_assignment(cost.costs)
    mapped: dict[str, str] = {}
    for r, c in enumerate(assignment):
        if r >= len(cost.hyp_speakers) or c >= len(cost.ref_speakers):
            continue
        if cost.costs[r][c] == 0:
            continue
        mapped[cost.hyp_speakers[r]] = cost.ref_speakers[c]
    unmapped_hyp = tuple(s for s in cost.hyp_speakers if s not in mapped)
    mapped_refs = set(mapped.values())
    unmapped_ref = tuple(s for s in cost.ref_speakers if s not in mapped_refs)
    return SpeakerMapping(mapped=mapped, unmapped_hyp=unmapped_hyp, unmapped_ref=unmapped_ref)


def map_speakers(alignment: AlignmentMatrix) -> SpeakerMapping:
    """Convenience composition: cost matrix construction plus assignment."""
    return hungarian(build_cost_matrix(alignment))


def mapping_to_obj(mapping: SpeakerMapping) -> dict:
    return {
        "mapped": dict(mapping.mapped),
        "unmapped_hyp": list(mapping.unmapped_hyp),
        "unmapped_ref": list(mapping.unmapped_ref),
    }
