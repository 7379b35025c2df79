"""Pure-Python dynamic-programming backend.

This is the reference implementation of the n-dimensional scoring-matrix fill
and backtrack. The compiled extension (``_kernels``) mirrors its semantics;
equality of the two backends is enforced by tests. Use this module directly
only for small inputs or debugging — the engine picks the fast backend.
"""

from __future__ import annotations

from itertools import combinations as _subsets
from itertools import product

import numpy as np

NEG_INF = -(2**31)


def levenshtein(a: str, b: str) -> int:
    """Unit-cost edit distance (insert / delete / substitute)."""
    if a == b:
        return 0
    la, lb = len(a), len(b)
    if la == 0:
        return lb
    if lb == 0:
        return la
    prev = list(range(lb + 1))
    for i in range(1, la + 1):
        ca = a[i - 1]
        cur = [i] + [0] * lb
        for j in range(1, lb + 1):
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != b[j - 1]))
        prev = cur
    return prev[lb]


def bounded_levenshtein(a: str, b: str, limit: int) -> int:
    """Edit distance capped at ``limit``: returns min(distance, limit + 1)."""
    if a == b:
        return 0
    la, lb = len(a), len(b)
    if abs(la - lb) > limit:
        return limit + 1
    if la == 0 or lb == 0:
        return min(max(la, lb), limit + 1)
    # two-row fill with an early exit once a whole row exceeds the cap
    prev = list(range(lb + 1))
    for i in range(1, la + 1):
        ca = a[i - 1]
        cur = [i] + [0] * lb
        row_min = cur[0]
        for j in range(1, lb + 1):
            v = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != b[j - 1]))
            cur[j] = v
            if v < row_min:
                row_min = v
        if row_min > limit:
            return limit + 1
        prev = cur
    return min(prev[lb], limit + 1)


def match_score(a: str, b: str, d: int, full: int, partial: int, mismatch: int) -> int:
    if a == b:
        return full
    if d > 0 and bounded_levenshtein(a, b, d) <= d:
        return partial
    return mismatch


def subset_order(n_refs: int) -> list[tuple[int, ...]]:
    """Non-empty subsets of {0..n_refs}, smaller subsets first."""
    indices = range(n_refs + 1)
    out: list[tuple[int, ...]] = []
    for size in range(1, n_refs + 2):
        out.extend(_subsets(indices, size))
    return out


def iter_index_tuples(subset: tuple[int, ...], lengths: tuple[int, ...]):
    """Index tuples with coordinates in ``subset`` ranging 1..len, others 0."""
    chosen = set(subset)
    ranges = [range(1, lengths[dim] + 1) if dim in chosen else range(1) for dim in range(len(lengths))]
    return product(*ranges)


def _strides(dims: list[int]) -> list[int]:
    strides = [1] * len(dims)
    for m in range(len(dims) - 2, -1, -1):
        strides[m] = strides[m + 1] * dims[m + 1]
    return strides


def _pair_tables(token_lists, d, full, partial, mismatch):
    """Match-score tables hyp-token × ref-token, one per reference row."""
    x = token_lists[0]
    cache: dict[tuple[str, str], int] = {}
    tables = []
    for seq in token_lists[1:]:
        table = [0] * (len(x) * len(seq))
        k = 0
        for xt in x:
            for yt in seq:
                key = (xt, yt)
                score = cache.get(key)
                if score is None:
                    score = match_score(xt, yt, d, full, partial, mismatch)
                    cache[key] = score
                table[k] = score
                k += 1
        tables.append(table)
    return tables


def populate_flat(token_lists, d: int, full: int, partial: int, mismatch: int, gap: int) -> np.ndarray:
    """Fill the flattened scoring matrix, boundary subsets before interiors.

    Returns a 1-D int32 array of length prod(len(seq)+1 for seq in inputs),
    row-major over (hyp, ref_1, .., ref_n).
    """
    lengths = tuple(len(s) for s in token_lists)
    n_seqs = len(token_lists)
    dims = [l + 1 for l in lengths]
    strides = _strides(dims)
    total = 1
    for v in dims:
        total *= v
    cells = [0] * total
    tables = _pair_tables(token_lists, d, full, partial, mismatch)
    s0 = strides[0]
    for subset in subset_order(n_seqs - 1):
        for idx in iter_index_tuples(subset, lengths):
            flat = 0
            for m in range(n_seqs):
                flat += idx[m] * strides[m]
            i = idx[0]
            best = NEG_INF
            if i:
                best = cells[flat - s0] + gap
            for m in range(1, n_seqs):
                jm = idx[m]
                if jm:
                    c = cells[flat - strides[m]] + gap
                    if c > best:
                        best = c
                    if i:
                        c = cells[flat - s0 - strides[m]] + tables[m - 1][(i - 1) * lengths[m] + jm - 1]
                        if c > best:
                            best = c
            cells[flat] = best
    return np.asarray(cells, dtype=np.int32)


def backtrack_moves(token_lists, cells: np.ndarray, d: int, full: int, partial: int,
                    mismatch: int, gap: int) -> list[tuple[int, int]]:
    """Walk the filled matrix from the terminal cell back to the origin.

    Returns moves in left-to-right column order. Each move is ``(kind, dim)``:
    kind 0 pairs the hypothesis token with a token of reference row ``dim``;
    kind 1 advances ``dim`` alone against a gap. Ties take the first maximum
    in recurrence order: gap moves (hypothesis row, then reference rows),
    then pairing moves by reference row.
    """
    lengths = [len(s) for s in token_lists]
    n_seqs = len(token_lists)
    dims = [l + 1 for l in lengths]
    strides = _strides(dims)
    idx = list(lengths)
    flat = 0
    for m in range(n_seqs):
        flat += idx[m] * strides[m]
    moves: list[tuple[int, int]] = []
    x = token_lists[0]
    while any(idx):
        i = idx[0]
        best = NEG_INF
        best_move = None
        if i:
            best = int(cells[flat - strides[0]]) + gap
            best_move = (1, 0)
        for m in range(1, n_seqs):
            if idx[m]:
                c = int(cells[flat - strides[m]]) + gap
                if c > best:
                    best = c
                    best_move = (1, m)
        if i:
            xt = x[i - 1]
            for m in range(1, n_seqs):
                if idx[m]:
                    sc = match_score(xt, token_lists[m][idx[m] - 1], d, full, partial, mismatch)
                    c = int(cells[flat - strides[0] - strides[m]]) + sc
                    if c > best:
                        best = c
                        best_move = (0, m)
        if best != int(cells[flat]):  # matrix and walk disagree: corrupted input
            raise AssertionError("backtrack inconsistency at index %r" % (tuple(idx),))
        kind, dim = best_move
        moves.append(best_move)
        if kind == 0:
            idx[0] -= 1
            idx[dim] -= 1
            flat -= strides[0] + strides[dim]
        else:
            idx[dim] -= 1
            flat -= strides[dim]
    moves.reverse()
    return moves
