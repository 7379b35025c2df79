# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled dynamic-programming kernels.

Semantics mirror ``diaralign.msa.dp`` exactly; tests assert cell-for-cell
equality between the two backends. The hot paths are the n-dimensional
scoring-matrix fill and the per-row token match scoring.
"""

from libc.stdlib cimport free, malloc
from libc.string cimport memset

import numpy as np

cdef int NEG_INF = -(2 ** 31)
cdef int MAX_SEQS = 64


cdef int _ld(unicode a, unicode b, int limit) except? -2147483648:
    """Edit distance; capped at limit+1 when limit >= 0, exact otherwise."""
    cdef Py_ssize_t la = len(a)
    cdef Py_ssize_t lb = len(b)
    cdef Py_ssize_t i, j
    cdef int cost, v, row_min, result
    cdef int *prev
    cdef int *cur
    cdef int *tmp
    if la == 0:
        result = <int> lb
        return result if limit < 0 else min(result, limit + 1)
    if lb == 0:
        result = <int> la
        return result if limit < 0 else min(result, limit + 1)
    if limit >= 0 and (la - lb > limit or lb - la > limit):
        return limit + 1
    prev = <int *> malloc((lb + 1) * sizeof(int))
    cur = <int *> malloc((lb + 1) * sizeof(int))
    if prev == NULL or cur == NULL:
        free(prev)
        free(cur)
        raise MemoryError()
    try:
        for j in range(lb + 1):
            prev[j] = <int> j
        for i in range(1, la + 1):
            cur[0] = <int> i
            row_min = cur[0]
            for j in range(1, lb + 1):
                cost = 0 if a[i - 1] == b[j - 1] else 1
                v = prev[j] + 1
                if cur[j - 1] + 1 < v:
                    v = cur[j - 1] + 1
                if prev[j - 1] + cost < v:
                    v = prev[j - 1] + cost
                cur[j] = v
                if v < row_min:
                    row_min = v
            if limit >= 0 and row_min > limit:
                return limit + 1
            tmp = prev
            prev = cur
            cur = tmp
        result = prev[lb]
        if limit >= 0 and result > limit:
            result = limit + 1
        return result
    finally:
        free(prev)
        free(cur)


def levenshtein(a, b):
    """Unit-cost edit distance (insert / delete / substitute)."""
    if a == b:
        return 0
    return _ld(a, b, -1)


def bounded_levenshtein(a, b, int limit):
    """Edit distance capped at ``limit``: returns min(distance, limit + 1)."""
    if a == b:
        return 0
    return _ld(a, b, limit)


cdef inline int _match(unicode a, unicode b, int d, int full, int partial, int mismatch) except? -2147483648:
    if a == b:
        return full
    if d > 0 and _ld(a, b, d) <= d:
        return partial
    return mismatch


def populate_flat(list token_lists, int d, int full, int partial, int mismatch, int gap):
    """Fill the flattened scoring matrix; see ``dp.populate_flat``."""
    cdef int n_seqs = len(token_lists)
    if n_seqs < 1 or n_seqs > MAX_SEQS:
        raise ValueError("sequence count out of range")
    cdef long long lengths[64]
    cdef long long dims[64]
    cdef long long strides[64]
    cdef long long offs[64]
    cdef long long idx[64]
    cdef int m
    cdef long long total = 1
    cdef long long ref_total = 0
    for m in range(n_seqs):
        lengths[m] = len(<list> token_lists[m])
        dims[m] = lengths[m] + 1
    for m in range(n_seqs - 1, -1, -1):
        strides[m] = 1 if m == n_seqs - 1 else strides[m + 1] * dims[m + 1]
    for m in range(n_seqs):
        total *= dims[m]
    for m in range(1, n_seqs):
        offs[m] = ref_total
        ref_total += lengths[m]

    cells = np.zeros(total, dtype=np.int32)
    cdef int[::1] F = cells
    row_scores_arr = np.zeros(ref_total if ref_total > 0 else 1, dtype=np.int8)
    cdef signed char[::1] row_scores = row_scores_arr

    cdef list X = <list> token_lists[0]
    cdef list Ym
    cdef unicode xt
    cdef long long i, b, f, blocks
    cdef long long p
    cdef int best, cand

    blocks = strides[0]  # cells per hypothesis index, contiguous in row-major order
    f = 0
    for i in range(dims[0]):
        if i >= 1:
            xt = <unicode> X[i - 1]
            for m in range(1, n_seqs):
                Ym = <list> token_lists[m]
                for p in range(lengths[m]):
                    row_scores[offs[m] + p] = <signed char> _match(
                        xt, <unicode> Ym[p], d, full, partial, mismatch)
        memset(idx, 0, n_seqs * sizeof(long long))
        for b in range(blocks):
            best = NEG_INF
            if i >= 1:
                cand = F[f - strides[0]] + gap
                if cand > best:
                    best = cand
                for m in range(1, n_seqs):
                    if idx[m] >= 1:
                        cand = F[f - strides[0] - strides[m]] + row_scores[offs[m] + idx[m] - 1]
                        if cand > best:
                            best = cand
            for m in range(1, n_seqs):
                if idx[m] >= 1:
                    cand = F[f - strides[m]] + gap
                    if cand > best:
                        best = cand
            if best != NEG_INF:
                F[f] = best
            # origin stays 0 (already zero-initialized)
            f += 1
            for m in range(n_seqs - 1, 0, -1):
                idx[m] += 1
                if idx[m] < dims[m]:
                    break
                idx[m] = 0
    return cells


def backtrack_moves(list token_lists, cells, int d, int full, int partial, int mismatch, int gap):
    """Walk the filled matrix terminal-to-origin; see ``dp.backtrack_moves``."""
    cdef int n_seqs = len(token_lists)
    if n_seqs < 1 or n_seqs > MAX_SEQS:
        raise ValueError("sequence count out of range")
    cdef long long lengths[64]
    cdef long long dims[64]
    cdef long long strides[64]
    cdef long long idx[64]
    cdef int m
    for m in range(n_seqs):
        lengths[m] = len(<list> token_lists[m])
        dims[m] = lengths[m] + 1
        idx[m] = lengths[m]
    for m in range(n_seqs - 1, -1, -1):
        strides[m] = 1 if m == n_seqs - 1 else strides[m + 1] * dims[m + 1]

    cdef int[::1] F = cells
    cdef list X = <list> token_lists[0]
    cdef unicode xt
    cdef long long f = 0
    cdef int best, cand, kind, dim, remaining
    cdef list moves = []
    for m in range(n_seqs):
        f += idx[m] * strides[m]
    while True:
        remaining = 0
        for m in range(n_seqs):
            if idx[m] != 0:
                remaining = 1
                break
        if not remaining:
            break
        best = NEG_INF
        kind = -1
        dim = -1
        if idx[0] >= 1:
            cand = F[f - strides[0]] + gap
            if cand > best:
                best = cand
                kind = 1
                dim = 0
        for m in range(1, n_seqs):
            if idx[m] >= 1:
                cand = F[f - strides[m]] + gap
                if cand > best:
                    best = cand
                    kind = 1
                    dim = m
        if idx[0] >= 1:
            xt = <unicode> X[idx[0] - 1]
            for m in range(1, n_seqs):
                if idx[m] >= 1:
                    cand = F[f - strides[0] - strides[m]] + _match(
                        xt, <unicode> (<list> token_lists[m])[idx[m] - 1],
                        d, full, partial, mismatch)
                    if cand > best:
                        best = cand
                        kind = 0
                        dim = m
        if best != F[f]:
            raise AssertionError("backtrack inconsistency")
        moves.append((kind, dim))
        if kind == 0:
            idx[0] -= 1
            idx[dim] -= 1
            f -= strides[0] + strides[dim]
        else:
            idx[dim] -= 1
            f -= strides[dim]
    moves.reverse()
    return moves
