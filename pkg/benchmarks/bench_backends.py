#!/usr/bin/env python3
"""Benchmark: compiled alignment kernels vs the pure-Python fallback.

Times the scoring-matrix fill plus backtrack on synthetic conversations of
increasing size, once per backend, and prints the speedup. Run from the
repository root:

    python3 benchmarks/bench_backends.py
"""

import random
import time

from diaralign.model import SeqToken, SequenceSet, SpeakerSequence
from diaralign.msa import dp

try:
    from diaralign.msa import _kernels
except ImportError:
    _kernels = None

CASES = [
    # (hypothesis tokens, reference speakers, tokens per speaker)
    (60, 1, 60),
    (120, 1, 120),
    (60, 2, 30),
    (90, 2, 45),
    (40, 3, 13),
    (60, 3, 20),
]


def synth_sequences(rng, n_hyp, n_refs, ref_len):
    vocab = [f"word{i:03d}" for i in range(max(n_hyp, 40))]
    hyp = tuple(SeqToken(rng.choice(vocab), "", "h", 0, i) for i in range(n_hyp))
    refs = tuple(
        SpeakerSequence(f"r{m}", tuple(
            SeqToken(rng.choice(vocab), "", f"r{m}", m, p) for p in range(ref_len)))
        for m in range(n_refs)
    )
    return SequenceSet(hypothesis=hyp, references=refs, hyp_speakers=("h",))


def run(backend, texts, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        started = time.perf_counter()
        cells = backend.populate_flat(texts, 1, 2, 1, -1, -1)
        backend.backtrack_moves(texts, cells, 1, 2, 1, -1, -1)
        best = min(best, time.perf_counter() - started)
    return best


def main():
    rng = random.Random(1)
    print(f"{'case':>22} {'cells':>10} {'pure':>10} {'compiled':>10} {'speedup':>8}")
    for n_hyp, n_refs, ref_len in CASES:
        seqs = synth_sequences(rng, n_hyp, n_refs, ref_len)
        texts = seqs.texts()
        cells = 1
        for n in seqs.lengths():
            cells *= n + 1
        pure = run(dp, texts)
        label = f"{n_hyp}x{n_refs}x{ref_len}"
        if _kernels is None:
            print(f"{label:>22} {cells:>10} {pure:>9.4f}s {'n/a':>10} {'n/a':>8}")
            continue
        fast = run(_kernels, texts)
        assert (dp.populate_flat(texts, 1, 2, 1, -1, -1)
                == _kernels.populate_flat(texts, 1, 2, 1, -1, -1)).all()
        print(f"{label:>22} {cells:>10} {pure:>9.4f}s {fast:>9.4f}s {pure / fast:>7.1f}x")


if __name__ == "__main__":
    main()
