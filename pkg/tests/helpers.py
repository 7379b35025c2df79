"""Shared fixtures and independent oracles for the test suite.

The oracles deliberately avoid the library's DP code paths: edit distance is
a plain full-matrix fill, alignment optima come from searching the move space
directly, and assignment optima from permutation enumeration.
"""

from __future__ import annotations

import random
from itertools import permutations

from diaralign.model import SeqToken, SequenceSet, SpeakerSequence
from diaralign.msa.engine import MatchParams

# --- working example ------------------------------------------------------

REFERENCE_DOC = {
    "speakers": ["A", "B"],
    "utterances": [
        {"speaker": "A", "text": "You're going to go to uh Amsterdam.",
         "start_ms": 0, "end_ms": 2100},
        {"speaker": "B", "text": "indeed indeed", "overlap": True},
    ],
}

HYPOTHESIS_DOC = {
    "speakers": ["A'"],
    "utterances": [
        {"speaker": "A'", "text": "You're gonna to go to indeed indeed Amsterdam."},
    ],
}

# Full expected scoring matrix for the worked example, 9 x 8 x 3 cells,
# indexed [k][j][i] (third dim, reference row, hypothesis row).
GOLDEN_MATRIX = [
    [
        [0, -1, -2, -3, -4, -5, -6, -7, -8],
        [-1, 2, 1, 0, -1, -2, -3, -4, -5],
        [-2, 1, 1, 0, -1, -2, -3, -4, -5],
        [-3, 0, 0, 3, 2, 1, 0, -1, -2],
        [-4, -1, -1, 2, 5, 4, 3, 2, 1],
        [-5, -2, -2, 1, 4, 7, 6, 5, 4],
        [-6, -3, -3, 0, 3, 6, 6, 5, 4],
        [-7, -4, -4, -1, 2, 5, 5, 5, 7],
    ],
    [
        [-1, -1, -2, -3, -4, -5, -3, -4, -5],
        [-2, 1, 1, 0, -1, -2, 0, -1, -2],
        [-3, 0, 0, 0, -1, -2, 0, -1, -2],
        [-4, -1, -1, 2, 2, 1, 3, 2, 1],
        [-5, -2, -2, 1, 4, 4, 6, 5, 4],
        [-6, -3, -3, 0, 3, 6, 9, 8, 7],
        [-7, -4, -4, -1, 2, 5, 8, 8, 7],
        [-8, -5, -5, -2, 1, 4, 7, 7, 10],
    ],
    [
        [-2, -2, -2, -3, -4, -5, -3, -1, -2],
        [-3, 0, 0, 0, -1, -2, 0, 2, 1],
        [-4, -1, -1, -1, -1, -2, 0, 2, 1],
        [-5, -2, -2, 1, 1, 1, 3, 5, 4],
        [-6, -3, -3, 0, 3, 3, 6, 8, 7],
        [-7, -4, -4, -1, 2, 5, 8, 11, 10],
        [-8, -5, -5, -2, 1, 4, 7, 10, 10],
        [-9, -6, -6, -3, 0, 3, 6, 9, 12],
    ],
]

# Expected alignment columns (entries per row, class label), left to right.
GOLDEN_COLUMNS = [
    ((0, 0, None), "full"),
    ((1, 1, None), "mismatch"),
    ((2, 2, None), "full"),
    ((3, 3, None), "full"),
    ((4, 4, None), "full"),
    ((5, None, 0), "full"),
    ((6, None, 1), "full"),
    ((None, 5, None), "gap_ref"),
    ((7, 6, None), "full"),
]

# Cells visited walking back from the terminal, and the predecessor values
# found at each step.
GOLDEN_WALK = [
    (8, 7, 2), (7, 6, 2), (7, 5, 2), (6, 5, 1), (5, 5, 0),
    (4, 4, 0), (3, 3, 0), (2, 2, 0), (1, 1, 0), (0, 0, 0),
]
GOLDEN_WALK_FOUND = [10, 11, 9, 7, 5, 3, 1, 2, 0]


def make_transcript_doc(utterances, speakers=None, overlap_flags=None):
    """Build a transcript dict from (speaker, text) pairs."""
    if speakers is None:
        speakers = []
        for speaker, _ in utterances:
            if speaker not in speakers:
                speakers.append(speaker)
    out = []
    for i, (speaker, text) in enumerate(utterances):
        obj = {"speaker": speaker, "text": text}
        if overlap_flags and i in overlap_flags:
            obj["overlap"] = True
        out.append(obj)
    return {"speakers": list(speakers), "utterances": out}


# --- independent oracles ---------------------------------------------------

def naive_levenshtein(a: str, b: str) -> int:
    """Full-matrix edit distance, no shortcuts."""
    la, lb = len(a), len(b)
    table = [[0] * (lb + 1) for _ in range(la + 1)]
    for i in range(la + 1):
        table[i][0] = i
    for j in range(lb + 1):
        table[0][j] = j
    for i in range(1, la + 1):
        for j in range(1, lb + 1):
            table[i][j] = min(
                table[i - 1][j] + 1,
                table[i][j - 1] + 1,
                table[i - 1][j - 1] + (a[i - 1] != b[j - 1]),
            )
    return table[la][lb]


def oracle_match(a: str, b: str, params: MatchParams) -> int:
    dist = naive_levenshtein(a, b)
    if dist == 0:
        return params.score_full
    if dist <= params.distance_threshold:
        return params.score_partial
    return params.score_mismatch


def oracle_best_score(texts, params: MatchParams) -> int:
    """Maximum alignment score by memoized search over the move space."""
    n = len(texts)
    gap = params.score_gap
    cache: dict[tuple[int, ...], int] = {}

    def best(state: tuple[int, ...]) -> int:
        if not any(state):
            return 0
        if state in cache:
            return cache[state]
        cands = []
        for m in range(n):
            if state[m]:
                nxt = state[:m] + (state[m] - 1,) + state[m + 1:]
                cands.append(best(nxt) + gap)
        if state[0]:
            for m in range(1, n):
                if state[m]:
                    nxt = tuple(v - 1 if k in (0, m) else v for k, v in enumerate(state))
                    sc = oracle_match(texts[0][state[0] - 1], texts[m][state[m] - 1], params)
                    cands.append(best(nxt) + sc)
        result = max(cands)
        cache[state] = result
        return result

    return best(tuple(len(t) for t in texts))


def exhaustive_best_score(texts, params: MatchParams) -> int:
    """Maximum over a complete enumeration of legal alignments (tiny inputs)."""
    n = len(texts)
    gap = params.score_gap
    best_seen = [None]

    def walk(state: tuple[int, ...], score: int) -> None:
        if not any(state):
            if best_seen[0] is None or score > best_seen[0]:
                best_seen[0] = score
            return
        for m in range(n):
            if state[m]:
                nxt = state[:m] + (state[m] - 1,) + state[m + 1:]
                walk(nxt, score + gap)
        if state[0]:
            for m in range(1, n):
                if state[m]:
                    nxt = tuple(v - 1 if k in (0, m) else v for k, v in enumerate(state))
                    sc = oracle_match(texts[0][state[0] - 1], texts[m][state[m] - 1], params)
                    walk(nxt, score + sc)

    walk(tuple(len(t) for t in texts), 0)
    return best_seen[0]


def brute_force_assignment_min(costs) -> int:
    """Minimum assignment cost by enumerating all row-to-column permutations."""
    n = len(costs)
    return min(sum(costs[r][c] for r, c in enumerate(perm)) for perm in permutations(range(n)))


# --- random instance builders ----------------------------------------------

def random_word(rng: random.Random, alphabet="abc", max_len=3) -> str:
    return "".join(rng.choice(alphabet) for _ in range(rng.randint(1, max_len)))


def random_sequence_set(rng: random.Random, max_hyp=6, max_refs=2, max_ref_len=4) -> SequenceSet:
    """Random alignment input over a small alphabet, exercising all match classes."""
    n_refs = rng.randint(1, max_refs)
    hyp_len = rng.randint(0, max_hyp)
    hyp = tuple(
        SeqToken(text=random_word(rng), surface="", speaker="hyp0",
                 utterance_index=0, token_index=i)
        for i in range(hyp_len)
    )
    refs = []
    for m in range(n_refs):
        ref_len = rng.randint(0, max_ref_len)
        tokens = tuple(
            SeqToken(text=random_word(rng), surface="", speaker=f"ref{m}",
                     utterance_index=m, token_index=p)
            for p in range(ref_len)
        )
        refs.append(SpeakerSequence(f"ref{m}", tokens))
    return SequenceSet(hypothesis=hyp, references=tuple(refs), hyp_speakers=("hyp0",))


def random_transcript_pair(rng: random.Random, n_ref_speakers: int = 2,
                           n_utterances: int = 6, vocab_size: int = 18):
    """Random conversation plus a noisy transcription of it.

    The hypothesis randomly drops tokens, corrupts spellings, confuses
    speakers and appends fabricated content, exercising every column class
    and metric branch.
    """
    from diaralign.model import parse_transcript

    vocab = [f"word{i:02d}" for i in range(vocab_size)]
    ref_speakers = [chr(ord("A") + i) for i in range(n_ref_speakers)]
    hyp_speakers = [f"s{i}" for i in range(n_ref_speakers)]
    ref_utts = []
    hyp_utts = []
    for u in range(n_utterances):
        spk_idx = rng.randrange(n_ref_speakers)
        words = [rng.choice(vocab) for _ in range(rng.randint(1, 6))]
        ref_utts.append({"speaker": ref_speakers[spk_idx], "text": " ".join(words),
                         "overlap": rng.random() < 0.15})
        hyp_words = []
        for w in words:
            roll = rng.random()
            if roll < 0.12:
                continue  # dropped token
            if roll < 0.22:
                w = w + "x"  # spelling error (partial match)
            if roll < 0.30:
                w = rng.choice(vocab)  # recognition error
            hyp_words.append(w)
        if rng.random() < 0.15:
            hyp_words.append(f"extra{u}")
        if hyp_words:
            hyp_spk = hyp_speakers[spk_idx if rng.random() < 0.8
                                   else rng.randrange(n_ref_speakers)]
            hyp_utts.append({"speaker": hyp_spk, "text": " ".join(hyp_words)})
    reference = parse_transcript(
        {"speakers": ref_speakers, "utterances": ref_utts}, "reference")
    hypothesis = parse_transcript(
        {"speakers": hyp_speakers, "utterances": hyp_utts}, "hypothesis")
    return reference, hypothesis
