"""Evaluation metrics over token alignments and speaker mappings.

All transcript-level metrics are computed from an :class:`AlignmentMatrix`
(and, where speaker identity matters, a :class:`SpeakerMapping`):

* ``wer``      — word error rate: (deletions + insertions + substitutions)
                 over the reference token count.
* ``wder``     — word-level diarization error rate over aligned columns only:
                 the fraction whose mapped hypothesis speaker is wrong.
* ``tder``     — text-based diarization error rate: utterance-length-weighted
                 speaker errors, decomposed into speaker error / false alarm /
                 missed speech.
* ``df1``      — diarization precision/recall/F1 over speaker-correct aligned
                 tokens.
* ``der``      — classic time-weighted diarization error rate over externally
                 supplied segment annotations.
* ``classify_errors`` — missing / extra / substituted / overlapped token
                 taxonomy; percentages are relative to the reference token
                 count.

Metrics with an empty denominator raise :class:`MetricUndefinedError` rather
than returning 0 or NaN.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import MetricUndefinedError
from .mapping import SpeakerMapping
from .model import Transcript
from .msa.engine import (
    COL_FULL,
    COL_GAP_HYP,
    COL_GAP_REF,
    AlignmentMatrix,
    PAIR_CLASSES,
)


@dataclass(frozen=True)
class UtteranceStats:
    """Alignment facts about one reference utterance."""

    utterance_index: int
    speaker: str
    length: int  # retained tokens
    n_hyp_speakers: int  # distinct hypothesis speakers aligned to >= 1 token
    n_correct: int  # 1 when the correctly-mapped speaker is among them


@dataclass(frozen=True)
class DiarizationBreakdown:
    speaker_error: float
    false_alarm: float
    missed_speech: float

    def total(self) -> float:
        return self.speaker_error + self.false_alarm + self.missed_speech


@dataclass(frozen=True)
class Df1Score:
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class ErrorCounts:
    """Token error taxonomy over an alignment."""

    missing: int  # reference token undetected (not overlap-flagged)
    extra: int  # hypothesis token with no reference counterpart
    substitution: int  # paired tokens with differing text
    overlap: int  # undetected reference token inside an overlap-flagged utterance
    ref_tokens: int

    def percentages(self) -> dict[str, float]:
        """Percentage of reference tokens per category, 1-decimal precision."""
        if self.ref_tokens == 0:
            return {"missing": 0.0, "extra": 0.0, "substitution": 0.0, "overlap": 0.0}
        scale = 100.0 / self.ref_tokens
        return {
            "missing": round(self.missing * scale, 1),
            "extra": round(self.extra * scale, 1),
            "substitution": round(self.substitution * scale, 1),
            "overlap": round(self.overlap * scale, 1),
        }


@dataclass(frozen=True)
class SegmentAnnotation:
    """Speaker counts for one annotated audio segment."""

    dur: float
    n_ref: int
    n_hyp: int
    n_correct: int

    def __post_init__(self):
        if self.dur <= 0:
            raise ValueError("segment duration must be positive")
        if self.n_correct > min(self.n_ref, self.n_hyp):
            raise ValueError("n_correct cannot exceed min(n_ref, n_hyp)")
        if min(self.n_ref, self.n_hyp, self.n_correct) < 0:
            raise ValueError("speaker counts must be non-negative")


def _ref_token_count(alignment: AlignmentMatrix) -> int:
    return sum(len(r.tokens) for r in alignment.sequences.references)


def _hyp_token_count(alignment: AlignmentMatrix) -> int:
    return len(alignment.sequences.hypothesis)


def wer(alignment: AlignmentMatrix) -> float:
    """Word error rate: edit operations over reference tokens.

    Deletions are unpaired reference tokens, insertions unpaired hypothesis
    tokens, substitutions paired columns whose text differs (partial matches
    included).
    """
    total_ref = _ref_token_count(alignment)
    if total_ref == 0:
        raise MetricUndefinedError("WER is undefined: the reference has no tokens")
    deletions = insertions = substitutions = 0
    for col in alignment.columns:
        if col.label == COL_GAP_REF:
            deletions += 1
        elif col.label == COL_GAP_HYP:
            insertions += 1
        elif col.label != COL_FULL:
            substitutions += 1
    return (deletions + insertions + substitutions) / total_ref


def _is_speaker_correct(hyp_speaker: str, ref_speaker: str, mapping: SpeakerMapping) -> bool:
    return mapping.mapped.get(hyp_speaker) == ref_speaker


def wder(alignment: AlignmentMatrix, mapping: SpeakerMapping) -> float:
    """Word-level diarization error rate over aligned columns only.

    Unpaired tokens are invisible to this metric; hypothesis speakers without
    a mapping count as incorrect on every column they appear in.
    """
    aligned = wrong = 0
    for col in alignment.columns:
        if col.label not in PAIR_CLASSES:
            continue
        aligned += 1
        hyp_tok = alignment.hyp_token(col)
        ref_tok = alignment.ref_token(col)
        if not _is_speaker_correct(hyp_tok.speaker, ref_tok.speaker, mapping):
            wrong += 1
    if aligned == 0:
        raise MetricUndefinedError("WDER is undefined: no aligned token pairs")
    return wrong / aligned


def utterance_stats(alignment: AlignmentMatrix, mapping: SpeakerMapping,
                    reference: Transcript) -> list[UtteranceStats]:
    """Per-reference-utterance speaker counts feeding the TDER computation."""
    speakers_per_utt: dict[int, set[str]] = {}
    for col in alignment.columns:
        if col.label not in PAIR_CLASSES:
            continue
        ref_tok = alignment.ref_token(col)
        hyp_tok = alignment.hyp_token(col)
        speakers_per_utt.setdefault(ref_tok.utterance_index, set()).add(hyp_tok.speaker)
    correct_hyp_for_ref = mapping.reverse()
    stats = []
    for i, utt in enumerate(reference.utterances):
        length = utt.retained_len()
        aligned_speakers = speakers_per_utt.get(i, set())
        expected = correct_hyp_for_ref.get(utt.speaker)
        n_correct = 1 if expected is not None and expected in aligned_speakers else 0
        stats.append(UtteranceStats(
            utterance_index=i, speaker=utt.speaker, length=length,
            n_hyp_speakers=len(aligned_speakers), n_correct=n_correct,
        ))
    return stats


def tder(alignment: AlignmentMatrix, mapping: SpeakerMapping,
         reference: Transcript) -> tuple[float, DiarizationBreakdown]:
    """Text-based diarization error rate with its error-type decomposition.

    Every reference utterance contributes length * (max(1, N_h) - N_c) to the
    numerator over the total reference length. The whole contribution of an
    utterance lands in exactly one bucket: missed speech when no hypothesis
    speaker reaches it, speaker error when exactly one (wrong) speaker does,
    false alarm when several do; the decomposition therefore sums to the rate
    exactly.
    """
    stats = utterance_stats(alignment, mapping, reference)
    denom = sum(s.length for s in stats)
    if denom == 0:
        raise MetricUndefinedError("TDER is undefined: the reference has no tokens")
    num_se = num_fa = num_ms = 0
    for s in stats:
        mass = s.length * (max(1, s.n_hyp_speakers) - s.n_correct)
        if s.n_hyp_speakers == 0:
            num_ms += mass
        elif s.n_hyp_speakers == 1:
            num_se += mass
        else:
            num_fa += mass
    breakdown = DiarizationBreakdown(
        speaker_error=num_se / denom,
        false_alarm=num_fa / denom,
        missed_speech=num_ms / denom,
    )
    return (num_se + num_fa + num_ms) / denom, breakdown


def df1(alignment: AlignmentMatrix, mapping: SpeakerMapping) -> Df1Score:
    """Diarization precision/recall/F1 over speaker-correct aligned tokens.

    A reference token counts as matched when it is aligned to some hypothesis
    token whose mapped speaker equals the reference speaker. Precision
    divides by hypothesis tokens, penalizing fabricated content that
    utterance-level rates ignore.
    """
    total_ref = _ref_token_count(alignment)
    total_hyp = _hyp_token_count(alignment)
    if total_ref == 0:
        raise MetricUndefinedError("DF1 is undefined: the reference has no tokens")
    if total_hyp == 0:
        raise MetricUndefinedError("DF1 is undefined: the hypothesis has no tokens")
    matched = 0
    for col in alignment.columns:
        if col.label not in PAIR_CLASSES:
            continue
        hyp_tok = alignment.hyp_token(col)
        ref_tok = alignment.ref_token(col)
        if _is_speaker_correct(hyp_tok.speaker, ref_tok.speaker, mapping):
            matched += 1
    precision = matched / total_hyp
    recall = matched / total_ref
    f1 = 0.0 if precision + recall == 0 else 2 * precision * recall / (precision + recall)
    return Df1Score(precision=precision, recall=recall, f1=f1)


def der(segments: list[SegmentAnnotation]) -> tuple[float, DiarizationBreakdown]:
    """Time-weighted diarization error rate over annotated audio segments.

    The decomposition shares one denominator (total reference speaker time):
    false alarm counts excess hypothesis speakers, missed speech counts
    reference speakers short of the hypothesis, speaker error the remaining
    incorrect attributions, so the three components sum to the rate exactly.
    """
    if not segments:
        raise MetricUndefinedError("DER is undefined: no segments")
    denom = sum(s.dur * s.n_ref for s in segments)
    if denom == 0:
        raise MetricUndefinedError("DER is undefined: zero reference speaker time")
    num_se = num_fa = num_ms = 0.0
    for s in segments:
        num_se += s.dur * (min(s.n_ref, s.n_hyp) - s.n_correct)
        if s.n_hyp > s.n_ref:
            num_fa += s.dur * (s.n_hyp - s.n_ref)
        elif s.n_hyp < s.n_ref:
            num_ms += s.dur * (s.n_ref - s.n_hyp)
    breakdown = DiarizationBreakdown(
        speaker_error=num_se / denom,
        false_alarm=num_fa / denom,
        missed_speech=num_ms / denom,
    )
    return (num_se + num_fa + num_ms) / denom, breakdown


def classify_errors(alignment: AlignmentMatrix, reference: Transcript) -> ErrorCounts:
    """Token error taxonomy: missing / extra / substituted / overlapped.

    An undetected reference token counts as overlap instead of missing when
    its utterance carries the overlap flag.
    """
    missing = extra = substitution = overlap = 0
    for col in alignment.columns:
        if col.label == COL_GAP_HYP:
            extra += 1
        elif col.label == COL_GAP_REF:
            ref_tok = alignment.ref_token(col)
            if reference.utterances[ref_tok.utterance_index].overlap:
                overlap += 1
            else:
                missing += 1
        elif col.label != COL_FULL:
            substitution += 1
    return ErrorCounts(missing=missing, extra=extra, substitution=substitution,
                       overlap=overlap, ref_tokens=_ref_token_count(alignment))


def _partner_map(alignment: AlignmentMatrix) -> dict[tuple[int, int], int | None]:
    """Hypothesis partner (flat position or None) per reference token."""
    partners: dict[tuple[int, int], int | None] = {}
    for m, ref in enumerate(alignment.sequences.references, start=1):
        for p in range(len(ref.tokens)):
            partners[(m, p)] = None
    for col in alignment.columns:
        entry = col.ref_entry()
        if entry is not None:
            partners[entry] = col.hyp_position
    return partners


def alignment_accuracy(gold: AlignmentMatrix, predicted: AlignmentMatrix) -> float:
    """Fraction of reference tokens with identical partners in both alignments.

    A partner is either a specific hypothesis token or the gap; both
    alignments must be over the same sequences.
    """
    if gold.sequences.texts() != predicted.sequences.texts():
        raise ValueError("alignments cover different sequences")
    gold_partners = _partner_map(gold)
    pred_partners = _partner_map(predicted)
    if not gold_partners:
        raise MetricUndefinedError("alignment accuracy is undefined: no reference tokens")
    agree = sum(1 for key, partner in gold_partners.items() if pred_partners[key] == partner)
    return agree / len(gold_partners)
