import random

import pytest

from diaralign.errors import MetricUndefinedError
from diaralign.mapping import map_speakers
from diaralign.metrics import (
    SegmentAnnotation,
    alignment_accuracy,
    classify_errors,
    der,
    df1,
    tder,
    utterance_stats,
    wder,
    wer,
)
from diaralign.model import parse_transcript
from diaralign.msa.engine import AlignmentColumn, AlignmentMatrix, align

from helpers import make_transcript_doc, random_transcript_pair

from test_engine import single_row_set


def build_pair(ref_utts, hyp_utts, ref_speakers=None, hyp_speakers=None,
               overlap_flags=None):
    reference = parse_transcript(
        make_transcript_doc(ref_utts, ref_speakers, overlap_flags), "reference")
    hypothesis = parse_transcript(
        make_transcript_doc(hyp_utts, hyp_speakers), "hypothesis")
    return reference, hypothesis


def evaluate(reference, hypothesis):
    alignment = align(reference, hypothesis)
    mapping = map_speakers(alignment)
    return alignment, mapping


@pytest.fixture
def working_eval(working_pair):
    reference, hypothesis = working_pair
    alignment, mapping = evaluate(reference, hypothesis)
    return reference, alignment, mapping


@pytest.fixture
def perfect_pair():
    reference, hypothesis = build_pair(
        [("A", "one two three"), ("B", "four five")],
        [("s0", "one two three"), ("s1", "four five")])
    return reference, hypothesis


class TestWer:
    def test_identical_transcripts(self, perfect_pair):
        alignment, _ = evaluate(*perfect_pair)
        assert wer(alignment) == 0.0

    def test_working_example(self, working_eval):
        _, alignment, _ = working_eval
        assert wer(alignment) == pytest.approx(2 / 9)

    def test_empty_hypothesis_is_all_deletions(self):
        reference, _ = build_pair([("A", "one two three")], [("s0", "x")])
        hypothesis = parse_transcript({"speakers": ["s0"], "utterances": []},
                                      "hypothesis")
        alignment = align(reference, hypothesis)
        assert wer(alignment) == 1.0

    def test_empty_reference_is_undefined(self):
        reference = parse_transcript({"speakers": ["A"], "utterances": []}, "reference")
        hypothesis = parse_transcript(make_transcript_doc([("s0", "hi")]), "hypothesis")
        alignment = align(reference, hypothesis)
        with pytest.raises(MetricUndefinedError):
            wer(alignment)


class TestWder:
    def test_all_correct(self, perfect_pair):
        alignment, mapping = evaluate(*perfect_pair)
        assert wder(alignment, mapping) == 0.0

    def test_working_example(self, working_eval):
        _, alignment, mapping = working_eval
        # 8 aligned columns; the two pairing the hypothesis speaker with B's
        # tokens are speaker-wrong
        assert wder(alignment, mapping) == pytest.approx(2 / 8)

    def test_every_pair_wrong(self):
        reference, hypothesis = build_pair(
            [("A", "one two"), ("B", "three four")],
            [("s0", "three four"), ("s1", "one two")])
        # each hypothesis speaker transcribed the other's words; mapping
        # pairs them crosswise, so every aligned token is speaker-wrong...
        alignment, mapping = evaluate(reference, hypothesis)
        assert mapping.mapped == {"s0": "B", "s1": "A"}
        assert wder(alignment, mapping) == 0.0
        # ...unless the text streams force same-order pairing:
        reference, hypothesis = build_pair(
            [("A", "one two three four")],
            [("s0", "one two"), ("s1", "three four")])
        alignment, mapping = evaluate(reference, hypothesis)
        # s0 and s1 both pair with A; only one can map to it
        assert wder(alignment, mapping) == pytest.approx(2 / 4)

    def test_unmapped_hypothesis_speaker_counts_as_wrong(self):
        reference, hypothesis = build_pair(
            [("A", "one two three")],
            [("s0", "one two"), ("s1", "three")])
        alignment, mapping = evaluate(reference, hypothesis)
        assert mapping.mapped == {"s0": "A"}
        assert "s1" in mapping.unmapped_hyp
        assert wder(alignment, mapping) == pytest.approx(1 / 3)

    def test_all_pairs_wrong_under_empty_mapping(self):
        from diaralign.mapping import SpeakerMapping

        reference, hypothesis = build_pair([("A", "one two")], [("s0", "one two")])
        alignment, _ = evaluate(reference, hypothesis)
        nothing_mapped = SpeakerMapping(mapped={}, unmapped_hyp=("s0",),
                                        unmapped_ref=("A",))
        assert wder(alignment, nothing_mapped) == 1.0

    def test_no_aligned_pairs_is_undefined(self):
        reference, _ = build_pair([("A", "one two")], [("s0", "x")])
        hypothesis = parse_transcript({"speakers": ["s0"], "utterances": []},
                                      "hypothesis")
        alignment = align(reference, hypothesis)
        mapping = map_speakers(alignment)
        with pytest.raises(MetricUndefinedError):
            wder(alignment, mapping)


class TestTder:
    def test_perfect_hypothesis(self, perfect_pair):
        reference, _ = perfect_pair
        alignment, mapping = evaluate(*perfect_pair)
        rate, parts = tder(alignment, mapping, reference)
        assert rate == 0.0
        assert parts.total() == 0.0

    def test_working_example_all_speaker_error(self, working_eval):
        reference, alignment, mapping = working_eval
        rate, parts = tder(alignment, mapping, reference)
        assert rate == pytest.approx(2 / 9)
        assert parts.speaker_error == pytest.approx(2 / 9)
        assert parts.false_alarm == 0.0
        assert parts.missed_speech == 0.0

    def test_speaker_error_on_merged_turns(self):
        reference, hypothesis = build_pair(
            [("A", "w1 w2 w3 w4"), ("B", "v1 v2")],
            [("h", "w1 w2 w3 w4 v1 v2")])
        alignment, mapping = evaluate(reference, hypothesis)
        assert mapping.mapped == {"h": "A"}
        rate, parts = tder(alignment, mapping, reference)
        assert rate == pytest.approx(1 / 3)
        assert parts.speaker_error == pytest.approx(1 / 3)
        assert parts.false_alarm == parts.missed_speech == 0.0

    def test_missed_utterance(self):
        reference, hypothesis = build_pair(
            [("A", "w1 w2 w3 w4"), ("B", "v1 v2")],
            [("h", "w1 w2 w3 w4")])
        alignment, mapping = evaluate(reference, hypothesis)
        rate, parts = tder(alignment, mapping, reference)
        stats = utterance_stats(alignment, mapping, reference)
        assert stats[1].n_hyp_speakers == 0
        assert rate == pytest.approx(1 / 3)
        assert parts.missed_speech == pytest.approx(1 / 3)
        assert parts.speaker_error == parts.false_alarm == 0.0

    def test_false_alarm_on_split_utterance(self):
        reference, hypothesis = build_pair(
            [("A", "w1 w2 w3 w4")],
            [("s0", "w1 w2"), ("s1", "w3 w4")])
        alignment, mapping = evaluate(reference, hypothesis)
        rate, parts = tder(alignment, mapping, reference)
        # two speakers reach the utterance, one of them correctly mapped
        assert rate == pytest.approx(1.0)
        assert parts.false_alarm == pytest.approx(1.0)

    def test_empty_reference_undefined(self):
        reference = parse_transcript({"speakers": ["A"], "utterances": []}, "reference")
        hypothesis = parse_transcript(make_transcript_doc([("s0", "hi")]), "hypothesis")
        alignment, mapping = evaluate(reference, hypothesis)
        with pytest.raises(MetricUndefinedError):
            tder(alignment, mapping, reference)

    def test_decomposition_identity_on_random_pairs(self):
        rng = random.Random(404)
        checked = 0
        for _ in range(60):
            reference, hypothesis = random_transcript_pair(rng)
            alignment, mapping = evaluate(reference, hypothesis)
            try:
                rate, parts = tder(alignment, mapping, reference)
            except MetricUndefinedError:
                continue
            checked += 1
            assert abs(rate - parts.total()) <= 1e-12
        assert checked >= 50


class TestDf1:
    def test_perfect(self, perfect_pair):
        alignment, mapping = evaluate(*perfect_pair)
        score = df1(alignment, mapping)
        assert (score.precision, score.recall, score.f1) == (1.0, 1.0, 1.0)

    def test_working_example(self, working_eval):
        _, alignment, mapping = working_eval
        score = df1(alignment, mapping)
        assert score.precision == pytest.approx(6 / 8)
        assert score.recall == pytest.approx(6 / 9)
        assert score.f1 == pytest.approx(12 / 17)

    def test_four_of_six_correct(self):
        reference, hypothesis = build_pair(
            [("A", "w1 w2 w3 w4"), ("B", "v1 v2")],
            [("h", "w1 w2 w3 w4 v1 v2")])
        alignment, mapping = evaluate(reference, hypothesis)
        score = df1(alignment, mapping)
        assert score.precision == pytest.approx(2 / 3)
        assert score.recall == pytest.approx(2 / 3)
        assert score.f1 == pytest.approx(2 / 3)

    def test_extra_tokens_halve_precision(self):
        reference, base_hyp = build_pair(
            [("A", "w1 w2 w3 w4"), ("B", "v1 v2")],
            [("s0", "w1 w2 w3 w4"), ("s1", "v1 v2")])
        alignment, mapping = evaluate(reference, base_hyp)
        base = df1(alignment, mapping)
        padded_hyp = parse_transcript(make_transcript_doc(
            [("s0", "w1 w2 w3 w4"), ("s1", "v1 v2"), ("s2", "j1 j2 j3 j4 j5 j6")]),
            "hypothesis")
        alignment, mapping = evaluate(reference, padded_hyp)
        padded = df1(alignment, mapping)
        assert base.precision == 1.0 and base.recall == 1.0
        assert padded.precision == pytest.approx(0.5)
        assert padded.recall == base.recall == 1.0

    def test_empty_sides_undefined(self):
        reference, _ = build_pair([("A", "one")], [("s0", "one")])
        empty_hyp = parse_transcript({"speakers": ["s0"], "utterances": []}, "hypothesis")
        alignment = align(reference, empty_hyp)
        mapping = map_speakers(alignment)
        with pytest.raises(MetricUndefinedError):
            df1(alignment, mapping)


class TestDer:
    def test_all_correct(self):
        segments = [SegmentAnnotation(10.0, 1, 1, 1), SegmentAnnotation(4.0, 2, 2, 2)]
        rate, parts = der(segments)
        assert rate == 0.0
        assert parts.total() == 0.0

    def test_single_speaker_error_segment(self):
        rate, parts = der([SegmentAnnotation(10.0, 1, 1, 0)])
        assert rate == 1.0
        assert parts.speaker_error == 1.0
        assert parts.false_alarm == parts.missed_speech == 0.0

    def test_false_alarm_and_missed_speech(self):
        segments = [SegmentAnnotation(5.0, 1, 2, 1), SegmentAnnotation(5.0, 2, 1, 1)]
        rate, parts = der(segments)
        assert rate == pytest.approx(2 / 3)
        assert parts.false_alarm == pytest.approx(5 / 15)
        assert parts.missed_speech == pytest.approx(5 / 15)
        assert parts.speaker_error == 0.0

    def test_identity_on_random_segments(self):
        rng = random.Random(7777)
        for _ in range(100):
            segments = []
            for _ in range(rng.randint(1, 8)):
                n_ref = rng.randint(0, 3)
                n_hyp = rng.randint(0, 3)
                n_cor = rng.randint(0, min(n_ref, n_hyp))
                segments.append(SegmentAnnotation(
                    rng.uniform(0.5, 20.0), n_ref, n_hyp, n_cor))
            if sum(s.dur * s.n_ref for s in segments) == 0:
                with pytest.raises(MetricUndefinedError):
                    der(segments)
                continue
            rate, parts = der(segments)
            assert abs(rate - parts.total()) <= 1e-12

    def test_invalid_segment_rejected(self):
        with pytest.raises(ValueError):
            SegmentAnnotation(0.0, 1, 1, 1)
        with pytest.raises(ValueError):
            SegmentAnnotation(1.0, 1, 1, 2)

    def test_empty_or_zero_reference_undefined(self):
        with pytest.raises(MetricUndefinedError):
            der([])
        with pytest.raises(MetricUndefinedError):
            der([SegmentAnnotation(5.0, 0, 1, 0)])


class TestClassifyErrors:
    def test_working_example(self, working_eval):
        reference, alignment, _ = working_eval
        counts = classify_errors(alignment, reference)
        assert (counts.missing, counts.extra, counts.substitution, counts.overlap) == \
            (1, 0, 1, 0)
        assert counts.ref_tokens == 9
        assert counts.percentages() == {
            "missing": 11.1, "extra": 0.0, "substitution": 11.1, "overlap": 0.0}

    def test_overlap_flagged_gap_tokens_count_as_overlap(self):
        reference, hypothesis = build_pair(
            [("A", "w1 w2"), ("B", "v1 v2")],
            [("h", "w1 w2")],
            overlap_flags={1})
        alignment, _ = evaluate(reference, hypothesis)
        counts = classify_errors(alignment, reference)
        assert counts.overlap == 2
        assert counts.missing == 0

    def test_perfect_alignment_all_zero(self, perfect_pair):
        reference, _ = perfect_pair
        alignment, _ = evaluate(*perfect_pair)
        counts = classify_errors(alignment, reference)
        assert (counts.missing, counts.extra, counts.substitution, counts.overlap) == \
            (0, 0, 0, 0)


class TestAlignmentAccuracy:
    def _matrix(self, seqs, columns):
        return AlignmentMatrix(sequences=seqs, columns=tuple(
            AlignmentColumn(entries=entries, label=label) for entries, label in columns),
            score=0)

    def test_identical_alignments(self):
        seqs = single_row_set([["a", "b"], ["a", "b"]])
        gold = self._matrix(seqs, [((0, 0), "full"), ((1, 1), "full")])
        assert alignment_accuracy(gold, gold) == 1.0

    def test_one_token_differs(self):
        tokens = [f"t{i}" for i in range(9)]
        seqs = single_row_set([tokens, tokens])
        gold = self._matrix(seqs, [((i, i), "full") for i in range(9)])
        predicted_cols = [((i, i), "full") for i in range(8)]
        predicted_cols += [((8, None), "gap_hyp"), ((None, 8), "gap_ref")]
        predicted = self._matrix(seqs, predicted_cols)
        assert alignment_accuracy(gold, predicted) == pytest.approx(8 / 9)

    def test_all_gapped_prediction(self):
        seqs = single_row_set([["a", "b"], ["a", "b"]])
        gold = self._matrix(seqs, [((0, 0), "full"), ((1, 1), "full")])
        predicted = self._matrix(seqs, [
            ((0, None), "gap_hyp"), ((1, None), "gap_hyp"),
            ((None, 0), "gap_ref"), ((None, 1), "gap_ref")])
        assert alignment_accuracy(gold, predicted) == 0.0

    def test_sequence_mismatch_rejected(self):
        gold = self._matrix(single_row_set([["a"], ["a"]]), [((0, 0), "full")])
        other = self._matrix(single_row_set([["b"], ["b"]]), [((0, 0), "full")])
        with pytest.raises(ValueError):
            alignment_accuracy(gold, other)


class TestCrossMetricProperties:
    def test_wder_blind_to_dropped_correct_tokens(self):
        words_a = [f"w{i}" for i in range(10)]
        words_b = [f"v{i}" for i in range(10)]
        ref = [("A", " ".join(words_a)), ("B", " ".join(words_b))]
        # transcriber 1: everything transcribed, two spelling errors
        hyp_full = [("s0", " ".join(w + ("x" if i in (2, 5) else "")
                                    for i, w in enumerate(words_a))),
                    ("s1", " ".join(words_b))]
        # transcriber 2: same, but silently drops two correct tokens
        kept = [w for i, w in enumerate(words_b) if i not in (3, 7)]
        hyp_dropped = [hyp_full[0], ("s1", " ".join(kept))]
        reference, hyp1 = build_pair(ref, hyp_full)
        _, hyp2 = build_pair(ref, hyp_dropped)
        a1, m1 = evaluate(reference, hyp1)
        a2, m2 = evaluate(reference, hyp2)
        assert wder(a1, m1) == wder(a2, m2) == 0.0
        s1, s2 = df1(a1, m1), df1(a2, m2)
        assert s1.recall > s2.recall
        assert s1.f1 > s2.f1

    def test_added_wrong_speaker_token_never_lowers_wder_numerator(self):
        reference, base_hyp = build_pair(
            [("A", "w1 w2"), ("B", "v1")], [("s0", "w1 w2")])
        _, extended_hyp = build_pair(
            [("A", "w1 w2"), ("B", "v1")], [("s0", "w1 w2 v1")])
        a1, m1 = evaluate(reference, base_hyp)
        a2, m2 = evaluate(reference, extended_hyp)
        def numerator(alignment, mapping):
            aligned = [c for c in alignment.columns
                       if c.label in ("full", "partial", "mismatch")]
            return round(wder(alignment, mapping) * len(aligned))
        assert numerator(a2, m2) >= numerator(a1, m1)
        assert numerator(a2, m2) == 1

    def test_dropping_reference_alignment_never_raises_recall(self):
        reference, full_hyp = build_pair(
            [("A", "w1 w2 w3"), ("B", "v1 v2 v3")],
            [("s0", "w1 w2 w3"), ("s1", "v1 v2 v3")])
        _, partial_hyp = build_pair(
            [("A", "w1 w2 w3"), ("B", "v1 v2 v3")],
            [("s0", "w1 w2 w3"), ("s1", "v1 v3")])
        a1, m1 = evaluate(reference, full_hyp)
        a2, m2 = evaluate(reference, partial_hyp)
        assert df1(a2, m2).recall < df1(a1, m1).recall

    def test_speaker_relabeling_leaves_metrics_unchanged(self):
        rng = random.Random(1234)
        for _ in range(25):
            reference, hypothesis = random_transcript_pair(rng)
            renamed_doc = {
                "speakers": [f"Z_{s}" for s in hypothesis.speakers],
                "utterances": [
                    {"speaker": f"Z_{u.speaker}", "text": u.text()}
                    for u in hypothesis.utterances
                ],
            }
            renamed = parse_transcript(renamed_doc, "hypothesis")
            a1, m1 = evaluate(reference, hypothesis)
            a2, m2 = evaluate(reference, renamed)
            assert {f"Z_{k}": v for k, v in m1.mapped.items()} == m2.mapped
            for metric in (wer,):
                assert metric(a1) == metric(a2)
            try:
                assert wder(a1, m1) == wder(a2, m2)
            except MetricUndefinedError:
                with pytest.raises(MetricUndefinedError):
                    wder(a2, m2)
            assert tder(a1, m1, reference) == tder(a2, m2, reference)
            assert df1(a1, m1) == df1(a2, m2)

    def test_metric_ranges_on_random_pairs(self):
        rng = random.Random(31337)
        for _ in range(40):
            reference, hypothesis = random_transcript_pair(rng)
            alignment, mapping = evaluate(reference, hypothesis)
            assert wer(alignment) >= 0.0
            try:
                assert 0.0 <= wder(alignment, mapping) <= 1.0
            except MetricUndefinedError:
                pass
            rate, parts = tder(alignment, mapping, reference)
            assert rate >= 0.0
            assert min(parts.speaker_error, parts.false_alarm, parts.missed_speech) >= 0.0
            score = df1(alignment, mapping)
            assert 0.0 <= score.precision <= 1.0
            assert 0.0 <= score.recall <= 1.0
            assert 0.0 <= score.f1 <= 1.0
