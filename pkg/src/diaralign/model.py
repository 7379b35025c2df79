"""Transcript data model: parsing, normalization and sequence extraction.

A transcript is an ordered list of utterances, each attributed to a single
speaker. Reference transcripts are the ground truth; hypothesis transcripts
come from an automatic transcriber. Both share one JSON schema:

    {
      "speakers": ["A", "B"],
      "utterances": [
        {"speaker": "A", "text": "You're going to go to uh Amsterdam.",
         "start_ms": 0, "end_ms": 2100, "overlap": false}
      ]
    }

``start_ms``/``end_ms``/``overlap`` are optional. Tokenization splits on runs
of whitespace; normalization (case folding, punctuation stripping) is applied
per token, and tokens that normalize to the empty string are dropped from the
alignment sequences while keeping their position in the utterance.

All values are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

import json
import unicodedata
from dataclasses import dataclass, field

from .errors import SchemaError

ROLE_REFERENCE = "reference"
ROLE_HYPOTHESIS = "hypothesis"

# Apostrophes and hyphens survive punctuation stripping when surrounded by
# word characters ("You're", "jean-luc"); every other punctuation mark goes.
_INTRAWORD_KEEP = {"'", "’", "-"}


@dataclass(frozen=True)
class NormalizationConfig:
    """Token normalization switches."""

    strip_punctuation: bool = True
    case_fold: bool = True


DEFAULT_NORMALIZATION = NormalizationConfig()


def normalize(surface: str, config: NormalizationConfig = DEFAULT_NORMALIZATION) -> str:
    """Normalize one token surface form.

    Returns the empty string for punctuation-only tokens, which callers drop
    from alignment sequences.
    """
    text = surface.casefold() if config.case_fold else surface
    if not config.strip_punctuation:
        return text
    out = []
    last = len(text) - 1
    for i, ch in enumerate(text):
        if unicodedata.category(ch).startswith("P"):
            if (
                ch in _INTRAWORD_KEEP
                and 0 < i < last
                and text[i - 1].isalnum()
                and text[i + 1].isalnum()
            ):
                out.append(ch)
            continue
        out.append(ch)
    return "".join(out)


@dataclass(frozen=True)
class Token:
    surface: str
    normalized: str
    utterance_index: int
    token_index: int

    @property
    def retained(self) -> bool:
        """Whether the token participates in alignment sequences."""
        return bool(self.normalized)


@dataclass(frozen=True)
class Utterance:
    speaker: str
    tokens: tuple[Token, ...]
    start_ms: int | None = None
    end_ms: int | None = None
    overlap: bool = False

    def text(self) -> str:
        return " ".join(t.surface for t in self.tokens)

    def retained_len(self) -> int:
        return sum(1 for t in self.tokens if t.retained)


@dataclass(frozen=True)
class Transcript:
    role: str
    speakers: tuple[str, ...]
    utterances: tuple[Utterance, ...]
    normalization: NormalizationConfig = field(default=DEFAULT_NORMALIZATION)

    def token_count(self) -> int:
        """Retained (alignable) tokens across all utterances."""
        return sum(u.retained_len() for u in self.utterances)


def _expect(condition: bool, path: str, message: str) -> None:
    if not condition:
        raise SchemaError(path, message)


def _parse_optional_ms(obj: dict, key: str, path: str) -> int | None:
    value = obj.get(key)
    if value is None:
        return None
    _expect(isinstance(value, int) and not isinstance(value, bool), f"{path}.{key}",
            "must be an integer millisecond offset")
    _expect(value >= 0, f"{path}.{key}", "must be non-negative")
    return value


def parse_transcript(
    document: str | bytes | dict,
    role: str,
    config: NormalizationConfig = DEFAULT_NORMALIZATION,
) -> Transcript:
    """Parse and validate a transcript JSON document.

    Raises :class:`SchemaError` naming the offending path on any violation.
    """
    if role not in (ROLE_REFERENCE, ROLE_HYPOTHESIS):
        raise SchemaError("role", f"must be '{ROLE_REFERENCE}' or '{ROLE_HYPOTHESIS}'")
    if isinstance(document, (str, bytes)):
        try:
            obj = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SchemaError("$", f"invalid JSON: {exc}") from exc
    else:
        obj = document
    _expect(isinstance(obj, dict), "$", "top-level value must be an object")

    speakers = obj.get("speakers")
    _expect(isinstance(speakers, list), "speakers", "must be a list of speaker labels")
    seen: set[str] = set()
    for i, label in enumerate(speakers):
        _expect(isinstance(label, str) and label != "", f"speakers[{i}]",
                "must be a non-empty string")
        _expect(label not in seen, f"speakers[{i}]", f"duplicate speaker label {label!r}")
        seen.add(label)

    raw_utterances = obj.get("utterances")
    _expect(isinstance(raw_utterances, list), "utterances", "must be a list")

    utterances = []
    for i, raw in enumerate(raw_utterances):
        path = f"utterances[{i}]"
        _expect(isinstance(raw, dict), path, "must be an object")
        speaker = raw.get("speaker")
        _expect(isinstance(speaker, str) and speaker != "", f"{path}.speaker",
                "must be a non-empty string")
        _expect(speaker in seen, f"{path}.speaker",
                f"speaker {speaker!r} not present in the speakers list")
        text = raw.get("text")
        _expect(isinstance(text, str), f"{path}.text", "must be a string")
        surfaces = text.split()
        _expect(bool(surfaces), f"{path}.text", "must contain at least one token")
        start_ms = _parse_optional_ms(raw, "start_ms", path)
        end_ms = _parse_optional_ms(raw, "end_ms", path)
        if start_ms is not None and end_ms is not None:
            _expect(start_ms <= end_ms, f"{path}.end_ms", "must be >= start_ms")
        overlap = raw.get("overlap", False)
        _expect(isinstance(overlap, bool), f"{path}.overlap", "must be a boolean")
        tokens = tuple(
            Token(surface=s, normalized=normalize(s, config), utterance_index=i, token_index=j)
            for j, s in enumerate(surfaces)
        )
        utterances.append(
            Utterance(speaker=speaker, tokens=tokens, start_ms=start_ms,
                      end_ms=end_ms, overlap=overlap)
        )

    return Transcript(role=role, speakers=tuple(speakers),
                      utterances=tuple(utterances), normalization=config)


def transcript_to_obj(transcript: Transcript) -> dict:
    """Serialize a transcript back to its JSON schema (dict form)."""
    utterances = []
    for u in transcript.utterances:
        obj: dict = {"speaker": u.speaker, "text": u.text()}
        if u.start_ms is not None:
            obj["start_ms"] = u.start_ms
        if u.end_ms is not None:
            obj["end_ms"] = u.end_ms
        if u.overlap:
            obj["overlap"] = True
        utterances.append(obj)
    return {"speakers": list(transcript.speakers), "utterances": utterances}


def serialize_transcript(transcript: Transcript) -> str:
    return json.dumps(transcript_to_obj(transcript), ensure_ascii=False, indent=2)


@dataclass(frozen=True)
class SeqToken:
    """A retained token inside an alignment sequence, with back-references."""

    text: str  # normalized form used for matching
    surface: str
    speaker: str
    utterance_index: int
    token_index: int

    @property
    def doc_position(self) -> tuple[int, int]:
        """Position in the source transcript's document order."""
        return (self.utterance_index, self.token_index)


@dataclass(frozen=True)
class SpeakerSequence:
    speaker: str
    tokens: tuple[SeqToken, ...]


@dataclass(frozen=True)
class SequenceSet:
    """Alignment input: the hypothesis row plus one row per reference speaker."""

    hypothesis: tuple[SeqToken, ...]
    references: tuple[SpeakerSequence, ...]
    hyp_speakers: tuple[str, ...]

    @property
    def n_refs(self) -> int:
        return len(self.references)

    def lengths(self) -> tuple[int, ...]:
        return (len(self.hypothesis),) + tuple(len(r.tokens) for r in self.references)

    def texts(self) -> list[list[str]]:
        """Normalized token strings per row, hypothesis first."""
        rows = [[t.text for t in self.hypothesis]]
        rows.extend([t.text for t in r.tokens] for r in self.references)
        return rows

    def row_tokens(self, row: int) -> tuple[SeqToken, ...]:
        return self.hypothesis if row == 0 else self.references[row - 1].tokens


def _utterance_seq_tokens(transcript: Transcript) -> list[SeqToken]:
    out = []
    for u in transcript.utterances:
        for t in u.tokens:
            if t.retained:
                out.append(SeqToken(text=t.normalized, surface=t.surface, speaker=u.speaker,
                                    utterance_index=t.utterance_index, token_index=t.token_index))
    return out


def document_tokens(transcript: Transcript) -> tuple[SeqToken, ...]:
    """All retained tokens in document order (used by pairwise baselines)."""
    return tuple(_utterance_seq_tokens(transcript))


def extract_sequences(reference: Transcript, hypothesis: Transcript) -> SequenceSet:
    """Build the alignment input from a validated transcript pair.

    The hypothesis row concatenates all hypothesis tokens in utterance order,
    regardless of which speaker the transcriber assigned. Each reference row
    holds one reference speaker's tokens, in document order.
    """
    if not reference.speakers:
        raise SchemaError("speakers", "reference transcript has no speakers")
    hyp = tuple(_utterance_seq_tokens(hypothesis))
    per_speaker: dict[str, list[SeqToken]] = {s: [] for s in reference.speakers}
    for tok in _utterance_seq_tokens(reference):
        per_speaker[tok.speaker].append(tok)
    refs = tuple(SpeakerSequence(s, tuple(per_speaker[s])) for s in reference.speakers)
    return SequenceSet(hypothesis=hyp, references=refs, hyp_speakers=tuple(hypothesis.speakers))
