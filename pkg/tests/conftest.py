import pytest

from diaralign.model import extract_sequences, parse_transcript

from helpers import HYPOTHESIS_DOC, REFERENCE_DOC


@pytest.fixture
def working_pair():
    reference = parse_transcript(REFERENCE_DOC, "reference")
    hypothesis = parse_transcript(HYPOTHESIS_DOC, "hypothesis")
    return reference, hypothesis


@pytest.fixture
def working_sequences(working_pair):
    reference, hypothesis = working_pair
    return extract_sequences(reference, hypothesis)
