"""Shared fixtures: the cat/mat worked example used across the suite."""
import pytest

from sgectk import TokenSequence


# One utterance where the recognizer substituted "cat"->"rat" and dropped a
# "the", while the only genuine grammar correction is "rest"->"rested".
FLT_REF = "the cat calmly rest on the mat"
GEC_REF = "the cat calmly rested on the mat"
FLT_HYP = "the rat calmly rest on mat"
MILD = "the rat calmly rested on the mat"
STRONG = "the rat calmly rested on mat"


def seq(text, utt_id="u1"):
    return TokenSequence(utt_id, text.split())


@pytest.fixture
def flt_ref():
    return seq(FLT_REF)


@pytest.fixture
def gec_ref():
    return seq(GEC_REF)


@pytest.fixture
def flt_hyp():
    return seq(FLT_HYP)
