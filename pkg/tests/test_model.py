from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from paradox_lab import (
    Agenda,
    DimensionError,
    FractionalVote,
    Histogram,
    Profile,
    QuotaRule,
    as_rational,
    decode_index,
    encode_judgement,
    format_rational,
    histogram,
    omega_set,
)


def test_encode_examples():
    assert encode_judgement((1, 0), p=2) == 3
    assert encode_judgement((0, 0, 0)) == 1
    assert encode_judgement((1, 1, 1), p=3) == 8


def test_encode_length_mismatch():
    with pytest.raises(DimensionError):
        encode_judgement((1, 0), p=3)


def test_decode_examples():
    assert decode_index(3, 2) == (1, 0)
    assert decode_index(1, 2) == (0, 0)
    assert decode_index(8, 3) == (1, 1, 1)


def test_decode_out_of_range():
    with pytest.raises(ValueError):
        decode_index(0, 2)
    with pytest.raises(ValueError):
        decode_index(5, 2)


@pytest.mark.parametrize("p", [1, 2, 3, 4])
def test_encoding_bijective(p):
    seen = set()
    for index in range(1, (1 << p) + 1):
        j = decode_index(index, p)
        assert encode_judgement(j, p) == index
        seen.add(j)
    assert len(seen) == 1 << p


def test_histogram_table_values():
    profile = Profile(
        (
            FractionalVote.point((1, 0)),
            FractionalVote.point((0, 1)),
            FractionalVote.of([0, 0, Fraction(1, 2), Fraction(1, 2)]),
        )
    )
    assert histogram(profile).weights == (
        Fraction(0),
        Fraction(1),
        Fraction(3, 2),
        Fraction(1, 2),
    )


def test_histogram_single_vote_identity():
    profile = Profile((FractionalVote.point((1, 1)),))
    assert histogram(profile).weights == (0, 0, 0, 1)


def test_histogram_scalar_multiple():
    profile = Profile(tuple(FractionalVote.uniform(2) for _ in range(3)))
    assert histogram(profile).weights == tuple(Fraction(3, 4) for _ in range(4))


@st.composite
def vote_lists(draw, m=4, max_votes=5):
    votes = []
    for _ in range(draw(st.integers(1, max_votes))):
        raw = draw(st.lists(st.integers(0, 8), min_size=m, max_size=m).filter(sum))
        total = sum(raw)
        votes.append(FractionalVote(tuple(Fraction(x, total) for x in raw)))
    return votes


@given(vote_lists(), vote_lists())
@settings(max_examples=60, deadline=None)
def test_histogram_linearity(first, second):
    combined = histogram(Profile(tuple(first + second)))
    separate = histogram(Profile(tuple(first))) + histogram(Profile(tuple(second)))
    assert combined.weights == separate.weights


def test_omega_sets_for_conjunction():
    agenda = Agenda.conjunction(2)
    assert omega_set(1, agenda) == frozenset({(1, 0), (1, 1)})
    assert omega_set(2, agenda) == frozenset({(0, 1), (1, 1)})
    assert omega_set(3, agenda) == frozenset({(1, 1)})


def test_omega_conclusion_empty_when_never_true():
    agenda = Agenda(2, (0, 0, 0, 0))
    assert omega_set(3, agenda) == frozenset()


@pytest.mark.parametrize("p", [1, 2, 3])
def test_omega_sizes(p):
    agenda = Agenda.conjunction(p)
    for i in range(1, p + 1):
        assert len(omega_set(i, agenda)) == 1 << (p - 1)
    assert len(omega_set(p + 1, agenda)) == sum(agenda.truth_table)


def test_omega_index_out_of_range():
    with pytest.raises(ValueError):
        omega_set(4, Agenda.conjunction(2))


def test_rational_arithmetic_is_exact():
    a, b = Fraction(1, 3), Fraction(1, 6)
    assert a + b == Fraction(1, 2)
    assert (a + b).denominator == 2
    assert as_rational("7/21") == Fraction(1, 3)
    assert as_rational("0.125") == Fraction(1, 8)
    assert format_rational(Fraction(13, 20)) == "13/20"
    assert format_rational(Fraction(4, 2)) == "2"


def test_as_rational_rejects_floats():
    with pytest.raises(TypeError):
        as_rational(0.1)


def test_vote_validation():
    with pytest.raises(ValueError):
        FractionalVote.of(["1/2", "1/4"])
    with pytest.raises(ValueError):
        FractionalVote.of(["3/2", "-1/2"])


def test_profile_needs_consistent_lengths():
    with pytest.raises(DimensionError):
        Profile((FractionalVote.uniform(1), FractionalVote.uniform(2)))


def test_histogram_rejects_negative():
    with pytest.raises(ValueError):
        Histogram((Fraction(-1), Fraction(2)))


def test_quota_rule_validation():
    with pytest.raises(ValueError):
        QuotaRule.of(["3/2"], (0,))
    with pytest.raises(DimensionError):
        QuotaRule.of(["1/2", "1/2"], (0,))


def test_agenda_validation():
    with pytest.raises(DimensionError):
        Agenda(2, (0, 1))
    with pytest.raises(ValueError):
        Agenda(2, (0, 1, 2, 1))
