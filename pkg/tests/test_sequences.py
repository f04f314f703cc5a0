import pytest
from hypothesis import given, strategies as st

from negbeta.sequences import DigitSequence, canon, digit, format_word, parse_word, prefix

words = st.lists(st.integers(0, 3), max_size=8).map(tuple)
periods = st.lists(st.integers(0, 3), min_size=1, max_size=5).map(tuple)


def test_parse_and_format():
    assert parse_word("2,0,1") == (2, 0, 1)
    assert parse_word("") == ()
    assert format_word((2, 10, 1)) == "2[10]1"
    assert format_word((2, 0, 1), ",") == "2,0,1"
    with pytest.raises(ValueError):
        parse_word("2,x")
    with pytest.raises(ValueError):
        parse_word("-1")


def test_canonical_form():
    a = DigitSequence((1, 0, 1, 0), (1, 0))
    assert a.preperiod == () and a.period == (1, 0)
    assert DigitSequence((), (2, 1, 2, 1)) == DigitSequence((2,), (1, 2))


@given(words, periods)
def test_indexing_matches_unrolled(pre, per):
    s = DigitSequence(pre, per)
    unrolled = pre + per * 10
    assert s.prefix(len(pre) + 3 * len(per)) == unrolled[: len(pre) + 3 * len(per)]
    for i in range(1, len(pre) + 2 * len(per) + 1):
        assert s[i] == unrolled[i - 1] == digit(s, i)


@given(words, periods, st.integers(0, 12))
def test_shift_and_canon(pre, per, k):
    s = DigitSequence(pre, per)
    t = s.shift(k)
    assert t.prefix(10) == s.prefix(k + 10)[k:]
    assert s.shift(canon(s, k)) == t


@given(words, periods)
def test_json_round_trip(pre, per):
    s = DigitSequence(pre, per)
    assert DigitSequence.from_json(s.to_json()) == s


def test_prefix_of_word():
    assert prefix((1, 2, 3), 2) == (1, 2)
