from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from negbeta.errors import BudgetExceeded, IncomparablePrefix
from negbeta.numeration import characteristic_sequence
from negbeta.ordering import (EQUAL, GREATER, LESS, alt_compare, brute_force_language, count_words, is_admissible,
                              is_admissible_word, precedes)
from negbeta.sequences import DigitSequence

from conftest import SAMPLE

digits = st.integers(0, 8)


def value_base_minus_10(w):
    """Oracle: in base -10 with digits <= 8 the alternating order is the order of values."""
    return sum(Fraction(a) * Fraction(-10) ** (-k) for k, a in enumerate(w, start=1))


def test_worked_comparison():
    assert alt_compare((1, 0, 0, 0, 0), (1, 0, 0, 1, 1)).relation == LESS
    assert alt_compare((1, 0, 0, 1, 1), (1, 0, 0, 0, 0)).relation == GREATER
    assert alt_compare((2, 1), (2, 1)).relation == EQUAL


@given(st.integers(1, 10).flatmap(lambda n: st.tuples(st.lists(digits, min_size=n, max_size=n),
                                                        st.lists(digits, min_size=n, max_size=n))))
def test_matches_value_order(pair):
    x, y = map(tuple, pair)
    rel = alt_compare(x, y, -1).relation
    vx, vy = value_base_minus_10(x), value_base_minus_10(y)
    assert rel == (LESS if vx < vy else GREATER if vx > vy else EQUAL)


@given(st.lists(digits, min_size=1, max_size=8), st.lists(digits, min_size=1, max_size=8), st.sampled_from([-1, 1]))
def test_antisymmetry(x, y, delta):
    a = alt_compare(tuple(x), tuple(y), delta)
    b = alt_compare(tuple(y), tuple(x), delta)
    assert a.sign == -b.sign
    assert a.witness_index == b.witness_index


@given(st.lists(st.lists(digits, min_size=6, max_size=6), min_size=3, max_size=3))
def test_transitivity(ws):
    x, y, z = map(tuple, ws)
    if precedes(x, y) and precedes(y, z):
        assert precedes(x, z)


def test_positive_delta_is_lexicographic():
    assert alt_compare((2, 0), (3, 0), 1).relation == LESS
    assert alt_compare((2, 0), (3, 0), -1).relation == GREATER
    assert alt_compare((1, 2), (1, 3), -1).relation == LESS


def test_prefix_handling():
    res = alt_compare((1, 0), (1, 0, 1))
    assert res.relation == EQUAL and res.prefix
    with pytest.raises(IncomparablePrefix):
        alt_compare((1, 0), (1, 0, 1), strict=True)


def test_infinite_sequences():
    d = DigitSequence((), (1, 0))
    assert alt_compare(d, DigitSequence((), (1, 0, 1, 0))).relation == EQUAL
    assert alt_compare(DigitSequence((1,), (0,)), d).relation == GREATER
    assert alt_compare(DigitSequence((2,), (0,)), d).relation == LESS


@pytest.mark.parametrize("name", ["-2", "-gamma0", "ex1", "lv0", "lv1"])
def test_characteristic_sequence_is_self_admissible(name):
    base = SAMPLE[name]()
    d = characteristic_sequence(base)
    assert is_admissible(d, base).admissible


@pytest.mark.parametrize("name", ["-2", "-gamma0", "ex1"])
def test_recurrence_matches_brute_force(name):
    base = SAMPLE[name]()
    H = count_words(base, 10)
    lang = brute_force_language(base, 10)
    assert [len(lang[n]) for n in range(11)] == H


def test_word_check_agrees_with_exact_check():
    base = SAMPLE["ex1"]()
    d = characteristic_sequence(base)
    for w in brute_force_language(base, 5)[5]:
        assert is_admissible(w, base, check_upper=False).admissible
    golden_d = characteristic_sequence(SAMPLE["-gamma0"]())
    assert is_admissible_word((0, 0, 0, 0, 0, 0), golden_d)
    assert not is_admissible_word((1, 0, 1), golden_d)


def test_brute_force_cap():
    with pytest.raises(BudgetExceeded):
        brute_force_language(SAMPLE["-2"](), 17)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 2), max_size=12))
def test_admissibility_is_prefix_closed(w):
    d = characteristic_sequence(SAMPLE["ex1"]())
    w = tuple(w)
    if is_admissible_word(w, d):
        assert all(is_admissible_word(w[:k], d) for k in range(len(w)))
        assert all(is_admissible_word(w[k:], d) for k in range(len(w)))
