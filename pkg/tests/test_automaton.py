import json

import pytest
from hypothesis import given, settings, strategies as st

from negbeta.automaton import EMPTY, LowerBoundAutomaton, build_support_automaton, level_support, lower_bound_support
from negbeta.exchange import phi_apply
from negbeta.numeration import characteristic_sequence
from negbeta.ordering import count_words, is_admissible_word
from negbeta.sequences import DigitSequence

from conftest import SAMPLE

ex1_d = characteristic_sequence(SAMPLE["ex1"]())


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 2), max_size=14))
def test_lower_bound_automaton_matches_direct_check(w):
    A = LowerBoundAutomaton(ex1_d)
    assert A.accepts(w) == is_admissible_word(tuple(w), ex1_d)


@pytest.mark.parametrize("name", ["-2", "-3", "-gamma0", "ex1", "ex2"])
def test_counts_match_recurrence(name):
    base = SAMPLE[name]()
    d = characteristic_sequence(base)
    assert LowerBoundAutomaton(d).count(25) == count_words(base, 25)


def test_first_return_words_are_counted():
    A = LowerBoundAutomaton(ex1_d)
    words = A.first_return_words(9)
    counts = A.first_return_counts(9)
    assert [sum(1 for w in words if len(w) == n) for n in range(10)] == counts


def test_support_automaton_serialisation():
    A = build_support_automaton(SAMPLE["-gamma0"]())
    data = json.loads(A.to_json())
    assert data["n_states"] == A.n_states == 3
    assert "digraph" in A.to_dot()
    assert A.accepts((1, 0, 0, 1)) and not A.accepts((0, 1, 0, 1))


def test_level_support_contains_images():
    d_x = DigitSequence((), (1, 0))
    A = level_support(d_x, 0)
    Lx = LowerBoundAutomaton(d_x)
    for w in [(0, 1, 1, 0), (1, 1, 1), (0, 0, 0)]:
        if Lx.accepts(w):
            assert A.accepts(phi_apply(w, 1))


def test_level_automaton_is_factor_closed():
    A = build_support_automaton(SAMPLE["lv1"]())
    for n in range(1, 10):
        for w in A.words(n):
            assert A.accepts(w[1:]) and A.accepts(w[:-1])


def test_reachable_states_finite():
    A = LowerBoundAutomaton(ex1_d)
    states = A.reachable()
    assert states[0] == EMPTY
    assert len(states) == lower_bound_support(ex1_d).n_states
