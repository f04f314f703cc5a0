from itertools import product

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from negbeta.automaton import build_support_automaton
from negbeta.measure import (codeword_measure, cylinder_measure, intransitive_patterns, is_intransitive,
                             orbit_simulate, parry_measure, support_code, support_intervals)
from negbeta.numeration import characteristic_sequence
from negbeta.ordering import brute_force_language, is_admissible_word

from conftest import SAMPLE

PHI = (1 + 5**0.5) / 2


def test_golden_codeword_measures():
    base = SAMPLE["-gamma0"]()
    sc = support_code(base)
    assert set(sc.words) == {(1,), (0, 0)} and sc.boundary
    m1 = codeword_measure((1,), sc, base).value
    m00 = codeword_measure((0, 0), sc, base).value
    assert abs(m1 - 1 / (PHI * (1 / PHI + 2 / PHI**2))) < 1e-15
    assert abs(m00 - 1 / (PHI**2 * (1 / PHI + 2 / PHI**2))) < 1e-15
    assert abs(m1 + 2 * m00 - 1) < 1e-12


@pytest.mark.parametrize("name", sorted(SAMPLE))
def test_normalisation_within_tail(name):
    base = SAMPLE[name]()
    sc = support_code(base)
    st_ = sc.stats
    assert st_.kraft.valid
    with mpmath.workprec(128):
        b = abs(base.value(128))
        partial = mpmath.fsum(n * c / b**n for n, c in enumerate(sc.family.counts)) / sc.average_length
        eps = st_.average_length.tail / sc.average_length
    assert 1 - eps - 1e-15 <= partial <= 1 + 1e-15


@pytest.mark.parametrize("name", ["-2", "ex1", "lv0"])
def test_equal_length_codewords_have_equal_measure(name):
    base = SAMPLE[name]()
    sc = support_code(base)
    for n, ws in sc.family.by_length().items():
        vals = {round(codeword_measure(w, sc, base).value, 15) for w in ws}
        assert len(vals) == 1


@pytest.mark.parametrize("name", ["-2", "ex1", "lv0", "lv1"])
def test_parry_measure_is_stationary(name):
    A = build_support_automaton(SAMPLE[name]())
    pm = parry_measure(A)
    for n in range(0, 5):
        for w in A.words(n):
            right = sum(pm(w + (a,)) for a in A.alphabet)
            left = sum(pm((a,) + w) for a in A.alphabet)
            assert abs(right - pm(w)) < 1e-12 and abs(left - pm(w)) < 1e-12


@pytest.mark.parametrize("name,n", [("-gamma0", 16), ("-2", 14)])
def test_parry_matches_word_count_frequencies(name, n):
    """Oracle: among admissible words of length n, the share carrying w in the middle."""
    base = SAMPLE[name]()
    pm = parry_measure(build_support_automaton(base))
    lang = brute_force_language(base, n)[n]
    mid = n // 2 - 1
    for w in [(1,), (0, 0), (1, 0, 1), (0, 1, 1)]:
        share = sum(1 for v in lang if v[mid:mid + len(w)] == w) / len(lang)
        assert abs(share - pm(w)) < 0.01


@pytest.mark.parametrize("name", ["-gamma0", "-2", "ex1"])
def test_completion_method_agrees_with_parry(name):
    base = SAMPLE[name]()
    sc = support_code(base)
    for w in [(0,), (1,), (0, 0), (1, 0), (0, 1, 0)]:
        p = cylinder_measure(w, sc, base)
        c = cylinder_measure(w, sc, base, method="completion")
        assert abs(p.value - c.value) <= c.error + 1e-9


def test_offset_does_not_change_value():
    base = SAMPLE["ex1"]()
    sc = support_code(base)
    pm = parry_measure(build_support_automaton(base))
    vals = {cylinder_measure((2, 1), sc, base, offset=k, parry=pm).value for k in range(5)}
    assert len(vals) == 1


def test_coded_range_words_are_transitive():
    base = SAMPLE["-2"]()
    d = characteristic_sequence(base)
    for w in product((0, 1), repeat=6):
        if is_admissible_word(w, d):
            assert not is_intransitive(w, base).intransitive


def test_worked_intransitive_words():
    r = is_intransitive((0, 1, 1, 0, 0), SAMPLE["lv1"]())
    assert r.intransitive and r.pattern.family == 1 and r.pattern.m == 1
    r = is_intransitive((0, 0, 0, 0, 1), SAMPLE["lv0"]())
    assert r.intransitive and r.pattern.family == 2
    assert not is_intransitive((1, 0, 0, 1), SAMPLE["lv0"]()).intransitive


@pytest.mark.parametrize("name", ["lv0", "lv1", "-gamma1"])
def test_patterns_are_non_factors(name):
    base = SAMPLE[name]()
    A = build_support_automaton(base)
    d = characteristic_sequence(base)
    for w in product((0, 1), repeat=10):
        if not is_admissible_word(w, d):
            continue
        r = is_intransitive(w, base, A)
        assert r.consistent
        assert r.intransitive == (not A.accepts(w))


def test_pattern_list_shapes():
    pats = intransitive_patterns(1, 1)
    words = {p.word for p in pats}
    assert (0, 1, 1, 0, 0) in words  # family 1, m = 1
    assert (0, 0, 0, 0) in words  # family 2, m = 0
    assert (1, 1, 1, 1) in words  # family 2, m = 1


def test_simulation_reproducible_and_empty_queries():
    base = SAMPLE["lv0"]()
    a = orbit_simulate(base, 20000, 11, [(1,), (0, 0)])
    b = orbit_simulate(base, 20000, 11, [(1,), (0, 0)])
    assert a.frequency == b.frequency
    empty = orbit_simulate(base, 1000, 1)
    assert empty.steps == 1000 and empty.words == []
    assert a.to_csv().splitlines()[0] == "word,analytic,empirical,stderr,steps,seed"


def test_simulation_matches_golden_value():
    base = SAMPLE["-gamma0"]()
    rep = orbit_simulate(base, 10**6, 5, [(1,)])
    assert abs(rep.frequency[0] - 0.4472135955) < 3 * rep.stderr[0] + 1e-4


def test_integer_base_simulation_does_not_collapse():
    rep = orbit_simulate(SAMPLE["-2"](), 10**5, 2, [(1,), (0,)])
    assert abs(rep.frequency[0] - 0.5) < 0.01


def test_support_fraction_level_base():
    base = SAMPLE["lv1"]()
    rep = orbit_simulate(base, 10**5, 3)
    assert rep.support_fraction is not None and rep.support_fraction > 0.999
    assert len(support_intervals(base, 1)) > 1
