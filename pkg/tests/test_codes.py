from itertools import product

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from negbeta.automaton import LowerBoundAutomaton
from negbeta.codes import (CodeFamily, code_statistics, decompose_characteristic, enumerate_family,
                           first_return_series, phi_image_counts, prefix_violations, series_inv, series_mul,
                           verify_series_identity)
from negbeta.exchange import phi_apply
from negbeta.numeration import Base, characteristic_sequence
from negbeta.ordering import is_admissible_word
from negbeta.sequences import DigitSequence, parse_word

from conftest import SAMPLE

EX1_D = characteristic_sequence(SAMPLE["ex1"]())


def W(*texts):
    return {tuple(int(c) for c in t) for t in texts}


def test_decomposition_of_worked_example():
    dec = decompose_characteristic(EX1_D, 60)
    assert dec.pairs[:3] == ((2, 1), (3, 1), (4, 4))
    assert dec.blocks[:3] == ((2, 0, 1), (2, 0, 1, 2, 1), (2, 0, 1, 2, 1, 2, 1))


def test_c_beta_matches_first_return_words():
    d = DigitSequence((2,), (1,))
    fam = enumerate_family(d, "C_beta", 6)
    assert set(fam.words) == W("0", "1", "210", "2210", "21110", "22210", "211210", "221110", "222210")
    assert set(fam.words) == set(LowerBoundAutomaton(d).first_return_words(6))


@pytest.mark.parametrize("name", ["-2", "-3", "-gamma1", "ex1", "ex2"])
def test_c_beta_constructive_equals_automaton(name):
    d = characteristic_sequence(SAMPLE[name]())
    fam = enumerate_family(d, "C_beta", 10)
    assert sorted(fam.words) == sorted(LowerBoundAutomaton(d).first_return_words(10))


@pytest.mark.parametrize("name", ["-3", "-gamma1", "ex2", "lv1"])
def test_series_identity_other_bases(name):
    rep = verify_series_identity(SAMPLE[name](), 16)
    assert rep.holds, (rep.lhs, rep.rhs)


def test_delta00_of_second_example():
    fam = enumerate_family(SAMPLE["ex2"](), "Delta00", 17)
    assert set(fam.words) == W("2", "2012121201200", "201212120120011", "20121212012001111")


def test_gamma1_is_flagged_experimental():
    fam = enumerate_family(EX1_D, "Gamma1", 9)
    assert fam.experimental
    assert set(fam.words) == W("200", "201200", "20121200", "201201200")


@settings(max_examples=50, deadline=None)
@given(st.lists(st.sampled_from(sorted(enumerate_family(EX1_D, "C_beta", 6).words)), min_size=1, max_size=6))
def test_concatenations_of_c_beta_are_admissible(parts):
    w = tuple(a for p in parts for a in p)
    assert is_admissible_word(w, EX1_D)


@given(st.lists(st.integers(-5, 5), min_size=1, max_size=10))
def test_series_inverse(tail):
    a = [1] + tail
    n = 12
    assert series_mul(a, series_inv(a, n), n) == [1] + [0] * n


def test_family_json_round_trip():
    fam = enumerate_family(EX1_D, "Delta_i", 8, index=1)
    assert CodeFamily.from_json(fam.to_json()) == fam


def test_phi_image_counts_oracle():
    d_x = DigitSequence((), (1, 0))
    words = LowerBoundAutomaton(d_x).first_return_words(12)
    lengths = [len(phi_apply(w, 2)) for w in words]
    counts = phi_image_counts(d_x, 2, 12)
    assert counts == [sum(1 for L in lengths if L == n) for n in range(13)]


@pytest.mark.parametrize("name", ["-2", "ex1"])
def test_closed_form_sum_matches_long_truncation(name):
    base = SAMPLE[name]()
    d = characteristic_sequence(base)
    counts = LowerBoundAutomaton(d).first_return_counts(400)
    b = abs(base.value(128))
    with mpmath.workprec(128):
        F, dF, rho = first_return_series(d, 0, 1 / b)
        assert rho < 1
        assert abs(F - mpmath.fsum(c / b**n for n, c in enumerate(counts))) < 1e-20
        assert abs(dF - mpmath.fsum(n * c / b**n for n, c in enumerate(counts))) < 1e-15


def test_statistics_of_golden_code():
    fam = CodeFamily.from_words("P_beta", [(1,), (0, 0)], 10)
    stats = code_statistics(fam, SAMPLE["-gamma0"]())
    assert abs(stats.kraft.total - 1) < 1e-30
    assert stats.gcd == 1
    assert stats.kraft.valid


def test_geometric_tail_flags_divergence():
    stats = code_statistics([0, 3, 9, 27, 81, 243, 729, 2187], 2.0)
    assert not stats.kraft.valid
