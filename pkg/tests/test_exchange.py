from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from negbeta.errors import InvalidBase, NotInImage
from negbeta.exchange import (boundary_sequence, classify_interval, classify_sequence, gamma_bound, phi_apply,
                              phi_decode, t_threshold, t_threshold_printed, threshold_target, u_block, upsilon,
                              upsilon_report, v_block)
from negbeta.numeration import Base, characteristic_sequence, golden_base, neg_gamma1_base
from negbeta.sequences import DigitSequence

from conftest import SAMPLE

small_words = st.lists(st.integers(0, 3), max_size=8).map(tuple)


@given(small_words, st.integers(0, 3))
def test_phi_round_trip_words(w, k):
    assert phi_decode(phi_apply(w, k), k) == w


@given(small_words, st.lists(st.integers(0, 3), min_size=1, max_size=4).map(tuple), st.integers(1, 2))
def test_phi_round_trip_sequences(pre, per, k):
    if all(a == 0 for a in per):
        per = per + (1,)
    s = DigitSequence(pre, per)
    assert phi_decode(phi_apply(s, k), k) == s


def test_phi_blocks():
    assert u_block(-1) == (0,)
    assert u_block(0) == (1,)
    assert u_block(1) == (1, 0, 0)
    assert u_block(2) == (1, 0, 0, 1, 1)
    assert v_block(1) == (1, 1)
    assert phi_apply((2,), 1) == (1, 0, 0, 0, 0)


@pytest.mark.parametrize("w", [(0, 1), (1, 0, 1), (1, 2), (1, 0, 0, 0, 1)])
def test_decode_rejects_non_images(w):
    with pytest.raises(NotInImage):
        phi_decode(w, 1)


def test_decode_prefix_drops_cut_block():
    assert phi_decode((1, 0, 0, 1, 0), 1, strict=False) == (1,)


def test_boundary_sequences_are_characteristic():
    assert characteristic_sequence(golden_base()) == boundary_sequence(0)
    assert characteristic_sequence(neg_gamma1_base()) == boundary_sequence(1)


@pytest.mark.parametrize("n", range(0, 6))
def test_gamma_is_root_of_defining_polynomial(n):
    g = gamma_bound(n)
    L = g.degree
    with mpmath.workdps(40):
        root = mpmath.findroot(lambda x: x**L - x - 1, 1 + 1 / mpmath.mpf(L))
        assert abs(g.value - root) < mpmath.mpf(10) ** -30
    assert abs(g.defect()) < 1e-30
    assert g.lo <= g.hi and g.hi - g.lo <= Fraction(1, 2**128)


def test_gamma_decreasing():
    values = [gamma_bound(n).value for n in range(9)]
    assert all(a > b for a, b in zip(values, values[1:]))
    assert [gamma_bound(n).degree for n in range(5)] == [2, 3, 6, 11, 22]


@pytest.mark.parametrize("name,coded,level,boundary", [
    ("-2", True, None, False),
    ("-3", True, None, False),
    ("ex1", True, None, False),
    ("-gamma0", True, None, True),
    ("-gamma1", False, 0, True),
    ("lv0", False, 0, False),
    ("lv1", False, 1, False),
])
def test_classification(name, coded, level, boundary):
    cls = classify_interval(SAMPLE[name]())
    assert (cls.coded, cls.level, cls.boundary) == (coded, level, boundary)


def test_classification_agrees_with_numeric_position():
    for name in ["lv0", "lv1", "-gamma1"]:
        base = SAMPLE[name]()
        n = classify_interval(base).level
        v = -float(base)
        assert float(gamma_bound(n + 1).value) - 1e-12 <= v < float(gamma_bound(n).value)


@pytest.mark.parametrize("name,level", [("lv0", 0), ("lv1", 1)])
def test_upsilon_recognises_integer_base(name, level):
    rep = upsilon_report(SAMPLE[name]())
    assert rep["level"] == level and rep["recognized"]
    assert rep["base"] == Base.integer(-2)


def test_upsilon_rejects_coded_range():
    with pytest.raises(InvalidBase):
        upsilon(Base.integer(-2))


def test_upsilon_is_continuous_near_level_base():
    exact = SAMPLE["lv0"]()
    near = Base.approximate(Fraction(float(exact.value(80))) + Fraction(1, 10**14))
    x = upsilon(near, level=0)
    assert abs(float(x) + 2) < 1e-6


@pytest.mark.parametrize("name", ["lv0", "lv1", "-gamma1"])
def test_threshold_identity_exact(name):
    base = SAMPLE[name]()
    n = classify_interval(base).level
    t = t_threshold(base, n)
    f = threshold_target(base, n)
    assert t.value == f.value  # exact field equality


def test_printed_threshold_differs():
    base = SAMPLE["lv0"]()
    assert abs(float(t_threshold_printed(base, 0)) - float(t_threshold(base, 0))) > 1
