"""The substitution ``phi``, the bounds ``gamma_n``, level classification and
the exchange map between base ranges.

``phi(k) = 1 (00)^k``.  With ``u_n = phi^n(1)``, ``v_n = phi^n(00)`` and the
convention ``u_{-1} = 0`` (length 1), the base ``-gamma_n`` has characteristic
sequence ``u_n (u_{n-1} u_{n-1})^inf`` and the levels are the intervals
``(-gamma_n, -gamma_{n+1}]``.  A base at level ``n`` corresponds to a base
``x <= -gamma_0`` through ``d(beta) = phi^{n+1}(d(x))``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

import mpmath

from .config import DEFAULTS, Settings
from .errors import BoundaryAmbiguous, InvalidBase, NoConvergence, NotInImage
from .numeration import (Base, FieldElement, characteristic_sequence, evaluate_f_beta, golden_base,
                         iter_rational_characteristic, make_field, rational_characteristic_digits)
from .ordering import GREATER, LESS, alt_compare
from .sequences import DigitSequence, Word, as_word

log = logging.getLogger(__name__)

SeqLike = Union[Word, DigitSequence]


# ---------------------------------------------------------------------------
# the substitution


def _phi_word(w: Word) -> Word:
    return tuple(c for a in w for c in (1,) + (0,) * (2 * a))


def phi_apply(seq: SeqLike, power: int = 1) -> SeqLike:
    """Apply ``k -> 1(00)^k`` digit-wise, ``power`` times."""
    if power < 0:
        raise ValueError("power must be >= 0")
    if isinstance(seq, DigitSequence):
        pre, per = seq.preperiod, seq.period
        for _ in range(power):
            pre, per = _phi_word(pre), _phi_word(per)
        return DigitSequence(pre, per)
    w = as_word(seq)
    for _ in range(power):
        w = _phi_word(w)
    return w


def _decode_word(w: Word, strict: bool) -> Word:
    out = []
    i, n = 0, len(w)
    while i < n:
        if w[i] != 1:
            raise NotInImage(f"expected 1 at block start, found {w[i]} at position {i + 1}")
        j = i + 1
        while j < n and w[j] == 0:
            j += 1
        zeros = j - i - 1
        if j == n and not strict:
            # The last block of a prefix may be cut short, so its letter is unknown.
            break
        if zeros % 2:
            raise NotInImage(f"odd run of {zeros} zeros after position {i + 1}")
        if j < n and w[j] != 1:
            raise NotInImage(f"digit {w[j]} outside the image alphabet at position {j + 1}")
        out.append(zeros // 2)
        i = j
    return tuple(out)


def _decode_once(seq: SeqLike, strict: bool) -> SeqLike:
    if not isinstance(seq, DigitSequence):
        return _decode_word(as_word(seq), strict)
    pre, per = seq.preperiod, seq.period
    if any(a > 1 for a in pre + per):
        raise NotInImage("digits above 1 are not in the image of phi")
    if all(a == 0 for a in per):
        raise NotInImage("an infinite run of zeros is not in the image of phi")
    # Block starts are the 1s; find the first one inside the periodic part.
    P, L = len(pre), len(per)
    unrolled = pre + per * 3
    starts = [i for i, a in enumerate(unrolled) if a == 1]
    if not starts or starts[0] != 0:
        raise NotInImage("sequence must start with 1")
    first = next(i for i in starts if i >= P)
    head = _decode_word(unrolled[:first], strict=True)
    body = _decode_word(unrolled[first:first + L] + (1,), strict=True)
    return DigitSequence(head, body[:-1])


def phi_decode(seq: SeqLike, power: int = 1, strict: bool = True) -> SeqLike:
    """Left inverse of :func:`phi_apply`.

    Parameters
    ----------
    strict : bool
        For finite words, ``False`` drops an incomplete final block instead of
        raising (useful for prefixes of infinite sequences).
    """
    out = seq
    for _ in range(power):
        out = _decode_once(out, strict)
    return out


@lru_cache(maxsize=None)
def u_block(n: int) -> Word:
    """``u_n = phi^n(1)`` with ``u_{-1} = 0``."""
    if n < -1:
        raise ValueError("u_n is defined for n >= -1")
    return (0,) if n == -1 else phi_apply((1,), n)


@lru_cache(maxsize=None)
def v_block(n: int) -> Word:
    """``v_n = phi^n(00) = u_{n-1} u_{n-1}``."""
    if n < 0:
        raise ValueError("v_n is defined for n >= 0")
    return phi_apply((0, 0), n)


def boundary_sequence(n: int) -> DigitSequence:
    """Characteristic sequence of ``-gamma_n``: ``u_n (u_{n-1} u_{n-1})^inf``."""
    return DigitSequence(u_block(n), u_block(n - 1) * 2)


# ---------------------------------------------------------------------------
# gamma bounds


@dataclass(frozen=True)
class GammaBound:
    """Root ``gamma_n > 1`` of ``X^{l_n} - X - 1``, ``l_n = max(l(u_n), l(v_n))``.

    ``lo`` and ``hi`` are dyadic rationals bracketing the root.
    """

    n: int
    l_u: int
    l_v: int
    degree: int
    lo: Fraction
    hi: Fraction

    @property
    def value(self) -> mpmath.mpf:
        mid = (self.lo + self.hi) / 2
        prec = max(64, mid.denominator.bit_length() + 8)
        with mpmath.workprec(prec):
            return mpmath.mpf(mid.numerator) / mid.denominator

    def defect(self) -> mpmath.mpf:
        """``1 - gamma^{-l(u_n)} - gamma^{-l(v_n)}`` at the midpoint."""
        with mpmath.workprec(max(64, self.hi.denominator.bit_length() + 8)):
            g = self.value
            return 1 - g ** (-self.l_u) - g ** (-self.l_v)

    def as_base(self) -> Base:
        """``-gamma_n`` as an exact algebraic base."""
        L = self.degree
        poly = [-1, 1] + [0] * (L - 2) + [(-1) ** L]
        pad = Fraction(1, 2**20)
        return Base.algebraic(tuple(poly), -self.hi - pad, -self.lo + pad)


@lru_cache(maxsize=None)
def gamma_bound(n: int, precision: int = 128) -> GammaBound:
    """Isolate ``gamma_n`` by bisection on dyadic rationals to ``precision`` bits."""
    if n < 0:
        raise ValueError("n must be >= 0")
    lu, lv = len(u_block(n)), len(v_block(n))
    L = max(lu, lv)
    P = precision + 2
    scale = 1 << P
    lo, hi = scale, 2 * scale  # f(1) < 0 < f(2)

    def sign(k):
        # sign of (k/2^P)^L - k/2^P - 1, scaled by 2^{PL}
        v = k**L - k * scale ** (L - 1) - scale**L
        return (v > 0) - (v < 0)

    while hi - lo > 1:
        mid = (lo + hi) // 2
        s = sign(mid)
        if s == 0:
            lo = hi = mid
            break
        if s < 0:
            lo = mid
        else:
            hi = mid
    return GammaBound(n, lu, lv, L, Fraction(lo, scale), Fraction(hi, scale))


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class Classification:
    """Where a base sits: the coded range ``beta <= -gamma_0`` or level ``n``.

    ``boundary`` is set when ``d`` equals the upper boundary sequence, i.e.
    ``beta = -gamma_0`` (coded) or ``beta = -gamma_{n+1}`` (level ``n``).
    """

    coded: bool
    level: Optional[int]
    boundary: bool = False

    def __str__(self) -> str:
        tag = "coded_range" if self.coded else f"level {self.level}"
        return tag + (" (boundary)" if self.boundary else "")


def representative_prefix(base: Base, n: int) -> Word:
    """First ``n`` raw digits of ``d`` at the midpoint of an approximate base's enclosure.

    The map ``beta -> d`` jumps at bases whose characteristic sequence is
    periodic, so the common prefix over an enclosure of such a base can be
    very short.  The midpoint is a single rational base whose orbit is
    computed exactly; quantities derived from it are continuous in ``beta``.
    """
    lo, hi = base.interval
    return rational_characteristic_digits((lo + hi) / 2, n)


def _characteristic_for(base_or_d, horizon: int):
    if isinstance(base_or_d, Base):
        if base_or_d.kind == "algebraic":
            return characteristic_sequence(base_or_d)
        return representative_prefix(base_or_d, horizon)
    return base_or_d


def _horizon_for(base: Base, digit_horizon: int, tol: float) -> int:
    """Digits needed so that matching them pins a base near ``base`` to ``tol``."""
    mag = abs(float(base.value(64)))
    need = math.log(1 / tol) / math.log(mag) if tol > 0 else 0
    return int(max(4 * digit_horizon, 2 * need + 64, 1000 if base.kind == "algebraic" else 0))


def classify_sequence(d: SeqLike, max_level: int = 64) -> Classification:
    """Classify by comparing ``d`` with the boundary sequences in the alternating order."""
    rel = alt_compare(d, boundary_sequence(0), -1)
    if rel.prefix:
        raise BoundaryAmbiguous("characteristic prefix ties with the coded-range boundary")
    if rel.relation != GREATER:
        return Classification(True, None, rel.relation != LESS)
    for n in range(max_level):
        rel = alt_compare(d, boundary_sequence(n + 1), -1)
        if rel.prefix:
            raise BoundaryAmbiguous(f"characteristic prefix ties with the level-{n} boundary")
        if rel.relation != GREATER:
            return Classification(False, n, rel.relation != LESS)
    raise BoundaryAmbiguous(f"base lies beyond level {max_level}")


def classify_interval(base: Union[Base, SeqLike], horizon: int = 1000) -> Classification:
    """Coded range or level ``n`` with ``beta`` in ``(-gamma_n, -gamma_{n+1}]``."""
    if isinstance(base, Base):
        base.require_negative()
    return classify_sequence(_characteristic_for(base, horizon))


# ---------------------------------------------------------------------------
# bisection on characteristic sequences


def _compare_candidate(q: Fraction, target: SeqLike, max_digits: int):
    """Alternating-order comparison of ``d(q)`` (raw, rational ``q``) with ``target``.

    Returns ``(sign, agreed)``; sign is 0 when no difference appears within
    ``max_digits`` or the known part of ``target``.
    """
    known = len(target) if not isinstance(target, DigitSequence) else max_digits
    gen = iter_rational_characteristic(q)
    for k in range(1, min(known, max_digits) + 1):
        a = next(gen)
        b = target[k] if isinstance(target, DigitSequence) else target[k - 1]
        if a != b:
            return (-1 if ((-1) ** k) * (a - b) < 0 else 1), k - 1
    return 0, min(known, max_digits)


def _dyadic(x: Fraction, bits: int, up: bool) -> Fraction:
    scale = 1 << bits
    k = x * scale
    k = -((-k.numerator) // k.denominator) if up else k.numerator // k.denominator
    return Fraction(k, scale)


@dataclass(frozen=True)
class BisectionResult:
    """Bracket ``[lo, hi]`` around the base whose characteristic sequence is the target."""

    lo: Fraction
    hi: Fraction
    iterations: int
    digits_matched: int
    exact_hit: bool = False

    def base(self, prec: int = DEFAULTS.prec) -> Base:
        return Base.approximate(self.lo, self.hi, prec=prec)


def bisect_characteristic(target: SeqLike, lo: Fraction, hi: Fraction, tol: float,
                          digit_horizon: int, iteration_cap: int = DEFAULTS.iteration_cap,
                          max_digits: int = 20000) -> BisectionResult:
    """Find the base in ``[lo, hi]`` whose characteristic sequence is ``target``.

    Uses exact rational orbits at dyadic midpoints and stops once the bracket
    is narrower than ``tol`` and its midpoint matches ``target`` on at least
    ``digit_horizon`` digits.
    """
    tol_q = Fraction(tol).limit_denominator(10**40) if tol > 0 else Fraction(0)
    lo, hi = Fraction(lo), Fraction(hi)
    matched = 0
    for it in range(1, iteration_cap + 1):
        mid = (lo + hi) / 2
        s, agreed = _compare_candidate(mid, target, max_digits)
        if s == 0:
            return BisectionResult(mid, mid, it, agreed, True)
        if s < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol_q:
            # d jumps at bases with periodic d, so only one side need agree.
            matched = max(_compare_candidate(lo, target, max_digits)[1],
                          _compare_candidate(hi, target, max_digits)[1])
            if matched >= digit_horizon:
                return BisectionResult(lo, hi, it, matched)
    raise NoConvergence(f"bisection did not reach width {tol} within {iteration_cap} iterations "
                        f"(width {float(hi - lo):.3g}, {matched} digits matched)")


# ---------------------------------------------------------------------------
# the exchange map


def _catalogue_match(s: DigitSequence) -> Optional[Base]:
    """Recognise characteristic sequences of integer bases and of ``-gamma_m``."""
    if not s.preperiod and len(s.period) == 2 and s.period[1] == 0 and s.period[0] >= 1:
        return Base.integer(-(s.period[0] + 1))
    for m in range(0, 8):
        if s == boundary_sequence(m):
            return golden_base() if m == 0 else gamma_bound(m).as_base()
    return None


def upsilon(base: Base, digit_horizon: int = DEFAULTS.digit_horizon, tol: float = DEFAULTS.tol,
            level: Optional[int] = None, recognize: bool = True,
            settings: Settings = DEFAULTS) -> Base:
    """Map a base in ``(-gamma_0, -1)`` to the base ``x <= -gamma_0`` with
    ``d(beta) = phi^{n+1}(d(x))``.

    Parameters
    ----------
    level : int, optional
        Level of ``base``.  Needed when ``base`` is an enclosure of a level
        boundary, where classification from a finite prefix is ambiguous.
    recognize : bool
        Return an exact base when the decoded sequence belongs to an integer
        base or a ``-gamma_m``.
    """
    return upsilon_report(base, digit_horizon, tol, level, recognize, settings)["base"]


def upsilon_report(base: Base, digit_horizon: int = DEFAULTS.digit_horizon, tol: float = DEFAULTS.tol,
                   level: Optional[int] = None, recognize: bool = True,
                   settings: Settings = DEFAULTS) -> dict:
    """:func:`upsilon` with the intermediate data (level, decoded target, bracket)."""
    base.require_negative()
    d = _characteristic_for(base, _horizon_for(base, digit_horizon, tol))
    if level is None:
        cls = classify_sequence(d)
        if cls.coded:
            raise InvalidBase("base lies in the coded range; the exchange map applies to (-gamma_0, -1)")
        level = cls.level
    exact = isinstance(d, DigitSequence)
    s = phi_decode(d, level + 1, strict=exact)
    report = {"input": base.descriptor(), "level": level, "target": s}
    if exact and recognize:
        hit = _catalogue_match(s)
        if hit is not None:
            report.update(base=hit, recognized=True, interval=hit.interval, digits_matched=None)
            return report
    if not exact and len(s) < digit_horizon:
        log.warning("decoded target has only %d digits (< digit_horizon %d)", len(s), digit_horizon)
    first = s[1] if exact else s[0]
    lo = Fraction(-(first + 2))
    hi = gamma_bound(0).lo * -1
    res = bisect_characteristic(s, lo, hi, tol, min(digit_horizon, len(s) if not exact else digit_horizon),
                                settings.iteration_cap)
    out = res.base(base.prec)
    report.update(base=out, recognized=False, interval=(res.lo, res.hi), digits_matched=res.digits_matched)
    return report


def upsilon_inverse(x: Base, n: int, digit_horizon: int = DEFAULTS.digit_horizon, tol: float = DEFAULTS.tol,
                    settings: Settings = DEFAULTS) -> Base:
    """The unique base ``beta_n`` at level ``n`` with ``d(beta_n) = phi^{n+1}(d(x))``."""
    return upsilon_inverse_report(x, n, digit_horizon, tol, settings)["base"]


def upsilon_inverse_report(x: Base, n: int, digit_horizon: int = DEFAULTS.digit_horizon,
                           tol: float = DEFAULTS.tol, settings: Settings = DEFAULTS) -> dict:
    if n < 0:
        raise InvalidBase("level must be >= 0")
    x.require_negative()
    d_x = _characteristic_for(x, _horizon_for(x, digit_horizon, tol))
    if not classify_sequence(d_x).coded:
        raise InvalidBase("upsilon_inverse needs x <= -gamma_0")
    t = phi_apply(d_x, n + 1)
    pad = Fraction(1, 2**10)
    lo = -gamma_bound(n).hi - pad
    hi = -gamma_bound(n + 1).lo + pad
    res = bisect_characteristic(t, lo, hi, tol, digit_horizon, settings.iteration_cap)
    return {"input": x.descriptor(), "level": n, "target": t, "base": res.base(x.prec),
            "interval": (res.lo, res.hi), "digits_matched": res.digits_matched}


# ---------------------------------------------------------------------------
# the threshold t_n


def _lu(k: int) -> int:
    return len(u_block(k))


def t_threshold(base: Base, n: Optional[int] = None) -> FieldElement:
    """``t_n = beta^{-1} (prod_{k=-1}^{n-1} (1 + beta^{-l(u_k)}) - beta/(beta - 1))``.

    This equals ``f_beta(0 u_n d)`` for a base at level ``n``; the level is
    read from the base when ``n`` is omitted.
    """
    if n is None:
        n = classify_interval(base).level
        if n is None:
            raise InvalidBase("t_n is defined for bases at a level n >= 0")
    F = make_field(base)
    b = F.beta()
    binv = F.inv(b)
    one = F.const(1)
    prod = one
    for k in range(-1, n):
        prod = F.mul(prod, F.add(one, _power(F, binv, _lu(k))))
    frac = F.mul(b, F.inv(F.sub(b, one)))
    return FieldElement(base, F.mul(binv, F.sub(prod, frac)))


def t_threshold_printed(base: Base, n: int) -> FieldElement:
    """``prod_{k=-1}^{n-1}(1 + beta^{-l(u_k)}) - (beta^L - 2)/(beta^{L-1}(beta - 1))`` with
    ``L = l(u_n)``; kept for comparison with :func:`t_threshold`."""
    F = make_field(base)
    b = F.beta()
    binv = F.inv(b)
    one = F.const(1)
    prod = one
    for k in range(-1, n):
        prod = F.mul(prod, F.add(one, _power(F, binv, _lu(k))))
    L = _lu(n)
    num = F.sub(_power(F, b, L), F.const(2))
    den = F.mul(_power(F, b, L - 1), F.sub(b, one))
    return FieldElement(base, F.sub(prod, F.mul(num, F.inv(den))))


def _power(F, a, k: int):
    out = F.const(1)
    for _ in range(k):
        out = F.mul(out, a)
    return out


def threshold_target(base: Base, n: int, d: Optional[DigitSequence] = None) -> FieldElement:
    """``f_beta(0 u_n d)``; ``d`` defaults to the base's characteristic sequence."""
    if d is None:
        d = characteristic_sequence(base)
    if not isinstance(d, DigitSequence):
        raise InvalidBase("an eventually periodic characteristic sequence is needed")
    seq = DigitSequence((0,) + u_block(n) + d.preperiod, d.period)
    return evaluate_f_beta(seq, base)
