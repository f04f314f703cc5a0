"""Bases, the negative beta-transformation, expansions and characteristic sequences.

Two arithmetic backends sit behind a common interface:

* **exact** -- ``beta`` is a real algebraic number given by an integer
  polynomial and a rational isolating interval.  Orbit points are elements
  of ``Q(beta)`` stored as rational coefficient vectors modulo the minimal
  polynomial, so orbit repetitions (and hence periods) are detected exactly.
  Floors are decided by evaluating on an interval enclosure of ``beta``,
  refining the enclosure until no integer lies inside.
* **approximate** -- ``beta`` is known through a rational enclosure only and
  orbit points are ``mpmath`` intervals.  Precision is doubled on ambiguous
  floors up to a cap; beyond that :class:`~negbeta.errors.BoundaryAmbiguous`
  is raised.

For ``beta < -1`` the transformation acts on ``[l, r)`` with
``l = beta/(1-beta)`` and ``r = l + 1``, sending ``x`` to
``beta*x - floor(beta*x - l)``.  Positive bases ``beta > 1`` use ``[0, 1)``
and the usual greedy map; they are accepted as a cross-check only.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Union

import mpmath
import sympy
from mpmath import iv
from mpmath.libmp import mpf_floor, to_int

from .config import DEFAULTS, Settings
from .errors import BoundaryAmbiguous, InvalidBase, TruncationInsufficient
from .sequences import DigitSequence, Word, as_word

log = logging.getLogger(__name__)

_X = sympy.Symbol("X")

Number = Union[int, Fraction, str]


def _to_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, str):
        return Fraction(v.strip())
    return Fraction(v)


def _poly_eval(coeffs: Sequence, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


@lru_cache(maxsize=None)
def _minimal_polynomial(poly: tuple, lo: Fraction, hi: Fraction) -> tuple:
    """Monic minimal polynomial (ascending rational coefficients) of the unique
    root of ``poly`` inside ``(lo, hi)``."""
    if len(poly) < 2 or all(c == 0 for c in poly[1:]):
        raise InvalidBase(f"polynomial {poly} has no roots")
    P = sympy.Poly(list(reversed(poly)), _X, domain="QQ")
    flo, fhi = _poly_eval(poly, lo), _poly_eval(poly, hi)
    if flo == 0 or fhi == 0:
        raise InvalidBase("isolating interval endpoints must not be roots")
    if P.count_roots(sympy.Rational(lo.numerator, lo.denominator),
                     sympy.Rational(hi.numerator, hi.denominator)) != 1 or flo * fhi > 0:
        raise InvalidBase(f"interval ({lo}, {hi}) does not isolate exactly one simple root of {poly}")
    _, factors = P.factor_list()
    for fac, _mult in factors:
        n = fac.count_roots(sympy.Rational(lo.numerator, lo.denominator),
                            sympy.Rational(hi.numerator, hi.denominator))
        if n == 1:
            coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(fac.all_coeffs())]
            lead = coeffs[-1]
            return tuple(c / lead for c in coeffs)
    raise InvalidBase("no irreducible factor carries the isolated root")


@dataclass(frozen=True)
class Base:
    """A real base ``beta`` with ``|beta| > 1``.

    Parameters
    ----------
    kind : {"algebraic", "approximate"}
    poly : tuple of int
        Ascending integer coefficients (algebraic kind only).
    interval : tuple of Fraction
        Isolating interval of the root (algebraic kind) or rational enclosure
        of the value (approximate kind; both ends equal for a point value).
    prec : int
        Working precision in bits for interval evaluations.
    """

    kind: str
    poly: tuple = ()
    interval: tuple = ()
    prec: int = DEFAULTS.prec

    def __post_init__(self):
        lo, hi = (_to_fraction(v) for v in self.interval)
        if lo > hi:
            lo, hi = hi, lo
        object.__setattr__(self, "interval", (lo, hi))
        if self.kind == "algebraic":
            object.__setattr__(self, "poly", tuple(int(c) for c in self.poly))
            if lo == hi:
                raise InvalidBase("algebraic bases need a proper isolating interval")
            _minimal_polynomial(self.poly, lo, hi)
        elif self.kind == "approximate":
            if self.prec < 64:
                raise InvalidBase("approximate bases need at least 64 bits of precision")
            object.__setattr__(self, "poly", ())
        else:
            raise InvalidBase(f"unknown base kind {self.kind!r}")
        if not (hi < -1 or lo > 1):
            self._refine_check()

    def _refine_check(self):
        # The interval may straddle -1 or 1 while the root itself is fine.
        if self.kind == "approximate":
            raise InvalidBase(f"enclosure {self.interval} is not contained in |beta| > 1")
        lo, hi = _refine_interval(self.minimal_poly, *self.interval, width=Fraction(1, 2**40))
        if not (hi < -1 or lo > 1):
            raise InvalidBase(f"root near {float(lo)} does not satisfy |beta| > 1")

    # constructors -------------------------------------------------------
    @classmethod
    def algebraic(cls, poly: Sequence[int], lo: Number, hi: Number, prec: int = DEFAULTS.prec) -> "Base":
        return cls("algebraic", tuple(poly), (_to_fraction(lo), _to_fraction(hi)), prec)

    @classmethod
    def integer(cls, k: int) -> "Base":
        """The integer base ``k`` (``|k| >= 2``) as a degree-one algebraic base."""
        if abs(k) < 2:
            raise InvalidBase("integer bases need |k| >= 2")
        return cls.algebraic((-k, 1), Fraction(2 * k - 1, 2), Fraction(2 * k + 1, 2))

    @classmethod
    def rational(cls, q: Number) -> "Base":
        q = _to_fraction(q)
        return cls.algebraic((-q.numerator, q.denominator), q - Fraction(1, 4), q + Fraction(1, 4))

    @classmethod
    def approximate(cls, lo: Number, hi: Optional[Number] = None, prec: int = DEFAULTS.prec) -> "Base":
        lo = _to_fraction(lo)
        hi = lo if hi is None else _to_fraction(hi)
        return cls("approximate", (), (lo, hi), prec)

    # properties ---------------------------------------------------------
    @property
    def minimal_poly(self) -> tuple:
        if self.kind != "algebraic":
            raise InvalidBase("approximate bases have no minimal polynomial")
        return _minimal_polynomial(self.poly, *self.interval)

    @property
    def degree(self) -> int:
        return len(self.minimal_poly) - 1 if self.kind == "algebraic" else 0

    @property
    def is_exact(self) -> bool:
        return self.kind == "algebraic"

    @property
    def delta(self) -> int:
        """Sign of ``beta``."""
        return -1 if self.interval[1] < 0 else 1

    def value(self, prec: Optional[int] = None) -> mpmath.mpf:
        """Numerical value of ``beta`` (midpoint of a refined enclosure)."""
        prec = prec or self.prec
        if self.kind == "approximate":
            mid = sum(self.interval) / 2
            with mpmath.workprec(prec + 16):
                return mpmath.mpf(mid.numerator) / mid.denominator
        lo, hi = _refine_interval(self.minimal_poly, *self.interval, width=Fraction(1, 2 ** (prec + 8)))
        with mpmath.workprec(prec + 16):
            return (mpmath.mpf(lo.numerator) / lo.denominator + mpmath.mpf(hi.numerator) / hi.denominator) / 2

    def __float__(self) -> float:
        return float(self.value(64))

    def descriptor(self) -> str:
        if self.kind == "algebraic":
            lo, hi = self.interval
            return "poly={};interval={},{}".format(",".join(map(str, self.poly)), lo, hi)
        lo, hi = self.interval
        if lo == hi:
            return f"beta={_fraction_to_decimal(lo)}"
        return f"beta={_fraction_to_decimal((lo + hi) / 2)}"

    def __str__(self) -> str:
        return self.descriptor()

    def require_negative(self) -> None:
        if self.delta > 0:
            raise InvalidBase("this operation is defined for beta < -1 only")


def _fraction_to_decimal(q: Fraction, digits: int = 40) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    with mpmath.workdps(digits + 5):
        return mpmath.nstr(mpmath.mpf(q.numerator) / q.denominator, digits)


def _refine_interval(m: tuple, lo: Fraction, hi: Fraction, width: Fraction):
    """Bisect an isolating interval of a root of ``m`` down to ``width``."""
    if len(m) == 2:
        root = -m[0] / m[1]
        return root, root
    slo = _poly_eval(m, lo)
    while hi - lo > width:
        mid = (lo + hi) / 2
        # Dyadic-ish midpoints keep denominators small.
        s = _poly_eval(m, mid)
        if s == 0:
            return mid, mid
        if (s > 0) == (slo > 0):
            lo, slo = mid, s
        else:
            hi = mid
    return lo, hi


def parse_base(text: str, prec: int = DEFAULTS.prec) -> Base:
    """Parse ``beta=<decimal>`` or ``poly=c0,c1,...;interval=lo,hi``.

    Integer values of ``beta`` become exact degree-one bases; other decimals
    give approximate point bases.
    """
    text = text.strip()
    try:
        if text.startswith("beta="):
            val = Fraction(text[5:].strip())
            if val.denominator == 1:
                return Base.integer(val.numerator)
            return Base.approximate(val, prec=prec)
        if text.startswith("poly="):
            poly_part, _, interval_part = text.partition(";")
            coeffs = tuple(int(c) for c in poly_part[5:].split(","))
            if not interval_part.startswith("interval="):
                raise ValueError("missing interval=")
            lo, hi = interval_part[len("interval="):].split(",")
            return Base.algebraic(coeffs, Fraction(lo.strip()), Fraction(hi.strip()), prec=prec)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidBase(f"malformed base descriptor {text!r}: {exc}") from exc
    raise InvalidBase(f"malformed base descriptor {text!r}: expected beta=<decimal> or "
                      "poly=<c0,c1,...>;interval=<lo>,<hi>")


# ---------------------------------------------------------------------------
# arithmetic backends


class _Undecided(Exception):
    pass


def _iv_from_fraction(q: Fraction):
    return iv.mpf(q.numerator) / q.denominator


def _iv_floor(v) -> Optional[int]:
    lo, hi = v._mpi_
    a, b = to_int(mpf_floor(lo)), to_int(mpf_floor(hi))
    return int(a) if a == b else None


class _ExactField:
    """Arithmetic in ``Q(beta)`` with coefficient vectors modulo the minimal polynomial."""

    exact = True

    def __init__(self, base: Base, settings: Settings = DEFAULTS):
        self.base = base
        self.m = base.minimal_poly
        self.D = len(self.m) - 1
        self.lo, self.hi = _refine_interval(self.m, *base.interval, width=Fraction(1, 2**64))
        self.prec = max(base.prec, 128)
        self.cap = max(settings.precision_cap, 4096) * 4
        if self.D == 1:
            self.root = -self.m[0]

    # element construction
    def const(self, c) -> tuple:
        c = _to_fraction(c)
        return (c,) + (Fraction(0),) * (self.D - 1)

    def beta(self) -> tuple:
        if self.D == 1:
            return (self.root,)
        return (Fraction(0), Fraction(1)) + (Fraction(0),) * (self.D - 2)

    def _reduce(self, p: list) -> tuple:
        D, m = self.D, self.m
        for i in range(len(p) - 1, D - 1, -1):
            c = p[i]
            if c:
                for j in range(D):
                    p[i - D + j] -= c * m[j]
            p[i] = 0
        p = p[:D] + [Fraction(0)] * (D - len(p))
        return tuple(p)

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def scale(self, a, c):
        return tuple(x * c for x in a)

    def mul(self, a, b):
        if self.D == 1:
            return (a[0] * b[0],)
        p = [Fraction(0)] * (2 * self.D - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        p[i + j] += x * y
        return self._reduce(p)

    def mul_beta(self, a):
        if self.D == 1:
            return (a[0] * self.root,)
        return self._reduce([Fraction(0)] + list(a))

    def inv(self, a):
        if self.D == 1:
            return (1 / a[0],)
        expr = sum(sympy.Rational(c.numerator, c.denominator) * _X**i for i, c in enumerate(a))
        mexpr = sum(sympy.Rational(c.numerator, c.denominator) * _X**i for i, c in enumerate(self.m))
        res = sympy.Poly(sympy.invert(expr, mexpr, _X), _X, domain="QQ")
        coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(res.all_coeffs())]
        return self._reduce(coeffs + [Fraction(0)] * (self.D - len(coeffs)))

    def key(self, a):
        return a

    def is_rational(self, a) -> bool:
        return all(c == 0 for c in a[1:])

    # numerical decisions
    def _enclosure(self):
        return iv.mpf([iv.mpf(self.lo.numerator) / self.lo.denominator,
                       iv.mpf(self.hi.numerator) / self.hi.denominator])

    def _eval(self, a):
        old = iv.prec
        iv.prec = self.prec
        try:
            B = self._enclosure() if self.lo != self.hi else _iv_from_fraction(self.lo)
            acc = _iv_from_fraction(a[-1])
            for c in reversed(a[:-1]):
                acc = acc * B + _iv_from_fraction(c)
            return acc
        finally:
            iv.prec = old

    def _refine(self):
        width = (self.hi - self.lo) / 2**64
        self.lo, self.hi = _refine_interval(self.m, self.lo, self.hi, width)
        self.prec *= 2

    def floor(self, a) -> int:
        if self.D == 1 or self.is_rational(a):
            return math.floor(a[0])
        while True:
            f = _iv_floor(self._eval(a))
            if f is not None:
                return f
            if self.prec > self.cap:
                raise BoundaryAmbiguous("exact floor did not resolve; enclosure refinement exhausted")
            self._refine()

    def sign(self, a) -> int:
        if self.D == 1 or self.is_rational(a):
            return (a[0] > 0) - (a[0] < 0)
        while True:
            v = self._eval(a)
            lo, hi = v._mpi_
            if mpmath.mp.make_mpf(lo) > 0:
                return 1
            if mpmath.mp.make_mpf(hi) < 0:
                return -1
            if self.prec > self.cap:
                raise BoundaryAmbiguous("exact sign did not resolve")
            self._refine()

    def to_mpf(self, a, prec: int = 64):
        while True:
            v = self._eval(a)
            lo, hi = v._mpi_
            mlo, mhi = mpmath.mp.make_mpf(lo), mpmath.mp.make_mpf(hi)
            if mhi - mlo <= abs(mlo + mhi) * mpmath.mpf(2) ** (-prec) or mhi == mlo:
                with mpmath.workprec(prec + 8):
                    return (mlo + mhi) / 2
            self._refine()


class _IntervalField:
    """Interval arithmetic on an enclosure of ``beta`` at a fixed precision."""

    exact = False

    def __init__(self, base: Base, prec: int):
        self.base = base
        self.prec = prec
        lo, hi = base.interval
        old = iv.prec
        iv.prec = prec
        try:
            self.B = iv.mpf([_iv_from_fraction(lo), _iv_from_fraction(hi)]) if lo != hi else _iv_from_fraction(lo)
        finally:
            iv.prec = old

    def _run(self, fn, *args):
        old = iv.prec
        iv.prec = self.prec
        try:
            return fn(*args)
        finally:
            iv.prec = old

    def const(self, c):
        return self._run(lambda: _iv_from_fraction(_to_fraction(c)))

    def beta(self):
        return self.B

    def add(self, a, b):
        return self._run(lambda: a + b)

    def sub(self, a, b):
        return self._run(lambda: a - b)

    def scale(self, a, c):
        return self._run(lambda: a * _iv_from_fraction(_to_fraction(c)))

    def mul(self, a, b):
        return self._run(lambda: a * b)

    def mul_beta(self, a):
        return self._run(lambda: a * self.B)

    def inv(self, a):
        return self._run(lambda: 1 / a)

    def key(self, a):
        return None

    def floor(self, a) -> int:
        f = _iv_floor(a)
        if f is None:
            raise _Undecided()
        return f

    def sign(self, a) -> int:
        lo, hi = a._mpi_
        if mpmath.mp.make_mpf(lo) > 0:
            return 1
        if mpmath.mp.make_mpf(hi) < 0:
            return -1
        raise _Undecided()

    def to_mpf(self, a, prec: int = 64):
        lo, hi = a._mpi_
        with mpmath.workprec(prec + 8):
            return (mpmath.mp.make_mpf(lo) + mpmath.mp.make_mpf(hi)) / 2


def make_field(base: Base, settings: Settings = DEFAULTS, prec: Optional[int] = None):
    """Fresh arithmetic context for ``base`` (one per call keeps refinement state local)."""
    if base.kind == "algebraic":
        return _ExactField(base, settings)
    return _IntervalField(base, prec or base.prec)


@dataclass(frozen=True)
class FieldElement:
    """A number in the arithmetic backend of ``base``.

    For algebraic bases ``value`` is the coefficient vector in powers of
    ``beta`` (reduced modulo the minimal polynomial), so equality is exact.
    For approximate bases it is an ``mpmath`` interval.
    """

    base: Base
    value: object

    @property
    def exact(self) -> bool:
        return self.base.kind == "algebraic"

    def mpf(self, prec: int = 64) -> mpmath.mpf:
        return make_field(self.base).to_mpf(self.value, prec)

    def __float__(self) -> float:
        return float(self.mpf(64))

    def as_fraction(self) -> Optional[Fraction]:
        """Exact rational value when the element lies in Q, else ``None``."""
        if self.exact and all(c == 0 for c in self.value[1:]):
            return self.value[0]
        return None


def _coerce(field, x):
    if isinstance(x, FieldElement):
        return x.value
    if isinstance(x, (int, Fraction, str)):
        return field.const(_to_fraction(x))
    return x


# ---------------------------------------------------------------------------
# the transformation


def _endpoints_raw(field, base: Base):
    if base.delta > 0:
        return field.const(0), field.const(1)
    b = field.beta()
    one = field.const(1)
    l = field.mul(b, field.inv(field.sub(one, b)))
    return l, field.add(l, one)


def endpoints(base: Base) -> tuple:
    """Return ``(l, r)`` with ``l = beta/(1-beta)`` and ``r = l + 1`` (``(0, 1)`` for ``beta > 1``)."""
    field = make_field(base)
    l, r = _endpoints_raw(field, base)
    return FieldElement(base, l), FieldElement(base, r)


def _step(field, x, l):
    y = field.mul_beta(x)
    a = field.floor(field.sub(y, l))
    return a, field.sub(y, field.const(a))


def tbeta_step(x, base: Base) -> tuple:
    """One application of the transformation.

    Returns ``(digit, x')`` with ``digit = floor(beta*x - l)`` and
    ``x' = beta*x - digit``.
    """
    field = make_field(base)
    l, _ = _endpoints_raw(field, base)
    try:
        a, y = _step(field, _coerce(field, x), l)
    except _Undecided:
        raise BoundaryAmbiguous("floor undecided at the base precision") from None
    return a, FieldElement(base, y)


def _interval_orbit(base: Base, start_fn, n: int, settings: Settings, allow_short: bool):
    """Digits of an orbit computed with interval arithmetic, escalating precision."""
    prec = base.prec
    best: list = []
    while True:
        field = _IntervalField(base, prec)
        l, r = _endpoints_raw(field, base)
        x = start_fn(field, l, r)
        digits: list = []
        try:
            while len(digits) < n:
                a, x = _step(field, x, l)
                digits.append(a)
            return digits
        except _Undecided:
            if len(digits) > len(best):
                best = digits
        lo, hi = base.interval
        if prec >= settings.precision_cap or (lo != hi and _enclosure_limited(base, prec)):
            if allow_short:
                return best
            raise BoundaryAmbiguous(
                f"floor undecided after {len(best)} digits at {prec} bits", digits_known=len(best))
        prec = min(2 * prec, settings.precision_cap)


def _enclosure_limited(base: Base, prec: int) -> bool:
    """True when the width of the base enclosure dominates rounding at ``prec`` bits."""
    lo, hi = base.interval
    width = hi - lo
    scale = max(abs(lo), abs(hi))
    return width > scale / 2 ** (prec - 8)


def expand(x, base: Base, n_digits: int, settings: Settings = DEFAULTS) -> tuple:
    """Expansion of ``x`` in base ``beta``.

    Returns ``(shift, digits)`` where ``shift`` is the least ``n >= 0`` with
    ``x / beta**n`` in the domain and ``digits`` are the first ``n_digits``
    outputs of the transformation started there, so that
    ``x = sum_k digits[k-1] * beta**(shift-k)``.
    """
    if n_digits < 1:
        raise ValueError("n_digits must be >= 1")

    def locate(field, l, r):
        y = _coerce(field, x)
        binv = field.inv(field.beta())
        for n in range(0, 100000):
            if field.sign(field.sub(y, l)) >= 0 and field.sign(field.sub(r, y)) > 0:
                return n, y
            y = field.mul(y, binv)
        raise BoundaryAmbiguous("no admissible shift found")

    if base.kind == "algebraic":
        field = _ExactField(base, settings)
        l, r = _endpoints_raw(field, base)
        shift, y = locate(field, l, r)
        digits = []
        for _ in range(n_digits):
            a, y = _step(field, y, l)
            digits.append(a)
        return shift, tuple(digits)

    prec = base.prec
    while True:
        field = _IntervalField(base, prec)
        l, r = _endpoints_raw(field, base)
        try:
            shift, y = locate(field, l, r)
            digits = []
            for _ in range(n_digits):
                a, y = _step(field, y, l)
                digits.append(a)
            return shift, tuple(digits)
        except _Undecided:
            if prec >= settings.precision_cap:
                raise BoundaryAmbiguous(f"expansion undecided at {prec} bits") from None
            prec = min(2 * prec, settings.precision_cap)


# ---------------------------------------------------------------------------
# characteristic sequences


def _exact_orbit_sequence(field, x, l, state_cap: int, first_digit=None):
    """Digits of the exact orbit of ``x`` as an eventually periodic sequence.

    Returns ``(DigitSequence, None)`` or ``(None, digits_so_far)`` when the
    state cap is reached without a repetition.
    """
    seen = {}
    digits = []
    while len(digits) < state_cap:
        k = field.key(x)
        if k in seen:
            i = seen[k]
            return DigitSequence(tuple(digits[:i]), tuple(digits[i:])), None
        seen[k] = len(digits)
        a, x = _step(field, x, l)
        digits.append(a)
    return None, digits


def correct_odd_period(raw: DigitSequence) -> DigitSequence:
    """Replace a purely periodic sequence of odd period ``p`` by
    ``(a_1 ... a_{p-1} (a_p - 1) 0)^inf``; other sequences are returned unchanged."""
    if raw.preperiod or len(raw.period) % 2 == 0:
        return raw
    per = raw.period
    if per[-1] == 0:
        raise ValueError("odd-period correction needs a positive last period digit")
    return DigitSequence((), per[:-1] + (per[-1] - 1, 0))


@lru_cache(maxsize=512)
def _characteristic_cached(base: Base, mode: str, max_len: int, settings: Settings):
    if base.delta > 0:
        return DigitSequence((), (0,))
    if base.kind == "algebraic":
        field = _ExactField(base, settings)
        l, _ = _endpoints_raw(field, base)
        raw, partial = _exact_orbit_sequence(field, l, l, settings.state_cap)
        if raw is None:
            log.warning("no period within %d orbit points; returning an aperiodic-so-far prefix",
                        settings.state_cap)
            return tuple(partial[:max_len]) if max_len else tuple(partial)
        return raw if mode == "raw" else correct_odd_period(raw)
    digits = _interval_orbit(base, lambda f, l, r: l, max_len, settings, allow_short=False)
    return tuple(digits)


def characteristic_sequence(base: Base, mode: str = "corrected", max_len: int = DEFAULTS.max_len,
                            settings: Settings = DEFAULTS):
    """Expansion ``d`` of the left endpoint ``l``.

    Parameters
    ----------
    mode : {"corrected", "raw"}
        ``raw`` is the orbit of ``l`` itself; ``corrected`` applies the
        odd-period correction used to define the (corrected) shift.
    max_len : int
        Prefix length returned by the approximate backend.

    Returns
    -------
    DigitSequence or tuple
        Exact eventually periodic sequence for algebraic bases, a prefix
        word (no periodicity claim) otherwise.
    """
    if mode not in ("corrected", "raw"):
        raise ValueError(f"mode must be 'corrected' or 'raw', got {mode!r}")
    return _characteristic_cached(base, mode, max_len, settings)


def characteristic_prefix(base: Base, n: int, settings: Settings = DEFAULTS, mode: str = "corrected",
                          allow_short: bool = False) -> Word:
    """First ``n`` digits of the characteristic sequence.

    With ``allow_short`` an approximate base returns as many digits as its
    enclosure determines instead of raising.
    """
    if base.kind == "algebraic" or base.delta > 0:
        seq = characteristic_sequence(base, mode, n, settings)
        if isinstance(seq, DigitSequence):
            return seq.prefix(n)
        if len(seq) < n:
            raise TruncationInsufficient(f"only {len(seq)} digits available")
        return seq[:n]
    digits = _interval_orbit(base, lambda f, l, r: l, n, settings, allow_short=allow_short)
    return tuple(digits)


def upper_sequence(base: Base, max_len: int = DEFAULTS.max_len, settings: Settings = DEFAULTS):
    """Expansion ``r`` governing the upper bound of admissible sequences.

    ``r*`` is the orbit of the right endpoint; if ``r* = r*_1 ... r*_n d*``
    with ``n`` minimal, the last of those digits is decreased and the block
    repeated when ``beta > 1`` or ``n`` is even; otherwise ``r = r*``.
    """
    raw_d = characteristic_sequence(base, "raw", max_len, settings)
    if base.delta < 0:
        # beta*r - l = 0 exactly, so r*_1 = 0 and the next point is l itself.
        if isinstance(raw_d, DigitSequence):
            r_star = DigitSequence((0,) + raw_d.preperiod, raw_d.period)
        else:
            r_star = (0,) + tuple(raw_d[: max_len - 1])
        n = 1
    else:
        field = make_field(base, settings)
        l, r = _endpoints_raw(field, base)
        if base.kind == "algebraic":
            a = field.floor(field.sub(field.mul_beta(r), l))
            x = field.sub(field.mul_beta(r), field.const(a))
            tail, _ = _exact_orbit_sequence(field, x, l, settings.state_cap)
            r_star = DigitSequence((a,) + tail.preperiod, tail.period)
        else:
            def start(f, l_, r_):
                return r_
            digits = _interval_orbit(base, start, max_len, settings, allow_short=False)
            r_star = tuple(digits)
        n = _tail_match(r_star, raw_d)
    if n is None:
        return r_star
    if base.delta > 0 or n % 2 == 0:
        head = tuple(r_star[i] for i in range(1, n + 1)) if isinstance(r_star, DigitSequence) else r_star[:n]
        return DigitSequence((), head[:-1] + (head[-1] - 1,))
    return r_star


def _tail_match(r_star, d_star) -> Optional[int]:
    if isinstance(r_star, DigitSequence) and isinstance(d_star, DigitSequence):
        for n in range(1, r_star.state_count + 1):
            if r_star.shift(n) == d_star:
                return n
        return None
    return None


def evaluate_f_beta(seq, base: Base) -> FieldElement:
    """``sum_k x_k beta^{-k}`` for a finite word or an eventually periodic sequence."""
    field = make_field(base)
    binv = field.inv(field.beta())

    def finite(word):
        acc = field.const(0)
        for a in reversed(word):
            acc = field.mul(field.add(acc, field.const(a)), binv)
        return acc

    if isinstance(seq, DigitSequence):
        p = len(seq.period)
        per = finite(seq.period)
        bp = field.const(1)
        for _ in range(p):
            bp = field.mul(bp, binv)
        tail = field.mul(per, field.inv(field.sub(field.const(1), bp)))
        pre = finite(seq.preperiod)
        bpre = field.const(1)
        for _ in range(len(seq.preperiod)):
            bpre = field.mul(bpre, binv)
        return FieldElement(base, field.add(pre, field.mul(bpre, tail)))
    return FieldElement(base, finite(as_word(seq)))


def digit_bound(base: Base) -> int:
    """Largest digit of the alphabet, read from the corrected characteristic sequence."""
    d = characteristic_sequence(base)
    first = d[1] if isinstance(d, DigitSequence) else d[0]
    if base.delta > 0:
        return math.ceil(float(base)) - 1
    return first


# ---------------------------------------------------------------------------
# catalogue of named bases used throughout the tests and scripts


def golden_base() -> Base:
    """``-gamma_0 = -(1+sqrt 5)/2``, root of ``X^2 + X - 1``."""
    return Base.algebraic((-1, 1, 1), Fraction(-17, 10), Fraction(-8, 5))


def neg_gamma1_base() -> Base:
    """``-gamma_1``, root of ``X^3 - X + 1``."""
    return Base.algebraic((1, -1, 0, 1), Fraction(-14, 10), Fraction(-13, 10))


# ---------------------------------------------------------------------------
# rational orbits and bracketing prefixes


def rational_characteristic_digits(q: Fraction, n: int) -> Word:
    """First ``n`` raw digits of the orbit of ``l`` for a rational base ``q < -1``.

    Exact integer arithmetic: with ``q = p/s`` and ``D = s - p`` the orbit
    points are ``N_j / (s^j D)``.
    """
    q = _to_fraction(q)
    if q >= -1:
        raise InvalidBase("rational orbit helper needs q < -1")
    p, s = q.numerator, q.denominator
    D = s - p
    N = p
    sj = s
    out = []
    for _ in range(n):
        denom = sj * D
        a = (p * N - p * sj) // denom
        out.append(a)
        N = p * N - a * denom
        sj *= s
    return tuple(out)


def iter_rational_characteristic(q: Fraction):
    """Lazy version of :func:`rational_characteristic_digits`."""
    q = _to_fraction(q)
    p, s = q.numerator, q.denominator
    D = s - p
    N = p
    sj = s
    while True:
        denom = sj * D
        a = (p * N - p * sj) // denom
        yield a
        N = p * N - a * denom
        sj *= s

