"""Decomposition of the characteristic sequence and the prefix-code families.

Notation (``d`` the corrected characteristic sequence, 1-indexed):

* the decomposition is the list of pairs ``(n_i, p_i)``: after the odd
  position ``2 n_i - 1`` the sequence copies ``d_1 ... d_{p_i}`` and then
  leaves the prefix;  ``B_i = d_1 ... d_{2 n_i - 1}`` are the blocks;
* ``Gamma0`` holds the words ``d_1 ... d_n j`` whose suffixes all stay strictly
  above the matching prefixes of ``d``;
* ``Delta00`` holds odd prefixes of ``d`` whose length lies in
  ``[2 n_i + p_i, 2 n_{i+1} - 1)``;
* ``C_beta`` is the code whose star generates the language for
  ``beta <= -gamma_0``;
* ``Delta_i`` (``i >= 0``) are the codes built from the blocks; their product
  together with ``C_beta`` factors the series ``1 - sum (-1)^n (d_{n-1} - d_n) z^n``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import mpmath
import numpy as np

from .automaton import EMPTY, LowerBoundAutomaton, build_support_automaton
from .config import DEFAULTS
from .errors import MalformedCharacteristic, NotEventuallyPeriodic, TruncationInsufficient
from .numeration import Base, characteristic_sequence
from .ordering import LESS, alt_compare, is_admissible, is_admissible_word
from .sequences import DigitSequence, Word, digit, format_word, prefix

__all__ = [
    "Decomposition", "CodeFamily", "IdentityReport", "CodeStatistics",
    "decompose_characteristic", "enumerate_family", "verify_series_identity", "code_statistics",
    "build_support_automaton", "j_set", "phi_image_counts", "series_mul", "series_inv",
]

SeqLike = Union[Word, DigitSequence]
FAMILIES = ("Gamma0", "Gamma1", "Delta00", "E", "C_beta", "Delta_i", "J")


# ---------------------------------------------------------------------------
# decomposition


@dataclass(frozen=True)
class Decomposition:
    """The pairs ``(n_i, p_i)`` of a characteristic sequence up to a horizon.

    Attributes
    ----------
    pairs : tuple of (int, int)
    horizon : int
        Only pairs with ``2 n_i + p_i <= horizon`` are listed.
    repeat_from, repeat_length : int or None
        When the decomposition of an eventually periodic ``d`` is seen to
        repeat, pair ``k + repeat_length`` is pair ``k`` shifted, for
        ``k >= repeat_from``.
    """

    d: SeqLike
    pairs: tuple
    horizon: int
    repeat_from: Optional[int] = None
    repeat_length: Optional[int] = None

    @property
    def odd_positions(self) -> tuple:
        return tuple(2 * n - 1 for n, _ in self.pairs)

    @property
    def insert_lengths(self) -> tuple:
        return tuple(p for _, p in self.pairs)

    def block(self, i: int) -> Word:
        """``B_i = d_1 ... d_{2 n_i - 1}`` (0-based ``i``)."""
        return prefix(self.d, 2 * self.pairs[i][0] - 1)

    @property
    def blocks(self) -> tuple:
        return tuple(self.block(i) for i in range(len(self.pairs)))

    def __len__(self):
        return len(self.pairs)


def decompose_characteristic(d: SeqLike, horizon: int = 200) -> Decomposition:
    """Greedy scan for odd positions after which ``d`` re-enters its own prefix.

    Raises
    ------
    MalformedCharacteristic
        When a shift of ``d`` falls below ``d`` (``d`` cannot be a
        characteristic sequence).
    """
    pairs = []
    keys: Dict[tuple, int] = {}
    repeat_from = repeat_length = None
    d1 = digit(d, 1)
    pos = 1
    m = 1
    cap = 4 * horizon + 64
    while m + 1 <= horizon:
        if m >= pos:
            a = digit(d, m + 1)
            if a == d1:
                p = 0
                try:
                    while digit(d, m + 1 + p) == digit(d, 1 + p):
                        p += 1
                        if p > cap:
                            raise MalformedCharacteristic("an odd shift of d equals d")
                except TruncationInsufficient:
                    break
                # first difference at index p+1 of sigma^m(d) against d
                if ((-1) ** (p + 1)) * (digit(d, m + 1 + p) - digit(d, p + 1)) < 0:
                    raise MalformedCharacteristic(f"shift by {m} falls below d at index {p + 1}")
                if 2 * ((m + 1) // 2) + p > horizon:
                    break
                pairs.append(((m + 1) // 2, p))
                if isinstance(d, DigitSequence) and repeat_from is None and m >= len(d.preperiod):
                    # The rest of the scan depends only on sigma^m(d) and p.
                    key = (d.canon(m), p)
                    if key in keys:
                        repeat_from = keys[key]
                        repeat_length = len(pairs) - 1 - keys[key]
                    else:
                        keys.setdefault(key, len(pairs) - 1)
                pos = m + 1 + p
            elif a > d1:
                raise MalformedCharacteristic(f"digit {a} at position {m + 1} exceeds d_1 = {d1}")
        m += 2
    return Decomposition(d, tuple(pairs), horizon, repeat_from, repeat_length)


def _pair_horizon(max_len: int) -> int:
    # Every pair with a block of length <= max_len + 1 satisfies
    # 2 n + p < 4 n <= 2 max_len + 6, since p < 2 n - 1.
    return 2 * max_len + 6


def j_set(dec: Decomposition, i: int) -> set:
    """Indices ``t`` (0-based) with ``p_t`` in the ``i``-th length window.

    ``J(0) = {t : p_t < 2 n_1 - 1}`` and
    ``J(i) = {t : 2 n_i - 1 <= p_t < 2 n_{i+1} - 1}`` (1-based ``n``).
    """
    pairs = dec.pairs
    if not pairs:
        return set()
    if i == 0:
        return {t for t, (_, p) in enumerate(pairs) if p < 2 * pairs[0][0] - 1}
    lo = 2 * pairs[i - 1][0] - 1 if i - 1 < len(pairs) else math.inf
    hi = 2 * pairs[i][0] - 1 if i < len(pairs) else math.inf
    return {t for t, (_, p) in enumerate(pairs) if lo <= p < hi}


# ---------------------------------------------------------------------------
# families


@dataclass(frozen=True)
class CodeFamily:
    """Truncated enumeration of one code family.

    ``words`` lists every member of length ``<= words_len`` (sorted by length
    then lexicographically); ``counts[n]`` is the number of members of length
    ``n`` for ``n <= max_len``.  When ``counts_source`` is ``"automaton"`` the
    counts beyond ``words_len`` come from the first-return count of the
    admissibility automaton instead of the word list.
    """

    family: str
    max_len: int
    words: tuple
    counts: tuple
    index: Optional[int] = None
    words_len: Optional[int] = None
    counts_source: str = "words"
    experimental: bool = False

    def __post_init__(self):
        if self.words_len is None:
            object.__setattr__(self, "words_len", self.max_len)

    @classmethod
    def from_words(cls, family: str, words: Iterable[Word], max_len: int, **kw) -> "CodeFamily":
        ws = sorted({tuple(w) for w in words if len(w) <= max_len}, key=lambda w: (len(w), w))
        counts = [0] * (max_len + 1)
        for w in ws:
            counts[len(w)] += 1
        return cls(family, max_len, tuple(ws), tuple(counts), **kw)

    @property
    def name(self) -> str:
        return f"{self.family}({self.index})" if self.index is not None else self.family

    def by_length(self) -> Dict[int, list]:
        out: Dict[int, list] = {}
        for w in self.words:
            out.setdefault(len(w), []).append(w)
        return out

    def __contains__(self, w) -> bool:
        return tuple(w) in set(self.words)

    def __len__(self):
        return len(self.words)

    def to_json(self) -> str:
        return json.dumps({
            "family": self.name,
            "max_len": self.max_len,
            "words_len": self.words_len,
            "counts_source": self.counts_source,
            "words": {str(n): [",".join(map(str, w)) for w in ws] for n, ws in self.by_length().items()},
            "counts": {str(n): c for n, c in enumerate(self.counts)},
        })

    @classmethod
    def from_json(cls, text: str) -> "CodeFamily":
        data = json.loads(text)
        name = data["family"]
        index = None
        if "(" in name:
            name, idx = name[:-1].split("(")
            index = int(idx)
        words = [tuple(int(a) for a in s.split(",")) if s else () for ws in data["words"].values() for s in ws]
        counts = [data["counts"][str(n)] for n in range(data["max_len"] + 1)]
        return cls(name, data["max_len"], tuple(sorted(words, key=lambda w: (len(w), w))), tuple(counts), index,
                   data.get("words_len"), data.get("counts_source", "words"))


def _gamma0(d: SeqLike, max_len: int) -> list:
    d1 = digit(d, 1)
    out = []
    for n in range(max_len):
        head = prefix(d, n)
        for j in range(d1 + 1):
            y = head + (j,)
            ok = all(alt_compare(prefix(d, n + 1 - i), y[i:]).relation == LESS for i in range(n + 1))
            if ok and is_admissible_word(y, d):
                out.append(y)
    return out


def _property_c(x: Word, d: SeqLike) -> bool:
    n = len(x)
    return all(alt_compare(prefix(d, n - i), x[i:]).relation == LESS for i in range(n))


def _c_beta_words(d: SeqLike, max_len: int) -> list:
    gam = _gamma0(d, max_len)
    D = [prefix(d, k) for k in range(1, max_len + 1, 2)]
    out = set()

    def rec(x: Word):
        for y in gam:
            w = x + y
            if len(w) <= max_len and w not in out and is_admissible_word(w, d) and _property_c(w, d):
                out.add(w)
        for e in D:
            if len(x) + len(e) < max_len and is_admissible_word(x + e, d):
                rec(x + e)

    rec(())
    return list(out)


def _delta00(d: SeqLike, dec: Decomposition, max_len: int) -> list:
    bounds = [(0, 0)] + list(dec.pairs)
    out = []
    for i, (n, p) in enumerate(bounds):
        lo = 2 * n + p
        hi = 2 * bounds[i + 1][0] - 1 if i + 1 < len(bounds) else max_len + 1
        for L in range(max(lo, 1), min(hi, max_len + 1)):
            if L % 2 == 1:
                out.append(prefix(d, L))
    return out


def _longest_prefix_suffix(w: Word, d: SeqLike) -> int:
    for s in range(len(w)):
        suf = w[s:]
        if prefix(d, len(suf)) == suf:
            return len(suf)
    return 0


def _admissible_with_tail(w: Word, d: SeqLike) -> bool:
    if isinstance(d, DigitSequence):
        seq = DigitSequence(w + d.preperiod, d.period)
        return is_admissible(seq, d, -1, check_upper=False).admissible
    return is_admissible_word(w + tuple(d), d)


def _delta0(d: SeqLike, dec: Decomposition, max_len: int) -> list:
    E = [b for b in dec.blocks if len(b) <= max_len]
    Y = _delta00(d, dec, max_len)
    d1 = digit(d, 1)
    out = set()

    def rec(x: Word):
        for y in Y:
            w = x + y
            if len(w) > max_len or w in out:
                continue
            if _longest_prefix_suffix(w, d) != len(y):
                continue
            if not _admissible_with_tail(w, d) or not _admissible_with_tail(w + (d1,), d):
                continue
            out.add(w)
        for e in E:
            if len(x) + len(e) < max_len:
                rec(x + e)

    rec(())
    return list(out)


def _delta_level(d: SeqLike, dec: Decomposition, i: int, max_len: int) -> list:
    """Words ``B_{t_1} ... B_{t_m}`` of the family built from ``J(i)``.

    ``p_{t_k} <= 2 n_{t_{k+1}} - 1``, the last index lies in ``J(i)``, the
    earlier ones in ``J(j)`` for ``j > i``, and ``p_{t_m} < 2 n_{t_1} - 1``.
    """
    Ji = j_set(dec, i)
    higher = set()
    for j in range(i + 1, len(dec) + 1):
        higher |= j_set(dec, j)
    bl = [2 * n - 1 for n, _ in dec.pairs]
    ps = dec.insert_lengths
    blocks = dec.blocks
    out = set()

    def rec(seq: list, L: int):
        if seq and seq[-1] in Ji:
            if ps[seq[-1]] < bl[seq[0]]:
                out.add(tuple(a for t in seq for a in blocks[t]))
            return
        for t in range(len(dec)):
            if L + bl[t] > max_len:
                continue
            if t not in Ji and t not in higher:
                continue
            if seq and not ps[seq[-1]] <= bl[t]:
                continue
            rec(seq + [t], L + bl[t])

    rec([], 0)
    return list(out)


def _gamma1(d: SeqLike, dec: Decomposition, max_len: int) -> list:
    """Experimental: ``x y`` with ``x`` in ``Delta_1^*`` and ``y`` in ``Gamma0`` no shorter
    than the first block, kept when admissible and right-extendable."""
    if not dec.pairs:
        return []
    first = 2 * dec.pairs[0][0] - 1
    gam = [y for y in _gamma0(d, max_len) if len(y) >= first]
    delta1 = _delta_level(d, dec, 0, max_len)
    out = set()

    def rec(x: Word):
        for y in gam:
            w = x + y
            if len(w) <= max_len and is_admissible_word(w, d) and _property_c(w, d):
                out.add(w)
        for e in delta1:
            if len(x) + len(e) < max_len:
                rec(x + e)

    rec(())
    return list(out)


def _resolve(base: Union[Base, SeqLike]) -> SeqLike:
    if isinstance(base, Base):
        base.require_negative()
        return characteristic_sequence(base)
    return base


def enumerate_family(base: Union[Base, SeqLike], family: str, max_len: int = DEFAULTS.max_len,
                     index: Optional[int] = None, words_len: Optional[int] = None,
                     horizon: Optional[int] = None) -> CodeFamily:
    """Enumerate a code family constructively up to length ``max_len``.

    Parameters
    ----------
    base : Base or DigitSequence
        The base, or its corrected characteristic sequence.
    family : str
        One of ``Gamma0``, ``Gamma1`` (experimental), ``Delta00``, ``E``,
        ``C_beta``, ``Delta_i`` (needs ``index``) or ``J`` (needs ``index``;
        returns the blocks ``B_t`` with ``t`` in ``J(index)``).
    words_len : int, optional
        For ``C_beta`` only: list words up to this length (default
        ``min(max_len, 14)``) and take the remaining counts from the
        first-return count of the admissibility automaton.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    d = _resolve(base)
    dec = decompose_characteristic(d, horizon or _pair_horizon(max_len))
    if family == "Gamma0":
        return CodeFamily.from_words(family, _gamma0(d, max_len), max_len)
    if family == "Gamma1":
        return CodeFamily.from_words(family, _gamma1(d, dec, max_len), max_len, experimental=True)
    if family == "Delta00":
        return CodeFamily.from_words(family, _delta00(d, dec, max_len), max_len)
    if family == "E":
        return CodeFamily.from_words(family, [b for b in dec.blocks], max_len)
    if family == "J":
        if index is None:
            raise ValueError("family J needs an index")
        return CodeFamily.from_words(family, [dec.block(t) for t in sorted(j_set(dec, index))], max_len,
                                     index=index)
    if family == "Delta_i":
        if index is None or index < 0:
            raise ValueError("family Delta_i needs an index >= 0")
        words = _delta0(d, dec, max_len) if index == 0 else _delta_level(d, dec, index - 1, max_len)
        return CodeFamily.from_words(family, words, max_len, index=index)
    # C_beta
    wl = min(max_len, 14) if words_len is None else min(words_len, max_len)
    words = _c_beta_words(d, wl)
    fam = CodeFamily.from_words(family, words, wl)
    if wl == max_len:
        return fam
    if not isinstance(d, DigitSequence):
        raise NotEventuallyPeriodic("counts beyond the word list need an eventually periodic d")
    counts = LowerBoundAutomaton(d).first_return_counts(max_len)
    if tuple(counts[: wl + 1]) != fam.counts:
        raise AssertionError("constructive enumeration disagrees with the first-return count")
    return CodeFamily(family, max_len, fam.words, tuple(counts), None, wl, "automaton")


def all_delta_families(base: Union[Base, SeqLike], max_len: int) -> List[CodeFamily]:
    """``Delta_{0}, Delta_{1}, ...``: every family with a member of length ``<= max_len``."""
    d = _resolve(base)
    dec = decompose_characteristic(d, _pair_horizon(max_len))
    out = [CodeFamily.from_words("Delta_i", _delta0(d, dec, max_len), max_len, index=0)]
    for i in range(len(dec) + 1):
        out.append(CodeFamily.from_words("Delta_i", _delta_level(d, dec, i, max_len), max_len, index=i + 1))
    return out


# ---------------------------------------------------------------------------
# power series


def series_mul(a: Sequence[int], b: Sequence[int], n: int) -> list:
    c = [0] * (n + 1)
    for i, x in enumerate(a[: n + 1]):
        if x:
            for j, y in enumerate(b[: n + 1 - i]):
                c[i + j] += x * y
    return c


def series_inv(a: Sequence[int], n: int) -> list:
    """Inverse of a power series with constant term 1."""
    if a[0] != 1:
        raise ValueError("constant term must be 1")
    b = [0] * (n + 1)
    b[0] = 1
    for k in range(1, n + 1):
        b[k] = -sum(a[j] * b[k - j] for j in range(1, min(k, len(a) - 1) + 1))
    return b


@dataclass(frozen=True)
class IdentityReport:
    """Coefficients of both sides of the factorisation up to ``degree``."""

    degree: int
    lhs: tuple
    rhs: tuple
    families: tuple = field(default=(), repr=False)

    @property
    def equal(self) -> tuple:
        return tuple(a == b for a, b in zip(self.lhs, self.rhs))

    @property
    def holds(self) -> bool:
        return all(self.equal)


def verify_series_identity(base: Union[Base, SeqLike], degree: int = DEFAULTS.degree) -> IdentityReport:
    """Compare ``1 - sum (-1)^n (d_{n-1} - d_n) z^n`` with
    ``(1 + z)(1 - C(z)) prod_k (1 - Delta_k(z))`` coefficient-wise.

    ``C`` and ``Delta_k`` are the length generating functions of ``C_beta``
    and the ``Delta`` families, each enumerated to length ``degree``.
    """
    d = _resolve(base)
    dd = [0] + [digit(d, k) for k in range(1, degree + 1)]
    lhs = [1] + [-((-1) ** n) * (dd[n - 1] - dd[n]) for n in range(1, degree + 1)]
    fam_c = enumerate_family(d, "C_beta", degree)
    if len(fam_c.counts) < degree + 1:
        raise TruncationInsufficient("C_beta counts shorter than the requested degree")
    rhs = series_mul([1, 1], [1] + [-c for c in fam_c.counts[1:]], degree)
    deltas = all_delta_families(d, degree)
    for fam in deltas:
        rhs = series_mul(rhs, [1] + [-c for c in fam.counts[1:]], degree)
    return IdentityReport(degree, tuple(lhs), tuple(rhs), (fam_c,) + tuple(deltas))


# ---------------------------------------------------------------------------
# statistics


def phi_image_counts(d_x: DigitSequence, power: int, max_len: int) -> list:
    """Length counts of ``phi^power(C_x)`` where ``C_x`` is the first-return code of ``d_x``."""
    from .exchange import phi_apply

    A = LowerBoundAutomaton(d_x)
    lens = {a: len(phi_apply((a,), power)) for a in A.alphabet}
    layers: List[Dict[frozenset, int]] = [dict() for _ in range(max_len + 1)]
    layers[0][EMPTY] = 1
    out = [0] * (max_len + 1)
    for L in range(max_len + 1):
        for s, c in layers[L].items():
            if L > 0 and s == EMPTY:
                continue
            for a in A.alphabet:
                t = A.step(s, a)
                if t is None:
                    continue
                M = L + lens[a]
                if M > max_len:
                    continue
                if t == EMPTY:
                    out[M] += c
                else:
                    layers[M][t] = layers[M].get(t, 0) + c
    return out


@dataclass(frozen=True)
class TailSum:
    """A truncated series with a geometric tail estimate."""

    truncated: mpmath.mpf
    tail: mpmath.mpf
    ratio: Optional[mpmath.mpf]
    valid: bool

    @property
    def total(self) -> mpmath.mpf:
        return self.truncated + self.tail


def _tail_sum(terms: Sequence) -> TailSum:
    """Sum ``terms`` and estimate the remainder from the geometric ratio of the
    last five nonzero terms (valid when that ratio is below 1)."""
    total = mpmath.fsum(terms)
    nz = [(i, t) for i, t in enumerate(terms) if t != 0]
    if len(nz) < 6:
        # Too few terms for a ratio: accept as exact only if the family looks finite.
        finite = not nz or nz[-1][0] <= (len(terms) - 1) // 2
        return TailSum(total, mpmath.mpf(0), None, finite)
    last = nz[-6:]
    ratios = []
    for (i0, t0), (i1, t1) in zip(last, last[1:]):
        ratios.append((t1 / t0) ** (mpmath.mpf(1) / (i1 - i0)))
    r = max(ratios)
    if r >= 1:
        return TailSum(total, mpmath.inf, r, False)
    n_last, t_last = nz[-1]
    gap = len(terms) - 1 - n_last
    tail = t_last * r ** (gap + 1) / (1 - r)
    return TailSum(total, tail, r, True)


@dataclass(frozen=True)
class CodeStatistics:
    """Kraft sum, average length, gcd of lengths and message growth of a code."""

    kraft: TailSum
    average_length: TailSum
    gcd: int
    message_counts: tuple
    max_message_ratio: mpmath.mpf

    def as_dict(self) -> dict:
        return {
            "kraft": float(self.kraft.truncated),
            "kraft_tail": float(self.kraft.tail),
            "kraft_tail_valid": self.kraft.valid,
            "average_length": float(self.average_length.truncated),
            "average_length_tail": float(self.average_length.tail),
            "average_length_tail_valid": self.average_length.valid,
            "gcd": self.gcd,
            "max_message_ratio": float(self.max_message_ratio),
        }


def first_return_series(d_x: DigitSequence, power: int, z) -> Tuple[mpmath.mpf, mpmath.mpf, float]:
    """Closed-form sums over the code ``phi^power(C_x)`` at ``z``.

    With ``W[s, t] = sum z^{l(phi^power(a))}`` over transitions ``s -a-> t``
    of the admissibility automaton of ``d_x`` and the empty state ``0``,
    ``F(z) = W_00 + W_0R (I - W_RR)^{-1} W_R0``.  Returns ``F(z)``,
    ``z F'(z)`` and the spectral radius of ``W_RR``, which is the geometric
    decay ratio of the remainder after truncation (the sums converge when it
    is below 1).
    """
    from .automaton import lower_bound_support
    from .exchange import phi_apply

    A = lower_bound_support(d_x)
    n = A.n_states
    lens = {a: len(phi_apply((a,), power)) for a in A.alphabet}
    W = mpmath.zeros(n, n)
    D = mpmath.zeros(n, n)
    Wf = np.zeros((n, n))
    zf = float(z)
    for (s, a), t in A.transitions.items():
        w = z ** lens[a]
        W[s, t] += w
        D[s, t] += lens[a] * w
        Wf[s, t] += zf ** lens[a]
    if n == 1:
        return W[0, 0], D[0, 0], 0.0
    rho = float(max(abs(np.linalg.eigvals(Wf[1:, 1:]))))
    R = list(range(1, n))
    WRR = mpmath.matrix([[W[i, j] for j in R] for i in R])
    X = mpmath.inverse(mpmath.eye(n - 1) - WRR)
    W0R = mpmath.matrix([[W[0, j] for j in R]])
    WR0 = mpmath.matrix([W[i, 0] for i in R])
    D0R = mpmath.matrix([[D[0, j] for j in R]])
    DR0 = mpmath.matrix([D[i, 0] for i in R])
    DRR = mpmath.matrix([[D[i, j] for j in R] for i in R])
    a = W0R * X
    c = X * WR0
    F = W[0, 0] + (a * WR0)[0, 0]
    dF = D[0, 0] + (D0R * c)[0, 0] + (a * DRR * c)[0, 0] + (a * DR0)[0, 0]
    return F, dF, rho


def _closed_tail(terms: Sequence, total, ratio: float) -> TailSum:
    truncated = mpmath.fsum(terms)
    valid = ratio < 1
    return TailSum(truncated, total - truncated if valid else mpmath.inf, mpmath.mpf(ratio), valid)


def code_statistics(fam: Union[CodeFamily, Sequence[int]], base: Union[Base, float, mpmath.mpf],
                    message_len: int = 25, prec: int = 128,
                    generator: Optional[Tuple[DigitSequence, int]] = None) -> CodeStatistics:
    """Kraft sum, average length, gcd and message counts for a code given by its length counts.

    Parameters
    ----------
    generator : (d_x, power), optional
        When the code is ``phi^power`` of the first-return code of ``d_x``,
        the remainders are computed in closed form by
        :func:`first_return_series`; otherwise they are extrapolated
        geometrically from the last terms.
    """
    counts = list(fam.counts) if isinstance(fam, CodeFamily) else list(fam)
    with mpmath.workprec(prec):
        b = abs(base.value(prec)) if isinstance(base, Base) else abs(mpmath.mpf(base))
        kr = [mpmath.mpf(c) / b**n for n, c in enumerate(counts)]
        av = [n * mpmath.mpf(c) / b**n for n, c in enumerate(counts)]
        if generator is not None:
            F, dF, rho = first_return_series(generator[0], generator[1], 1 / b)
            kraft, avg = _closed_tail(kr, F, rho), _closed_tail(av, dF, rho)
        else:
            kraft, avg = _tail_sum(kr), _tail_sum(av)
        g = 0
        for n, c in enumerate(counts):
            if c:
                g = math.gcd(g, n)
        # B_n: messages (concatenations of code words) of length n
        B = [1] + [0] * message_len
        for n in range(1, message_len + 1):
            B[n] = sum(counts[k] * B[n - k] for k in range(1, min(n, len(counts) - 1) + 1))
        ratio = max((mpmath.mpf(B[n]) / b**n for n in range(message_len + 1)), default=mpmath.mpf(0))
    return CodeStatistics(kraft, avg, g, tuple(B), ratio)


def prefix_violations(words: Iterable[Word]) -> list:
    """Pairs ``(u, v)`` where ``u`` is a proper prefix of ``v``."""
    ws = sorted(set(map(tuple, words)), key=lambda w: (len(w), w))
    present = set(ws)
    out = []
    for v in ws:
        for k in range(1, len(v)):
            if v[:k] in present:
                out.append((v[:k], v))
    return out


def describe(fam: CodeFamily, limit: int = 20) -> str:
    shown = ", ".join(format_word(w) for w in fam.words[:limit])
    more = "" if len(fam.words) <= limit else f", ... ({len(fam.words)} words)"
    return f"{fam.name}: {{{shown}{more}}}"
