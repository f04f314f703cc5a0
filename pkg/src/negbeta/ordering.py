"""The alternating order, admissibility and word counts.

For a sign ``delta`` the order is: ``x < y`` iff at the first index ``k``
where they differ, ``delta**k * (x_k - y_k) < 0``.  For ``delta = +1`` this is
the lexicographic order.

A finite word that is a proper prefix of the other argument is not strictly
comparable.  :func:`alt_compare` reports such pairs as ``equal`` with the
``prefix`` flag set, or raises :class:`IncomparablePrefix` when asked for a
strict answer.  Admissibility tests treat them as non-violations, so a word
is admissible exactly when it can still be extended.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional, Union

from .errors import BudgetExceeded, IncomparablePrefix
from .numeration import Base, characteristic_sequence, upper_sequence
from .sequences import DigitSequence, Word, comparison_length, digit, known_length

SeqLike = Union[Word, DigitSequence]

LESS, EQUAL, GREATER = "less", "equal", "greater"


@dataclass(frozen=True)
class OrderResult:
    """Outcome of an alternating-order comparison.

    Attributes
    ----------
    relation : {"less", "equal", "greater"}
    witness_index : int
        1-indexed position of the first difference, 0 when none was found.
    prefix : bool
        True when no difference was found because a finite argument ran out.
    """

    relation: str
    witness_index: int = 0
    prefix: bool = False

    def __bool__(self):
        raise TypeError("use .relation to inspect an OrderResult")

    @property
    def sign(self) -> int:
        return {LESS: -1, EQUAL: 0, GREATER: 1}[self.relation]


def alt_compare(x: SeqLike, y: SeqLike, delta: int = -1, strict: bool = False) -> OrderResult:
    """Compare ``x`` and ``y`` in the alternating order of sign ``delta``.

    Examples
    --------
    >>> alt_compare((1, 0, 0, 0, 0), (1, 0, 0, 1, 1)).relation
    'less'
    """
    if delta not in (-1, 1):
        raise ValueError("delta must be +1 or -1")
    n = comparison_length(x, y)
    k = 1
    limit = n if n != float("inf") else None
    while limit is None or k <= limit:
        a, b = digit(x, k), digit(y, k)
        if a != b:
            s = (delta ** k) * (a - b)
            return OrderResult(LESS if s < 0 else GREATER, k)
        k += 1
    lx, ly = known_length(x), known_length(y)
    if isinstance(x, DigitSequence) and isinstance(y, DigitSequence):
        return OrderResult(EQUAL, 0)
    if lx == ly:
        return OrderResult(EQUAL, 0)
    if strict:
        raise IncomparablePrefix("one argument is a proper prefix of the other")
    return OrderResult(EQUAL, 0, prefix=True)


def precedes(x: SeqLike, y: SeqLike, delta: int = -1) -> bool:
    """``x <= y`` with proper prefixes counted as not violating."""
    return alt_compare(x, y, delta).relation != GREATER


@dataclass(frozen=True)
class AdmissibilityReport:
    """Result of :func:`is_admissible`.

    ``violating_suffix`` is the 0-based offset of the first offending suffix
    (``-1`` when admissible) and ``violated_bound`` is ``"lower"``,
    ``"upper"`` or ``"none"``.
    """

    admissible: bool
    violating_suffix: int = -1
    violated_bound: str = "none"

    def __bool__(self):
        return self.admissible


def bounds(base: Union[Base, DigitSequence, Word], max_len: int = 64):
    """Lower and upper bound sequences ``(d, r)``.

    A bare sequence is taken as the corrected lower bound ``d`` for a
    negative base, with upper bound ``0 d*`` implied by it (``None`` here).
    """
    if isinstance(base, Base):
        return characteristic_sequence(base, "corrected", max_len), upper_sequence(base, max_len)
    return base, None


def _suffix(x: SeqLike, m: int) -> SeqLike:
    if isinstance(x, DigitSequence):
        return x.shift(m)
    return tuple(x[m:])


def is_admissible(x: SeqLike, base: Union[Base, DigitSequence, Word], delta: int = -1,
                  check_upper: bool = True) -> AdmissibilityReport:
    """Check ``d <= sigma^m(x) <= r`` for every suffix of ``x``.

    Parameters
    ----------
    x : tuple or DigitSequence
        Word or eventually periodic sequence.
    base : Base or DigitSequence
        The base, or directly its corrected characteristic sequence.
    """
    if isinstance(base, Base):
        delta = base.delta
    d, r = bounds(base, max(64, 2 * _len_hint(x)))
    if isinstance(x, DigitSequence):
        offsets = range(x.state_count)
    else:
        offsets = range(len(x))
    for m in offsets:
        s = _suffix(x, m)
        if alt_compare(s, d, delta).relation == LESS:
            return AdmissibilityReport(False, m, "lower")
        if check_upper and r is not None and alt_compare(s, r, delta).relation == GREATER:
            return AdmissibilityReport(False, m, "upper")
    return AdmissibilityReport(True)


def _len_hint(x: SeqLike) -> int:
    if isinstance(x, DigitSequence):
        return x.state_count
    return len(x)


def is_admissible_word(w: Word, d: SeqLike, delta: int = -1) -> bool:
    """Fast lower-bound check for words against a known ``d`` (no upper bound)."""
    n = len(w)
    for m in range(n):
        for k in range(1, n - m + 1):
            a, b = w[m + k - 1], digit(d, k)
            if a != b:
                if (delta ** k) * (a - b) < 0:
                    return False
                break
    return True


def count_words(base: Union[Base, DigitSequence], n_max: int) -> list:
    """``[H_0, ..., H_{n_max}]`` from the recurrence
    ``H_n = sum_{k=1}^n (-1)^k (d_{k-1} - d_k) H_{n-k} + 1`` with ``d_0 = 0``.
    """
    d = characteristic_sequence(base, "corrected", n_max + 1) if isinstance(base, Base) else base
    dd = [0] + [digit(d, k) for k in range(1, n_max + 1)]
    H = [1]
    for n in range(1, n_max + 1):
        H.append(sum((-1) ** k * (dd[k - 1] - dd[k]) * H[n - k] for k in range(1, n + 1)) + 1)
    return H


def brute_force_language(base: Union[Base, DigitSequence], n_max: int, cap: int = 10**8) -> dict:
    """All admissible words of length ``0..n_max`` by filtering every word over
    ``{0, ..., d_1}``.

    Returns a dict ``{n: sorted list of words}``.
    """
    if n_max > 16:
        raise BudgetExceeded("brute force is limited to n_max <= 16")
    d = characteristic_sequence(base, "corrected", n_max + 1) if isinstance(base, Base) else base
    delta = base.delta if isinstance(base, Base) else -1
    alphabet = range(digit(d, 1) + 1)
    total = sum(len(alphabet) ** n for n in range(n_max + 1))
    if total > cap:
        raise BudgetExceeded(f"{total} candidate words exceed the cap {cap}")
    out = {}
    for n in range(n_max + 1):
        out[n] = [w for w in product(alphabet, repeat=n) if is_admissible_word(w, d, delta)]
    return out
