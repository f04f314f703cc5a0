"""Finite words and eventually periodic digit sequences.

Words are plain tuples of non-negative integers.  Infinite sequences are
stored as ``preperiod + period^inf`` in canonical form (primitive period,
shortest preperiod).  Positions are 1-indexed throughout, matching the
usual convention ``x = x_1 x_2 x_3 ...``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .errors import TruncationInsufficient

Word = tuple


def as_word(digits: Iterable[int]) -> Word:
    """Return ``digits`` as a word (tuple of ints), validating non-negativity."""
    w = tuple(int(a) for a in digits)
    if any(a < 0 for a in w):
        raise ValueError(f"digits must be non-negative: {w}")
    return w


def parse_word(text: str) -> Word:
    """Parse the comma-separated text format, e.g. ``"2,0,1"``.

    An empty string is the empty word.
    """
    text = text.strip()
    if not text:
        return ()
    try:
        return as_word(int(tok) for tok in text.split(","))
    except ValueError as exc:
        raise ValueError(f"malformed word {text!r}: expected comma-separated digits") from exc


def format_word(word: Sequence[int], sep: str = "") -> str:
    """Render a word compactly.

    With the default empty separator, multi-digit letters are bracketed so
    the output stays unambiguous (``2[10]1``).
    """
    if sep:
        return sep.join(str(a) for a in word)
    return "".join(str(a) if a < 10 else f"[{a}]" for a in word)


def _primitive_root(period: Word) -> Word:
    n = len(period)
    for p in range(1, n + 1):
        if n % p == 0 and period[:p] * (n // p) == period:
            return period[:p]
    return period


@dataclass(frozen=True)
class DigitSequence:
    """The infinite sequence ``preperiod . period period period ...``.

    Instances are canonicalised on construction so that equal sequences have
    equal fields.
    """

    preperiod: Word
    period: Word

    def __post_init__(self):
        pre = as_word(self.preperiod)
        per = as_word(self.period)
        if not per:
            raise ValueError("period must be non-empty")
        per = _primitive_root(per)
        # Fold trailing preperiod digits into the period while they match.
        while pre and pre[-1] == per[-1]:
            pre = pre[:-1]
            per = (per[-1],) + per[:-1]
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    def __getitem__(self, i: int) -> int:
        """Digit at 1-indexed position ``i``."""
        if i < 1:
            raise IndexError(f"positions start at 1, got {i}")
        k = i - 1
        if k < len(self.preperiod):
            return self.preperiod[k]
        return self.period[(k - len(self.preperiod)) % len(self.period)]

    def prefix(self, n: int) -> Word:
        return tuple(self[i] for i in range(1, n + 1))

    def canon(self, k: int) -> int:
        """Smallest ``j`` with ``sigma^j(self) == sigma^k(self)`` among the
        representatives ``0 .. len(pre)+len(per)-1``."""
        p = len(self.preperiod)
        if k < p:
            return k
        return p + (k - p) % len(self.period)

    def shift(self, k: int) -> "DigitSequence":
        """The shifted sequence ``sigma^k``."""
        p = len(self.preperiod)
        if k <= p:
            return DigitSequence(self.preperiod[k:], self.period)
        r = (k - p) % len(self.period)
        return DigitSequence((), self.period[r:] + self.period[:r])

    @property
    def length(self):
        return None

    @property
    def is_purely_periodic(self) -> bool:
        return not self.preperiod

    @property
    def state_count(self) -> int:
        """Number of distinct shifts of the sequence."""
        return len(self.preperiod) + len(self.period)

    def max_digit(self) -> int:
        return max(self.preperiod + self.period)

    def to_json(self) -> str:
        return json.dumps({"preperiod": list(self.preperiod), "period": list(self.period)})

    @classmethod
    def from_json(cls, text: str) -> "DigitSequence":
        data = json.loads(text)
        return cls(tuple(data["preperiod"]), tuple(data["period"]))

    def __str__(self) -> str:
        return f"{format_word(self.preperiod)}({format_word(self.period)})^inf"


Sequence_ = Union[Word, DigitSequence]


def digit(seq: Sequence_, i: int) -> int:
    """Digit at 1-indexed position ``i`` of a word or infinite sequence.

    Raises :class:`TruncationInsufficient` when a finite word is too short.
    """
    if isinstance(seq, DigitSequence):
        return seq[i]
    if i > len(seq):
        raise TruncationInsufficient(f"position {i} beyond known prefix of length {len(seq)}")
    return seq[i - 1]


def prefix(seq: Sequence_, n: int) -> Word:
    if isinstance(seq, DigitSequence):
        return seq.prefix(n)
    if n > len(seq):
        raise TruncationInsufficient(f"prefix of length {n} requested from {len(seq)} known digits")
    return tuple(seq[:n])


def known_length(seq: Sequence_) -> float:
    """Number of known digits: ``inf`` for infinite sequences."""
    return math.inf if isinstance(seq, DigitSequence) else len(seq)


def canon(seq: Sequence_, k: int) -> int:
    """Shift representative; identity for finite prefixes."""
    if isinstance(seq, DigitSequence):
        return seq.canon(k)
    return k


def comparison_length(x: Sequence_, y: Sequence_) -> float:
    """Number of leading digits after which two sequences are known to agree forever.

    For two infinite eventually periodic sequences, equality of this many
    leading digits implies equality.  For finite inputs it is the shorter
    length.
    """
    if isinstance(x, DigitSequence) and isinstance(y, DigitSequence):
        lx, ly = len(x.period), len(y.period)
        return max(len(x.preperiod), len(y.preperiod)) + lx * ly // math.gcd(lx, ly)
    return min(known_length(x), known_length(y))
