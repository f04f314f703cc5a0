"""The support code, the maximal-entropy measure of cylinders, intransitive
words and orbit simulation.

The support code ``P_beta`` is ``C_beta`` in the coded range, ``{1, 00}`` at
``-gamma_0`` and, for a base at level ``n``, the image ``phi^{n+1}(C_x)`` of
the code of ``x = Upsilon(beta)`` (which coincides with the family
``Delta_n``).  Two cylinder measures are provided:

* :func:`codeword_measure` -- ``|beta|^{-l(x)} / L`` for a code word ``x``
  where ``L = sum_y l(y) |beta|^{-l(y)}`` is the average length.  This is the
  probability that a code word starts at a given place and equals ``x``.
* :func:`cylinder_measure` -- the measure of the cylinder of an arbitrary
  word, from the Parry measure on the support automaton (or, as a
  cross-check, by summing over the code words that cover the word).
"""

from __future__ import annotations

import csv
import io
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import mpmath
import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .automaton import SupportAutomaton, build_support_automaton
from .codes import CodeFamily, CodeStatistics, code_statistics, enumerate_family, phi_image_counts
from .config import DEFAULTS
from .errors import InvalidBase, TruncationInsufficient
from .exchange import (Classification, classify_interval, phi_apply, phi_decode, t_threshold,
                       u_block)
from .numeration import Base, characteristic_sequence, endpoints
from .ordering import is_admissible_word
from .sequences import DigitSequence, Word, format_word

GOLDEN_CODE = ((1,), (0, 0))


# ---------------------------------------------------------------------------
# support code


@dataclass(frozen=True)
class SupportCode:
    """The code ``P_beta`` carrying the maximal-entropy measure.

    Attributes
    ----------
    family : CodeFamily
        Members up to ``family.words_len`` and length counts up to ``max_len``.
    stats : CodeStatistics
        Kraft sum and average length with tail estimates.
    classification : Classification
    source : str
        ``"C_beta"``, ``"golden"`` or ``"phi^k(C_x)"``.
    boundary : bool
        Set when the base is a level boundary ``-gamma_n``.
    """

    family: CodeFamily
    stats: CodeStatistics
    classification: Classification
    source: str
    boundary: bool = False

    @property
    def words(self) -> tuple:
        return self.family.words

    @property
    def average_length(self) -> mpmath.mpf:
        return self.stats.average_length.total

    @property
    def kraft(self) -> mpmath.mpf:
        return self.stats.kraft.total


def _golden_family(power: int, max_len: int) -> CodeFamily:
    words = [phi_apply(w, power) for w in GOLDEN_CODE]
    return CodeFamily.from_words("P_beta", words, max_len)


def support_code(base: Base, max_len: int = DEFAULTS.max_len, words_len: int = 14,
                 check_delta: bool = True) -> SupportCode:
    """Select ``P_beta`` for ``base`` and compute its statistics.

    Words are listed up to ``words_len``; counts up to ``max_len`` come from
    first-return counts of the relevant admissibility automaton.  At a level
    ``n`` the listed words are the image ``phi^{n+1}(C_x)``; ``check_delta``
    compares them with the constructive family ``Delta_n``.
    """
    base.require_negative()
    cls = classify_interval(base)
    d = characteristic_sequence(base)
    if cls.coded:
        if cls.boundary:
            fam = _golden_family(0, max_len)
            return SupportCode(fam, code_statistics(fam, base), cls, "golden", True)
        fam = enumerate_family(base, "C_beta", max_len, words_len=words_len)
        gen = (d, 0) if isinstance(d, DigitSequence) else None
        return SupportCode(fam, code_statistics(fam, base, generator=gen), cls, "C_beta")
    power = cls.level + 1
    d_x = phi_decode(d, power)
    x_cls = classify_interval(d_x)
    if x_cls.boundary:
        # x = -gamma_0: the code of x is {1, 00}.
        fam = _golden_family(power, max_len)
        return SupportCode(fam, code_statistics(fam, base), cls, f"phi^{power}({{1,00}})", True)
    wl = min(words_len, max_len)
    # Letters of x map to blocks of length >= 1, so code words of x up to wl suffice.
    inner = enumerate_family(d_x, "C_beta", wl, words_len=wl)
    words = [w for w in (phi_apply(v, power) for v in inner.words) if len(w) <= wl]
    counts = phi_image_counts(d_x, power, max_len)
    listed = CodeFamily.from_words("P_beta", words, wl)
    if tuple(counts[: wl + 1]) != listed.counts:
        raise AssertionError("image code word list disagrees with its length counts")
    if check_delta:
        delta = enumerate_family(base, "Delta_i", wl, index=cls.level)
        if set(delta.words) != set(listed.words):
            raise AssertionError(f"Delta_{cls.level} differs from the image code up to length {wl}")
    fam = CodeFamily("P_beta", max_len, listed.words, tuple(counts), cls.level, wl, "automaton")
    stats = code_statistics(fam, base, generator=(d_x, power))
    return SupportCode(fam, stats, cls, f"phi^{power}(C_x)", cls.boundary)


# ---------------------------------------------------------------------------
# measures


@dataclass(frozen=True)
class MeasureValue:
    """A measure value with an error bar and flags."""

    value: float
    error: float = 0.0
    in_support: bool = True
    method: str = ""

    def as_dict(self) -> dict:
        return {"value": self.value, "error": self.error, "in_support": self.in_support, "method": self.method}


def codeword_measure(word: Word, support: SupportCode, base: Base, prec: int = 128) -> MeasureValue:
    """``|beta|^{-l(x)} / L`` for a code word ``x`` of ``P_beta``."""
    word = tuple(word)
    if len(word) > support.family.words_len:
        raise TruncationInsufficient("word longer than the listed code words")
    if word not in support.family:
        return MeasureValue(0.0, 0.0, False, "codeword")
    with mpmath.workprec(prec):
        b = abs(base.value(prec))
        L = support.stats.average_length.total
        val = 1 / (b ** len(word) * L)
        err = val * support.stats.average_length.tail / L if support.stats.average_length.tail else 0
    return MeasureValue(float(val), float(err), True, "codeword")


@dataclass
class ParryMeasure:
    """Maximal-entropy (Parry) measure on the dominant component of a support automaton.

    ``mu([w]) = sum_q left_q * right_{q.w} / lam^{|w|}`` with ``left . right = 1``.
    """

    automaton: SupportAutomaton
    lam: float
    left: np.ndarray
    right: np.ndarray
    component: np.ndarray

    def __call__(self, word: Sequence[int]) -> float:
        A = self.automaton
        total = 0.0
        for q in np.nonzero(self.component)[0]:
            s = int(q)
            ok = True
            for a in word:
                s = A.transitions.get((s, a))
                if s is None or not self.component[s]:
                    ok = False
                    break
            if ok:
                total += self.left[q] * self.right[s]
        return total / self.lam ** len(word)


def parry_measure(A: SupportAutomaton) -> ParryMeasure:
    """Left and right Perron vectors of the strongly connected component of
    largest spectral radius."""
    n = A.n_states
    rows, cols = [], []
    M = np.zeros((n, n))
    for (s, a), t in A.transitions.items():
        M[s, t] += 1
        rows.append(s)
        cols.append(t)
    graph = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    ncomp, labels = connected_components(graph, directed=True, connection="strong")
    best, best_rad = None, -1.0
    for c in range(ncomp):
        idx = np.nonzero(labels == c)[0]
        sub = M[np.ix_(idx, idx)]
        if not sub.any():
            continue
        rad = max(abs(np.linalg.eigvals(sub)))
        if rad > best_rad + 1e-9:
            best, best_rad = c, rad
    idx = np.nonzero(labels == best)[0]
    sub = M[np.ix_(idx, idx)]
    w, V = np.linalg.eig(sub)
    k = int(np.argmax(w.real))
    lam = float(w[k].real)
    r = np.abs(V[:, k].real)
    wl, U = np.linalg.eig(sub.T)
    l = np.abs(U[:, int(np.argmax(wl.real))].real)
    l = l / (l @ r)
    left, right = np.zeros(n), np.zeros(n)
    left[idx], right[idx] = l, r
    comp = np.zeros(n, dtype=bool)
    comp[idx] = True
    return ParryMeasure(A, lam, left, right, comp)


def _completion_measure(word: Word, support: SupportCode, base: Base) -> MeasureValue:
    """Sum ``|beta|^{-l(c_1 ... c_j)} / L`` over code-word chains covering ``word``
    from an offset inside ``c_1``."""
    words = support.family.words
    b = float(abs(base.value(64)))
    L = float(support.average_length)
    total = 0.0

    def cover(rest: Word, weight: float):
        nonlocal total
        for c in words:
            k = min(len(c), len(rest))
            if c[:k] == rest[:k]:
                if len(rest) <= len(c):
                    total += weight * b ** (-len(c))
                else:
                    cover(rest[len(c):], weight * b ** (-len(c)))

    for c in words:
        for s in range(len(c)):
            seg = c[s:]
            k = min(len(seg), len(word))
            if seg[:k] != word[:k]:
                continue
            if len(word) <= len(seg):
                total += b ** (-len(c))
            else:
                cover(word[len(seg):], b ** (-len(c)))
    # Chains through unlisted code words: bounded by the length-weighted Kraft mass beyond the list.
    wl = support.family.words_len
    beyond = support.average_length - mpmath.fsum(n * mpmath.mpf(c) / abs(base.value(64)) ** n
                                                  for n, c in enumerate(support.family.counts[: wl + 1]))
    err = 2 * max(0.0, float(beyond)) / L
    return MeasureValue(total / L, err, bool(total > 0), "completion")


def cylinder_measure(word: Sequence[int], support: SupportCode, base: Base, offset: int = 0,
                     method: str = "parry", automaton: Optional[SupportAutomaton] = None,
                     parry: Optional[ParryMeasure] = None) -> MeasureValue:
    """Maximal-entropy measure of the cylinder ``[word]`` at position ``offset``.

    The measure is shift invariant, so ``offset`` does not change the value.
    ``method`` is ``"parry"`` (default) or ``"completion"``.
    """
    del offset
    word = tuple(word)
    if method == "completion":
        return _completion_measure(word, support, base)
    if method != "parry":
        raise ValueError("method must be 'parry' or 'completion'")
    if parry is None:
        parry = parry_measure(automaton or build_support_automaton(base))
    val = parry(word)
    return MeasureValue(float(val), 1e-12 * max(1.0, float(val)), bool(val > 0), "parry")


# ---------------------------------------------------------------------------
# intransitive words


@dataclass(frozen=True)
class Pattern:
    family: int
    m: int
    shift: int
    word: Word

    def __str__(self):
        return f"family {self.family} (m={self.m}, i={self.shift}): {format_word(self.word)}"


def intransitive_patterns(level: int, k1: int, max_len: int = 64) -> List[Pattern]:
    """Forbidden patterns for a base at ``level`` with ``k1`` the first digit of ``d(x)``.

    With ``u_{-1} = 0``:

    1. ``sigma^i(u_{m-2}) u_{m-1} u_m`` for ``1 <= m <= n``;
    2. ``sigma^i(u_{m-1}) u_{m-1}^3`` for ``0 <= m <= n``;
    3. ``sigma^i(u_{m-1}) u_{m-1} u_m u_m ... u_{n-2} u_{n-2} u_{n-1}^{2 k1 + 1} u_n`` for ``0 <= m <= n``.
    """
    n = level
    out: List[Pattern] = []
    for m in range(0, n + 1):
        if m >= 1:
            head = u_block(m - 2)
            for i in range(len(head)):
                out.append(Pattern(1, m, i, head[i:] + u_block(m - 1) + u_block(m)))
        head = u_block(m - 1)
        for i in range(len(head)):
            out.append(Pattern(2, m, i, head[i:] + u_block(m - 1) * 3))
        mid: Word = ()
        for j in range(m, n - 1):
            mid += u_block(j) * 2
        for i in range(len(head)):
            out.append(Pattern(3, m, i, head[i:] + u_block(m - 1) + mid
                               + u_block(n - 1) * (2 * k1 + 1) + u_block(n)))
    return [p for p in out if len(p.word) <= max_len]


def _contains(word: Word, pat: Word) -> bool:
    n, k = len(word), len(pat)
    return any(word[i:i + k] == pat for i in range(n - k + 1))


@dataclass(frozen=True)
class IntransitivityResult:
    """``intransitive`` is decided by factor membership in the support automaton;
    ``pattern`` is the first listed pattern contained in the word, if any."""

    intransitive: bool
    pattern: Optional[Pattern] = None
    admissible: bool = True

    @property
    def consistent(self) -> bool:
        """A matched pattern must coincide with non-membership."""
        return self.pattern is None or self.intransitive

    def __str__(self):
        if not self.admissible:
            return "inadmissible"
        if not self.intransitive:
            return "transitive"
        return "intransitive" + (f" ({self.pattern})" if self.pattern else " (no listed pattern)")


def is_intransitive(word: Sequence[int], base: Base, automaton: Optional[SupportAutomaton] = None
                    ) -> IntransitivityResult:
    """Whether an admissible word lies outside the support.

    In the coded range every admissible word is transitive.
    """
    word = tuple(word)
    d = characteristic_sequence(base)
    if not is_admissible_word(word, d):
        return IntransitivityResult(False, None, False)
    cls = classify_interval(base)
    if cls.coded:
        return IntransitivityResult(False)
    d_x = phi_decode(d, cls.level + 1)
    k1 = d_x[1]
    A = automaton or build_support_automaton(base)
    pattern = next((p for p in intransitive_patterns(cls.level, k1, len(word)) if _contains(word, p.word)), None)
    return IntransitivityResult(not A.accepts(word), pattern)


# ---------------------------------------------------------------------------
# simulation


@dataclass
class SimulationReport:
    """Empirical cylinder frequencies along one orbit.

    ``stderr`` is the binomial standard error; ``batch_stderr`` the
    batch-means estimate, which also accounts for correlations along the
    orbit.
    """

    base: str
    steps: int
    seed: int
    generator: str
    words: List[Word] = field(default_factory=list)
    counts: List[int] = field(default_factory=list)
    frequency: List[float] = field(default_factory=list)
    stderr: List[float] = field(default_factory=list)
    batch_stderr: List[float] = field(default_factory=list)
    support_fraction: Optional[float] = None
    reseeds: int = 0

    def to_csv(self, analytic: Optional[Sequence[float]] = None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["word", "analytic", "empirical", "stderr", "steps", "seed"])
        for i, word in enumerate(self.words):
            a = "" if analytic is None else f"{analytic[i]:.10g}"
            w.writerow([",".join(map(str, word)), a, f"{self.frequency[i]:.10g}",
                        f"{self.stderr[i]:.3g}", self.steps, self.seed])
        return buf.getvalue()


def _orbit_digits(beta: float, l: float, x: float, steps: int) -> np.ndarray:
    out = np.empty(steps, dtype=np.int8)
    floor = math.floor
    for k in range(steps):
        y = beta * x
        a = floor(y - l)
        out[k] = a
        x = y - a
    return out


def _float_orbit(beta: float, l: float, x: float, steps: int,
                 rng: Optional[random.Random] = None) -> Tuple[np.ndarray, np.ndarray, int]:
    """Float orbit of ``x``; a point pushed out of ``[l, l+1)`` by rounding is
    replaced by a fresh uniform point (counted in the third return value)."""
    digits = np.empty(steps, dtype=np.int8)
    points = np.empty(steps)
    floor = math.floor
    r = l + 1.0
    reseeds = 0
    for k in range(steps):
        if not l <= x < r:
            x = l + rng.random() if rng is not None else min(max(x, l), math.nextafter(r, l))
            reseeds += 1
        points[k] = x
        y = beta * x
        a = floor(y - l)
        digits[k] = a
        x = y - a
    return digits, points, reseeds


def _integer_magnitude(base: Base) -> Optional[int]:
    """``q`` when ``base`` is the integer ``-q``, else ``None``."""
    if base.kind == "algebraic" and len(base.poly) == 2 and base.poly[1] == 1:
        return int(base.poly[0])
    return None


def _integer_orbit_digits(q: int, steps: int, rng: random.Random, width: int = 64) -> np.ndarray:
    """Digits of ``T_{-q}`` along the orbit of a uniform start point, in exact integer arithmetic.

    A point is ``X / ((1+q) q^width)`` plus unknown lower digits.  Multiplying
    by ``-q`` consumes one base-``q`` digit of precision, so a fresh uniform
    digit is drawn at the bottom after every step and the window never
    shrinks.  Floats cannot be used here: every float is a dyadic rational and
    its orbit under ``-2`` reaches a fixed point within about 53 steps.
    """
    scale = q**width
    den = (1 + q) * scale
    top = q * scale  # equals -l * den
    X = -top + (1 + q) * rng.randrange(scale)
    out = np.empty(steps, dtype=np.int8)
    for k in range(steps):
        a = (top - q * X) // den
        out[k] = a
        X = -q * X - a * den - rng.randrange(q)
    return out


def word_occurrences(digits: np.ndarray, word: Sequence[int]) -> np.ndarray:
    """Boolean array marking the positions where ``word`` starts."""
    k = len(word)
    n = len(digits) - k + 1
    hit = np.ones(n, dtype=bool)
    for j, a in enumerate(word):
        hit &= digits[j:j + n] == a
    return hit


def support_intervals(base: Base, level: int, K: Optional[int] = None) -> List[Tuple[float, float]]:
    """``T^k([l, t_n])`` for ``0 <= k <= K`` as a list of float intervals (``K = l(u_n)``)."""
    b = float(base)
    l = float(endpoints(base)[0])
    t = float(t_threshold(base, level))
    K = len(u_block(level)) if K is None else K
    pieces = [(l, t)]
    out = list(pieces)
    for _ in range(K):
        nxt = []
        for lo, hi in pieces:
            # split at points where beta*x - l is an integer
            ya, yb = sorted((b * lo - l, b * hi - l))
            cuts = [ya] + [float(c) for c in range(math.floor(ya) + 1, math.ceil(yb))] + [yb]
            for c0, c1 in zip(cuts, cuts[1:]):
                a = math.floor(c0)
                nxt.append((c0 + l - a, c1 + l - a))
        pieces = nxt
        out.extend(pieces)
    return out


def orbit_simulate(base: Base, steps: int, seed: int, queries: Iterable[Sequence[int]] = (),
                   batches: int = 100, burn_in: int = 1000) -> SimulationReport:
    """Frequencies of the queried cylinders along a float orbit from a seeded start.

    The start point is uniform in ``[l, r)`` (Python's Mersenne Twister);
    ``burn_in`` initial steps are discarded.  Points that rounding pushes
    outside ``[l, r)`` are replaced by fresh uniform points (``reseeds``).  For bases at a level ``n``
    the report includes the fraction of orbit points inside the union of the
    images ``T^k([l, t_n])``, ``k <= l(u_n)``.
    """
    if steps < 1:
        raise ValueError("steps must be positive")
    base.require_negative()
    rng = random.Random(seed)
    report = SimulationReport(base.descriptor(), steps, seed, "random.Random (MT19937)")
    points = None
    q = _integer_magnitude(base)
    if q is not None:
        digits = _integer_orbit_digits(q, burn_in + steps, rng)[burn_in:]
        report.generator += ", exact integer orbit"
    else:
        l, r = (float(v) for v in endpoints(base))
        b = float(base)
        x = l + (r - l) * rng.random()
        _, pts, _ = _float_orbit(b, l, x, burn_in + 1, rng)
        digits, points, report.reseeds = _float_orbit(b, l, float(pts[-1]), steps, rng)
    for w in queries:
        w = tuple(w)
        hit = word_occurrences(digits, w)
        n = len(hit)
        c = int(hit.sum())
        p = c / n
        se = math.sqrt(max(p * (1 - p), 1.0 / n) / n)
        chunks = np.array_split(hit, batches)
        means = np.array([ch.mean() for ch in chunks])
        bse = float(means.std(ddof=1) / math.sqrt(batches))
        report.words.append(w)
        report.counts.append(c)
        report.frequency.append(p)
        report.stderr.append(se)
        report.batch_stderr.append(bse)
    cls = classify_interval(base)
    if not cls.coded and points is not None:
        iv = support_intervals(base, cls.level)
        inside = np.zeros(len(points), dtype=bool)
        for lo, hi in iv:
            inside |= (points >= lo - 1e-12) & (points <= hi + 1e-12)
        report.support_fraction = float(inside.mean())
    return report
