"""Finite automata for admissible words and for the support language.

The lower-bound automaton reads a word left to right and tracks every suffix
that is still tied with a prefix of ``d``.  A state is the set of pairs
``(k, parity)`` where ``k`` is the canonical shift index of ``d`` reached by a
tied suffix and ``parity`` is the parity of the true matched length.  On a
digit ``a`` each pair either keeps the tie, is released (the suffix is now
strictly above ``d``) or causes a rejection (strictly below ``d``).  For an
eventually periodic ``d`` the state set is finite.

The support automaton accepts the factors of the support language: all
admissible words in the coded range, and the factors of
``phi^{n+1}(L_x)`` for a base at level ``n`` with ``x = Upsilon(beta)``.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional, Tuple, Union

from .errors import BudgetExceeded, NotEventuallyPeriodic
from .sequences import DigitSequence, Word, canon, digit

State = frozenset
EMPTY: State = frozenset()


class LowerBoundAutomaton:
    """Acceptor of the words whose every suffix is ``>= d`` (prefix convention).

    Parameters
    ----------
    d : DigitSequence or tuple
        Corrected characteristic sequence.  A finite prefix works for words
        whose ties with ``d`` stay within its length.
    delta : int
        Sign of the base.
    """

    def __init__(self, d: Union[DigitSequence, Word], delta: int = -1):
        self.d = d
        self.delta = delta
        self.d1 = digit(d, 1)
        self.alphabet = tuple(range(self.d1 + 1))
        self._cache: Dict[Tuple[State, int], Optional[State]] = {}

    def step(self, state: State, a: int) -> Optional[State]:
        key = (state, a)
        if key in self._cache:
            return self._cache[key]
        d, delta = self.d, self.delta
        new = set()
        result: Optional[State] = None
        for k, par in state:
            e = digit(d, k + 1)
            if a == e:
                new.add((canon(d, k + 1), 1 - par))
            elif (delta ** (par + 1)) * (a - e) < 0:
                break
        else:
            if a == self.d1:
                new.add((canon(d, 1), 1))
            if a <= self.d1:
                result = frozenset(new)
        self._cache[key] = result
        return result

    def run(self, word: Iterable[int], state: State = EMPTY) -> Optional[State]:
        for a in word:
            state = self.step(state, a)
            if state is None:
                return None
        return state

    def accepts(self, word: Iterable[int]) -> bool:
        return self.run(word) is not None

    def count(self, n_max: int, start: State = EMPTY) -> list:
        """Number of accepted words of each length ``0..n_max`` read from ``start``."""
        cur = {start: 1}
        out = [1]
        for _ in range(n_max):
            nxt: Dict[State, int] = {}
            for s, c in cur.items():
                for a in self.alphabet:
                    t = self.step(s, a)
                    if t is not None:
                        nxt[t] = nxt.get(t, 0) + c
            cur = nxt
            out.append(sum(cur.values()))
        return out

    def first_return_counts(self, n_max: int, start: State = EMPTY) -> list:
        """``c_n``: paths of length ``n`` from ``start`` back to ``start`` that
        avoid ``start`` in between (index 0 is 0)."""
        cur = {start: 1}
        out = [0]
        for _ in range(n_max):
            nxt: Dict[State, int] = {}
            ret = 0
            for s, c in cur.items():
                for a in self.alphabet:
                    t = self.step(s, a)
                    if t is None:
                        continue
                    if t == start:
                        ret += c
                    else:
                        nxt[t] = nxt.get(t, 0) + c
            cur = nxt
            out.append(ret)
        return out

    def first_return_words(self, max_len: int, start: State = EMPTY, cap: int = 10**6) -> list:
        """The first-return words themselves, sorted by length then lexicographically."""
        out = []

        def rec(s, w):
            for a in self.alphabet:
                t = self.step(s, a)
                if t is None:
                    continue
                if t == start:
                    out.append(w + (a,))
                    if len(out) > cap:
                        raise BudgetExceeded("first-return enumeration exceeded its cap")
                elif len(w) + 1 < max_len:
                    rec(t, w + (a,))

        rec(start, ())
        return sorted(out, key=lambda w: (len(w), w))

    def reachable(self, state_cap: int = 10**5) -> list:
        """States reachable from the empty state, in breadth-first order."""
        if not isinstance(self.d, DigitSequence):
            raise NotEventuallyPeriodic("the reachable state set is finite only for eventually periodic d")
        seen = {EMPTY: 0}
        order = [EMPTY]
        queue = deque([EMPTY])
        while queue:
            s = queue.popleft()
            for a in self.alphabet:
                t = self.step(s, a)
                if t is not None and t not in seen:
                    seen[t] = len(order)
                    order.append(t)
                    queue.append(t)
                    if len(order) > state_cap:
                        raise BudgetExceeded("state cap exceeded")
        return order


@dataclass(frozen=True)
class SupportAutomaton:
    """Deterministic factor acceptor; every state is accepting.

    Attributes
    ----------
    n_states : int
    transitions : dict
        ``(state, digit) -> state``; missing pairs reject.
    initial : int
    alphabet : tuple of int
    description : str
        Which language the automaton accepts (coded range or level ``n``).
    """

    n_states: int
    transitions: Dict[Tuple[int, int], int]
    initial: int
    alphabet: tuple
    description: str = ""
    level: Optional[int] = None
    labels: tuple = field(default=(), compare=False, repr=False)

    def run(self, word: Iterable[int]) -> Optional[int]:
        s = self.initial
        for a in word:
            s = self.transitions.get((s, a))
            if s is None:
                return None
        return s

    def accepts(self, word: Iterable[int]) -> bool:
        return self.run(word) is not None

    def count(self, n_max: int) -> list:
        cur = {self.initial: 1}
        out = [1]
        for _ in range(n_max):
            nxt: Dict[int, int] = {}
            for s, c in cur.items():
                for a in self.alphabet:
                    t = self.transitions.get((s, a))
                    if t is not None:
                        nxt[t] = nxt.get(t, 0) + c
            cur = nxt
            out.append(sum(cur.values()))
        return out

    def words(self, n: int) -> list:
        """All accepted words of length ``n`` in lexicographic order."""
        out = []

        def rec(s, w):
            if len(w) == n:
                out.append(w)
                return
            for a in self.alphabet:
                t = self.transitions.get((s, a))
                if t is not None:
                    rec(t, w + (a,))

        rec(self.initial, ())
        return out

    def to_dot(self) -> str:
        lines = ["digraph support {", "  rankdir=LR;", f'  start [shape=point];', f"  start -> q{self.initial};"]
        for s in range(self.n_states):
            lines.append(f"  q{s} [shape=circle];")
        for (s, a), t in sorted(self.transitions.items()):
            lines.append(f'  q{s} -> q{t} [label="{a}"];')
        lines.append("}")
        return "\n".join(lines)

    def to_json(self) -> str:
        return json.dumps({
            "n_states": self.n_states,
            "initial": self.initial,
            "alphabet": list(self.alphabet),
            "description": self.description,
            "level": self.level,
            "transitions": [[s, a, t] for (s, a), t in sorted(self.transitions.items())],
        })


def _number(initial, step_fn, alphabet, state_cap: int):
    index = {initial: 0}
    order = [initial]
    trans: Dict[Tuple[int, int], int] = {}
    queue = deque([initial])
    while queue:
        s = queue.popleft()
        i = index[s]
        for a in alphabet:
            t = step_fn(s, a)
            if t is None:
                continue
            if t not in index:
                if len(order) >= state_cap:
                    raise BudgetExceeded(f"support automaton exceeds {state_cap} states")
                index[t] = len(order)
                order.append(t)
                queue.append(t)
            trans[(i, a)] = index[t]
    return len(order), trans, tuple(order)


def lower_bound_support(d: DigitSequence, delta: int = -1, state_cap: int = 10**5) -> SupportAutomaton:
    """Deterministic acceptor of all admissible words for the sequence ``d``."""
    if not isinstance(d, DigitSequence):
        raise NotEventuallyPeriodic("a finite automaton needs an eventually periodic characteristic sequence")
    A = LowerBoundAutomaton(d, delta)
    n, trans, labels = _number(EMPTY, A.step, A.alphabet, state_cap)
    return SupportAutomaton(n, trans, 0, A.alphabet, f"admissible words for d = {d}", None, labels)


def _phi_power_image(a: int, power: int) -> Word:
    w: Word = (a,)
    for _ in range(power):
        w = tuple(c for b in w for c in (1,) + (0,) * (2 * b))
    return w


def level_support(d_x: DigitSequence, level: int, state_cap: int = 10**5) -> SupportAutomaton:
    """Factor acceptor of ``phi^{level+1}(L_x)`` where ``L_x`` is the language of ``d_x``.

    Built by subset construction over pairs ``(x-state, block, offset)``:
    the ``x``-automaton state after choosing the current letter, the letter,
    and how many digits of its image have been read.
    """
    A = LowerBoundAutomaton(d_x, -1)
    power = level + 1
    images = {a: _phi_power_image(a, power) for a in A.alphabet}

    initial = set()
    for a in A.alphabet:
        s = A.step(EMPTY, a)
        if s is None:
            continue
        for j in range(len(images[a])):
            initial.add((s, a, j))
    initial = frozenset(initial)

    def nfa_step(q, b):
        s, a, j = q
        out = []
        img = images[a]
        if j < len(img):
            if img[j] == b:
                out.append((s, a, j + 1))
            return out
        for c in A.alphabet:
            t = A.step(s, c)
            if t is not None and images[c][0] == b:
                out.append((t, c, 1))
        return out

    def norm(q):
        s, a, j = q
        return (s, -1, 0) if j == len(images[a]) and a != -1 else q

    def dfa_step(S, b):
        T = set()
        for q in S:
            if q[1] == -1:
                s = q[0]
                for c in A.alphabet:
                    t = A.step(s, c)
                    if t is not None and images[c][0] == b:
                        T.add(norm((t, c, 1)))
            else:
                for r in nfa_step(q, b):
                    T.add(norm(r))
        return frozenset(T) if T else None

    initial = frozenset(norm(q) for q in initial)
    n, trans, labels = _number(initial, dfa_step, (0, 1), state_cap)
    return SupportAutomaton(n, trans, 0, (0, 1), f"factors of phi^{power}(L) for d = {d_x}", level, labels)


def build_support_automaton(base, state_cap: int = 10**5) -> SupportAutomaton:
    """Factor acceptor of the support language of ``base``.

    In the coded range (``beta <= -gamma_0``) this is the acceptor of all
    admissible words.  At level ``n`` it accepts the factors of
    ``phi^{n+1}(L_x)`` where ``d_x`` is obtained by decoding ``d``.
    """
    from .exchange import classify_interval, phi_decode
    from .numeration import characteristic_sequence

    d = characteristic_sequence(base)
    if not isinstance(d, DigitSequence):
        raise NotEventuallyPeriodic("no period detected for the characteristic sequence")
    cls = classify_interval(base)
    if cls.coded:
        return lower_bound_support(d, base.delta, state_cap)
    d_x = phi_decode(d, cls.level + 1)
    return level_support(d_x, cls.level, state_cap)
