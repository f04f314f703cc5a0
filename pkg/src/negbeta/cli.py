"""Command-line front end.

Every subcommand writes one report to standard output.  Exit codes: 0 on
success, 1 when a yes/no query (``admissible``, ``intransitive``) answers no,
2 for usage errors and 3 for numeric failures.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from fractions import Fraction
from typing import Callable, Dict, List, Optional

import mpmath

from . import codes, exchange, measure, numeration, ordering
from .automaton import build_support_automaton
from .config import DEFAULTS, Settings
from .errors import (BoundaryAmbiguous, BudgetExceeded, InvalidBase, MalformedCharacteristic, NegBetaError,
                     NoConvergence, NotEventuallyPeriodic, NotInImage, TruncationInsufficient)
from .sequences import DigitSequence, format_word, parse_word

FORMATS = ("json", "csv", "dot", "text")
NUMERIC_FAILURES = (BoundaryAmbiguous, NoConvergence, TruncationInsufficient, BudgetExceeded,
                    NotEventuallyPeriodic, NotInImage, MalformedCharacteristic)

BASE_GRAMMAR = "beta=<decimal> | poly=<c0,c1,...>;interval=<lo>,<hi> (ascending coefficients)"
WORD_GRAMMAR = "comma-separated decimal digits, e.g. 2,0,1"


class UsageError(Exception):
    """Bad flag value; reported with the expected grammar."""


# ---------------------------------------------------------------------------
# output


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, DigitSequence):
        return {"preperiod": list(v.preperiod), "period": list(v.period)}
    if isinstance(v, tuple):
        return [_jsonable(x) for x in v]
    if isinstance(v, list):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (mpmath.mpf, mpmath.mpc)):
        return float(v)
    if isinstance(v, numeration.Base):
        return v.descriptor()
    return v


def _text_value(v) -> str:
    if isinstance(v, tuple) and all(isinstance(a, int) for a in v):
        return format_word(v, ",")
    if isinstance(v, (list, tuple)):
        return "; ".join(_text_value(x) for x in v)
    if isinstance(v, dict):
        return ", ".join(f"{k}={_text_value(x)}" for k, x in v.items())
    return str(v)


class Report:
    """Collects fields and renders them in the requested format."""

    def __init__(self, command: str, settings: Settings, fmt: str):
        self.command = command
        self.settings = settings
        self.fmt = fmt
        self.fields: Dict[str, object] = {}
        self.rows: Optional[List[list]] = None
        self.columns: Optional[List[str]] = None
        self.primary: Optional[str] = None
        self.dot: Optional[str] = None

    def header_line(self, comment: str = "#") -> str:
        items = " ".join(f"{k}={v}" for k, v in self.settings.header().items())
        return f"{comment} negbeta {self.command}: {items}"

    def render(self) -> str:
        if self.fmt == "json":
            doc = {"command": self.command, "settings": self.settings.header()}
            doc.update(_jsonable(self.fields))
            return json.dumps(doc, sort_keys=False)
        if self.fmt == "dot":
            return self.header_line("//") + "\n" + (self.dot or "")
        if self.fmt == "csv":
            lines = [self.header_line()]
            cols = self.columns or list(self.fields)
            rows = self.rows if self.rows is not None else [[_text_value(self.fields[c]) for c in cols]]
            import csv
            import io

            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(cols)
            w.writerows(rows)
            return "\n".join(lines) + "\n" + buf.getvalue().rstrip("\n")
        lines = [self.header_line()]
        if self.primary is not None:
            lines.append(self.primary)
        for k, v in self.fields.items():
            lines.append(f"{k}: {_text_value(v)}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# argument helpers


def _base(args) -> numeration.Base:
    if args.base is None:
        raise UsageError(f"--base is required; expected {BASE_GRAMMAR}")
    try:
        return numeration.parse_base(args.base, prec=args.prec)
    except InvalidBase as exc:
        raise UsageError(f"--base: {exc}; expected {BASE_GRAMMAR}") from None


def _word(text: Optional[str], flag: str):
    if text is None:
        raise UsageError(f"{flag} is required; expected {WORD_GRAMMAR}")
    try:
        return parse_word(text)
    except ValueError:
        raise UsageError(f"{flag}: malformed word {text!r}; expected {WORD_GRAMMAR}") from None


def _require(cond: bool, message: str):
    if not cond:
        raise UsageError(message)


# ---------------------------------------------------------------------------
# subcommands


def cmd_charseq(args, rep: Report) -> int:
    base = _base(args)
    seq = numeration.characteristic_sequence(base, args.mode, args.max_len, rep.settings)
    if isinstance(seq, DigitSequence):
        rep.fields.update(preperiod=seq.preperiod, period=seq.period)
        rep.primary = str(seq)
    else:
        rep.fields.update(prefix=seq, exact=False)
        rep.primary = format_word(seq) + "..."
    rep.fields["mode"] = args.mode
    return 0


def cmd_expand(args, rep: Report) -> int:
    base = _base(args)
    try:
        x = Fraction(args.x)
    except (TypeError, ValueError):
        raise UsageError("--x must be a rational number such as 3/7 or 0.25") from None
    shift, digits = numeration.expand(x, base, args.n, rep.settings)
    rep.fields.update(x=str(x), shift=shift, digits=digits)
    rep.primary = format_word(digits)
    return 0


def cmd_compare(args, rep: Report) -> int:
    _require(args.delta in (-1, 1), "--delta must be -1 or 1")
    x, y = _word(args.x, "--x"), _word(args.y, "--y")
    res = ordering.alt_compare(x, y, args.delta)
    rep.fields.update(relation=res.relation, witness_index=res.witness_index, prefix=res.prefix)
    rep.primary = res.relation
    return 0


def cmd_admissible(args, rep: Report) -> int:
    base = _base(args)
    w = _word(args.word, "--word")
    res = ordering.is_admissible(w, base)
    rep.fields.update(word=w, admissible=res.admissible, violating_suffix=res.violating_suffix,
                      violated_bound=res.violated_bound)
    rep.primary = "admissible" if res.admissible else "not admissible"
    return 0 if res.admissible else 1


def cmd_count(args, rep: Report) -> int:
    base = _base(args)
    H = ordering.count_words(base, args.n)
    rep.fields["H"] = H
    rep.columns = ["n", "H_n"]
    rep.rows = [[n, h] for n, h in enumerate(H)]
    rep.primary = " ".join(map(str, H))
    return 0


def cmd_code(args, rep: Report) -> int:
    base = _base(args)
    fam = codes.enumerate_family(base, args.family, args.max_len, index=args.index)
    stats = codes.code_statistics(fam, base)
    rep.fields.update(family=fam.name, max_len=fam.max_len, words_len=fam.words_len,
                      words=[format_word(w, ",") for w in fam.words], counts=fam.counts,
                      statistics=stats.as_dict(), experimental=fam.experimental)
    rep.columns = ["length", "count"]
    rep.rows = [[n, c] for n, c in enumerate(fam.counts)]
    rep.primary = codes.describe(fam)
    return 0


def cmd_automaton(args, rep: Report) -> int:
    base = _base(args)
    A = build_support_automaton(base, rep.settings.state_cap)
    rep.dot = A.to_dot()
    rep.fields.update(json.loads(A.to_json()))
    rep.columns = ["state", "digit", "target"]
    rep.rows = [[s, a, t] for (s, a), t in sorted(A.transitions.items())]
    rep.primary = f"{A.n_states} states: {A.description}"
    return 0


def cmd_identity(args, rep: Report) -> int:
    base = _base(args)
    res = codes.verify_series_identity(base, args.degree)
    rep.fields.update(degree=res.degree, lhs=res.lhs, rhs=res.rhs, holds=res.holds)
    rep.columns = ["degree", "lhs", "rhs"]
    rep.rows = [[n, a, b] for n, (a, b) in enumerate(zip(res.lhs, res.rhs))]
    rep.primary = "identity holds" if res.holds else "identity fails"
    return 0 if res.holds else 3


def cmd_gamma(args, rep: Report) -> int:
    _require(args.n is not None and args.n >= 0, "--n must be a non-negative integer")
    g = exchange.gamma_bound(args.n, args.prec)
    digits = max(10, int(args.prec * 0.30103) - 2)
    with mpmath.workprec(args.prec + 16):
        text = mpmath.nstr(g.value, digits)
    rep.fields.update(n=g.n, value=text, degree=g.degree, l_u=g.l_u, l_v=g.l_v, lo=g.lo, hi=g.hi)
    rep.primary = text
    return 0


def cmd_classify(args, rep: Report) -> int:
    base = _base(args)
    cls = exchange.classify_interval(base)
    rep.fields.update(coded=cls.coded, level=cls.level, boundary=cls.boundary)
    rep.primary = str(cls)
    return 0


def cmd_upsilon(args, rep: Report) -> int:
    base = _base(args)
    s = rep.settings
    if args.inverse:
        _require(args.n is not None and args.n >= 0, "--inverse needs --n >= 0")
        out = exchange.upsilon_inverse_report(base, args.n, s.digit_horizon, s.tol, s)
    else:
        out = exchange.upsilon_report(base, s.digit_horizon, s.tol, args.level, True, s)
    target = out["target"]
    prefix = target.prefix(s.digit_horizon) if isinstance(target, DigitSequence) else target[: s.digit_horizon]
    rep.fields.update(input=out["input"], level=out["level"], target_prefix=prefix,
                      result_interval=out["interval"], digits_matched=out["digits_matched"],
                      result=out["base"].descriptor())
    rep.primary = out["base"].descriptor()
    return 0


def cmd_tn(args, rep: Report) -> int:
    base = _base(args)
    n = args.n
    if n is None:
        n = exchange.classify_interval(base).level
        _require(n is not None, "base lies in the coded range; pass --n explicitly")
    t = exchange.t_threshold(base, n)
    rep.fields.update(n=n, t_n=mpmath.nstr(t.mpf(max(64, args.prec)), 30))
    if base.kind == "algebraic":
        f = exchange.threshold_target(base, n)
        rep.fields["f_beta_0_u_n_d"] = mpmath.nstr(f.mpf(max(64, args.prec)), 30)
    rep.primary = rep.fields["t_n"]
    return 0


def cmd_measure(args, rep: Report) -> int:
    base = _base(args)
    w = _word(args.word, "--word")
    sc = measure.support_code(base, args.max_len)
    cyl = measure.cylinder_measure(w, sc, base, args.offset, method=args.method)
    rep.fields.update(word=w, offset=args.offset, cylinder=cyl.as_dict(), support_code=sc.source,
                      kraft=float(sc.kraft), average_length=float(sc.average_length))
    if w in sc.family and len(w) <= sc.family.words_len:
        rep.fields["codeword"] = measure.codeword_measure(w, sc, base).as_dict()
    if not cyl.in_support:
        rep.fields["intransitive"] = True
    rep.primary = f"{cyl.value:.15g} +- {cyl.error:.3g}"
    return 0


def cmd_intransitive(args, rep: Report) -> int:
    base = _base(args)
    w = _word(args.word, "--word")
    res = measure.is_intransitive(w, base)
    rep.fields.update(word=w, admissible=res.admissible, intransitive=res.intransitive,
                      pattern=None if res.pattern is None else {"family": res.pattern.family, "m": res.pattern.m,
                                                                 "shift": res.pattern.shift,
                                                                 "word": res.pattern.word})
    rep.primary = str(res)
    return 0 if res.intransitive else 1


def cmd_simulate(args, rep: Report) -> int:
    base = _base(args)
    _require(args.steps >= 1, "--steps must be positive")
    queries = [_word(q, "--word") for q in (args.word or [])]
    sim = measure.orbit_simulate(base, args.steps, args.seed, queries)
    analytic = None
    if queries:
        pm = measure.parry_measure(build_support_automaton(base, rep.settings.state_cap))
        analytic = [pm(q) for q in queries]
    rep.columns = ["word", "analytic", "empirical", "stderr", "steps", "seed"]
    rep.rows = [[format_word(w, ","), "" if analytic is None else f"{analytic[i]:.10g}",
                 f"{sim.frequency[i]:.10g}", f"{sim.stderr[i]:.3g}", sim.steps, sim.seed]
                for i, w in enumerate(sim.words)]
    rep.fields.update(steps=sim.steps, seed=sim.seed, generator=sim.generator,
                      support_fraction=sim.support_fraction,
                      queries=[{"word": w, "analytic": None if analytic is None else analytic[i],
                                "empirical": sim.frequency[i], "stderr": sim.stderr[i],
                                "batch_stderr": sim.batch_stderr[i]} for i, w in enumerate(sim.words)])
    rep.primary = f"{sim.steps} steps, seed {sim.seed}"
    return 0


COMMANDS: Dict[str, Callable] = {
    "charseq": cmd_charseq, "expand": cmd_expand, "compare": cmd_compare, "admissible": cmd_admissible,
    "count": cmd_count, "code": cmd_code, "automaton": cmd_automaton, "identity": cmd_identity,
    "gamma": cmd_gamma, "classify": cmd_classify, "upsilon": cmd_upsilon, "tn": cmd_tn,
    "measure": cmd_measure, "intransitive": cmd_intransitive, "simulate": cmd_simulate,
}


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="text")
    common.add_argument("--prec", type=int, default=DEFAULTS.prec, help="working precision in bits")
    common.add_argument("--max-len", type=int, default=DEFAULTS.max_len, dest="max_len")
    common.add_argument("--degree", type=int, default=DEFAULTS.degree)
    common.add_argument("--digit-horizon", type=int, default=DEFAULTS.digit_horizon, dest="digit_horizon")
    common.add_argument("--tol", type=float, default=DEFAULTS.tol)

    p = argparse.ArgumentParser(prog="negbeta", description="Negative beta-shifts: expansions, codes, "
                                "interval exchange and maximal-entropy measure.")
    sub = p.add_subparsers(dest="command", required=True, metavar="subcommand")

    def add(name, help_, base=True):
        sp = sub.add_parser(name, parents=[common], help=help_)
        if base:
            sp.add_argument("--base", help=BASE_GRAMMAR)
        return sp

    sp = add("charseq", "characteristic sequence of the left endpoint")
    sp.add_argument("--mode", choices=("corrected", "raw"), default="corrected")
    sp = add("expand", "expansion of a rational number")
    sp.add_argument("--x", required=True)
    sp.add_argument("--n", type=int, default=20)
    sp = add("compare", "alternating-order comparison of two words", base=False)
    sp.add_argument("--delta", type=int, default=-1)
    sp.add_argument("--x", help=WORD_GRAMMAR)
    sp.add_argument("--y", help=WORD_GRAMMAR)
    sp = add("admissible", "admissibility of a word")
    sp.add_argument("--word", help=WORD_GRAMMAR)
    sp = add("count", "number of admissible words of each length")
    sp.add_argument("--n", type=int, default=20)
    sp = add("code", "enumerate a code family")
    sp.add_argument("--family", choices=codes.FAMILIES, default="C_beta")
    sp.add_argument("--index", type=int)
    add("automaton", "support automaton")
    add("identity", "check the series factorisation")
    sp = add("gamma", "the bound gamma_n", base=False)
    sp.add_argument("--n", type=int)
    add("classify", "coded range or level")
    sp = add("upsilon", "exchange map or its inverse")
    sp.add_argument("--level", type=int)
    sp.add_argument("--inverse", action="store_true")
    sp.add_argument("--n", type=int)
    sp = add("tn", "threshold t_n")
    sp.add_argument("--n", type=int)
    sp = add("measure", "maximal-entropy measure of a cylinder")
    sp.add_argument("--word", help=WORD_GRAMMAR)
    sp.add_argument("--offset", type=int, default=0)
    sp.add_argument("--method", choices=("parry", "completion"), default="parry")
    sp = add("intransitive", "whether a word is intransitive")
    sp.add_argument("--word", help=WORD_GRAMMAR)
    sp = add("simulate", "cylinder frequencies along an orbit")
    sp.add_argument("--steps", type=int, default=10**5)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--word", action="append", help="query word (repeatable)")
    return p


def _settings(args) -> Settings:
    return replace(DEFAULTS, prec=args.prec, max_len=args.max_len, degree=args.degree,
                   digit_horizon=args.digit_horizon, tol=args.tol)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _require(args.prec >= 64, "--prec must be at least 64")
        _require(args.max_len >= 1, "--max-len must be positive")
        _require(args.degree >= 1, "--degree must be positive")
        _require(args.format != "dot" or args.command == "automaton", "--format dot is only valid for automaton")
        rep = Report(args.command, _settings(args), args.format)
        code = COMMANDS[args.command](args, rep)
    except UsageError as exc:
        print(f"negbeta {args.command}: {exc}", file=sys.stderr)
        return 2
    except InvalidBase as exc:
        print(f"negbeta {args.command}: {exc}", file=sys.stderr)
        return 2
    except NUMERIC_FAILURES as exc:
        print(f"negbeta {args.command}: numeric failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except NegBetaError as exc:
        print(f"negbeta {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    print(rep.render())
    return code


if __name__ == "__main__":
    sys.exit(main())
