"""Sample bases shared by the test modules."""

from fractions import Fraction

import pytest

from negbeta import Base, golden_base, neg_gamma1_base

EX1_POLY = (1, 2, -2, -1, 2, -1, -1, 0, 0, 0, 0, 2, -1, 0, 3, 1)
EX2_POLY = tuple(reversed([1, 2, -2, 1, 1, -1, 1, -1, 1, -2, 1, 1, -2, 0, 1]))


def ex1_base() -> Base:
    return Base.algebraic(EX1_POLY, -3, -2)


def ex2_base() -> Base:
    return Base.algebraic(EX2_POLY, -3, -2)


def level0_base() -> Base:
    """Root of X^3 + X^2 + 1 near -1.4656, with d = (1001)^inf."""
    return Base.algebraic((1, 0, 1, 1), Fraction(-3, 2), Fraction(-7, 5))


def level1_base() -> Base:
    """Root of X^5 + X^2 + 1 near -1.1939, with d = (10011100)^inf."""
    return Base.algebraic((1, 0, 1, 0, 0, 1), Fraction(-13, 10), Fraction(-11, 10))


SAMPLE = {
    "-2": lambda: Base.integer(-2),
    "-3": lambda: Base.integer(-3),
    "-gamma0": golden_base,
    "-gamma1": neg_gamma1_base,
    "ex1": ex1_base,
    "ex2": ex2_base,
    "lv0": level0_base,
    "lv1": level1_base,
}


@pytest.fixture(params=sorted(SAMPLE))
def sample(request):
    return request.param, SAMPLE[request.param]()


ACCEPTANCE_LINES = []


def record(criterion: int, ok: bool, detail: str) -> bool:
    """Print and remember one pass/fail line for an acceptance criterion."""
    line = f"criterion {criterion:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
