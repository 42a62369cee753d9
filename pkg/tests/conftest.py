from fractions import Fraction

import pytest
import sympy as sp

from abessel.algebra import LaurentPoly

X = sp.Symbol("x", positive=True)


def to_sympy(poly: LaurentPoly, var=X):
    return sum((sp.Rational(c.numerator, c.denominator) * var ** sp.Rational(e.numerator, e.denominator)
                for e, c in poly), sp.Integer(0))


def from_sympy(expr, var=X) -> LaurentPoly:
    """Expand a sympy Laurent expression in ``var`` back into a LaurentPoly."""
    expr = sp.expand(expr)
    terms = []
    for term in sp.Add.make_args(expr):
        coeff, power = term.as_coeff_exponent(var)
        terms.append((Fraction(int(power.p), int(power.q)), Fraction(int(coeff.p), int(coeff.q))))
    return LaurentPoly(terms)


@pytest.fixture
def x():
    return X


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
