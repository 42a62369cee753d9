"""Exponential generating functions, built two ways and compared exactly.

Five families of sequences are summed with weights ``t^j / w(j)``:

=============  ============================  =========  =========================
kind           member j                      w(j)       closed form
=============  ============================  =========  =========================
fixed-l        Bhat_{l, l-j+q/2}             j!         (1+t)^(2l) x^(l+q/2) exp(beta t / (x(1+t)))
diag-odd       Bhat_{j-k-1, q/2-j-k-1}       (2j)!      even part in s = sqrt(t), see below
diag-even      Bhat_{j-k, q/2-j-k-1}         (2j+1)!    odd part in s, divided by s
antidiag-odd   Bhat_{k-j, q/2-j-k-1}         j!         z-derivative of order 2k+1
antidiag-even  Bhat_{k-j-1, q/2-j-k-1}       j!         z-derivative of order 2k
=============  ============================  =========  =========================

The diag closed forms are assembled in ``s`` with half-integer powers of x
(``sqrt(x)`` is just ``x^(1/2)``) and collapsed with ``s^2 -> t`` at the end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .algebra import ExpLaurent, LaurentPoly, TSeries, binomial, half
from .core import FamilyParams, rodrigues_poly
from .errors import NegativeOrder

__all__ = [
    "KINDS",
    "GenFunKind",
    "member_index",
    "series_from_family",
    "closed_form",
    "ComparisonReport",
    "compare",
]

KINDS = ("fixed-l", "diag-odd", "diag-even", "antidiag-odd", "antidiag-even")


@dataclass(frozen=True)
class GenFunKind:
    """A sequence family.  ``value`` is l for fixed-l and k for the others."""

    variant: str
    value: Fraction

    def __post_init__(self):
        if self.variant not in KINDS:
            raise ValueError(f"unknown kind {self.variant!r}; expected one of {KINDS}")
        v = half(self.value)
        if self.variant != "fixed-l" and (v.denominator != 1 or v < 0):
            raise ValueError(f"k must be a non-negative integer, got {v}")
        object.__setattr__(self, "value", v)

    @property
    def label(self) -> str:
        return "l" if self.variant == "fixed-l" else "k"


def member_index(kind: GenFunKind, q: int, j: int) -> tuple[Fraction, Fraction]:
    """(l, m) of the j-th member."""
    half_q = Fraction(q, 2)
    v = kind.value
    if kind.variant == "fixed-l":
        return v, v - j + half_q
    m = half_q - j - v - 1
    if kind.variant == "diag-odd":
        return j - v - 1, m
    if kind.variant == "diag-even":
        return j - v, m
    if kind.variant == "antidiag-odd":
        return v - j, m
    return v - j - 1, m


def _weight(kind: GenFunKind, j: int) -> int:
    if kind.variant == "diag-odd":
        return math.factorial(2 * j)
    if kind.variant == "diag-even":
        return math.factorial(2 * j + 1)
    return math.factorial(j)


def series_from_family(kind: GenFunKind, params: FamilyParams, order: int) -> TSeries:
    """sum_j t^j / w(j) * Bhat(member j), truncated at t^order."""
    coeffs = []
    for j in range(order + 1):
        l, m = member_index(kind, params.q, j)
        try:
            poly = rodrigues_poly(params.q, params.beta, l, m)
        except NegativeOrder:  # pragma: no cover - impossible for j >= 0
            raise
        coeffs.append(poly.scale(Fraction(1, _weight(kind, j))))
    return TSeries(coeffs, order)


def _fixed_l(l: Fraction, q: int, beta: Fraction, order: int) -> TSeries:
    if (2 * l).denominator != 1:
        raise ValueError("2l must be an integer")
    # beta t / (x (1+t)) = (beta/x) (t - t^2 + t^3 - ...)
    arg = TSeries([0] + [(-1) ** (j - 1) for j in range(1, order + 1)], order)
    arg = arg * LaurentPoly.monomial(beta, -1)
    series = TSeries.binpow(int(2 * l), order) * arg.exp()
    return series * LaurentPoly.monomial(1, l + Fraction(q, 2))


def _diag_pieces(power: int, beta: Fraction, s_order: int) -> tuple[TSeries, TSeries]:
    """(1 - s sqrt(x))^power e^{beta s/sqrt(x)} and the same at s -> -s."""
    binom = TSeries(
        [LaurentPoly.monomial((-1) ** i * binomial(power, i), Fraction(i, 2)) for i in range(power + 1)],
        s_order,
    )
    expo = TSeries.variable(s_order, LaurentPoly.monomial(beta, Fraction(-1, 2))).exp()
    plus = binom * expo
    return plus, plus.substitute_sign()


def _diag_odd(k: int, q: int, beta: Fraction, order: int) -> TSeries:
    s_order = 2 * order + 1
    a, b = _diag_pieces(2 * k + 1, beta, s_order)
    s_series = (a + b) * LaurentPoly.monomial(Fraction(1, 2), Fraction(q, 2) - k - 1)
    return s_series.collapse_even(order)


def _diag_even(k: int, q: int, beta: Fraction, order: int) -> TSeries:
    s_order = 2 * order + 2
    a, b = _diag_pieces(2 * k, beta, s_order)
    # divide by 2 sqrt(x) s
    s_series = (a - b).drop_first() * LaurentPoly.monomial(Fraction(1, 2), Fraction(q, 2) - k - Fraction(1, 2))
    return s_series.collapse_even(order)


def _antidiag(k: int, q: int, beta: Fraction, order: int, odd: bool) -> TSeries:
    # t^j coefficient of x^{q/2+k+1} e^{beta/x} D_z^n (z^{base} e^{t x/z^2 - beta/z}) at z = x:
    # the factor (t x)^j / j! z^{-2j} of e^{t x/z^2} is pulled through D_z
    n = 2 * k + 1 if odd else 2 * k
    base = 2 * k if odd else 2 * k - 2
    kernel = LaurentPoly.monomial(-beta, -1)
    coeffs = []
    for j in range(order + 1):
        deriv = ExpLaurent(LaurentPoly.monomial(1, base - 2 * j), kernel).diff_n(n)
        coeffs.append(deriv.prefactor.shift(Fraction(q, 2) + k + 1 + j).scale(Fraction(1, math.factorial(j))))
    return TSeries(coeffs, order)


def closed_form(kind: GenFunKind, params: FamilyParams, order: int) -> TSeries:
    q, beta, v = params.q, params.beta, kind.value
    if kind.variant == "fixed-l":
        return _fixed_l(v, q, beta, order)
    k = int(v)
    if kind.variant == "diag-odd":
        return _diag_odd(k, q, beta, order)
    if kind.variant == "diag-even":
        return _diag_even(k, q, beta, order)
    return _antidiag(k, q, beta, order, odd=kind.variant == "antidiag-odd")


@dataclass(frozen=True)
class ComparisonReport:
    kind: GenFunKind
    params: FamilyParams
    order: int
    equal_up_to: int
    lhs: LaurentPoly | None = None
    rhs: LaurentPoly | None = None

    @property
    def ok(self) -> bool:
        return self.equal_up_to == self.order + 1

    def to_dict(self) -> dict:
        out = {
            "kind": self.kind.variant,
            "q": self.params.q,
            "l_or_k": str(self.kind.value),
            "beta": str(self.params.beta),
            "order": self.order,
            "equal_up_to": self.equal_up_to,
            "status": "pass" if self.ok else "fail",
        }
        if not self.ok:
            out["first_mismatch"] = {"power": self.equal_up_to, "lhs": str(self.lhs), "rhs": str(self.rhs)}
        return out


def first_mismatch(lhs: TSeries, rhs: TSeries) -> int:
    for j, (a, b) in enumerate(zip(lhs, rhs)):
        if a != b:
            return j
    return lhs.order + 1


def compare(kind: GenFunKind, params: FamilyParams, order: int, rhs: TSeries | None = None) -> ComparisonReport:
    """Compare the family sum with the closed form coefficient by coefficient.

    ``rhs`` overrides the closed form (negative controls pass a deliberately
    wrong series here).
    """
    lhs = series_from_family(kind, params, order)
    if rhs is None:
        rhs = closed_form(kind, params, order)
    j = first_mismatch(lhs, rhs)
    if j <= order:
        return ComparisonReport(kind, params, order, j, lhs[j], rhs[j])
    return ComparisonReport(kind, params, order, j)
