"""Exact inner products against the weight x^(-q) exp(-beta/x) on (0, inf).

Every integrand is a Laurent polynomial times exp(-beta/x), so integrals
reduce to the closed-form moments

    int_0^inf x^s exp(-beta/x) dx = beta^(s+1) (-s-2)!      (s <= -2)
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .algebra import LaurentPoly, half, to_scalar
from .core import FamilyParams, ModeIndex, gamma_int, rodrigues, validate_index
from .errors import DivergentMoment, NonIntegerExponent

__all__ = [
    "moment",
    "MomentTable",
    "inner_product",
    "gram_matrix",
    "norm_formula",
    "dependent_pairs",
]


@lru_cache(maxsize=None)
def moment(s: int, beta: Fraction) -> Fraction:
    if s >= -1:
        raise DivergentMoment(f"int x^{s} exp(-beta/x) dx diverges")
    beta = to_scalar(beta)
    return beta ** (s + 1) * math.factorial(-s - 2)


class MomentTable:
    """Moments for one beta, cached per exponent."""

    def __init__(self, beta):
        self.beta = to_scalar(beta)
        self.cache: dict[int, Fraction] = {}

    def __getitem__(self, s: int) -> Fraction:
        if s not in self.cache:
            self.cache[s] = moment(s, self.beta)
        return self.cache[s]


def inner_product(f: LaurentPoly, g: LaurentPoly, q: int, beta, table: MomentTable | None = None) -> Fraction:
    """int_0^inf f g x^(-q) exp(-beta/x) dx, exactly."""
    table = table or MomentTable(beta)
    total = Fraction(0)
    for e, c in (f * g).shift(-q):
        if e.denominator != 1:
            raise NonIntegerExponent(f"integrand has the power x^{e}; f and g are not paired")
        total += c * table[int(e)]
    return total


def gram_matrix(q: int, beta, m, l_list) -> list[list[Fraction]]:
    """Pairwise inner products of the unnormalized functions Bhat_{l,m}.

    Lists mixing l < 0 and l >= 0 are allowed; pairs (l, -l-1) are then
    proportional rather than orthogonal (see :func:`dependent_pairs`).
    """
    params = FamilyParams(q, beta)
    m = half(m)
    polys = [rodrigues(params, ModeIndex(l, m)).poly for l in l_list]
    table = MomentTable(beta)
    size = len(polys)
    gram = [[Fraction(0)] * size for _ in range(size)]
    for i in range(size):
        for j in range(i, size):
            gram[i][j] = gram[j][i] = inner_product(polys[i], polys[j], q, beta, table)
    return gram


def dependent_pairs(l_list) -> list[tuple[int, int]]:
    """Positions (i, j) with l_j == -l_i - 1."""
    ls = [half(l) for l in l_list]
    return [(i, j) for i in range(len(ls)) for j in range(i + 1, len(ls)) if ls[i] + ls[j] == -1]


def norm_formula(q: int, beta, l, m) -> Fraction:
    """Closed-form <Bhat_{l,m}, Bhat_{l,m}>.

    Gamma(-l-m+q/2) Gamma(l-m+q/2+1) beta^(2l+1) / D, with D = -2l-1 for
    l < 0 and 2l+1 for l >= 0.  At l = -1/2 both D and the integral vanish
    resp. diverge; that case raises DivergentMoment.
    """
    l, m, beta = half(l), half(m), to_scalar(beta)
    validate_index(q, l, m)
    denom = -2 * l - 1 if l < 0 else 2 * l + 1
    if denom == 0:
        raise DivergentMoment(f"l = {l}: the norm is infinite")
    half_q = Fraction(q, 2)
    gammas = gamma_int(-l - m + half_q) * gamma_int(l - m + half_q + 1)
    return gammas * beta ** int(2 * l + 1) / denom
