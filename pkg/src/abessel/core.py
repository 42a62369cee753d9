"""Associated Bessel functions from their Rodrigues formula.

The unnormalized function is

    Bhat_{l,m}(x) = x**(q-m) * exp(beta/x) * (d/dx)**n (x**(2l) * exp(-beta/x)),
    n = l - m + q/2,

which is always a Laurent polynomial in x.  The normalized function is
``a_{l,m} * Bhat_{l,m}``; ``a`` is irrational in general, so it is carried as
an exact square (``norm_sq``) and a sign that may be undefined.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .algebra import ExpLaurent, LaurentPoly, binomial, half, is_integral, to_scalar
from .errors import BadParity, NegativeOrder, OutOfRange, SignUndefined

__all__ = [
    "FamilyParams",
    "ModeIndex",
    "AssocBessel",
    "gamma_int",
    "sign_power",
    "rodrigues_order",
    "validate_index",
    "valid_indices",
    "rodrigues_poly",
    "rodrigues",
    "gen_bessel_poly",
    "y_poly",
    "laguerre",
    "laguerre_by_recurrence",
    "laguerre_form",
    "norm_sq_coeff",
    "sign_coeff",
    "leading_term",
    "ReflectionResult",
    "reflection_check",
]


@dataclass(frozen=True)
class FamilyParams:
    q: int
    beta: Fraction

    def __post_init__(self):
        if not isinstance(self.q, int) or self.q < 1:
            raise ValueError(f"q must be an integer >= 1, got {self.q!r}")
        beta = to_scalar(self.beta)
        if beta <= 0:
            raise ValueError(f"beta must be positive, got {beta}")
        object.__setattr__(self, "beta", beta)


@dataclass(frozen=True)
class ModeIndex:
    l: Fraction
    m: Fraction

    def __post_init__(self):
        object.__setattr__(self, "l", half(self.l))
        object.__setattr__(self, "m", half(self.m))


def gamma_int(z) -> int:
    """Gamma at a positive integer, as an exact factorial."""
    z = Fraction(z)
    if z.denominator != 1 or z <= 0:
        raise ValueError(f"Gamma({z}) is outside the exact domain")
    return math.factorial(int(z) - 1)


def sign_power(e) -> int:
    """(-1)**e for integer e; SignUndefined for half-integers."""
    e = Fraction(e)
    if e.denominator != 1:
        raise SignUndefined(f"(-1)^({e}) is not real")
    return -1 if int(e) % 2 else 1


def rodrigues_order(q: int, l, m) -> Fraction:
    return half(l) - half(m) + Fraction(q, 2)


def validate_index(q: int, l, m) -> None:
    """Raise unless (l, m) is a square-integrable index for this q."""
    l, m = half(l), half(m)
    li, mi = is_integral(l), is_integral(m)
    if q % 2 == 0 and not (li and mi):
        raise BadParity(f"q={q} is even: l and m must both be integers")
    if q % 2 == 1 and li == mi:
        raise BadParity(f"q={q} is odd: exactly one of l, m must be a half-integer")
    n = rodrigues_order(q, l, m)
    if n < 0:
        raise NegativeOrder(f"n = l - m + q/2 = {n} < 0")
    half_q = Fraction(q, 2)
    if m > Fraction(q - 1, 2):
        raise OutOfRange(f"m = {m} exceeds (q-1)/2")
    if not (m - half_q <= l <= half_q - m - 1):
        raise OutOfRange(f"l = {l} outside [{m - half_q}, {half_q - m - 1}]")


def valid_indices(q: int, m_window: int = 6) -> list[tuple[Fraction, Fraction]]:
    """All valid (l, m) with m >= q/2 - m_window, ordered by m then l."""
    half_q = Fraction(q, 2)
    m_lo = half_q - m_window
    out = []
    # m runs over (1/2)Z; parity of l follows from n being an integer
    m = Fraction(math.ceil(2 * m_lo), 2)
    while m <= Fraction(q - 1, 2):
        if q % 2 == 0 and not is_integral(m):
            m += Fraction(1, 2)
            continue
        for i in range(int(q - 2 * m)):
            out.append((m - half_q + i, m))
        m += Fraction(1, 2)
    return out


def _kernel(beta: Fraction) -> LaurentPoly:
    return LaurentPoly.monomial(-beta, -1)


@lru_cache(maxsize=None)
def _rodrigues_cached(q: int, beta: Fraction, l: Fraction, m: Fraction) -> LaurentPoly:
    n = rodrigues_order(q, l, m)
    seed = ExpLaurent(LaurentPoly.monomial(1, 2 * l), _kernel(beta))
    return seed.diff_n(int(n)).prefactor.shift(q - m)


def rodrigues_poly(q: int, beta, l, m) -> LaurentPoly:
    """Bhat_{l,m} with no range check beyond n being a non-negative integer.

    The generating-function sums run over indices outside the
    square-integrable window, so this entry point is deliberately formal.
    """
    l, m, beta = half(l), half(m), to_scalar(beta)
    n = rodrigues_order(q, l, m)
    if not is_integral(n):
        raise BadParity(f"n = {n} is not an integer")
    if n < 0:
        raise NegativeOrder(f"n = l - m + q/2 = {n} < 0")
    return _rodrigues_cached(q, beta, l, m)


@dataclass(frozen=True)
class AssocBessel:
    params: FamilyParams
    index: ModeIndex
    poly: LaurentPoly
    norm_sq: Fraction
    sign: int | None = field(default=None)

    @property
    def order(self) -> int:
        return int(rodrigues_order(self.params.q, self.index.l, self.index.m))

    @property
    def sign_defined(self) -> bool:
        return self.sign is not None


def rodrigues(params: FamilyParams, index: ModeIndex) -> AssocBessel:
    validate_index(params.q, index.l, index.m)
    poly = rodrigues_poly(params.q, params.beta, index.l, index.m)
    try:
        sign = sign_coeff(params, index)
    except SignUndefined:
        sign = None
    return AssocBessel(params, index, poly, norm_sq_coeff(params, index), sign)


def gen_bessel_poly(n: int, alpha: int, beta) -> LaurentPoly:
    """Generalized Bessel polynomial with unit normalization:
    x**(-alpha) exp(beta/x) (d/dx)**n (x**(alpha+2n) exp(-beta/x))."""
    beta = to_scalar(beta)
    seed = ExpLaurent(LaurentPoly.monomial(1, alpha + 2 * n), _kernel(beta))
    return seed.diff_n(n).prefactor.shift(-alpha)


def y_poly(n: int, alpha, beta) -> LaurentPoly:
    """sum_k C(n,k) C(alpha+n+k-2, k) k! (x/beta)**k."""
    beta = to_scalar(beta)
    return LaurentPoly(
        (k, binomial(n, k) * binomial(alpha + n + k - 2, k) * math.factorial(k) / beta**k)
        for k in range(n + 1)
    )


def laguerre(n: int, a) -> LaurentPoly:
    """L_n^{(a)}(u) from the explicit sum, as a polynomial in u.

    C(n+a, n-k) is taken as a falling-factorial product, so negative integer
    ``a`` is allowed.
    """
    a = to_scalar(a)
    return LaurentPoly(
        (k, (-1) ** k * binomial(n + a, n - k) / math.factorial(k)) for k in range(n + 1)
    )


def laguerre_by_recurrence(n: int, a) -> LaurentPoly:
    """L_n^{(a)}(u) from the three-term recurrence (independent of :func:`laguerre`)."""
    a = to_scalar(a)
    u = LaurentPoly.monomial(1, 1)
    prev, cur = LaurentPoly.zero(), LaurentPoly.constant(1)
    for k in range(1, n + 1):
        nxt = ((2 * k - 1 + a - u) * cur - prev.scale(k - 1 + a)).scale(Fraction(1, k))
        prev, cur = cur, nxt
    return cur


def laguerre_form(params: FamilyParams, index: ModeIndex, strict: bool = True) -> LaurentPoly:
    """(-1)**n x**(l+q/2) n! L_n^{(-2l-1)}(beta/x); equals Bhat_{l,m}."""
    q, l, m = params.q, index.l, index.m
    if strict:
        validate_index(q, l, m)
    n = rodrigues_order(q, l, m)
    if not is_integral(n) or n < 0:
        raise NegativeOrder(f"n = {n} is not a non-negative integer")
    n = int(n)
    lag = laguerre(n, -2 * l - 1).substitute(params.beta, -1)
    return lag.scale((-1) ** n * math.factorial(n)).shift(l + Fraction(q, 2))


def _gamma_pair(q: int, l: Fraction, m: Fraction) -> int:
    half_q = Fraction(q, 2)
    return gamma_int(l - m + half_q + 1) * gamma_int(-l - m + half_q)


def norm_sq_coeff(params: FamilyParams, index: ModeIndex) -> Fraction:
    """a_{l,m}**2, exact."""
    q, l, m, beta = params.q, index.l, index.m, params.beta
    validate_index(q, l, m)
    power = -2 * l if l < 0 else -2 * l - 2
    return beta ** int(power) / _gamma_pair(q, l, m)


def sign_coeff(params: FamilyParams, index: ModeIndex) -> int:
    """Sign of a_{l,m}; raises SignUndefined when it is (-1)**(half-integer)."""
    q, l, m = params.q, index.l, index.m
    validate_index(q, l, m)
    half_q = Fraction(q, 2)
    return sign_power(half_q - m if l < 0 else -l - m + half_q - 1)


def leading_term(params: FamilyParams, index: ModeIndex) -> tuple[Fraction, Fraction]:
    """Highest power of x in Bhat_{l,m} and its coefficient, from the closed forms."""
    q, l, m, beta = params.q, index.l, index.m, params.beta
    validate_index(q, l, m)
    half_q = Fraction(q, 2)
    if l < 0:
        coeff = Fraction(sign_power(m - l - half_q) * gamma_int(-l - m + half_q), gamma_int(-2 * l))
        return l + half_q, coeff
    coeff = Fraction(
        sign_power(-m - l + half_q - 1) * beta ** int(2 * l + 1) * gamma_int(l - m + half_q + 1),
        gamma_int(2 * l + 2),
    )
    return -l + half_q - 1, coeff


@dataclass(frozen=True)
class ReflectionResult:
    """Outcome of comparing B_{-l-1,m} with beta (-1)**(l+1) B_{l,m}.

    ``ratio`` is rho with Bhat_{-l-1,m} = rho * Bhat_{l,m} (None if the two
    are not proportional).  ``sign_match`` is "ok", "failed" or "undefined".
    """

    proportional: bool
    ratio: Fraction | None
    squared_match: bool
    sign_match: str

    @property
    def ok(self) -> bool:
        return self.proportional and self.squared_match and self.sign_match != "failed"


def proportionality(f: LaurentPoly, g: LaurentPoly) -> Fraction | None:
    """rho with f == rho * g, or None.  g must be nonzero."""
    if g.is_zero():
        raise ValueError("reference polynomial is zero")
    if f.is_zero():
        return Fraction(0)
    e, c = g.top()
    rho = f.coeff(e) / c
    return rho if f == g.scale(rho) else None


def reflection_check(params: FamilyParams, l, m) -> ReflectionResult:
    l, m = half(l), half(m)
    if l < 0:
        raise ValueError("reflection_check takes l >= 0")
    pos, neg = ModeIndex(l, m), ModeIndex(-l - 1, m)
    b_pos, b_neg = rodrigues(params, pos), rodrigues(params, neg)
    if b_pos.poly.is_zero():
        raise AssertionError("Bhat_{l,m} vanished; its lowest term beta^n x^m cannot be zero")
    rho = proportionality(b_neg.poly, b_pos.poly)
    if rho is None:
        return ReflectionResult(False, None, False, "failed")
    beta = params.beta
    squared = rho * rho * b_neg.norm_sq / b_pos.norm_sq == beta * beta
    # a_{-l-1} rho == beta (-1)^(l+1) a_l, signs only (beta > 0)
    if b_pos.sign is None or b_neg.sign is None or not is_integral(l):
        sign = "undefined"
    else:
        lhs = b_neg.sign * (1 if rho > 0 else -1)
        sign = "ok" if lhs == sign_power(l + 1) * b_pos.sign else "failed"
    return ReflectionResult(True, rho, squared, sign)
