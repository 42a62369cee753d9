"""Exact arithmetic kernel.

Scalars are :class:`fractions.Fraction`.  Exponents of ``x`` live on the
half-integer lattice and are also carried as ``Fraction`` values whose
double is an integer (see :func:`half`).  Three value types are built on
top of that:

* :class:`LaurentPoly` -- finite sums ``sum c_e x^e`` with ``e`` in (1/2)Z,
* :class:`ExpLaurent` -- ``P(x) * exp(S(x))`` with ``P`` and ``S`` Laurent,
  closed under differentiation,
* :class:`TSeries` -- power series in an auxiliary variable truncated at a
  fixed order, with Laurent coefficients.

All three are immutable.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

from .errors import IrrationalValue, NonPositivePoint, NonzeroConstantTerm, OddPowerSurvives

Number = Union[int, Fraction]

__all__ = [
    "half",
    "is_integral",
    "to_scalar",
    "falling_factorial",
    "binomial",
    "LaurentPoly",
    "ExpLaurent",
    "TSeries",
]


def to_scalar(value) -> Fraction:
    """Coerce ints, Fractions and rational strings ("5/2", "-0.5") to Fraction."""
    if isinstance(value, float):
        raise TypeError("floats are not exact scalars; pass a Fraction or a string")
    return Fraction(value)


def half(value) -> Fraction:
    """Return ``value`` as a Fraction, insisting that it lies in (1/2)Z."""
    v = to_scalar(value)
    if (2 * v).denominator != 1:
        raise ValueError(f"{value!r} is not an integer or half-integer")
    return v


def is_integral(value: Fraction) -> bool:
    return Fraction(value).denominator == 1


def falling_factorial(z: Number, k: int) -> Fraction:
    """z (z-1) ... (z-k+1); equals 1 for k = 0."""
    out = Fraction(1)
    for i in range(k):
        out *= z - i
    return out


def binomial(z: Number, k: int) -> Fraction:
    """Generalized binomial coefficient C(z, k) for rational z and integer k >= 0.

    Uses the falling-factorial product, so negative upper arguments are fine:
    C(-1, 3) == -1.
    """
    if k < 0:
        return Fraction(0)
    return falling_factorial(Fraction(z), k) / math.factorial(k)


def _exact_sqrt(value: Fraction) -> Fraction:
    num, den = value.numerator, value.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn != num or rd * rd != den:
        raise IrrationalValue(f"sqrt({value}) is not rational")
    return Fraction(rn, rd)


def _format_exponent(e: Fraction) -> str:
    if e.denominator == 1:
        return str(e.numerator)
    return f"({e.numerator}/{e.denominator})"


class LaurentPoly:
    """Finite Laurent polynomial in ``x`` with rational coefficients.

    Exponents are restricted to (1/2)Z.  Zero coefficients are never stored,
    so ``==`` is structural equality of the normalized term maps.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping | Iterable[tuple] | None = None):
        items = terms.items() if isinstance(terms, Mapping) else (terms or ())
        acc: dict[Fraction, Fraction] = {}
        for e, c in items:
            e = half(e)
            acc[e] = acc.get(e, 0) + to_scalar(c)
        self._terms = {e: c for e, c in acc.items() if c != 0}
        self._hash = None

    # construction helpers
    @classmethod
    def _raw(cls, terms: dict) -> "LaurentPoly":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, coeff: Number = 1, exponent: Number = 0) -> "LaurentPoly":
        return cls({exponent: coeff})

    @classmethod
    def constant(cls, c: Number) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls._raw({})

    # inspection
    @property
    def terms(self) -> dict[Fraction, Fraction]:
        return dict(self._terms)

    def exponents(self) -> list[Fraction]:
        return sorted(self._terms, reverse=True)

    def coeff(self, exponent: Number) -> Fraction:
        return self._terms.get(Fraction(exponent), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def top(self) -> tuple[Fraction, Fraction]:
        """(exponent, coefficient) of the highest power."""
        e = max(self._terms)
        return e, self._terms[e]

    def bottom(self) -> tuple[Fraction, Fraction]:
        """(exponent, coefficient) of the lowest power."""
        e = min(self._terms)
        return e, self._terms[e]

    def __iter__(self) -> Iterator[tuple[Fraction, Fraction]]:
        for e in self.exponents():
            yield e, self._terms[e]

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    # ring operations
    @staticmethod
    def _coerce(other) -> "LaurentPoly | None":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.constant(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return LaurentPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, c: Number) -> "LaurentPoly":
        c = to_scalar(c)
        if c == 0:
            return LaurentPoly.zero()
        return LaurentPoly._raw({e: v * c for e, v in self._terms.items()})

    def shift(self, exponent: Number) -> "LaurentPoly":
        """Multiply by x**exponent."""
        d = half(exponent)
        return LaurentPoly._raw({e + d: c for e, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        out: dict[Fraction, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly._raw({e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / to_scalar(other))
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            if len(self._terms) != 1:
                raise ValueError("negative powers only exist for monomials")
            (e, c), = self._terms.items()
            return LaurentPoly._raw({e * k: Fraction(c) ** k})
        out = LaurentPoly.constant(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def diff(self) -> "LaurentPoly":
        return LaurentPoly._raw({e - 1: c * e for e, c in self._terms.items() if e != 0})

    def substitute(self, scale: Number, power: Number) -> "LaurentPoly":
        """Replace the variable by ``scale * x**power``.

        Used to turn a polynomial in ``u`` into a Laurent polynomial in ``x``
        via u = beta/x (``scale=beta, power=-1``).  Only integer exponents of
        the source variable are allowed.
        """
        scale, power = to_scalar(scale), half(power)
        out: dict[Fraction, Fraction] = {}
        for e, c in self._terms.items():
            if e.denominator != 1:
                raise ValueError("substitute() needs integer exponents")
            k = int(e)
            ne = half(power * k)
            out[ne] = out.get(ne, 0) + c * scale**k
        return LaurentPoly._raw({e: c for e, c in out.items() if c})

    # evaluation
    def evaluate(self, x0: Number) -> Fraction:
        """Exact value at a positive rational point."""
        x0 = to_scalar(x0)
        if x0 <= 0:
            raise NonPositivePoint(f"x0 = {x0} is not positive")
        root = None
        total = Fraction(0)
        for e, c in self._terms.items():
            if e.denominator == 1:
                total += c * x0 ** int(e)
            else:
                if root is None:
                    root = _exact_sqrt(x0)
                total += c * root ** int(2 * e)
        return total

    def evaluate_float(self, x0: float) -> float:
        x0 = float(x0)
        if not x0 > 0:
            raise NonPositivePoint(f"x0 = {x0} is not positive")
        return math.fsum(float(c) * x0 ** float(e) for e, c in self._terms.items())

    # comparison and rendering
    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for i, (e, c) in enumerate(self):
            mag = abs(c) if i else c
            body = str(mag) if e == 0 else f"{mag} * x^{_format_exponent(e)}"
            if i:
                parts.append(("- " if c < 0 else "+ ") + body)
            else:
                parts.append(body)
        return " ".join(parts)

    def __repr__(self):
        return f"LaurentPoly({self})"

    _TERM = re.compile(r"^(?P<c>-?\d+(?:/\d+)?)(?: \* x\^(?:(?P<i>-?\d+)|\((?P<h>-?\d+/2)\)))?$")

    @classmethod
    def parse(cls, text: str) -> "LaurentPoly":
        """Inverse of ``str()`` for the canonical rendering."""
        text = text.strip()
        if text == "0":
            return cls.zero()
        tokens = text.split(" ")
        chunks, sign, buf = [], 1, []
        for tok in tokens:
            if tok in ("+", "-") and buf:
                chunks.append((sign, " ".join(buf)))
                sign, buf = (1 if tok == "+" else -1), []
            else:
                buf.append(tok)
        chunks.append((sign, " ".join(buf)))
        terms = []
        for sign, chunk in chunks:
            m = cls._TERM.match(chunk)
            if not m:
                raise ValueError(f"cannot parse term {chunk!r}")
            e = Fraction(m["i"] or m["h"] or 0)
            terms.append((e, sign * Fraction(m["c"])))
        return cls(terms)


X = LaurentPoly.monomial(1, 1)


@dataclass(frozen=True)
class ExpLaurent:
    """``prefactor * exp(kernel_arg)``."""

    prefactor: LaurentPoly
    kernel_arg: LaurentPoly

    def diff(self) -> "ExpLaurent":
        p, s = self.prefactor, self.kernel_arg
        return ExpLaurent(p.diff() + p * s.diff(), s)

    def diff_n(self, n: int) -> "ExpLaurent":
        if n < 0:
            raise ValueError("derivative order must be non-negative")
        # S' is reused n times
        p, ds = self.prefactor, self.kernel_arg.diff()
        for _ in range(n):
            p = p.diff() + p * ds
        return ExpLaurent(p, self.kernel_arg)

    def __mul__(self, other: "ExpLaurent") -> "ExpLaurent":
        if not isinstance(other, ExpLaurent):
            return NotImplemented
        return ExpLaurent(self.prefactor * other.prefactor, self.kernel_arg + other.kernel_arg)

    def __add__(self, other: "ExpLaurent") -> "ExpLaurent":
        if not isinstance(other, ExpLaurent):
            return NotImplemented
        if other.kernel_arg != self.kernel_arg:
            raise ValueError("can only add terms sharing one exponential kernel")
        return ExpLaurent(self.prefactor + other.prefactor, self.kernel_arg)


def _as_poly(c) -> LaurentPoly:
    return c if isinstance(c, LaurentPoly) else LaurentPoly.constant(c)


class TSeries:
    """Power series sum_{j<=M} c_j t^j with Laurent-polynomial coefficients.

    ``order`` is M; there are always exactly M+1 stored coefficients.
    Binary operations require equal orders.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs: Iterable, order: int | None = None):
        cs = [_as_poly(c) for c in coeffs]
        if order is None:
            order = len(cs) - 1
        if order < 0:
            raise ValueError("order must be non-negative")
        cs = cs[: order + 1]
        cs += [LaurentPoly.zero()] * (order + 1 - len(cs))
        self.order = order
        self.coeffs = tuple(cs)

    @classmethod
    def variable(cls, order: int, coeff=1) -> "TSeries":
        """``coeff * t`` truncated at ``order``."""
        return cls([0, coeff], order)

    @classmethod
    def binpow(cls, e: int, order: int) -> "TSeries":
        """(1 + t)**e for any integer e, via the formal binomial series."""
        return cls([binomial(e, j) for j in range(order + 1)], order)

    def __getitem__(self, j: int) -> LaurentPoly:
        return self.coeffs[j]

    def __iter__(self):
        return iter(self.coeffs)

    def __len__(self):
        return self.order + 1

    def _check(self, other: "TSeries"):
        if other.order != self.order:
            raise ValueError(f"order mismatch: {self.order} vs {other.order}")

    def __add__(self, other):
        if not isinstance(other, TSeries):
            return NotImplemented
        self._check(other)
        return TSeries([a + b for a, b in zip(self.coeffs, other.coeffs)], self.order)

    def __neg__(self):
        return TSeries([-a for a in self.coeffs], self.order)

    def __sub__(self, other):
        if not isinstance(other, TSeries):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, LaurentPoly)):
            return TSeries([a * other for a in self.coeffs], self.order)
        if not isinstance(other, TSeries):
            return NotImplemented
        self._check(other)
        M = self.order
        out = []
        for j in range(M + 1):
            acc = LaurentPoly.zero()
            for i in range(j + 1):
                a, b = self.coeffs[i], other.coeffs[j - i]
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return TSeries(out, M)

    __rmul__ = __mul__

    def exp(self) -> "TSeries":
        """exp of a series with zero constant term.

        Uses n f_n = sum_{k=1..n} k a_k f_{n-k}, from f' = a' f.
        """
        if self.coeffs[0]:
            raise NonzeroConstantTerm("exp() needs a zero constant term")
        M = self.order
        f = [LaurentPoly.constant(1)]
        for n in range(1, M + 1):
            acc = LaurentPoly.zero()
            for k in range(1, n + 1):
                a = self.coeffs[k]
                if a and f[n - k]:
                    acc = acc + (a * f[n - k]).scale(k)
            f.append(acc.scale(Fraction(1, n)))
        return TSeries(f, M)

    def substitute_sign(self) -> "TSeries":
        """t -> -t."""
        return TSeries([c if j % 2 == 0 else -c for j, c in enumerate(self.coeffs)], self.order)

    def drop_first(self) -> "TSeries":
        """Divide by t; the constant term must vanish.  The order drops by one."""
        if self.coeffs[0]:
            raise NonzeroConstantTerm("cannot divide by t: constant term is nonzero")
        return TSeries(self.coeffs[1:], self.order - 1)

    def collapse_even(self, order: int | None = None) -> "TSeries":
        """Map s**(2m) -> t**m for a series in s with only even powers."""
        for j in range(1, self.order + 1, 2):
            if self.coeffs[j]:
                raise OddPowerSurvives(f"coefficient of s^{j} is {self.coeffs[j]}")
        if order is None:
            order = self.order // 2
        if 2 * order > self.order:
            raise ValueError(f"order {order} needs at least {2 * order} s-terms")
        return TSeries(self.coeffs[0 : 2 * order + 1 : 2], order)

    def __eq__(self, other):
        if not isinstance(other, TSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __repr__(self):
        body = ", ".join(str(c) for c in self.coeffs)
        return f"TSeries(order={self.order}, [{body}])"
