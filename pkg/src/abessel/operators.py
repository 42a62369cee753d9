"""Differential operators, ladder operators and their verification.

Every check here runs on unnormalized Rodrigues polynomials.  Normalization
enters only through exact squared coefficients and signs, so no square
roots are ever formed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import LaurentPoly, half, to_scalar
from .core import (
    FamilyParams,
    ModeIndex,
    proportionality,
    rodrigues,
    rodrigues_order,
    validate_index,
)
from .errors import InvalidIndex, OutOfRange, ZeroLSingularity

__all__ = [
    "ode_coefficients",
    "apply_ode",
    "apply_gen_ode",
    "ladder_l_apply",
    "ladder_m_apply",
    "eigen_E",
    "eigen_calE",
    "shape_invariance_check",
    "LadderResult",
    "laddering_check",
    "annihilation_check",
    "ANNIHILATION_FAMILIES",
]

_X = LaurentPoly.monomial(1, 1)


def _direction(d) -> int:
    if d in (1, "+"):
        return 1
    if d in (-1, "-"):
        return -1
    raise ValueError(f"direction must be '+' or '-', got {d!r}")


def ode_coefficients(params: FamilyParams, index: ModeIndex) -> tuple[LaurentPoly, LaurentPoly, LaurentPoly]:
    """Coefficients (of f'', f', f) of the associated Bessel equation."""
    q, beta, l, m = params.q, params.beta, index.l, index.m
    half_q = Fraction(q, 2)
    c2 = LaurentPoly.monomial(1, 2)
    c1 = LaurentPoly({1: 2 - q, 0: beta})
    c0 = -LaurentPoly({0: (l + half_q) * (l - half_q + 1), -1: m * beta})
    return c2, c1, c0


def apply_ode(params: FamilyParams, index: ModeIndex, f: LaurentPoly) -> LaurentPoly:
    """x^2 f'' + ((2-q)x + beta) f' - ((l+q/2)(l-q/2+1) + m beta/x) f."""
    c2, c1, c0 = ode_coefficients(params, index)
    df = f.diff()
    return c2 * df.diff() + c1 * df + c0 * f


def apply_gen_ode(alpha, beta, f: LaurentPoly) -> LaurentPoly:
    """x^2 f'' + ((alpha+2)x + beta) f', the generalized Bessel operator."""
    alpha, beta = to_scalar(alpha), to_scalar(beta)
    df = f.diff()
    return df.diff().shift(2) + LaurentPoly({1: alpha + 2, 0: beta}) * df


def ladder_l_apply(direction, params: FamilyParams, l, m, f: LaurentPoly) -> LaurentPoly:
    """A^{+-}_{l,m} f = +-x^2 f' + (l -+ q/2) x f +- (l +- m -+ q/2) beta/(2l) f."""
    s = _direction(direction)
    l, m = half(l), half(m)
    if l == 0:
        raise ZeroLSingularity("A^{+-}_{l,m} is singular at l = 0")
    half_q = Fraction(params.q, 2)
    const = (l + s * m - s * half_q) * params.beta / (2 * l)
    return f.diff().shift(2).scale(s) + f.shift(1).scale(l - s * half_q) + f.scale(s * const)


def ladder_m_apply(direction, params: FamilyParams, m, f: LaurentPoly) -> LaurentPoly:
    """A^+_m = x d/dx - m + 1;  A^-_m = -x d/dx - beta/x - m + q."""
    s = _direction(direction)
    m = half(m)
    xdf = f.diff().shift(1)
    if s > 0:
        return xdf + f.scale(1 - m)
    return -xdf - f.shift(-1).scale(params.beta) + f.scale(params.q - m)


def eigen_E(params: FamilyParams, l, m) -> Fraction:
    l, m = half(l), half(m)
    if l == 0:
        raise ZeroLSingularity("E_{l,m} divides by l^2")
    half_q = Fraction(params.q, 2)
    return (l - m + half_q) * (-l - m + half_q) * params.beta**2 / (4 * l * l)


def eigen_calE(q: int, l, m) -> Fraction:
    l, m = half(l), half(m)
    half_q = Fraction(q, 2)
    return (half_q - l - m) * (l - m + half_q + 1)


def _partner(params: FamilyParams, axis: str, index: ModeIndex) -> ModeIndex:
    if axis == "l":
        partner = ModeIndex(index.l - 1, index.m)
    elif axis == "m":
        partner = ModeIndex(index.l, index.m - 1)
    else:
        raise ValueError(f"axis must be 'l' or 'm', got {axis!r}")
    return partner


def shape_invariance_check(axis: str, params: FamilyParams, index: ModeIndex) -> bool:
    """Both factorized eigen-equations on (l, m) and its lower neighbour.

    axis 'l':  A+_{l,m} A-_{l,m} B_{l,m} = E B_{l,m},  A-_{l,m} A+_{l,m} B_{l-1,m} = E B_{l-1,m}
    axis 'm':  A+_m A-_m B_{l,m} = calE B_{l,m},        A-_m A+_m B_{l,m-1} = calE B_{l,m-1}

    The partner must be a valid index (OutOfRange otherwise).
    """
    partner = _partner(params, axis, index)
    try:
        validate_index(params.q, partner.l, partner.m)
    except InvalidIndex as exc:
        raise OutOfRange(f"partner {partner} is not a valid index: {exc}") from None
    f = rodrigues(params, index).poly
    g = rodrigues(params, partner).poly
    l, m = index.l, index.m
    if axis == "l":
        ev = eigen_E(params, l, m)
        up = lambda h: ladder_l_apply("+", params, l, m, h)
        down = lambda h: ladder_l_apply("-", params, l, m, h)
    else:
        ev = eigen_calE(params.q, l, m)
        up = lambda h: ladder_m_apply("+", params, m, h)
        down = lambda h: ladder_m_apply("-", params, m, h)
    return up(down(f)) == f.scale(ev) and down(up(g)) == g.scale(ev)


@dataclass(frozen=True)
class LadderResult:
    """One laddering equation, A (a_src Bhat_src) = sqrt(ev) a_tgt Bhat_tgt.

    ``ratio`` is rho with A Bhat_src = rho Bhat_tgt.  When the target index
    does not exist (n < 0) the equation can only hold as an annihilation,
    which needs ev == 0 and a zero image.
    """

    image: LaurentPoly
    proportional_to_target: bool
    ratio: Fraction | None
    squared_match: bool
    sign_match: str
    eigenvalue: Fraction

    @property
    def ok(self) -> bool:
        return self.proportional_to_target and self.squared_match and self.sign_match != "failed"

    @property
    def degraded(self) -> bool:
        return self.ok and self.sign_match == "undefined"


def laddering_check(axis: str, params: FamilyParams, index: ModeIndex, direction="-") -> LadderResult:
    """Check one of the laddering equations attached to (l, m).

    Lowering maps (l, m) to its lower neighbour on the axis; raising maps the
    lower neighbour back to (l, m).  Both use the operator and eigenvalue
    labelled by (l, m).
    """
    s = _direction(direction)
    partner = _partner(params, axis, index)
    l, m = index.l, index.m
    if axis == "l":
        ev = eigen_E(params, l, m)
        op = lambda h: ladder_l_apply(s, params, l, m, h)
    else:
        ev = eigen_calE(params.q, l, m)
        op = lambda h: ladder_m_apply(s, params, m, h)
    source, target = (index, partner) if s < 0 else (partner, index)

    src = rodrigues(params, source)
    image = op(src.poly)
    try:
        tgt = rodrigues(params, target)
    except InvalidIndex:
        if rodrigues_order(params.q, target.l, target.m) >= 0:
            raise
        # no target function: only the annihilation reading makes sense
        ok = image.is_zero() and ev == 0
        return LadderResult(image, ok, Fraction(0) if ok else None, ok, "ok" if ok else "failed", ev)

    rho = proportionality(image, tgt.poly)
    if rho is None:
        return LadderResult(image, False, None, False, "failed", ev)
    squared = rho * rho * src.norm_sq == ev * tgt.norm_sq
    if ev == 0 or rho == 0:
        sign = "ok" if rho == 0 and ev == 0 else "failed"
    elif src.sign is None or tgt.sign is None:
        sign = "undefined"
    else:
        sign = "ok" if src.sign * (1 if rho > 0 else -1) == tgt.sign else "failed"
    return LadderResult(image, True, rho, squared, sign, ev)


ANNIHILATION_FAMILIES = ("l_bottom", "l_top", "m_top_left_line", "m_top_right_line")


def annihilation_check(which: str, params: FamilyParams, free) -> bool:
    """Boundary annihilations of the index grid.

    l_bottom          A-_{m-q/2, m} B_{m-q/2, m} = 0                (free = m)
    l_top             A+_{q/2-m, m} B_{q/2-m-1, m} = 0              (free = m)
    m_top_left_line   A+_{l+q/2+1} B_{l, l+q/2} = 0                 (free = l)
    m_top_right_line  A+_{q/2-l} B_{l, q/2-l-1} = 0                 (free = l)
    """
    half_q = Fraction(params.q, 2)
    v = half(free)
    if which == "l_bottom":
        l, m = v - half_q, v
        img = ladder_l_apply("-", params, l, m, rodrigues(params, ModeIndex(l, m)).poly)
    elif which == "l_top":
        m = v
        f = rodrigues(params, ModeIndex(half_q - m - 1, m)).poly
        img = ladder_l_apply("+", params, half_q - m, m, f)
    elif which == "m_top_left_line":
        l, m = v, v + half_q
        img = ladder_m_apply("+", params, l + half_q + 1, rodrigues(params, ModeIndex(l, m)).poly)
    elif which == "m_top_right_line":
        l, m = v, half_q - v - 1
        img = ladder_m_apply("+", params, half_q - l, rodrigues(params, ModeIndex(l, m)).poly)
    else:
        raise ValueError(f"unknown annihilation family {which!r}")
    return img.is_zero()
