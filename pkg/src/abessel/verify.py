"""Parameter sweeps that run every identity check and collect reports.

Each ``check_*`` function returns a :class:`VerifyReport` whose details hold
one record per case.  Negative controls inject a known defect so that a
vacuous pass would be caught.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .algebra import ExpLaurent, LaurentPoly, is_integral
from .core import (
    FamilyParams,
    ModeIndex,
    gen_bessel_poly,
    laguerre,
    laguerre_by_recurrence,
    laguerre_form,
    leading_term,
    reflection_check,
    rodrigues,
    valid_indices,
    validate_index,
    y_poly,
)
from .errors import DivergentMoment, InvalidIndex
from .genfun import KINDS, GenFunKind, closed_form, compare
from .operators import (
    ANNIHILATION_FAMILIES,
    annihilation_check,
    apply_gen_ode,
    apply_ode,
    laddering_check,
    ode_coefficients,
    shape_invariance_check,
)
from .orthogonality import MomentTable, inner_product, norm_formula

CHECKS = (
    "ode",
    "gen-ode",
    "laguerre",
    "leading",
    "power-rule",
    "orthogonality",
    "shape",
    "ladder",
    "annihilation",
    "reflection",
    "genfun",
)
NEGATIVE_CONTROLS = ("ode", "genfun", "weight")

PASS, FAIL, DEGRADED = "pass", "fail", "degraded"


def default_order() -> int:
    return int(os.environ.get("ABESSEL_DEFAULT_ORDER", "12"))


@dataclass
class Sweep:
    """Finite parameter window for a verification run."""

    qs: tuple[int, ...] = tuple(range(1, 9))
    betas: tuple[Fraction, ...] = (Fraction(1), Fraction(2), Fraction(5, 2))
    m_window: int = 6
    l: Fraction | None = None
    m: Fraction | None = None
    order: int = field(default_factory=default_order)
    ks: tuple[int, ...] = (0, 1, 2, 3)
    fixed_ls: tuple[Fraction, ...] | None = None
    kinds: tuple[str, ...] = KINDS
    gen_ns: tuple[int, ...] = tuple(range(9))
    gen_alphas: tuple[int, ...] = tuple(range(-12, 3))
    reflection_ls: tuple[int, ...] = (0, 1, 2, 3)
    power_ls: tuple[int, ...] = tuple(range(9))

    def indices(self, q: int) -> list[tuple[Fraction, Fraction]]:
        return [
            (l, m)
            for l, m in valid_indices(q, self.m_window)
            if (self.l is None or l == self.l) and (self.m is None or m == self.m)
        ]

    def fixed_l_values(self, q: int) -> list[Fraction]:
        if self.fixed_ls is not None:
            return [Fraction(v) for v in self.fixed_ls if q % 2 or is_integral(v)]
        vals = [Fraction(v) for v in range(-4, 3)]
        if q % 2:
            vals += [Fraction(2 * v + 1, 2) for v in range(-4, 3)]
        return sorted(vals)

    def describe(self) -> dict:
        return {
            "q": list(self.qs),
            "beta": [str(b) for b in self.betas],
            "m_window": self.m_window,
            "l": None if self.l is None else str(self.l),
            "m": None if self.m is None else str(self.m),
            "order": self.order,
            "k": list(self.ks),
        }


@dataclass
class VerifyReport:
    check_name: str
    parameters: dict
    details: list[dict] = field(default_factory=list)

    @property
    def counts(self) -> dict:
        out = {PASS: 0, DEGRADED: 0, FAIL: 0}
        for rec in self.details:
            out[rec["status"]] += 1
        return out

    @property
    def status(self) -> str:
        c = self.counts
        if c[FAIL]:
            return FAIL
        return DEGRADED if c[DEGRADED] else PASS

    def failures(self) -> list[dict]:
        return [rec for rec in self.details if rec["status"] == FAIL]

    def add(self, case: dict, status: str, **extra) -> None:
        rec = {"case": case, "status": status}
        rec.update(extra)
        self.details.append(rec)

    def to_dict(self) -> dict:
        return {
            "check": self.check_name,
            "parameters": self.parameters,
            "status": self.status,
            "counts": self.counts,
            "details": self.details,
        }

    def to_json(self) -> str:
        return dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "VerifyReport":
        return cls(data["check"], data["parameters"], list(data["details"]))

    def summary_line(self) -> str:
        c = self.counts
        return f"{self.check_name:<14} {self.status.upper():<9} pass={c[PASS]} degraded={c[DEGRADED]} fail={c[FAIL]}"


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False)


def _case(q, beta, **kw) -> dict:
    out = {"q": q, "beta": str(beta)}
    out.update({k: str(v) if isinstance(v, Fraction) else v for k, v in kw.items()})
    return out


def _ok(flag: bool) -> str:
    return PASS if flag else FAIL


# individual checks


def check_ode(sweep: Sweep, perturb: bool = False) -> VerifyReport:
    """The Rodrigues functions solve the associated Bessel equation."""
    rep = VerifyReport("ode", sweep.describe())
    for q in sweep.qs:
        for beta in sweep.betas:
            params = FamilyParams(q, beta)
            for l, m in sweep.indices(q):
                index = ModeIndex(l, m)
                f = rodrigues(params, index).poly
                res = apply_ode(params, index, f)
                if perturb:
                    res = res - f  # constant coefficient shifted by one
                # l -> -l-1 leaves the operator unchanged
                mirrored = ode_coefficients(params, ModeIndex(-l - 1, m)) == ode_coefficients(params, index)
                rep.add(_case(q, beta, l=l, m=m), _ok(res.is_zero() and mirrored), residual=str(res))
    return rep


def check_gen_ode(sweep: Sweep) -> VerifyReport:
    rep = VerifyReport("gen-ode", sweep.describe())
    for beta in sweep.betas:
        for alpha in sweep.gen_alphas:
            for n in sweep.gen_ns:
                f = gen_bessel_poly(n, alpha, beta)
                ok = apply_gen_ode(alpha, beta, f) == f.scale(n * (n + alpha + 1))
                rep.add({"n": n, "alpha": alpha, "beta": str(beta)}, _ok(ok))
    return rep


def _y_from_laguerre(n: int, alpha: int, beta: Fraction) -> LaurentPoly:
    lag = laguerre(n, 1 - alpha - 2 * n).substitute(beta, -1)
    return lag * LaurentPoly.monomial(Fraction(-1) ** n / beta**n, n) * math.factorial(n)


def check_laguerre(sweep: Sweep) -> VerifyReport:
    """Representation bridges between Rodrigues, y_n and Laguerre forms."""
    rep = VerifyReport("laguerre", sweep.describe())
    for beta in sweep.betas:
        for alpha in sweep.gen_alphas:
            for n in sweep.gen_ns:
                case = {"n": n, "alpha": alpha, "beta": str(beta)}
                bridge1 = gen_bessel_poly(n, alpha, beta) == y_poly(n, alpha + 2, beta).scale(beta**n)
                bridge3 = y_poly(n, alpha, beta) == _y_from_laguerre(n, alpha, beta)
                a = 1 - alpha - 2 * n
                recur = laguerre(n, a) == laguerre_by_recurrence(n, a)
                rep.add(case, _ok(bridge1 and bridge3 and recur), gen_vs_y=bridge1, y_vs_laguerre=bridge3, recurrence=recur)
    for q in sweep.qs:
        for beta in sweep.betas:
            params = FamilyParams(q, beta)
            for l, m in sweep.indices(q):
                index = ModeIndex(l, m)
                f = rodrigues(params, index).poly
                n = int(l - m + Fraction(q, 2))
                lag = f == laguerre_form(params, index)
                gen = f == gen_bessel_poly(n, int(2 * m - q), beta).shift(m)
                rep.add(_case(q, beta, l=l, m=m), _ok(lag and gen), rodrigues_vs_laguerre=lag, rodrigues_vs_gen_bessel=gen)
    return rep


def check_leading(sweep: Sweep) -> VerifyReport:
    rep = VerifyReport("leading", sweep.describe())
    for q in sweep.qs:
        for beta in sweep.betas:
            params = FamilyParams(q, beta)
            for l, m in sweep.indices(q):
                index = ModeIndex(l, m)
                b = rodrigues(params, index)
                top_ok = b.poly.top() == leading_term(params, index)
                bottom_ok = b.poly.bottom() == (m, beta**b.order)
                rep.add(_case(q, beta, l=l, m=m), _ok(top_ok and bottom_ok), top=top_ok, bottom=bottom_ok)
    return rep


def check_power_rule(sweep: Sweep) -> VerifyReport:
    """(d/dx)^(2l+1) (x^(2l) e^(-beta/x)) = beta^(2l+1) x^(-2l-2) e^(-beta/x)."""
    rep = VerifyReport("power-rule", sweep.describe())
    for beta in sweep.betas:
        kernel = LaurentPoly.monomial(-beta, -1)
        for l in sweep.power_ls:
            out = ExpLaurent(LaurentPoly.monomial(1, 2 * l), kernel).diff_n(2 * l + 1)
            ok = out.prefactor == LaurentPoly.monomial(beta ** (2 * l + 1), -2 * l - 2) and out.kernel_arg == kernel
            rep.add({"l": l, "beta": str(beta)}, _ok(ok))
    return rep


def check_orthogonality(sweep: Sweep, perturb: bool = False) -> VerifyReport:
    """Gram matrices per (q, beta, m) and sign class of l.

    ``perturb`` integrates against x^(-q-1) instead of x^(-q).
    """
    rep = VerifyReport("orthogonality", sweep.describe())
    for q in sweep.qs:
        weight_q = q + 1 if perturb else q
        for beta in sweep.betas:
            params = FamilyParams(q, beta)
            table = MomentTable(beta)
            by_m: dict[Fraction, list[Fraction]] = {}
            for l, m in sweep.indices(q):
                by_m.setdefault(m, []).append(l)
            for m, ls in by_m.items():
                polys = {l: rodrigues(params, ModeIndex(l, m)).poly for l in ls}
                for i, l1 in enumerate(ls):
                    for l2 in ls[i:]:
                        case = _case(q, beta, m=m, l1=l1, l2=l2)
                        same_class = (l1 < 0) == (l2 < 0)
                        try:
                            value = inner_product(polys[l1], polys[l2], weight_q, beta, table)
                        except DivergentMoment:
                            value = None
                        if l1 == l2:
                            try:
                                expected = norm_formula(q, beta, l1, m)
                            except DivergentMoment:
                                expected = None
                            # l = -1/2: integral and closed form are both infinite
                            rep.add(case, _ok(value == expected), kind="diagonal",
                                    value=str(value), expected=str(expected))
                        elif l1 + l2 != -1:
                            kind = "off-diagonal" if same_class else "cross-class"
                            rep.add(case, _ok(value == 0), kind=kind, value=str(value))
                        else:
                            # dependent pair: Cauchy-Schwarz with equality
                            n1 = inner_product(polys[l1], polys[l1], weight_q, beta, table)
                            n2 = inner_product(polys[l2], polys[l2], weight_q, beta, table)
                            rep.add(case, _ok(value * value == n1 * n2), kind="dependent-pair", value=str(value))
    return rep


def check_shape(sweep: Sweep) -> VerifyReport:
    rep = VerifyReport("shape", sweep.describe())
    for q in sweep.qs:
        for beta in sweep.betas:
            params = FamilyParams(q, beta)
            for l, m in sweep.indices(q):
                for axis in ("l", "m"):
                    if axis == "l" and l == 0:
                        continue
                    lower = (l - 1, m) if axis == "l" else (l, m - 1)
                    try:
                        validate_index(q, *lower)
                    except InvalidIndex:
                        continue
                    ok = shape_invariance_check(axis, params, ModeIndex(l, m))
                    rep.add(_case(q, beta, l=l, m=m, axis=axis), _ok(ok))
    return rep


def check_ladder(sweep: Sweep) -> VerifyReport:
    """Laddering equations with the closed-form normalization coefficients."""
    rep = VerifyReport("ladder", sweep.describe())
    for q in sweep.qs:
        for beta in sweep.betas:
            params = FamilyParams(q, beta)
            for l, m in sweep.indices(q):
                for axis in ("l", "m"):
                    if axis == "l" and l == 0:
                        continue
                    for direction in ("-", "+"):
                        case = _case(q, beta, l=l, m=m, axis=axis, direction=direction)
                        try:
                            res = laddering_check(axis, params, ModeIndex(l, m), direction)
                        except InvalidIndex:
                            continue  # raising from a source that does not exist
                        status = DEGRADED if res.degraded else _ok(res.ok)
                        rep.add(case, status, proportional=res.proportional_to_target,
                                ratio=None if res.ratio is None else str(res.ratio),
                                eigenvalue=str(res.eigenvalue), squared_match=res.squared_match,
                                sign_match=res.sign_match)
    return rep


def _annihilation_cases(q: int, sweep: Sweep) -> Iterable[tuple[str, Fraction]]:
    ms = sorted({m for _, m in valid_indices(q, sweep.m_window)})
    for m in ms:
        yield "l_bottom", m
        yield "l_top", m
    half_q = Fraction(q, 2)
    for l, m in valid_indices(q, sweep.m_window):
        if m == l + half_q:
            yield "m_top_left_line", l
        if m == half_q - l - 1:
            yield "m_top_right_line", l


def check_annihilation(sweep: Sweep) -> VerifyReport:
    rep = VerifyReport("annihilation", sweep.describe())
    for q in sweep.qs:
        for beta in sweep.betas:
            params = FamilyParams(q, beta)
            for which, free in _annihilation_cases(q, sweep):
                assert which in ANNIHILATION_FAMILIES
                rep.add(_case(q, beta, family=which, free=free), _ok(annihilation_check(which, params, free)))
    return rep


def check_reflection(sweep: Sweep) -> VerifyReport:
    rep = VerifyReport("reflection", sweep.describe())
    for q in sweep.qs:
        for beta in sweep.betas:
            params = FamilyParams(q, beta)
            ms = sorted({m for _, m in sweep.indices(q)})
            candidates = [Fraction(l) for l in sweep.reflection_ls]
            if q % 2:
                candidates += [l + Fraction(1, 2) for l in candidates]
            for m in ms:
                for l in candidates:
                    try:
                        validate_index(q, l, m)
                        validate_index(q, -l - 1, m)
                    except InvalidIndex:
                        continue
                    res = reflection_check(params, l, m)
                    status = DEGRADED if res.ok and res.sign_match == "undefined" else _ok(res.ok)
                    rep.add(_case(q, beta, l=l, m=m), status, ratio=str(res.ratio),
                            squared_match=res.squared_match, sign_match=res.sign_match)
    return rep


def genfun_kinds(sweep: Sweep, q: int) -> list[GenFunKind]:
    out = []
    for variant in sweep.kinds:
        if variant == "fixed-l":
            out += [GenFunKind(variant, l) for l in sweep.fixed_l_values(q)]
        else:
            out += [GenFunKind(variant, k) for k in sweep.ks]
    return out


def check_genfun(sweep: Sweep, perturb: bool = False) -> VerifyReport:
    """Family sums against closed forms.

    ``perturb`` compares each fixed-l family with the closed form for l+1.
    """
    rep = VerifyReport("genfun", sweep.describe())
    for q in sweep.qs:
        for beta in sweep.betas:
            params = FamilyParams(q, beta)
            for kind in genfun_kinds(sweep, q):
                rhs = None
                if perturb:
                    if kind.variant != "fixed-l":
                        continue
                    rhs = closed_form(GenFunKind("fixed-l", kind.value + 1), params, sweep.order)
                res = compare(kind, params, sweep.order, rhs=rhs)
                d = res.to_dict()
                rep.add(_case(q, beta, kind=kind.variant, l_or_k=kind.value), d.pop("status"),
                        **{k: v for k, v in d.items() if k in ("order", "equal_up_to", "first_mismatch")})
    return rep


RUNNERS: dict[str, Callable[..., VerifyReport]] = {
    "ode": check_ode,
    "gen-ode": check_gen_ode,
    "laguerre": check_laguerre,
    "leading": check_leading,
    "power-rule": check_power_rule,
    "orthogonality": check_orthogonality,
    "shape": check_shape,
    "ladder": check_ladder,
    "annihilation": check_annihilation,
    "reflection": check_reflection,
    "genfun": check_genfun,
}

_PERTURBED = {"ode": "ode", "genfun": "genfun", "weight": "orthogonality"}


def run(check: str, sweep: Sweep, negative_control: str | None = None) -> list[VerifyReport]:
    """Run one check (or ``all``) and return the reports in a fixed order."""
    if negative_control is not None:
        if negative_control not in _PERTURBED:
            raise ValueError(f"unknown negative control {negative_control!r}")
        target = _PERTURBED[negative_control]
        if check not in (target, "all"):
            raise ValueError(f"negative control {negative_control!r} applies to check {target!r}")
        return [RUNNERS[target](sweep, perturb=True)]
    names = CHECKS if check == "all" else (check,)
    if any(name not in RUNNERS for name in names):
        raise ValueError(f"unknown check {check!r}")
    return [RUNNERS[name](sweep) for name in names]


def exit_code(reports: list[VerifyReport], strict: bool = False) -> int:
    statuses = {r.status for r in reports}
    if FAIL in statuses or (strict and DEGRADED in statuses):
        return 1
    return 0
