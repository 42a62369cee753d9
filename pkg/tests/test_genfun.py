import json
import math
from fractions import Fraction as F

import pytest
import sympy as sp

from abessel.algebra import LaurentPoly, TSeries
from abessel.core import FamilyParams, ModeIndex, laguerre_form, rodrigues_poly
from abessel.errors import OddPowerSurvives
from abessel.genfun import (
    KINDS,
    ComparisonReport,
    GenFunKind,
    _diag_pieces,
    closed_form,
    compare,
    member_index,
    series_from_family,
)

from .conftest import X, from_sympy

T, S, Z = sp.symbols("t s z")
mono = LaurentPoly.monomial


def rat(v):
    return sp.Rational(v.numerator, v.denominator)


def sympy_coeffs(expr, var, count):
    """First ``count`` Taylor coefficients of expr in var as LaurentPolys in x."""
    ser = sp.series(expr, var, 0, count).removeO()
    return [from_sympy(sp.simplify(ser.coeff(var, j))) for j in range(count)]


class TestKinds:
    def test_labels(self):
        assert GenFunKind("fixed-l", -1).label == "l"
        assert GenFunKind("diag-odd", 2).label == "k"

    @pytest.mark.parametrize("bad", [("fixed-L", 0), ("diag-odd", -1), ("antidiag-even", F(1, 2))])
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            GenFunKind(*bad)

    def test_member_indices(self):
        assert member_index(GenFunKind("fixed-l", -1), 2, 3) == (-1, -3)
        assert member_index(GenFunKind("diag-odd", 1), 6, 2) == (0, -1)
        assert member_index(GenFunKind("diag-even", 0), 4, 1) == (1, 0)
        assert member_index(GenFunKind("antidiag-odd", 2), 3, 1) == (1, F(-5, 2))
        assert member_index(GenFunKind("antidiag-even", 2), 3, 1) == (0, F(-5, 2))

    @pytest.mark.parametrize("variant", KINDS)
    def test_members_form_a_line(self, variant):
        kind = GenFunKind(variant, 1)
        pts = [member_index(kind, 4, j) for j in range(4)]
        steps = {(b[0] - a[0], b[1] - a[1]) for a, b in zip(pts, pts[1:])}
        assert len(steps) == 1


class TestExamples:
    def test_fixed_l_family(self):
        ser = series_from_family(GenFunKind("fixed-l", -1), FamilyParams(2, 1), 1)
        assert ser[0] == LaurentPoly.constant(1)
        assert ser[1] == mono(1, -1) - 2

    @pytest.mark.parametrize("q", [1, 2, 5, 6])
    def test_leading_coefficients(self, q):
        beta = F(7, 3)
        p = FamilyParams(q, beta)
        hq = F(q, 2)
        assert series_from_family(GenFunKind("diag-odd", 0), p, 0)[0] == mono(1, hq - 1)
        assert series_from_family(GenFunKind("diag-even", 0), p, 0)[0] == mono(beta, hq - 1)
        assert closed_form(GenFunKind("diag-odd", 0), p, 0)[0] == mono(1, hq - 1)
        assert closed_form(GenFunKind("diag-even", 0), p, 0)[0] == mono(beta, hq - 1)
        assert closed_form(GenFunKind("antidiag-odd", 0), p, 0)[0] == mono(beta, hq - 1)
        assert closed_form(GenFunKind("fixed-l", -1), p, 0)[0] == mono(1, hq - 1)

    def test_fixed_l_full_order(self):
        rep = compare(GenFunKind("fixed-l", -1), FamilyParams(2, 1), 12)
        assert rep.equal_up_to == 13 and rep.ok

    def test_diag_odd_full_order(self):
        assert compare(GenFunKind("diag-odd", 1), FamilyParams(6, 2), 10).equal_up_to == 11

    def test_negative_control(self):
        p = FamilyParams(2, 1)
        wrong = closed_form(GenFunKind("fixed-l", 0), p, 8)
        rep = compare(GenFunKind("fixed-l", -1), p, 8, rhs=wrong)
        assert rep.equal_up_to in (0, 1) and not rep.ok


class TestSympyOracles:
    @pytest.mark.parametrize("q,l,beta", [(2, -1, F(1)), (4, 1, F(2)), (3, F(-3, 2), F(5, 2)), (6, -2, F(1, 3))])
    def test_fixed_l(self, q, l, beta):
        M = 6
        expr = (1 + T) ** (2 * rat(F(l))) * X ** (rat(F(l)) + sp.Rational(q, 2)) * sp.exp(rat(beta) * T / (X * (1 + T)))
        want = sympy_coeffs(expr, T, M + 1)
        got = closed_form(GenFunKind("fixed-l", l), FamilyParams(q, beta), M)
        assert list(got) == want

    @pytest.mark.parametrize("q,k,beta", [(2, 0, F(1)), (6, 1, F(2)), (3, 2, F(5, 2))])
    def test_diag_odd(self, q, k, beta):
        M = 4
        r = sp.sqrt(X)
        b = rat(beta)
        expr = sp.Rational(1, 2) * X ** (sp.Rational(q, 2) - k - 1) * (
            (1 - S * r) ** (2 * k + 1) * sp.exp(b * S / r) + (1 + S * r) ** (2 * k + 1) * sp.exp(-b * S / r))
        s_coeffs = sympy_coeffs(expr, S, 2 * M + 2)
        assert all(c.is_zero() for c in s_coeffs[1::2])
        got = closed_form(GenFunKind("diag-odd", k), FamilyParams(q, beta), M)
        assert list(got) == s_coeffs[0::2][: M + 1]

    @pytest.mark.parametrize("q,k,beta", [(2, 0, F(1)), (4, 1, F(2)), (5, 2, F(3, 2))])
    def test_diag_even(self, q, k, beta):
        M = 4
        r = sp.sqrt(X)
        b = rat(beta)
        expr = X ** (sp.Rational(q, 2) - k) / (2 * r * S) * (
            (1 - S * r) ** (2 * k) * sp.exp(b * S / r) - (1 + S * r) ** (2 * k) * sp.exp(-b * S / r))
        s_coeffs = sympy_coeffs(expr, S, 2 * M + 2)
        assert all(c.is_zero() for c in s_coeffs[1::2])
        got = closed_form(GenFunKind("diag-even", k), FamilyParams(q, beta), M)
        assert list(got) == s_coeffs[0::2][: M + 1]

    @pytest.mark.parametrize("variant", ["antidiag-odd", "antidiag-even"])
    @pytest.mark.parametrize("q,k,beta", [(2, 0, F(1)), (4, 1, F(2)), (3, 2, F(1, 2))])
    def test_antidiag(self, variant, q, k, beta):
        M = 4
        odd = variant == "antidiag-odd"
        n, base = (2 * k + 1, 2 * k) if odd else (2 * k, 2 * k - 2)
        b = rat(beta)
        deriv = sp.diff(Z ** base * sp.exp(T * X / Z**2 - b / Z), Z, n)
        expr = X ** (sp.Rational(q, 2) + k + 1) * sp.exp(b / X) * deriv.subs(Z, X)
        want = sympy_coeffs(sp.simplify(expr), T, M + 1)
        got = closed_form(GenFunKind(variant, k), FamilyParams(q, beta), M)
        assert list(got) == want


class TestStructure:
    @pytest.mark.parametrize("power", [0, 1, 2, 5])
    def test_diag_parity(self, power):
        a, b = _diag_pieces(power, F(3, 2), 9)
        assert all((a + b)[j].is_zero() for j in range(1, 10, 2))
        assert all((a - b)[j].is_zero() for j in range(0, 10, 2))

    def test_collapse_rejects_odd_power(self):
        with pytest.raises(OddPowerSurvives):
            TSeries([1, 1, 0], 2).collapse_even(1)

    @pytest.mark.parametrize("q,l", [(2, -1), (2, 0), (4, 1), (3, F(1, 2)), (5, F(-5, 2)), (6, 2)])
    def test_taylor_self_consistency(self, q, l):
        beta = F(5, 2)
        cf = closed_form(GenFunKind("fixed-l", l), FamilyParams(q, beta), 8)
        for j in range(9):
            assert cf[j].scale(math.factorial(j)) == rodrigues_poly(q, beta, l, l - j + F(q, 2))

    @pytest.mark.parametrize("q,l", [(2, -1), (4, 1), (3, F(-3, 2)), (6, -2)])
    def test_laguerre_bridge(self, q, l):
        p = FamilyParams(q, F(2))
        cf = closed_form(GenFunKind("fixed-l", l), p, 8)
        for j in range(9):
            lag = laguerre_form(p, ModeIndex(l, l - j + F(q, 2)), strict=False)
            assert cf[j].scale(math.factorial(j)) == lag

    @pytest.mark.parametrize("variant", KINDS)
    @pytest.mark.parametrize("q", [1, 2, 3, 6])
    def test_all_kinds_agree(self, variant, q):
        values = [-2, 0, 1] if variant == "fixed-l" else [0, 1, 3]
        if variant == "fixed-l" and q % 2:
            values = [F(-3, 2), F(1, 2)]
        for v in values:
            for beta in (F(1), F(5, 2)):
                assert compare(GenFunKind(variant, v), FamilyParams(q, beta), 8).ok


class TestReport:
    def test_pass_json(self):
        rep = compare(GenFunKind("diag-even", 1), FamilyParams(4, F(5, 2)), 5)
        d = rep.to_dict()
        assert d == {"kind": "diag-even", "q": 4, "l_or_k": "1", "beta": "5/2", "order": 5,
                     "equal_up_to": 6, "status": "pass"}
        assert json.loads(json.dumps(d)) == d

    def test_fail_json(self):
        p = FamilyParams(2, 1)
        rep = compare(GenFunKind("fixed-l", -1), p, 4, rhs=closed_form(GenFunKind("fixed-l", 0), p, 4))
        d = rep.to_dict()
        assert d["status"] == "fail"
        assert set(d["first_mismatch"]) == {"power", "lhs", "rhs"}
        assert LaurentPoly.parse(d["first_mismatch"]["lhs"]) == rep.lhs

    def test_bound(self):
        rep = ComparisonReport(GenFunKind("fixed-l", 0), FamilyParams(2, 1), 3, 4)
        assert rep.ok and rep.equal_up_to <= rep.order + 1
