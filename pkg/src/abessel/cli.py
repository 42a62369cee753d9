"""Command-line front end.

    abessel show    --q 2 --l 0 --m -1 --beta 1
    abessel table   --q 2 --l 0 --m -1 --beta 1 --x-from 0.5 --x-to 4 --points 8
    abessel genfun  --kind diag-odd --q 6 --k 1 --beta 2 --order 10
    abessel verify  --check all [--strict] [--format json]

Exit codes: 0 pass, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction

from .algebra import half
from .core import FamilyParams, ModeIndex, leading_term, rodrigues
from .errors import AbesselError, InvalidIndex
from .genfun import KINDS, GenFunKind, closed_form, compare, series_from_family
from .verify import CHECKS, NEGATIVE_CONTROLS, Sweep, default_order, dumps, exit_code, run

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _halfint(text: str) -> Fraction:
    try:
        return half(_rational(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer or half-integer: {text!r}") from None


def _list_of(convert):
    def parse(text: str):
        return tuple(convert(part) for part in text.split(",") if part.strip())

    return parse


def _params(args) -> FamilyParams:
    try:
        return FamilyParams(args.q, args.beta)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def _label(params: FamilyParams, index: ModeIndex) -> str:
    return f"B(q={params.q};beta={params.beta};l={index.l};m={index.m})"


def cmd_show(args, out) -> int:
    params = _params(args)
    index = ModeIndex(args.l, args.m)
    b = rodrigues(params, index)
    if args.format == "json":
        top, bottom = b.poly.top(), b.poly.bottom()
        out.write(dumps({
            "q": params.q, "beta": str(params.beta), "l": str(index.l), "m": str(index.m),
            "poly": str(b.poly), "order": b.order,
            "leading": [str(top[0]), str(top[1])], "trailing": [str(bottom[0]), str(bottom[1])],
            "norm_sq": str(b.norm_sq), "sign": b.sign,
        }) + "\n")
        return EXIT_OK
    top, bottom = b.poly.top(), b.poly.bottom()
    expected_top = leading_term(params, index)
    out.write(f"{b.poly}\n")
    out.write(f"# {_label(params, index)}, unnormalized (a = 1)\n")
    out.write(f"# rodrigues order n = {b.order}\n")
    out.write(f"# leading term: {top[1]} * x^{top[0]} (closed form {expected_top[1]} * x^{expected_top[0]})\n")
    out.write(f"# trailing term: {bottom[1]} * x^{bottom[0]}\n")
    out.write(f"# norm_sq (a^2) = {b.norm_sq}\n")
    out.write(f"# sign(a) = {'undefined' if b.sign is None else f'{b.sign:+d}'}\n")
    return EXIT_OK


def cmd_table(args, out) -> int:
    if not (0 < args.x_from < args.x_to):
        raise UsageError("need 0 < x-from < x-to")
    if args.points < 2:
        raise UsageError("need at least 2 points")
    params = _params(args)
    index = ModeIndex(args.l, args.m)
    b = rodrigues(params, index)
    if b.sign is not None:
        scale, mode = b.sign * math.sqrt(b.norm_sq), "normalized"
    else:
        scale, mode = 1.0, "unnormalized"
    step = (args.x_to - args.x_from) / (args.points - 1)
    xs = [args.x_from + i * step for i in range(args.points)]
    rows = [(x, scale * b.poly.evaluate_float(x)) for x in xs]
    name = _label(params, index)
    if args.format == "json":
        out.write(dumps({"function": name, "normalization": mode,
                         "rows": [{"x": x, "value": v} for x, v in rows]}) + "\n")
        return EXIT_OK
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["x", f"{name}[{mode}]"])
    for x, v in rows:
        writer.writerow([_fmt(x), _fmt(v)])
    out.write(buf.getvalue())
    return EXIT_OK


def cmd_genfun(args, out) -> int:
    params = _params(args)
    if args.kind == "fixed-l":
        if args.l is None:
            raise UsageError("--kind fixed-l needs --l")
        kind = GenFunKind(args.kind, args.l)
    else:
        if args.k is None:
            raise UsageError(f"--kind {args.kind} needs --k")
        kind = GenFunKind(args.kind, args.k)
    order = args.order if args.order is not None else default_order()
    report = compare(kind, params, order)
    if args.format == "json":
        out.write(dumps(report.to_dict()) + "\n")
    else:
        lhs = series_from_family(kind, params, order)
        rhs = closed_form(kind, params, order)
        for j in range(order + 1):
            mark = "==" if lhs[j] == rhs[j] else "!="
            out.write(f"t^{j}: {lhs[j]}  {mark}  {rhs[j]}\n")
        out.write(f"# {kind.variant} {kind.label}={kind.value} q={params.q} beta={params.beta}: "
                  f"equal_up_to={report.equal_up_to} of {order + 1}\n")
    return EXIT_OK if report.ok else EXIT_FAIL


def _sweep(args) -> Sweep:
    kw = {}
    if args.q is not None:
        kw["qs"] = args.q
    if args.beta is not None:
        kw["betas"] = args.beta
    if args.order is not None:
        kw["order"] = args.order
    if args.k is not None:
        kw["ks"] = args.k
    if args.kind is not None:
        kw["kinds"] = (args.kind,)
    if args.l is not None:
        kw["fixed_ls"] = (args.l,)
    if any(q < 1 for q in kw.get("qs", ())) or any(b <= 0 for b in kw.get("betas", ())):
        raise UsageError("q must be >= 1 and beta > 0")
    return Sweep(l=args.l, m=args.m, m_window=args.m_window, **kw)


def cmd_verify(args, out) -> int:
    sweep = _sweep(args)
    try:
        reports = run(args.check, sweep, negative_control=args.negative_control)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    code = exit_code(reports, strict=args.strict)
    if args.format == "json":
        payload = [r.to_dict() for r in reports]
        out.write(dumps(payload if len(payload) > 1 else payload[0]) + "\n")
        return code
    for r in reports:
        out.write(r.summary_line() + "\n")
        for rec in r.details:
            if rec["status"] == "fail" or (args.strict and rec["status"] == "degraded"):
                out.write(f"  {rec['status']}: {json.dumps(rec, ensure_ascii=False)}\n")
    if any(r.status == "degraded" for r in reports) and not args.strict:
        out.write("# warning: some sign checks are undefined ((-1) to a half-integer power); "
                  "magnitudes were verified instead\n")
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="abessel", description="Exact associated Bessel functions and identity checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    def index_flags(p, required=True):
        p.add_argument("--q", type=int, required=required)
        p.add_argument("--l", type=_halfint, required=required)
        p.add_argument("--m", type=_halfint, required=required)
        p.add_argument("--beta", type=_rational, required=required)

    p = sub.add_parser("show", help="print the exact Laurent form of one function")
    index_flags(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_show)

    p = sub.add_parser("table", help="binary64 values on a uniform grid")
    index_flags(p)
    p.add_argument("--x-from", type=float, default=0.5)
    p.add_argument("--x-to", type=float, default=5.0)
    p.add_argument("--points", type=int, default=10)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("genfun", help="compare one generating function with its family")
    p.add_argument("--kind", choices=KINDS, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--l", type=_halfint)
    p.add_argument("--k", type=int)
    p.add_argument("--beta", type=_rational, required=True)
    p.add_argument("--order", type=int)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_genfun)

    p = sub.add_parser("verify", help="run identity checks over a parameter sweep")
    p.add_argument("--check", choices=CHECKS + ("all",), default="all")
    p.add_argument("--q", type=_list_of(int), help="comma-separated, default 1..8")
    p.add_argument("--beta", type=_list_of(_rational), help="comma-separated, default 1,2,5/2")
    p.add_argument("--l", type=_halfint, help="restrict to one l (also the fixed-l genfun label)")
    p.add_argument("--m", type=_halfint, help="restrict to one m")
    p.add_argument("--k", type=_list_of(int), help="genfun k values, default 0..3")
    p.add_argument("--kind", choices=KINDS, help="restrict genfun to one kind")
    p.add_argument("--order", type=int, help="truncation order (default $ABESSEL_DEFAULT_ORDER or 12)")
    p.add_argument("--m-window", type=int, default=6, help="keep m >= q/2 - WINDOW")
    p.add_argument("--strict", action="store_true", help="treat undefined-sign cases as failures")
    p.add_argument("--negative-control", choices=NEGATIVE_CONTROLS,
                   help="inject a known defect; the run must then fail")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args, out)
    except (UsageError, InvalidIndex) as exc:
        print(f"abessel: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AbesselError as exc:
        print(f"abessel: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
