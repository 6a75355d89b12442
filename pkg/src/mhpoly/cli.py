"""Command line front end.

Exit status: 0 on success or a produced certificate, 2 when a strict
inequality fails (or a certificate is rejected), 1 on usage or data errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import catalog as cat
from . import minmodel, verify
from .parsing import ParseError
from .poly import RationalPoint, to_fraction
from .recheck import recheck

EXIT_OK, EXIT_ERROR, EXIT_FAILED = 0, 1, 2


class UsageError(Exception):
    pass


def _q(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _rational(text: str) -> Fraction:
    try:
        return to_fraction(text)
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _point(text: str) -> RationalPoint:
    try:
        return RationalPoint.parse(text)
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _rational_list(text: str) -> list[Fraction]:
    return [_rational(p) for p in text.split(",") if p.strip()]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--catalog", action="append", default=[], metavar="FILE",
                        help="register extra atoms from a catalog JSON file (repeatable)")

    parser = argparse.ArgumentParser(
        prog="mhpoly", description="Mixed Hodge polynomials of products and threshold certificates.")
    sub = parser.add_subparsers(dest="command", required=True)

    def space_cmd(name, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("--space", required=True, metavar="EXPR", help='e.g. "P1 x S3^2"')
        return p

    p = space_cmd("show", "print MH, MHpi, Poincare polynomials and Euler characteristics")
    p.add_argument("--convention", choices=("homology", "cohomology"), default="homology")
    p = space_cmd("eval", "evaluate MH and MHpi at a rational point")
    p.add_argument("--at", type=_point, required=True, metavar="t,u,v")
    space_cmd("hilali", "compare MHpi(1,1,1) with MH(1,1,1); exit 2 unless strictly smaller")
    space_cmd("euler", "compare chi_pi with chi")
    p = space_cmd("threshold-point", "minimal n0 at a point")
    p.add_argument("--at", type=_point, required=True, metavar="s,a,b")
    p = space_cmd("threshold-cube", "sound n0 on the cube [eps, r]^3")
    p.add_argument("--eps", type=_rational, required=True)
    p.add_argument("--r", type=_rational, required=True)
    p.add_argument("--depth", type=int, default=0, help="uniform refinement rounds")
    p = space_cmd("threshold-halfline", "n0 on [eps, oo) with u = v = 1")
    p.add_argument("--eps", type=_rational, required=True)
    p.add_argument("--depth", type=int, default=verify.DEFAULT_HALFLINE_DEPTH,
                   help="bisection depth limit on [eps, t*]")
    p = space_cmd("probe", "cube thresholds for a growing list of r (exploration only)")
    p.add_argument("--eps", type=_rational, required=True)
    p.add_argument("--r-list", type=_rational_list, required=True, metavar="R1,R2,...")
    p.add_argument("--depth", type=int, default=0)

    p = sub.add_parser("minmodel", parents=[common], help="minimal model of a presentation")
    p.add_argument("--presentation", required=True, metavar="FILE")
    p.add_argument("--cutoff", type=int, default=None)
    p.add_argument("--max-basis", type=int, default=minmodel.DEFAULT_MAX_BASIS)

    p = sub.add_parser("recheck", parents=[common], help="independently re-verify a certificate")
    p.add_argument("--certificate", required=True, metavar="FILE", help="certificate JSON, or - for stdin")
    return parser


# output


def _flatten(obj, prefix="") -> list[tuple[str, str]]:
    rows = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            rows += _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            rows += _flatten(v, f"{prefix}[{i}]")
    else:
        rows.append((prefix, "" if obj is None else json.dumps(obj) if isinstance(obj, bool) else str(obj)))
    return rows


def _emit(out, fmt: str, data: dict, text_lines: list[str]) -> None:
    if fmt == "json":
        out.write(json.dumps(data, indent=2, sort_keys=True) + "\n")
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        w.writerows(_flatten(data))
        out.write(buf.getvalue())
    else:
        out.write("\n".join(text_lines) + "\n")


def _space_info(X: cat.Space) -> dict:
    return {"space": str(X), "hodge_graded": X.hodge_graded, "notes": list(X.notes)}


def _cert_lines(c: dict) -> list[str]:
    lines = [f"variant: {c['variant']}", f"space: {c['space']}", f"n0: {c['n0']}",
             f"A_lo: {c['A_lo']}", f"B_hi: {c['B_hi']}", f"minimal: {str(c['minimal']).lower()}"]
    if c.get("base_check"):
        b = c["base_check"]
        lines.append(f"base check: {b['n']}*B = {b['lhs']} < A^{b['n']} = {b['rhs']}")
        i = c["induction_check"]
        lines.append(f"induction check (n={i['n']}): {i['lhs']} <= {i['rhs']}")
    if c.get("subdivision"):
        leaves = _count_leaves(c["subdivision"])
        lines.append(f"subdivision: {leaves} leaves")
    if c.get("tail"):
        t = c["tail"]
        lines.append(f"tail: t* = {t['t_star']}, {t['lhs']} < {t['rhs']}")
    if c.get("minimality_witness"):
        w = c["minimality_witness"]
        lines.append(f"fails at n={w['n']}: {w['lhs']} >= {w['rhs']} at ({', '.join(w['point'])})")
    for n in c.get("notes", []):
        lines.append(f"note: {n}")
    return lines


def _count_leaves(node) -> int:
    kids = node.get("children")
    return 1 if not kids else sum(_count_leaves(k) for k in kids)


def _load_catalog(paths) -> cat.Catalog:
    registry = cat.Catalog()
    for p in paths:
        registry.register(cat.load_catalog(Path(p).read_bytes()))
    return registry


def _cmd_show(args, X, out) -> int:
    P, Ppi = cat.poincare(X), cat.poincare_pi(X)
    data = {**_space_info(X), "mh": X.mh.to_records(), "mh_pi": X.mh_pi.to_records(),
            "poincare": [str(c) for c in P.coeffs], "poincare_pi": [str(c) for c in Ppi.coeffs],
            "euler": cat.euler(X), "euler_pi": cat.euler_pi(X)}
    conv = args.convention
    lines = [f"space: {X}", f"MH: {X.mh.format(conv)}", f"MHpi: {X.mh_pi.format(conv)}",
             f"P: {P}", f"Ppi: {Ppi}", f"chi: {data['euler']}", f"chi_pi: {data['euler_pi']}"]
    if not X.hodge_graded:
        lines.append("warning: t-specialization only; (a, b) exponents are placeholders")
    _emit(out, args.format, data, lines)
    return EXIT_OK


def _cmd_eval(args, X, out) -> int:
    pt = args.at
    if not X.hodge_graded and (pt.u != 1 or pt.v != 1):
        raise verify.HodgeDataError(f"{X} has no Hodge-graded data; use u = v = 1")
    a, b = X.mh(*pt), X.mh_pi(*pt)
    data = {**_space_info(X), "at": [_q(x) for x in pt], "mh": _q(a), "mh_pi": _q(b),
            "margin": _q(a - b)}
    _emit(out, args.format, data, [f"MH = {a}", f"MHpi = {b}", f"margin = {a - b}"])
    return EXIT_OK


def _comparison(args, cmp: verify.Comparison, X, out) -> int:
    data = {**_space_info(X), "left": _q(cmp.left), "right": _q(cmp.right),
            "relation": cmp.relation, "label": cmp.label, "strict": cmp.strict}
    _emit(out, args.format, data, [str(cmp)])
    return EXIT_OK if cmp.strict else EXIT_FAILED


def _cmd_minmodel(args, out) -> int:
    pres = minmodel.CohomologyPresentation.from_json(Path(args.presentation).read_bytes())
    mm = minmodel.build_minimal_model(pres, args.cutoff, max_basis=args.max_basis)
    report = minmodel.check_quasi_iso(mm, pres, mm.cutoff)
    dd, minimal = minmodel.check_dd_zero(mm), minmodel.check_minimality(mm)
    data = mm.to_json()
    data["checks"] = {"d_squared_zero": dd, "minimal": minimal, "quasi_iso": report.ok,
                      "first_mismatch": report.first_mismatch}
    lines = [f"cutoff: {mm.cutoff}"]
    for g in mm.generators:
        lines.append(f"{g.name} (degree {g.degree}): d = {mm.format_differential(g.index)}")
    ranks = minmodel.homotopy_ranks(mm)
    lines.append("homotopy ranks: " + (", ".join(f"{k}:{v}" for k, v in ranks.items()) or "none"))
    lines.append(f"checks: d^2 = 0 {dd}, minimal {minimal}, quasi-iso {report.ok}")
    _emit(out, args.format, data, lines)
    return EXIT_OK if dd and minimal and report.ok else EXIT_FAILED


def _cmd_recheck(args, out) -> int:
    raw = sys.stdin.read() if args.certificate == "-" else Path(args.certificate).read_text()
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise UsageError(f"certificate is not valid JSON: {exc}") from exc
    docs = doc["certificates"] if isinstance(doc, dict) and "certificates" in doc else [doc]
    results = [recheck(d) for d in docs]
    data = {"accepted": all(results),
            "results": [{"variant": r.variant, "n0": r.n0, "ok": r.ok, "errors": r.errors,
                         "leaves_checked": r.leaves_checked} for r in results]}
    lines = [f"{r.variant} n0={r.n0}: {'accepted' if r.ok else 'REJECTED ' + '; '.join(r.errors)}"
             for r in results]
    _emit(out, args.format, data, lines)
    return EXIT_OK if data["accepted"] else EXIT_FAILED


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    try:
        if args.command == "minmodel":
            return _cmd_minmodel(args, out)
        if args.command == "recheck":
            return _cmd_recheck(args, out)
        registry = _load_catalog(args.catalog)
        X = registry.parse(args.space)
        if args.command == "show":
            return _cmd_show(args, X, out)
        if args.command == "eval":
            return _cmd_eval(args, X, out)
        if args.command == "hilali":
            return _comparison(args, verify.hilali(X), X, out)
        if args.command == "euler":
            return _comparison(args, verify.euler_compare(X), X, out)
        if args.command == "threshold-point":
            cert = verify.point_threshold(X, args.at)
        elif args.command == "threshold-cube":
            cert = verify.cube_threshold(X, args.eps, args.r, args.depth)
        elif args.command == "threshold-halfline":
            cert = verify.halfline_threshold(X, args.eps, depth=args.depth)
        elif args.command == "probe":
            report = verify.conjecture_probe(X, args.eps, args.r_list, args.depth)
            data = report.to_json()
            lines = [report.label] + [f"r = {_q(c.region_hi.t)}: n0 = {c.n0}" for c in report.certificates]
            _emit(out, args.format, data, lines)
            return EXIT_OK
        else:  # pragma: no cover - argparse restricts choices
            raise UsageError(f"unknown command {args.command}")
        data = cert.to_json()
        _emit(out, args.format, data, _cert_lines(data))
        return EXIT_OK
    except ParseError as exc:
        err.write(f"error: {exc}\n{exc.pointer()}\n")
        return EXIT_ERROR
    except (UsageError, ValueError, verify.CertificationError, minmodel.BasisTooLarge,
            OSError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
