"""Command-line front-end.

Exit codes: 0 success, 1 verification failure, 2 parse error,
3 unsolvable ODE, 4 unsupported operation.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction

import numpy as np

from . import gateaux, linear_maps, nc_poly, parser, taylor_ode
from .algebra import AlgebraSpec, Element, format_element, format_rational, from_name
from .errors import NcqError, NotRealizable, ParseError, SemanticError, Truncated, UnsupportedOperation

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_PARSE = 2
EXIT_UNSOLVABLE = 3
EXIT_UNSUPPORTED = 4

DEFAULT_SEED = 20240601


class Report:
    """Collects output for one command in text and JSON form."""

    def __init__(self, alg: AlgebraSpec):
        self.alg = alg
        self.canonical = ""
        self.coordinates: list[list[str]] = []
        self.checks: list[dict] = []
        self.lines: list[str] = []

    def check(self, name: str, ok: bool, detail: str = ""):
        self.checks.append({"name": name, "pass": bool(ok), "detail": detail})

    @property
    def passed(self) -> bool:
        return all(c["pass"] for c in self.checks)

    def emit(self, as_json: bool):
        if as_json:
            doc = {
                "algebra": self.alg.name,
                "canonical": self.canonical,
                "coordinates": self.coordinates,
                "checks": self.checks,
            }
            print(json.dumps(doc, indent=2))
            return
        for line in self.lines:
            print(line)
        for c in self.checks:
            status = "ok  " if c["pass"] else "FAIL"
            print(f"[{status}] {c['name']}" + (f": {c['detail']}" if c["detail"] else ""))


def _matrix_lines(m) -> list[str]:
    cells = [[format_rational(Fraction(v)) for v in row] for row in m]
    width = max(len(c) for row in cells for c in row)
    return ["  " + " ".join(c.rjust(width) for c in row) for row in cells]


def _float_text(v: float) -> str:
    return repr(float(v))


# ---------------------------------------------------------------------------
# commands


def cmd_derive(args, alg: AlgebraSpec, report: Report) -> int:
    p = parser.parse_poly(args.expr, alg)
    if args.algorithm == "injections":
        d = gateaux.derive_by_injections(p, args.order)
    else:
        d = gateaux.derivative(p, args.order)
    text = nc_poly.format_poly(nc_poly.simplify(d.poly, alg), alg)
    report.canonical = text
    report.lines.append(text)
    form = nc_poly.expand(d.poly, alg)
    incs = [nc_poly.h_name(i) for i in range(1, d.order + 1) if nc_poly.h_name(i) in d.poly.variables()]
    witness = nc_poly.symmetry_witness(form, incs) if len(incs) > 1 else None
    report.check("symmetric in increments", witness is None, "" if witness is None else f"{witness[0][0]}<->{witness[0][1]}")
    if not p.h_vars():
        other = gateaux.derive_by_injections(p, args.order) if args.algorithm != "injections" else gateaux.derivative(p, args.order)
        report.check("product rule agrees with injection sum", nc_poly.expand(other.poly, alg) == form)
    return EXIT_OK if report.passed else EXIT_FAILED


def _point(text: str, alg: AlgebraSpec) -> Element:
    if "=" in text:
        name, _, text = text.partition("=")
        if name.strip() != "x":
            raise SemanticError(f"--at expects x=<literal>, got {name.strip()!r}=")
    return parser.parse_element(text, alg)


def cmd_jacobian(args, alg: AlgebraSpec, report: Report) -> int:
    p = parser.parse_poly(args.expr, alg)
    x0 = _point(args.at, alg)
    df = gateaux.derive(p)
    jac = gateaux.jacobian(df, x0, alg)
    report.canonical = nc_poly.format_poly(nc_poly.simplify(df.poly, alg), alg)
    report.coordinates = linear_maps.matrix_to_json(jac.matrix)
    report.lines.append(f"differential: {report.canonical}")
    report.lines.append(f"Jacobian at x = {format_element(x0, alg)} (row i = image of e_i):")
    report.lines += _matrix_lines(jac.matrix)
    try:
        std = linear_maps.coord_to_std(jac, alg)
    except NotRealizable as exc:
        report.check("standard components exist", False, f"residuals {[format_rational(r) for r in exc.residuals]}")
        return EXIT_FAILED
    report.lines.append("standard components f^{ij}:")
    report.lines += _matrix_lines(std.matrix)
    report.check(
        "standard components",
        linear_maps.std_to_coord(std, alg).matrix == jac.matrix,
        json.dumps(linear_maps.matrix_to_json(std.matrix)),
    )
    if linear_maps._is_quaternion(alg):
        report.checks += linear_maps.quaternion_relations_report(jac, std)
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_taylor(args, alg: AlgebraSpec, report: Report) -> int:
    f = parser.parse_poly(args.expr, alg)
    x0 = _point(args.at, alg)
    tp = taylor_ode.taylor_expand(f, x0, alg, args.degree)
    report.lines.append(f"Taylor polynomial at x0 = {format_element(x0, alg)}, h = x - x0:")
    for n, term in enumerate(tp.terms):
        report.lines.append(f"  term {n}: {nc_poly.format_poly(term, alg)}")
    assembled = tp.assembled(alg)
    report.canonical = nc_poly.format_poly(assembled, alg)
    report.lines.append(f"assembled: {report.canonical}")
    if tp.order >= f.degree("x"):
        report.check("reproduces the input", nc_poly.semantic_eq(assembled, f, alg))
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_solve_ode(args, alg: AlgebraSpec, report: Report) -> int:
    rhs = parser.parse_poly(args.rhs, alg)
    x0 = parser.parse_element(args.x0, alg)
    y0 = parser.parse_element(args.y0, alg)
    try:
        problem = taylor_ode.OdeProblem(rhs, x0, y0)
    except ValueError as exc:
        raise SemanticError(str(exc)) from None
    try:
        outcome = taylor_ode.solve_ode(problem, alg, args.max_order)
    except Truncated as exc:
        report.canonical = "truncated"
        report.lines.append(f"no polynomial solution found: {exc}")
        report.check("solution found", False, str(exc))
        return EXIT_UNSOLVABLE
    if outcome.solved:
        text = nc_poly.format_poly(outcome.polynomial, alg)
        report.canonical = f"y = {text}"
        report.lines.append(report.canonical)
        report.check("derivative matches right-hand side", True)
        return EXIT_OK
    w = outcome.witness
    swap = f"{w.transposition[0]}<->{w.transposition[1]}" if w.transposition else "none"
    report.canonical = f"unsolvable: order {w.order}"
    report.lines.append(f"unsolvable: {w.reason} at order {w.order} (transposition {swap})")
    report.lines.append("difference of coordinates:")
    report.lines += ["  " + line for line in str(w.difference).splitlines()]
    report.check("symmetric derivatives", False, f"order {w.order}, transposition {swap}")
    return EXIT_UNSOLVABLE


def cmd_exp(args, alg: AlgebraSpec, report: Report) -> int:
    q = _point(args.at, alg)
    value = taylor_ode.exp_series(q, args.terms, alg)
    labels = alg.basis_labels
    report.coordinates = [[_float_text(v) for v in value]]
    report.canonical = " ".join(f"{_float_text(v)}{'' if lab == '1' else '*' + lab}" for v, lab in zip(value, labels))
    report.lines.append(f"exp({format_element(q, alg)}) ~ {report.canonical}  ({args.terms} terms)")
    return EXIT_OK


def _parse_matrix(text: str) -> list[list[Fraction]]:
    rows = []
    for r, row in enumerate(text.split(";")):
        cells = []
        for c, cell in enumerate(row.split(",")):
            try:
                cells.append(Fraction(cell.strip()))
            except ValueError:
                raise ParseError(f"bad matrix entry {cell.strip()!r}", 1, 1) from None
        rows.append(cells)
    if any(len(r) != len(rows) for r in rows):
        raise ParseError("matrix must be square", 1, 1)
    return rows


def cmd_check_cr(args, alg: AlgebraSpec, report: Report) -> int:
    m = linear_maps.CoordMatrix(_parse_matrix(args.matrix))
    result = linear_maps.cauchy_riemann_check(m)
    res = [format_rational(r) for r in result.residuals]
    report.coordinates = linear_maps.matrix_to_json(m.matrix)
    report.canonical = "satisfied" if result.satisfied else "violated"
    report.lines.append(f"{report.canonical}, residuals ({', '.join(res)})")
    report.check("Cauchy-Riemann", result.satisfied, f"residuals ({', '.join(res)})")
    return EXIT_OK if result.satisfied else EXIT_FAILED


def _random_element(rng: random.Random, alg: AlgebraSpec, radius: float) -> Element:
    # coordinates in [-r/2, r/2] keep |x| <= radius for dim <= 4
    scale = Fraction(radius).limit_denominator(1000) / 2
    return Element(tuple(Fraction(rng.randint(-1000, 1000), 1000) * scale for _ in range(alg.dim)))


def cmd_verify_table(args, alg: AlgebraSpec, report: Report) -> int:
    rng = random.Random(args.seed)
    report.lines.append(f"seed {args.seed}, {args.points} points per entry, tolerance {args.tol:g}")
    for entry in gateaux.closed_form_table():
        worst = 0.0
        for _ in range(args.points):
            x = _random_element(rng, alg, 2.0)
            while entry.singular_at_zero and alg.abs_sq(x) < Fraction(1, 4):
                x = _random_element(rng, alg, 2.0)
            h = _random_element(rng, alg, 2.0)
            params = {name: _random_element(rng, alg, 2.0) for name in entry.params}
            exact = entry.exact_derivative(x, h, alg, **params)
            approx = gateaux.numeric_gateaux(entry.float_function(alg, **params), x, h)
            worst = max(worst, gateaux.relative_error(approx, exact))
        report.check(entry.name, worst <= args.tol, f"max relative error {worst:.3e}")
    report.canonical = "ok" if report.passed else "mismatch"
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_norm(args, alg: AlgebraSpec, report: Report) -> int:
    m = linear_maps.CoordMatrix(_parse_matrix(args.coord_matrix))
    value = linear_maps.map_norm(m, alg if len(m.matrix) == alg.dim else None)
    report.coordinates = linear_maps.matrix_to_json(m.matrix)
    report.canonical = _float_text(value)
    report.lines.append(f"norm = {report.canonical}")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--algebra",
        default=os.environ.get("NCQ_ALGEBRA", "quaternion"),
        help="complex, quaternion or efab:a,b (default: $NCQ_ALGEBRA or quaternion)",
    )
    common.add_argument("--json", action="store_true", help="print a JSON report")

    ap = argparse.ArgumentParser(prog="ncq", description="Calculus over division algebras.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("derive", parents=[common], help="Gateaux derivative of a polynomial")
    p.add_argument("--order", type=int, default=1)
    p.add_argument("--algorithm", choices=("product", "injections"), default="product")
    p.add_argument("expr")
    p.set_defaults(run=cmd_derive)

    p = sub.add_parser("jacobian", parents=[common], help="Jacobian and standard components of the differential")
    p.add_argument("--at", required=True, help='point, e.g. "x=1+2i"')
    p.add_argument("expr")
    p.set_defaults(run=cmd_jacobian)

    p = sub.add_parser("taylor", parents=[common], help="Taylor polynomial")
    p.add_argument("--at", required=True)
    p.add_argument("--degree", type=int, default=None)
    p.add_argument("expr")
    p.set_defaults(run=cmd_taylor)

    p = sub.add_parser("solve-ode", parents=[common], help="solve y'(x)(h) = rhs(x; h)")
    p.add_argument("--rhs", required=True)
    p.add_argument("--x0", default="0")
    p.add_argument("--y0", default="0")
    p.add_argument("--max-order", type=int, default=nc_poly.MAX_H)
    p.set_defaults(run=cmd_solve_ode)

    p = sub.add_parser("exp", parents=[common], help="truncated exponential series")
    p.add_argument("--terms", type=int, default=30)
    p.add_argument("--at", required=True)
    p.set_defaults(run=cmd_exp)

    p = sub.add_parser("check-cr", parents=[common], help="Cauchy-Riemann test of a 2x2 coordinate matrix")
    p.add_argument("--matrix", required=True, help='rows separated by ";", e.g. "0,1;-1,0"')
    p.set_defaults(run=cmd_check_cr)

    p = sub.add_parser("verify-table", parents=[common], help="check the derivative table numerically")
    p.add_argument("--points", type=int, default=100)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--tol", type=float, default=1e-6)
    p.set_defaults(run=cmd_verify_table)

    p = sub.add_parser("norm", parents=[common], help="operator norm of a coordinate matrix")
    p.add_argument("--coord-matrix", required=True)
    p.set_defaults(run=cmd_norm)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        alg = from_name(args.algebra)
    except (ValueError, NcqError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    report = Report(alg)
    try:
        code = args.run(args, alg, report)
    except (ParseError, SemanticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except UnsupportedOperation as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except NcqError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED
    report.emit(args.json)
    return code


if __name__ == "__main__":
    sys.exit(main())
