"""Command-line front end.

Exit codes: 0 success, 1 other error, 2 non-invertible constant term,
3 Neumann inconclusive, 4 parse error, 5 verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .algebra import Algebra, ScalarKind
from .errors import NeumannNotContractive, NotInvertibleConstantTerm, ParseError
from .fileformat import encode_value, load_series, parse_semigroup, parse_weight, series_to_json
from .invert import METHODS, VERIFY_TOL, invert, verify_inverse
from .margin import DEFAULT_BUDGET, DEFAULT_GRID, DEFAULT_J_MAX, DEFAULT_T_MAX, halfplane_margin, polydisc_margin
from .semigroup import OrdinaryIndexSet
from .series import DirichletSeries, HalfPlanePoint
from .weights import Weight, check_admissible, check_submultiplicative

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_INVERTIBLE = 2
EXIT_NEUMANN = 3
EXIT_PARSE = 4
EXIT_VERIFY = 5


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _json_arg(text: str, what: str):
    """Inline JSON, or a path to a JSON file."""
    try:
        if text.lstrip().startswith(("{", "[")):
            return json.loads(text)
        return json.loads(Path(text).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read {what}: {exc}") from exc


def _weight(args, series, file_weight):
    if args.weight:
        return parse_weight(_json_arg(args.weight, "--weight"), series.index_set)
    if file_weight is not None:
        return file_weight
    return Weight.trivial("multiplicative" if series.index_set.kind == "ordinary" else "additive")


def _fmt_number(x: float) -> str:
    if x == round(x) and abs(x) < 1e15:
        return str(int(round(x)))
    return f"{x:.10g}"


def _fmt_complex(z: complex) -> str:
    z = complex(z)
    if z.imag == 0:
        return _fmt_number(z.real)
    return f"{_fmt_number(z.real)}{'+' if z.imag >= 0 else '-'}{_fmt_number(abs(z.imag))}i"


def _fmt_value(data, algebra: Algebra) -> str:
    enc = encode_value(np.asarray(data), algebra)
    return json.dumps(enc) if (algebra.is_matrix or algebra.scalar is not ScalarKind.COMPLEX) else _fmt_complex(complex(data))


def _series_table(series: DirichletSeries) -> list[str]:
    lines = []
    for idx, c in series.items():
        lines.append(f"{str(idx):>8}  {_fmt_value(c.data, series.algebra)}")
    return lines


def _emit(args, report: dict, table_lines: list[str]):
    if args.format == "json":
        text = json.dumps(report, indent=1)
    else:
        text = "\n".join(table_lines)
    if args.output and not report.get("_series_written"):
        Path(args.output).write_text(text + "\n")
    else:
        print(text)


def _write_series(args, series: DirichletSeries, weight=None) -> bool:
    if args.output:
        Path(args.output).write_text(json.dumps(series_to_json(series, weight), indent=1) + "\n")
        return True
    return False


# -- commands ------------------------------------------------------------------------


def cmd_eval(args):
    f, _ = load_series(args.file)
    try:
        j, t = (float(x) for x in args.at.split(","))
    except ValueError:
        raise ParseError(f"--at expects 'j,t', got {args.at!r}") from None
    value = f.evaluate(HalfPlanePoint(j, t))
    report = {"at": [j, t], "value": encode_value(value.data, f.algebra), "indicator": value.indicator()}
    _emit(args, report, [f"f({j}+{t}i) = {_fmt_value(value.data, f.algebra)}", f"indicator = {value.indicator():.12g}"])


def cmd_norm(args):
    f, fw = load_series(args.file)
    w = _weight(args, f, fw)
    n = f.weighted_norm(w)
    _emit(args, {"weight": w.to_json(), "norm": n}, [f"weighted norm ({w.kind}) = {n:.17g}"])


def cmd_convolve(args):
    f, fw = load_series(args.a)
    g, _ = load_series(args.b)
    h = f.convolve(g)
    written = _write_series(args, h, fw)
    report = {"series": series_to_json(h, fw), "_series_written": written}
    lines = [f"wrote {args.output}"] if written else _series_table(h)
    if written:
        print(lines[0])
        return
    report.pop("_series_written")
    _emit(args, report, lines)


def cmd_invert(args):
    f, fw = load_series(args.file)
    weight = _weight(args, f, fw) if args.method == "neumann" else fw
    g, cert = invert(f, args.method, weight=weight, tol=args.tol)
    written = _write_series(args, g, fw)
    report = {"certificate": cert.to_json()}
    lines = [
        f"method        {cert.method}",
        f"residualLeft  {cert.residual_left:.3e}",
        f"residualRight {cert.residual_right:.3e}",
    ]
    if cert.ratio is not None:
        lines += [f"ratio r       {cert.ratio:.12g}", f"normBound     {cert.norm_bound:.12g}"]
    if written:
        lines.append(f"wrote {args.output}")
        print("\n".join(lines) if args.format == "table" else json.dumps(report, indent=1))
    else:
        report["series"] = series_to_json(g, fw)
        _emit(args, report, lines + ["inverse:"] + _series_table(g))
    if not cert.passed:
        raise CliError(f"inverse failed verification at tol {args.tol:g}", EXIT_VERIFY)


def cmd_verify(args):
    f, _ = load_series(args.a)
    g, _ = load_series(args.b)
    cert = verify_inverse(f, g, args.tol)
    _emit(
        args,
        cert.to_json(),
        [
            f"residualLeft  {cert.residual_left:.3e}",
            f"residualRight {cert.residual_right:.3e}",
            f"{'PASS' if cert.passed else 'FAIL'} at tol {args.tol:g}",
        ],
    )
    if not cert.passed:
        raise CliError("verification failed", EXIT_VERIFY)


def _grid(text: str):
    try:
        if "x" in text:
            a, b = text.lower().split("x")
            return int(a), int(b)
        n = int(text)
        return n, n
    except ValueError:
        raise ParseError(f"--grid expects 'NJxNT' or 'N', got {text!r}") from None


def cmd_margin(args):
    f, _ = load_series(args.file)
    if args.mode == "halfplane":
        rep = halfplane_margin(f, j_max=args.jmax, t_max=args.tmax, grid=_grid(args.grid), seed=args.seed)
    else:
        rep = polydisc_margin(f, sample_budget=args.budget, seed=args.seed)
    doc = rep.to_json()
    lines = [
        f"mode     {rep.mode}",
        f"min      {rep.min_value:.12g}   (upper bound on the infimum)",
        f"argmin   {json.dumps(doc['argmin'])}",
        f"samples  {rep.samples}",
    ]
    _emit(args, doc, lines)


def cmd_weights_check(args):
    if args.file:
        f, fw = load_series(args.file)
        index_set = f.index_set
    else:
        if not args.semigroup:
            raise ParseError("weights check needs a series file or --semigroup")
        index_set = parse_semigroup(_json_arg(args.semigroup, "--semigroup"))
        fw = None
    if args.weight:
        w = parse_weight(_json_arg(args.weight, "--weight"), index_set)
    elif fw is not None:
        w = fw
    else:
        raise ParseError("no weight given (use --weight or a series file with a weight)")
    sub = check_submultiplicative(w, index_set, args.samples, args.seed)
    samples = [e for e in index_set.elements if e != index_set.unit][:8] or [index_set.unit]
    adm = check_admissible(w, samples, args.depth)
    doc = {
        "weight": w.to_json(),
        "submultiplicative": {"passed": sub.passed, "worstRatio": sub.worst, "witness": [str(x) for x in sub.witness]},
        "admissible": {"passed": adm.passed, "worstEstimate": adm.worst, "witness": str(adm.witness)},
    }
    lines = [
        f"weight            {json.dumps(w.to_json())}",
        f"submultiplicative {'PASS' if sub.passed else 'FAIL'}  worst ratio {sub.worst:.12g} at {sub.witness}",
        f"admissible        {'PASS' if adm.passed else 'FAIL'}  worst estimate {adm.worst:.12g} at {adm.witness}",
    ]
    _emit(args, doc, lines)


def mobius_sieve(n: int) -> list[int]:
    """mu(1..n) by a linear sieve."""
    mu = [1] * (n + 1)
    is_comp = [False] * (n + 1)
    primes = []
    for i in range(2, n + 1):
        if not is_comp[i]:
            primes.append(i)
            mu[i] = -1
        for p in primes:
            if i * p > n:
                break
            is_comp[i * p] = True
            if i % p == 0:
                mu[i * p] = 0
                break
            mu[i * p] = -mu[i]
    return mu[1:]


def cmd_demo(args):
    if args.name != "mobius":
        raise ParseError(f"unknown demo {args.name!r}")
    N = args.n
    C = Algebra(ScalarKind.COMPLEX)
    ones = DirichletSeries(OrdinaryIndexSet(N), C, np.ones(N, dtype=complex))
    inv, cert = invert(ones, "recursion")
    mu = mobius_sieve(N)
    b = [float(inv.coeffs[k].real) for k in range(N)]
    rows = [f"{'n':>4} {'a_n':>4} {'mu(n)':>6}"]
    rows += [f"{n:>4} {1:>4} {_fmt_number(b[n - 1]):>6}" for n in range(1, N + 1)]
    agree = all(abs(b[k] - mu[k]) <= 1e-12 for k in range(N))
    rows.append(f"matches sieve: {agree}")
    _emit(args, {"N": N, "inverse": b, "mobius": mu, "agree": agree}, rows)
    if not agree:
        raise CliError("Moebius check failed", EXIT_VERIFY)


# -- parser ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "json"), default="table")
    common.add_argument("--output", help="write the result (series or report) here")

    p = argparse.ArgumentParser(prog="vdirichlet", description="Truncated vector-valued Dirichlet series toolkit")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eval", parents=[common], help="evaluate f(s)")
    s.add_argument("file")
    s.add_argument("--at", required=True, help="'j,t' for s = j + i t")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("norm", parents=[common], help="weighted l1 norm")
    s.add_argument("file")
    s.add_argument("--weight")
    s.set_defaults(func=cmd_norm)

    s = sub.add_parser("convolve", parents=[common], help="Dirichlet convolution A * B")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_convolve)

    s = sub.add_parser("invert", parents=[common], help="invert a series in the truncated quotient")
    s.add_argument("file")
    s.add_argument("--method", choices=METHODS, default="auto")
    s.add_argument("--weight", help="weight for the Neumann bound (JSON or path)")
    s.add_argument("--tol", type=float, default=VERIFY_TOL)
    s.set_defaults(func=cmd_invert)

    s = sub.add_parser("verify", parents=[common], help="check that B inverts A")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--tol", type=float, default=VERIFY_TOL)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("margin", parents=[common], help="sampled invertibility margin")
    s.add_argument("file")
    s.add_argument("--mode", choices=("halfplane", "polydisc"), default="halfplane")
    s.add_argument("--jmax", type=float, default=DEFAULT_J_MAX)
    s.add_argument("--tmax", type=float, default=DEFAULT_T_MAX)
    s.add_argument("--grid", default=f"{DEFAULT_GRID[0]}x{DEFAULT_GRID[1]}")
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_margin)

    s = sub.add_parser("weights", help="weight checks")
    wsub = s.add_subparsers(dest="weights_command", required=True)
    c = wsub.add_parser("check", parents=[common], help="submultiplicativity and admissibility")
    c.add_argument("file", nargs="?")
    c.add_argument("--weight")
    c.add_argument("--semigroup", help='e.g. \'{"type":"ordinary","N":32}\'')
    c.add_argument("--samples", type=int, default=None, help="pair sample count (default: all pairs)")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--depth", type=int, default=256, help="doubling depth")
    c.set_defaults(func=cmd_weights_check)

    s = sub.add_parser("demo", parents=[common], help="built-in demonstrations")
    s.add_argument("name", choices=("mobius",))
    s.add_argument("--n", type=int, default=30)
    s.set_defaults(func=cmd_demo)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except NotInvertibleConstantTerm as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_INVERTIBLE
    except NeumannNotContractive as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NEUMANN
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ValueError, TypeError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
