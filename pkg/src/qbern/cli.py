"""Command-line front end.

Subcommands: beta, xi, beta-poly, bernstein, integrate, verify, table,
selftest.  Exit codes: 0 success / all verified, 1 identity violation,
2 usage or configuration error (including insufficient working precision),
3 work budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from math import isinf

from .bernstein import BernsteinSpec, bernstein_eval
from .carlitz import eval_at_one, table_for
from .errors import (
    BudgetExceeded,
    DomainError,
    PoleAtOne,
    PrecisionExhausted,
    QbernError,
)
from .identities import SuiteConfig, reports_to_jsonl, run_suite, suite_exit_status
from .integral import (
    bernstein_integral,
    integrand_from_json,
    integrate,
)
from .qfield import QContext

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


_GLOBAL_DEFAULTS = {
    "p": 3,
    "precision": 24,
    "q": "1+p",
    "backend": "symbolic",
    "target_valuation": 8,
    "level_cap": None,
    "format": "json",
    "out": None,
}


def _global_flags() -> argparse.ArgumentParser:
    # Shared flags, accepted both before and after the subcommand; defaults
    # are suppressed here and filled in after parsing so the position of a
    # flag never matters.
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--p", type=int, help="odd prime (padic backend)")
    common.add_argument("--precision", type=int,
                        help="working precision K in base-p digits")
    common.add_argument("--q", help='q as a rational "a/b" or the token "1+p" (padic only)')
    common.add_argument("--backend", choices=("symbolic", "padic"))
    common.add_argument("--target-valuation", type=int)
    common.add_argument("--level-cap", type=int)
    common.add_argument("--format", choices=("json", "csv"))
    common.add_argument("--out", help="output path (default stdout)")
    return common


def _build_parser() -> argparse.ArgumentParser:
    common = _global_flags()
    parser = argparse.ArgumentParser(
        prog="qbern",
        description="Exact q-Bernoulli / q-Bernstein arithmetic and identity verification",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_beta = sub.add_parser("beta", parents=[common], help="Carlitz q-Bernoulli number")
    p_beta.add_argument("--n", type=int, required=True)

    p_xi = sub.add_parser("xi", parents=[common], help="unmodified Carlitz number")
    p_xi.add_argument("--n", type=int, required=True)

    p_poly = sub.add_parser("beta-poly", parents=[common],
                            help="Carlitz q-Bernoulli polynomial value")
    p_poly.add_argument("--n", type=int, required=True)
    p_poly.add_argument("--x", required=True, help="integer or rational argument")

    p_bern = sub.add_parser("bernstein", parents=[common], help="basis polynomial value")
    p_bern.add_argument("--k", type=int, required=True)
    p_bern.add_argument("--n", type=int, required=True)
    p_bern.add_argument("--x", required=True)

    p_int = sub.add_parser("integrate", parents=[common],
                           help="adaptive p-adic q-integral")
    p_int.add_argument("--integrand", required=True,
                       help="integrand JSON (inline or @file)")

    p_verify = sub.add_parser("verify", parents=[common], help="run the identity suite")
    p_verify.add_argument("--grid", default=None, help="grid JSON file")

    p_table = sub.add_parser("table", parents=[common], help="tabulate values")
    p_table.add_argument("--kind", choices=("beta", "bernstein", "integral"),
                         required=True)
    p_table.add_argument("--range", required=True, help='index range "a:b" (inclusive)')
    p_table.add_argument("--x", default="2", help="argument for bernstein tables")
    p_table.add_argument("--k", type=int, default=0, help="lower index for integral tables")
    p_table.add_argument("--at-one", action="store_true", default=False,
                         help="add the q=1 column (symbolic tables)")

    p_self = sub.add_parser("selftest", parents=[common], help="small grid self-check")
    p_self.add_argument("--corrupt", action="store_true", default=False,
                        help="flip one sign to prove failures are detected")

    return parser


def _context(args) -> QContext:
    if args.backend == "symbolic":
        if args.q != "1+p":
            raise DomainError("a q literal only applies to the padic backend")
        return QContext.symbolic()
    return QContext.padic(args.p, args.precision, args.q)


def _parse_x(text: str):
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        return Fraction(text)


def _scalar_payload(value, ctx) -> dict:
    payload = {"value": value.to_json()}
    if ctx.is_symbolic:
        payload["rendered"] = value.render()
        payload["certified_precision"] = None
    else:
        payload["certified_precision"] = (
            None if isinf(value.prec) else int(value.prec)
        )
    return payload


def _emit(args, text: str):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _render_cell(value, ctx) -> str:
    if ctx.is_symbolic:
        return value.render()
    return json.dumps(value.to_json(), sort_keys=True)


def _cmd_number(args, which: str) -> int:
    ctx = _context(args)
    tbl = table_for(ctx)
    value = tbl.beta(args.n) if which == "beta" else tbl.xi(args.n)
    payload = {"n": args.n, "backend": args.backend, **_scalar_payload(value, ctx)}
    _emit(args, json.dumps(payload, sort_keys=True) + "\n")
    return EXIT_OK


def _cmd_beta_poly(args) -> int:
    ctx = _context(args)
    x = _parse_x(args.x)
    if ctx.is_symbolic and not isinstance(x, int):
        raise DomainError("symbolic backend takes integer x only")
    value = table_for(ctx).beta_poly(args.n, x)
    payload = {"n": args.n, "x": str(x), "backend": args.backend,
               **_scalar_payload(value, ctx)}
    _emit(args, json.dumps(payload, sort_keys=True) + "\n")
    return EXIT_OK


def _cmd_bernstein(args) -> int:
    ctx = _context(args)
    x = _parse_x(args.x)
    if ctx.is_symbolic and not isinstance(x, int):
        raise DomainError("symbolic backend takes integer x only")
    value = bernstein_eval(BernsteinSpec(args.k, args.n), x, ctx)
    payload = {"k": args.k, "n": args.n, "x": str(x), "backend": args.backend,
               **_scalar_payload(value, ctx)}
    _emit(args, json.dumps(payload, sort_keys=True) + "\n")
    return EXIT_OK


def _cmd_integrate(args) -> int:
    if args.backend != "padic":
        raise DomainError("integrate requires --backend padic")
    ctx = _context(args)
    spec = args.integrand
    if spec.startswith("@"):
        with open(spec[1:]) as fh:
            data = json.load(fh)
    else:
        data = json.loads(spec)
    integrand = integrand_from_json(data)
    result = integrate(integrand, ctx, args.target_valuation, args.level_cap)
    _emit(args, json.dumps(result.to_json(), sort_keys=True) + "\n")
    return EXIT_OK


def _cmd_verify(args) -> int:
    if args.grid:
        try:
            with open(args.grid) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise DomainError(f"cannot read grid file: {exc}") from exc
        config = SuiteConfig.from_json(data)
    else:
        config = SuiteConfig(
            backend=args.backend,
            prime=args.p,
            precision=args.precision,
            q=args.q,
            target_valuation=args.target_valuation,
            level_cap=args.level_cap,
        )
    reports = run_suite(config)
    _emit(args, reports_to_jsonl(reports))
    return suite_exit_status(reports)


def _parse_range(text: str):
    try:
        lo, hi = text.split(":")
        lo, hi = int(lo), int(hi)
    except ValueError as exc:
        raise DomainError(f'range must look like "a:b", got {text!r}') from exc
    return range(lo, hi + 1)


def _cmd_table(args) -> int:
    ctx = _context(args)
    tbl = table_for(ctx)
    rows = []
    if args.kind == "beta":
        header = ["n", "backend", "value"]
        if args.at_one:
            if not ctx.is_symbolic:
                raise DomainError("the q=1 column requires the symbolic backend")
            header.append("value_at_q1")
        for n in _parse_range(args.range):
            row = {"n": n, "backend": args.backend,
                   "value": _render_cell(tbl.beta(n), ctx)}
            if args.at_one:
                row["value_at_q1"] = str(eval_at_one(tbl.beta(n)))
            rows.append(row)
    elif args.kind == "bernstein":
        x = _parse_x(args.x)
        if ctx.is_symbolic and not isinstance(x, int):
            raise DomainError("symbolic backend takes integer x only")
        header = ["n", "k", "x", "value"]
        for n in _parse_range(args.range):
            for k in range(n + 1):
                value = bernstein_eval(BernsteinSpec(k, n), x, ctx)
                rows.append({"n": n, "k": k, "x": str(x),
                             "value": _render_cell(value, ctx)})
    else:
        header = ["n", "k", "route", "value"]
        for n in _parse_range(args.range):
            if not 0 <= args.k <= n:
                continue
            value = bernstein_integral(args.k, n, ctx, "direct", tbl)
            rows.append({"n": n, "k": args.k, "route": "direct",
                         "value": _render_cell(value, ctx)})
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=header, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        _emit(args, buf.getvalue())
    else:
        _emit(args, json.dumps({"kind": args.kind, "rows": rows}, sort_keys=True) + "\n")
    return EXIT_OK


def _cmd_selftest(args) -> int:
    config = SuiteConfig(
        backend="padic",
        prime=args.p,
        precision=args.precision,
        q=args.q,
        target_valuation=min(args.target_valuation, 6),
        identities=[
            ("THM1", {"n": 1, "x": 0}),
            ("PROP2", {"n": 2}),
            ("EQ6", {"n": 2}),
            ("THM3", {"n": 2}),
        ],
        corrupt=args.corrupt,
    )
    reports = run_suite(config)
    _emit(args, reports_to_jsonl(reports))
    return suite_exit_status(reports)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    for key, value in _GLOBAL_DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, value)
    try:
        if args.command in ("beta", "xi"):
            return _cmd_number(args, args.command)
        if args.command == "beta-poly":
            return _cmd_beta_poly(args)
        if args.command == "bernstein":
            return _cmd_bernstein(args)
        if args.command == "integrate":
            return _cmd_integrate(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "table":
            return _cmd_table(args)
        if args.command == "selftest":
            return _cmd_selftest(args)
        parser.error(f"unknown command {args.command}")
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (DomainError, PrecisionExhausted, PoleAtOne, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QbernError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
