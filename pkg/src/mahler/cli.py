"""Command-line front end: compute measures, verify identities, sweep ranges.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numerical
failure.  Identical invocations produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from .config import DEFAULTS, RunConfig, set_precision, show_config
from .identities import (
    DEFAULT_TOLERANCES,
    SUITE_NAMES,
    reports_to_jsonl,
    run_suite,
    summary_table,
    verify_boyd,
    verify_derivatives,
    verify_J,
    verify_main,
)
from .measures import mahler_jensen_2var, mahler_torus, p_measure, q_measure, r_measure
from .poly import FamilySpec, make_family, poly_from_text
from .quadrature import NumericalError

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

_CSV_HEADER = "lambda,lhs,rhs,residual,error_estimate,status"


def _fmt(v) -> str:
    return repr(float(v))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mahler",
        description="Mahler measures of the Q/P/R families and their identity checks.",
    )
    parser.add_argument("--show-config", action="store_true", help="print budgets/tolerances as JSON and exit")
    parser.add_argument("--precision", choices=("double", "extended"),
                        help="scalar working precision (default: MAHLER_PRECISION or double)")
    parser.add_argument("--seed", type=int, default=DEFAULTS.seed, help="seed for sampled checks")
    sub = parser.add_subparsers(dest="command")

    pc = sub.add_parser("compute", help="compute one measure value")
    pc.add_argument("--family", choices=("q", "p", "r", "qk"), help="family to evaluate")
    pc.add_argument("--lambda", dest="lam", type=float, help="family parameter")
    pc.add_argument("--k", type=int, help="integer parameter for family qk")
    pc.add_argument("--poly-file", help="evaluate a serialized polynomial instead of a family")
    pc.add_argument("--method", choices=("fast", "jensen", "torus"), default="fast")
    pc.add_argument("--nodes", type=int, help="final node count (per dimension for torus)")
    pc.add_argument("--tol", type=float, help="target error estimate")
    pc.add_argument("--format", choices=("table", "json"), default="table")

    pv = sub.add_parser("verify", help="run a verification suite")
    pv.add_argument("suite", choices=SUITE_NAMES)
    pv.add_argument("--lambda", dest="lams", type=float, nargs="+", help="parameter list override")
    pv.add_argument("--k", dest="ks", type=int, nargs="+", help="k list override (boyd)")
    pv.add_argument("--grid", type=int, help="mu-grid size (hyp)")
    pv.add_argument("--n", type=int, help="scan nodes (branches)")
    pv.add_argument("--samples", type=int, help="sample count (substitution)")
    pv.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE",
                    help="tolerance override, e.g. --tol main=1e-6 (repeatable)")
    pv.add_argument("--out", help="write JSON lines here instead of stdout")

    ps = sub.add_parser("sweep", help="sweep a family or identity over a parameter range")
    group = ps.add_mutually_exclusive_group(required=True)
    group.add_argument("--family", choices=("q", "p", "r"))
    group.add_argument("--identity", choices=("main", "boyd", "derivatives", "J1", "J2", "J3"))
    ps.add_argument("--from", dest="start", type=float, required=True)
    ps.add_argument("--to", dest="stop", type=float, required=True)
    ps.add_argument("--step", type=float, required=True)
    ps.add_argument("--out", help="write CSV here instead of stdout")
    ps.add_argument("--jobs", type=int, default=1, help="parallel rows (output order is unchanged)")
    return parser


def _parse_tol_overrides(pairs) -> dict[str, float]:
    out = {}
    for pair in pairs:
        name, _, value = pair.partition("=")
        if not value or name not in DEFAULT_TOLERANCES:
            raise ValueError(f"bad tolerance override {pair!r}")
        out[name] = float(value)
    return out


def _compute_family(args):
    if args.family == "qk":
        if args.k is None:
            raise ValueError("family qk needs --k")
        poly = make_family(FamilySpec("Q", args.k))
        parameter = float(args.k)
        if args.method == "torus":
            mv = mahler_torus(poly, args.nodes, tol=args.tol)
        else:
            mv = mahler_jensen_2var(poly, args.nodes, tol=args.tol)
        return parameter, mv
    if args.lam is None:
        raise ValueError(f"family {args.family} needs --lambda")
    lam = args.lam
    if args.method == "fast":
        fn = {"q": q_measure, "p": p_measure, "r": r_measure}[args.family]
        return lam, fn(lam, args.nodes, tol=args.tol)
    family = {"q": "Q_shifted", "p": "P", "r": "R"}[args.family]
    poly = make_family(FamilySpec(family, lam))
    if args.method == "torus":
        return lam, mahler_torus(poly, args.nodes, tol=args.tol)
    return lam, mahler_jensen_2var(poly, args.nodes, tol=args.tol)


def cmd_compute(args) -> int:
    if args.poly_file:
        with open(args.poly_file, "r", encoding="utf-8") as fh:
            poly = poly_from_text(fh.read())
        if args.method == "torus" or poly.nvars != 2:
            mv = mahler_torus(poly, args.nodes, tol=args.tol)
        else:
            mv = mahler_jensen_2var(poly, args.nodes, tol=args.tol)
        parameter = None
        label = os.path.basename(args.poly_file)
    else:
        if not args.family:
            raise ValueError("need --family or --poly-file")
        parameter, mv = _compute_family(args)
        label = args.family
    payload = {
        "family": label,
        "parameter": parameter,
        "value": mv.value,
        "method": mv.method,
        "error_estimate": mv.error_estimate,
    }
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True, allow_nan=False))
    else:
        par = "" if parameter is None else f" parameter={_fmt(parameter)}"
        print(f"{label}{par} value={_fmt(mv.value)} method={mv.method} error_estimate={_fmt(mv.error_estimate)}")
    return EXIT_OK


def cmd_verify(args) -> int:
    tolerances = _parse_tol_overrides(args.tol)
    reports = run_suite(
        args.suite,
        lambdas=args.lams,
        ks=args.ks,
        grid=args.grid,
        n=args.n,
        samples=args.samples,
        seed=args.seed,
        tolerances=tolerances,
    )
    jsonl = reports_to_jsonl(reports)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(jsonl)
    else:
        sys.stdout.write(jsonl)
    sys.stderr.write(summary_table(reports))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFY_FAILED


def _sweep_values(start: float, stop: float, step: float) -> list[float]:
    if step <= 0:
        raise ValueError("step must be positive")
    values = []
    k = 0
    while True:
        v = start + k * step
        if v > stop + 1e-12 * max(1.0, abs(stop)):
            break
        values.append(v)
        k += 1
    return values


def _sweep_row(kind: str, name: str, lam: float) -> str:
    try:
        if kind == "family":
            fn = {"q": q_measure, "p": p_measure, "r": r_measure}[name]
            mv = fn(lam)
            return f"{_fmt(lam)},{_fmt(mv.value)},,,{_fmt(mv.error_estimate)},ok"
        if name == "main":
            rep = verify_main(lam)
        elif name == "boyd":
            rep = verify_boyd(int(lam))
        elif name == "derivatives":
            rep = verify_derivatives(lam)
        else:
            rep = verify_J(lam, name)
        status = "ok" if rep.passed else "fail"
        return (
            f"{_fmt(lam)},{_fmt(rep.lhs)},{_fmt(rep.rhs)},{_fmt(rep.residual)},"
            f"{_fmt(rep.error_estimate)},{status}"
        )
    except (ValueError, NumericalError) as exc:
        reason = str(exc).replace(",", ";").replace("\n", " ")
        return f"{_fmt(lam)},,,,,error:{reason}"


def cmd_sweep(args) -> int:
    values = _sweep_values(args.start, args.stop, args.step)
    if not values:
        raise ValueError("empty sweep range")
    kind = "family" if args.family else "identity"
    name = args.family or args.identity
    if name == "boyd" and not all(float(v).is_integer() for v in values):
        raise ValueError("boyd sweeps take integer parameters")
    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(lambda v: _sweep_row(kind, name, v), values))
    else:
        rows = [_sweep_row(kind, name, v) for v in values]
    text = _CSV_HEADER + "\n" + "\n".join(rows) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    succeeded = sum(1 for r in rows if ",error:" not in r)
    return EXIT_OK if succeeded >= 1 else EXIT_NUMERICAL


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    precision = args.precision or os.environ.get("MAHLER_PRECISION")
    try:
        if precision:
            set_precision(precision)
        if args.show_config:
            print(show_config(RunConfig(precision=precision or "double", seed=args.seed)))
            return EXIT_OK
        if args.command is None:
            parser.error("a command is required (compute, verify or sweep)")
        if args.command == "compute":
            return cmd_compute(args)
        if args.command == "verify":
            return cmd_verify(args)
        return cmd_sweep(args)
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
