"""Batch command-line front end.

Subcommands: trace, det-grid, find-zeros, census, verify.  Numeric output
is serialized with 17 significant digits; identical invocations produce
byte-identical files.  MAYER_ZETA_THREADS caps the worker count for grid
scans.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import dynamics, spectral, verify, zeta
from .errors import DomainError, GaussZetaError, NonConvergenceError

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


def parse_complex(text: str) -> complex:
    cleaned = text.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(cleaned)
    except ValueError as exc:
        raise DomainError(f"cannot parse complex number {text!r}") from exc


def _g(x: float) -> str:
    return format(float(x), ".17g")


def _flatten(value, key: str, row: dict) -> None:
    if isinstance(value, complex):
        row[key + "_re"] = _g(value.real)
        row[key + "_im"] = _g(value.imag)
    elif isinstance(value, float):
        row[key] = _g(value)
    else:
        row[key] = str(value)


def emit(rows: list[dict], columns: list[str], fmt: str, path: str | None):
    flat_rows = []
    for row in rows:
        out: dict[str, str] = {}
        for col in columns:
            _flatten(row.get(col, ""), col, out)
        flat_rows.append(out)
    header: list[str] = []
    for row in flat_rows:
        for key in row:
            if key not in header:
                header.append(key)
    if fmt == "json":
        text = json.dumps(flat_rows, indent=2) + "\n"
    else:
        lines = [",".join(header)]
        lines += [",".join(row.get(k, "") for k in header) for row in flat_rows]
        text = "\n".join(lines) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _grid(args) -> list[complex]:
    if args.grid_start is not None:
        start = parse_complex(args.grid_start)
        end = parse_complex(args.grid_end) if args.grid_end else start
        count = args.count
        if count < 1:
            raise DomainError("grid count must be >= 1")
        if count == 1:
            return [start]
        step = (end - start) / (count - 1)
        return [start + k * step for k in range(count)]
    if args.s is None:
        raise DomainError("provide --s or --grid-start/--grid-end/--count")
    return [parse_complex(args.s)]


def _thread_count() -> int:
    raw = os.environ.get("MAYER_ZETA_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return max(1, min(8, os.cpu_count() or 1))


def _map_ordered(func, items):
    if len(items) <= 1 or _thread_count() == 1:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=_thread_count()) as pool:
        return list(pool.map(func, items))


_TRACE_METHODS = ("closed", "matrix", "kernel", "orbit")


def cmd_trace(args) -> int:
    points = _grid(args)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    for m in methods:
        if m not in _TRACE_METHODS:
            raise DomainError(f"unknown trace method {m!r}")
    if args.n > 1 and any(m in ("closed", "kernel") for m in methods):
        raise DomainError("closed/kernel methods evaluate the first power only")

    def one(s: complex) -> list[dict]:
        reports = {}
        for m in methods:
            if m == "closed":
                reports[m] = spectral.trace_closed_form(s, args.n_cap)
            elif m == "matrix":
                reports[m] = spectral.trace_matrix(s, args.m_order, args.n)
            elif m == "kernel":
                reports[m] = spectral.trace_kernel_integral(s, args.kernel_terms)
            else:
                reports[m] = spectral.trace_orbit_sum(s, args.n, args.max_digit)
        rows = []
        for m, rep in reports.items():
            row = {"s": s, "n": rep.n, "method": rep.method,
                   "value": rep.value, "tail_bound": float(rep.tail_bound)}
            for other, other_rep in reports.items():
                if other < m:
                    row[f"delta_{other}"] = abs(rep.value - other_rep.value)
            rows.append(row)
        return rows

    rows = [r for chunk in _map_ordered(one, points) for r in chunk]
    cols = ["s", "n", "method", "value", "tail_bound"] + sorted(
        {k for r in rows for k in r if k.startswith("delta_")})
    emit(rows, cols, args.format, args.output)
    return EXIT_OK


def cmd_det_grid(args) -> int:
    points = _grid(args)

    def one(s: complex) -> dict:
        z = spectral.det_finite(s, "minus-square", args.m_order).value
        z_half = spectral.det_finite(s, "minus-square", args.m_order // 2).value
        dm = spectral.det_finite(s, "minus", args.m_order).value
        dp = spectral.det_finite(s, "plus", args.m_order).value
        return {"s": s, "zeta_det": z, "det_minus": dm, "det_plus": dp,
                "m_order": args.m_order, "half_order_delta": abs(z - z_half)}

    rows = _map_ordered(one, points)
    emit(rows, ["s", "zeta_det", "det_minus", "det_plus", "m_order",
                "half_order_delta"], args.format, args.output)
    return EXIT_OK


def cmd_find_zeros(args) -> int:
    starts = [parse_complex(t) for t in args.start]
    rows = []
    for s0 in starts:
        try:
            res = spectral.find_zero(s0, args.which, args.m_order, args.tol)
            rows.append({"start": s0, "root": res.root,
                         "det_at_root": res.det_at_root,
                         "half_order_displacement": res.displacement_half_order,
                         "iterations": res.iterations, "status": "OK"})
        except NonConvergenceError:
            rows.append({"start": s0, "root": complex("nan+nanj"),
                         "det_at_root": float("nan"),
                         "half_order_displacement": float("nan"),
                         "iterations": 0, "status": "NONCONV"})
    emit(rows, ["start", "root", "det_at_root", "half_order_displacement",
                "iterations", "status"], args.format, args.output)
    return EXIT_OK  # partial results are results


def cmd_census(args) -> int:
    classes = dynamics.enumerate_classes(args.norm_cap, args.length_cap)
    text = dynamics.classes_to_csv(classes)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = verify.VerifyConfig(fast=args.fast,
                              inject_sign_error=args.inject_sign_error)
    names = args.only.split(",") if args.only else None
    outcomes = verify.run_all(cfg, names)
    all_ok = True
    for oc in outcomes:
        mark = "PASS" if oc.passed else "FAIL"
        all_ok &= oc.passed
        print(f"{mark}  {oc.name:35s} [{oc.seconds:7.2f}s]  {oc.detail}")
    print(f"{'OK' if all_ok else 'FAILED'}: {sum(o.passed for o in outcomes)}"
          f"/{len(outcomes)} checks passed")
    return EXIT_OK if all_ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="gausszeta",
        description="Transfer-operator traces, determinants and the Selberg "
                    "zeta function of the modular group.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, grid=True):
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--output", default=None, help="write to file")
        p.add_argument("--precision", choices=("standard", "oracle"),
                       default="standard")
        if grid:
            p.add_argument("--s", default=None, help="single point, e.g. 1+2i")
            p.add_argument("--grid-start", default=None)
            p.add_argument("--grid-end", default=None)
            p.add_argument("--count", type=int, default=1)

    p = sub.add_parser("trace", help="operator traces by one or more methods")
    common(p)
    p.add_argument("--methods", default="closed,matrix")
    p.add_argument("--n", type=int, default=1, help="operator power")
    p.add_argument("--n-cap", type=int, default=100_000)
    p.add_argument("--max-digit", type=int, default=64)
    p.add_argument("--kernel-terms", type=int, default=40)
    p.add_argument("--M", dest="m_order", type=int, default=64)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("det-grid", help="determinants along a complex segment")
    common(p)
    p.add_argument("--M", dest="m_order", type=int, default=64)
    p.set_defaults(func=cmd_det_grid)

    p = sub.add_parser("find-zeros", help="secant zero search of determinants")
    common(p, grid=False)
    p.add_argument("--start", action="append", required=True,
                   help="starting point (repeatable)")
    p.add_argument("--which", choices=spectral._DET_KINDS,
                   default="minus-square")
    p.add_argument("--M", dest="m_order", type=int, default=64)
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_find_zeros)

    p = sub.add_parser("census", help="hyperbolic class census CSV")
    common(p, grid=False)
    p.add_argument("--norm-cap", type=float, required=True)
    p.add_argument("--length-cap", type=int, default=6)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("verify", help="run the full invariant suite")
    p.add_argument("--fast", action="store_true",
                   help="halved caps, 10x tolerances")
    p.add_argument("--inject-sign-error", action="store_true",
                   help="negative control: flip one matrix element")
    p.add_argument("--only", default=None,
                   help="comma-separated subset of check names")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "precision", "standard") == "oracle":
        spectral.ENUM_BUDGET = 4_000_000  # double the enumeration budget
    try:
        return args.func(args)
    except (DomainError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except GaussZetaError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
