"""Command line entry point: ``doublepour solve|table|verify|instance``.

Exit codes: 0 success, 1 a verification failed, 2 invalid input, 3 a cap was hit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import re
import sys
import time

from . import oracle
from .core import PourTrace, check_state, is_power_of_two, state_gcd
from .errors import CapExceeded, InvariantViolation, NotFoundWithinCap, NotPourable, PouringError
from .four_vessel import solve4
from .instances import b_closed, g3_instance, g3_instance_sum, g4_lower_instance, omega_instance, omega_lower_bound
from .three_vessel import solve3_frei, solve3_pow2, solve3_remainder
from .two_vessel import solve2

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3
TRACE_SCHEMA_VERSION = 1
TABLE_SCHEMA_VERSION = 1

ALGORITHMS = ("auto", "two", "frei3", "remainder3", "pow2", "four", "oracle")
FUNCTIONS = ("g", "h", "gprime", "hprime")


class UsageError(Exception):
    pass


def parse_state(text: str) -> tuple[int, ...]:
    """Whitespace- or comma-separated nonnegative integers."""
    parts = [p for p in re.split(r"[\s,]+", text.strip()) if p]
    try:
        values = [int(p) for p in parts]
    except ValueError:
        raise UsageError(f"not a list of integers: {text!r}") from None
    return check_state(values)


# solve ---------------------------------------------------------------------------


def _needs_k(s, k: int, algorithm: str) -> None:
    if len(s) != k:
        raise UsageError(f"--algorithm {algorithm} needs {k} vessels, got {len(s)}")


def pick_algorithm(s) -> str:
    k = len(s)
    if 0 in s:
        return "oracle"
    if k == 2:
        return "two"
    if k == 3:
        r = sum(s) // state_gcd(s)
        return "pow2" if r >= 2 and is_power_of_two(r) else "frei3"
    if k == 4:
        return "four"
    return "oracle"


def run_solver(s, algorithm: str, *, instrument: bool = False, cap_n: int | None = None) -> tuple[str, PourTrace, dict]:
    """Returns the solver name actually used, its trace and solver-specific extras."""
    if algorithm == "auto":
        algorithm = pick_algorithm(s)
    if algorithm == "two":
        _needs_k(s, 2, algorithm)
        return algorithm, solve2(*s), {}
    if algorithm in ("frei3", "remainder3", "pow2"):
        _needs_k(s, 3, algorithm)
        fn = {"frei3": solve3_frei, "remainder3": solve3_remainder, "pow2": solve3_pow2}[algorithm]
        return algorithm, fn(s), {}
    if algorithm == "four":
        _needs_k(s, 4, algorithm)
        run = solve4(s, instrument=instrument)
        extras = {"phase_log": run.phase_log, "e_history": [list(x) for x in run.e_history], "pool_index": run.pool_index}
        return algorithm, run.trace, extras
    if algorithm == "oracle":
        cap = oracle.default_cap(len(s)) if cap_n is None else cap_n
        if sum(s) > cap:
            raise CapExceeded(f"total {sum(s)} is above the oracle cap {cap}")
        trace = oracle.optimal_trace(s)
        if trace is None:
            raise NotPourable(f"{s} is not pourable")
        return algorithm, trace, {}
    raise UsageError(f"unknown algorithm {algorithm!r}")


def trace_document(solver: str, trace: PourTrace, wall_time: float | None = None, extras: dict | None = None) -> dict:
    doc = {
        "schema_version": TRACE_SCHEMA_VERSION,
        "solver": solver,
        "initial": list(trace.initial),
        "moves": [
            {"src": src, "dst": dst, "state": list(state)} for (src, dst), state in zip(trace.moves, trace.states)
        ],
        "steps": trace.steps,
    }
    doc.update(extras or {})
    if wall_time is not None:
        doc["wall_time"] = wall_time
    return doc


def cmd_solve(args) -> int:
    s = parse_state(" ".join(args.state))
    t0 = time.perf_counter()
    solver, trace, extras = run_solver(s, args.algorithm, instrument=args.instrument, cap_n=args.cap_n)
    elapsed = time.perf_counter() - t0 if args.timing else None
    trace.replay()
    print(json.dumps(trace_document(solver, trace, elapsed, extras), indent=2))
    return EXIT_OK


# table ---------------------------------------------------------------------------


def _h_cap(N: int, k: int, cap: int | None) -> int:
    if cap is not None:
        return cap
    if k == 3:
        return 5 * 2**N - 1
    raise UsageError(f"h and hprime need --cap for k={k} (no proven upper bound to scan to)")


def compute_cell(function: str, N: int, k: int, args) -> oracle.GHRecord | None:
    kw = {"cache_dir": args.cache_dir, "workers": args.threads}
    if function == "g":
        return oracle.compute_g(N, k, cap_n=args.cap or args.cap_n, **kw)
    try:
        if function == "gprime":
            return oracle.compute_g_prime(N, k, args.cap or args.cap_n, **kw)
        cap = _h_cap(N, k, args.cap)
        fn = oracle.compute_h if function == "h" else oracle.compute_h_prime
        return fn(N, k, cap, **kw)
    except NotFoundWithinCap:
        if function == "h":
            raise
        return None


def table_document(function: str, ks, cells: dict) -> dict:
    rows = []
    for N in sorted({N for N, _ in cells}):
        row = {}
        for k in ks:
            rec = cells[N, k]
            row[str(k)] = None if rec is None else {"value": rec.value, "exact": rec.exact, "witness": list(rec.witness)}
        rows.append({"N": N, "cells": row})
    return {"schema_version": TABLE_SCHEMA_VERSION, "function": function, "k": list(ks), "rows": rows}


def _cell_text(rec) -> str:
    if rec is None:
        return "-"
    return str(rec.value) if rec.exact else f">={rec.value}"


def render_table(doc: dict, fmt: str, cells: dict) -> str:
    ks = doc["k"]
    if fmt == "json":
        return json.dumps(doc, indent=2)
    buf = io.StringIO()
    if fmt == "csv":
        w = csv.writer(buf, lineterminator="\n")
        if len(ks) == 1:
            w.writerow(["N", "value", "exact", "witness"])
            for row in doc["rows"]:
                cell = row["cells"][str(ks[0])]
                if cell is None:
                    w.writerow([row["N"], "", "", ""])
                else:
                    w.writerow([row["N"], cell["value"], str(cell["exact"]).lower(), " ".join(map(str, cell["witness"]))])
        else:
            w.writerow(["N"] + [f"k={k}" for k in ks])
            for row in doc["rows"]:
                w.writerow([row["N"]] + ["" if row["cells"][str(k)] is None else row["cells"][str(k)]["value"] for k in ks])
        return buf.getvalue().rstrip("\n")
    name = {"g": "g", "h": "h", "gprime": "g'", "hprime": "h'"}[doc["function"]]
    if len(ks) == 1:
        k = ks[0]
        lines = [f"{'N':>3}  {name + '(N,' + str(k) + ')':>10}  exact  witness"]
        for row in doc["rows"]:
            rec = cells[row["N"], k]
            if rec is None:
                lines.append(f"{row['N']:>3}  {'-':>10}")
            else:
                lines.append(f"{row['N']:>3}  {rec.value:>10}  {'yes' if rec.exact else 'no ':<5}  {rec.witness}")
        return "\n".join(lines)
    lines = ["N \\ k " + "".join(f"{k:>9}" for k in ks)]
    for row in doc["rows"]:
        lines.append(f"{row['N']:<6}" + "".join(f"{_cell_text(cells[row['N'], k]):>9}" for k in ks))
    return "\n".join(lines)


def cmd_table(args) -> int:
    ks = sorted(set(args.k))
    if min(ks) < 3:
        raise UsageError("k must be at least 3")
    if args.N_max < 1:
        raise UsageError("--N-max must be at least 1")
    t0 = time.perf_counter()
    cells = {(N, k): compute_cell(args.function, N, k, args) for k in ks for N in range(1, args.N_max + 1)}
    doc = table_document(args.function, ks, cells)
    if args.timing:
        doc["wall_time"] = time.perf_counter() - t0
    print(render_table(doc, args.format, cells))
    return EXIT_OK


# verify --------------------------------------------------------------------------


def cmd_verify(args) -> int:
    from . import verify

    results = verify.run_suite(
        args.suite, n_max=args.n_max, N_max=args.N_max, cache_dir=args.cache_dir, workers=args.threads, seed=args.seed
    )
    if args.format == "json":
        out = [
            {"name": r.name, "passed": r.passed, "detail": r.detail, "counterexample": r.counterexample}
            for r in results
        ]
        print(json.dumps(out, indent=2, default=str))
    else:
        for r in results:
            print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAILED


# instance ------------------------------------------------------------------------


def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name} is required for this family")


def cmd_instance(args) -> int:
    if args.family == "g3":
        _require(args, "k")
        s = g3_instance(args.k)
        claim = f"exactly 3-pourable; sum {g3_instance_sum(args.k)} = floor(5k^2/4) bounds g(3,{args.k}) from above"
    elif args.family == "g4lower":
        _require(args, "k")
        s = g4_lower_instance(args.k)
        claim = f"sum {b_closed(args.k)} = floor((2k^3+3k^2+22k)/24) bounds g(4,{args.k}) from below"
    else:
        _require(args, "t", "n")
        s = omega_instance(args.t, args.n)
        claim = f"needs at least {omega_lower_bound(args.n)} pours (floor(log2(n)/4 - 3/2))"
    doc = {"family": args.family, "state": list(s), "sum": sum(s), "claim": claim}
    if args.pourability:
        cap = oracle.default_cap(len(s)) if args.cap_n is None else args.cap_n
        if sum(s) > cap:
            raise CapExceeded(f"total {sum(s)} is above the oracle cap")
        doc["pourability"] = oracle.forward_pourability(s)
    if args.format == "json":
        print(json.dumps(doc, indent=2))
    else:
        print(f"state: {' '.join(map(str, s))}")
        print(f"sum: {sum(s)}")
        print(f"claim: {claim}")
        if "pourability" in doc:
            print(f"exact pourability: {doc['pourability']}")
    return EXIT_OK


# parser --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--cap-n", type=int, default=None, help="largest total the oracle may scan (default depends on k)")
    g.add_argument("--threads", type=int, default=1, help="slices built in parallel")
    g.add_argument("--cache-dir", default=None, help="directory for cached slice tables")
    g.add_argument("--seed", type=int, default=0, help="seed for randomised checks")
    g.add_argument("--instrument", action="store_true", help="runtime invariant checks in the four-vessel solver")
    g.add_argument("--format", choices=("text", "json", "csv"), default="text")
    g.add_argument("--timing", action="store_true", help="add wall_time to JSON output")
    g.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="doublepour", description="Pouring puzzle solvers and exact tables.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", parents=[common], help="empty a vessel and print the pour trace as JSON")
    s.add_argument("state", nargs="+", help="vessel values, e.g. '3 5' or 3,5,7")
    s.add_argument("--algorithm", choices=ALGORITHMS, default="auto")
    s.set_defaults(func=cmd_solve)

    t = sub.add_parser("table", parents=[common], help="g/h table rows from the exact oracle")
    t.add_argument("function", choices=FUNCTIONS)
    t.add_argument("--N-max", dest="N_max", type=int, required=True)
    t.add_argument("-k", type=int, nargs="+", required=True, help="one or more vessel counts")
    t.add_argument("--cap", type=int, default=None, help="scan cap for h/h' (defaults to 5*2^N-1 for k=3)")
    t.set_defaults(func=cmd_table)

    v = sub.add_parser("verify", parents=[common], help="run a property suite")
    v.add_argument("suite", choices=("invariants", "bounds", "conjecture", "monotonicity"))
    v.add_argument("--n-max", dest="n_max", type=int, default=None, help="largest total for exhaustive checks")
    v.add_argument("--N-max", dest="N_max", type=int, default=None, help="largest N for the conjecture suite")
    v.set_defaults(func=cmd_verify)

    i = sub.add_parser("instance", parents=[common], help="generate an instance family member")
    i.add_argument("family", choices=("g3", "g4lower", "omega"))
    i.add_argument("--k", type=int, default=None)
    i.add_argument("--t", type=int, default=None)
    i.add_argument("--n", type=int, default=None)
    i.add_argument("--pourability", action="store_true", help="also compute exact pourability by BFS")
    i.set_defaults(func=cmd_instance)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (CapExceeded, NotFoundWithinCap) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except InvariantViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except (UsageError, PouringError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
