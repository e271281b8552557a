"""Command line driver: ``hybridcp solve <model.json>``.

Prints each solution as it is found (for optimisation runs these are the
successive incumbents) and, when the search proves optimality, a final
block with the optimum.  Real variables print as their interval
midpoint at full float precision.  With ``--json`` a single
machine-readable JSON line is appended after the human-readable output.

Exit codes: 0 a solution was found, 1 no solution, 2 the model failed
validation, 3 internal error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Optional

from .model import BuiltModel, ModelError, build_model, load_model
from .search import SearchResult, Solution, solve_minimize, solve_satisfy


def _format_real(lo: float, hi: float) -> str:
    mid = lo + (hi - lo) / 2.0
    return repr(mid)


def _print_solution(built: BuiltModel, solution: Solution, index: int, out) -> None:
    print(f"Solution {index}", file=out)
    for name, value in solution.values.items():
        print(f"  {name} = {value}", file=out)
    for name in built.real_names:
        lo, hi = solution.reals[name]
        print(f"  {name} = {_format_real(lo, hi)}", file=out)


def _solution_record(built: BuiltModel, solution: Solution) -> dict:
    reals = {}
    for name in built.real_names:
        lo, hi = solution.reals[name]
        reals[name] = {"lo": lo, "hi": hi, "mid": lo + (hi - lo) / 2.0}
    return {"ints": dict(solution.values), "reals": reals}


def _objective_record(built: BuiltModel, best: Solution) -> Optional[dict]:
    name = built.objective_name
    if name is None:
        return None
    if name in best.reals:
        lo, hi = best.reals[name]
        value = lo + (hi - lo) / 2.0
    else:
        value = float(best.values[name])
        lo = hi = value
    return {"name": name, "value": value, "lo": lo, "hi": hi}


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="hybridcp",
        description="Finite-domain solver with interval contractors for continuous constraints",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    solve_p = sub.add_parser("solve", help="solve a JSON model file")
    solve_p.add_argument("model", help="path to the model document")
    solve_p.add_argument("--all", action="store_true", help="enumerate all solutions")
    solve_p.add_argument("--json", action="store_true", help="append a JSON result line")
    solve_p.add_argument("--node-limit", type=int, default=None, metavar="N")
    solve_p.add_argument(
        "--time-limit", type=float, default=None, metavar="MS", help="budget in milliseconds"
    )
    args = parser.parse_args(argv)

    sys.setrecursionlimit(100_000)
    try:
        return _run_solve(args)
    except ModelError as exc:
        print(f"model error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 3


def _run_solve(args: argparse.Namespace) -> int:
    document = load_model(args.model)
    built = build_model(document)
    out = sys.stdout

    started = time.perf_counter()
    if built.objective is not None:
        result = solve_minimize(
            built.solver,
            built.decision_vars,
            built.objective,
            node_limit=args.node_limit,
            time_limit_ms=args.time_limit,
        )
    else:
        result = solve_satisfy(
            built.solver,
            built.decision_vars,
            all_solutions=args.all,
            node_limit=args.node_limit,
            time_limit_ms=args.time_limit,
        )
    elapsed_ms = (time.perf_counter() - started) * 1000.0

    for i, solution in enumerate(result.solutions, start=1):
        _print_solution(built, solution, i, out)

    if result.status == "OPTIMAL":
        best = result.best
        assert best is not None
        print("********* Optimal solution", file=out)
        for name, value in best.values.items():
            print(f"  {name} = {value}", file=out)
        for name in built.real_names:
            lo, hi = best.reals[name]
            print(f"  {name} = {_format_real(lo, hi)}", file=out)
        objective = _objective_record(built, best)
        assert objective is not None
        print(f"Objective: {objective['name']} = {objective['value']!r}", file=out)
    elif result.status == "UNSAT":
        print("No solution", file=out)
    elif result.status == "UNKNOWN":
        print("No solution found within limits", file=out)

    print(
        f"Solutions: {len(result.solutions)}  Nodes: {result.nodes}  "
        f"Fails: {result.fails}  Time: {elapsed_ms:.1f}ms",
        file=out,
    )

    if args.json:
        record = {
            "status": result.status,
            "solutions": [_solution_record(built, s) for s in result.solutions],
            "best": _solution_record(built, result.best) if result.best else None,
            "objective": _objective_record(built, result.best) if result.best else None,
            "nodes": result.nodes,
            "fails": result.fails,
            "time_ms": elapsed_ms,
        }
        print(json.dumps(record), file=out)

    return 0 if result.solutions else 1


if __name__ == "__main__":
    sys.exit(main())
