"""Command-line pipeline: validate -> build -> solve/export -> check -> report.

Exit codes: 0 success, 1 input or validation error, 2 proven infeasible.
Set BCSS_LOG=debug|info|warning to control verbosity.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from .heuristic import FEASIBLE as H_FEASIBLE
from .heuristic import greedy_schedule
from .model import build_model
from .mps import MpsError, export_mps, import_solution, write_solution_file
from .report import emit_series, summarize, write_comparison
from .scenario import ScenarioError, parse_scenario, validate_feasibility_heuristics
from .solver import INFEASIBLE, SolveOptions, canonicalize, solve_bnb
from .validator import SearchSpaceExceeded, brute_force_optimum, check_solution

log = logging.getLogger("bcss")


def _setup_logging():
    level = os.environ.get("BCSS_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr)


def _load(path):
    try:
        scenario = parse_scenario(path)
    except (ScenarioError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(1)
    for w in validate_feasibility_heuristics(scenario):
        print(f"warning: {w}", file=sys.stderr)
    return scenario


def cmd_validate(args) -> int:
    _load(args.scenario)
    print("ok")
    return 0


def cmd_solve(args) -> int:
    scenario = _load(args.scenario)
    model = build_model(scenario)
    canon = canonicalize(model)
    trace = greedy_schedule(scenario)
    incumbent = None
    if trace.status == H_FEASIBLE:
        values = {v.name: trace.solution.get_value(v.name) for v in model.variables}
        vec = [values[v.name] for v in model.variables]
        incumbent = (vec, trace.objective)
        log.info("greedy incumbent objective %.6g", trace.objective)
    else:
        log.info("greedy produced no feasible schedule")
    opts = SolveOptions(
        time_limit=args.time_limit,
        gap_tolerance=args.gap,
        seed=args.seed,
        lp_engine=args.lp_engine,
    )
    result = solve_bnb(model, opts, canon=canon, incumbent=incumbent)
    if result.status == INFEASIBLE:
        print("Infeasible", result.bound, file=sys.stderr)
        if trace.status != H_FEASIBLE and trace.solution is not None:
            rep = check_solution(scenario, trace.solution)
            print("nearest violations from the greedy attempt:", file=sys.stderr)
            for v in rep.violations[:10]:
                print("  " + v.describe(), file=sys.stderr)
        if result.infeasible_rows:
            print("unsatisfiable rows: " + ", ".join(result.infeasible_rows[:10]), file=sys.stderr)
        return 2
    if result.objective is None:
        print(f"TimeLimit - {result.bound:.6g} - {result.node_count} {result.wall_time:.2f}")
        return 0
    sol = result.to_solution(model)
    report = check_solution(scenario, sol)
    if not report.verdict:
        print("error: solver output failed validation", file=sys.stderr)
        for v in report.violations[:10]:
            print("  " + v.describe(), file=sys.stderr)
        return 1
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        info = {
            "status": result.status,
            "bound": result.bound,
            "gap": result.gap,
            "nodes": result.node_count,
        }
        emit_series(scenario, sol, args.out, solver_info=info)
        entries = [("exact", sol, dict(info, wall_time=result.wall_time))]
        if trace.status == H_FEASIBLE:
            entries.insert(0, ("heuristic", trace.solution, {"status": "feasible"}))
        write_comparison(summarize(scenario, entries), os.path.join(args.out, "comparison.csv"))
        write_solution_file(
            result.values, os.path.join(args.out, "solution.txt"),
            comment=f"objective {result.objective:.10g}",
        )
        with open(os.path.join(args.out, "trace.txt"), "w", encoding="utf-8") as fh:
            fh.write("\n".join(trace.notes) + "\n")
        with open(os.path.join(args.out, "run_info.json"), "w", encoding="utf-8") as fh:
            json.dump(
                {
                    "status": result.status,
                    "objective": result.objective,
                    "bound": result.bound,
                    "gap": result.gap,
                    "nodes": result.node_count,
                    "wall_time_s": result.wall_time,
                    "seed": args.seed,
                },
                fh,
                indent=1,
            )
        model.write_traceability_csv(os.path.join(args.out, "traceability.csv"))
    gap_pct = f"{100 * result.gap:.1f}%"
    print(
        f"{result.status} {result.objective:.10g} {result.bound:.10g} "
        f"{gap_pct} {result.node_count} {result.wall_time:.2f}"
    )
    return 0


def cmd_export(args) -> int:
    scenario = _load(args.scenario)
    model = build_model(scenario)
    try:
        export_mps(model, args.mps)
    except OSError as exc:
        print(f"error: cannot write {args.mps}: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.mps}")
    return 0


def cmd_import_check(args) -> int:
    scenario = _load(args.scenario)
    model = build_model(scenario)
    try:
        sol, warnings = import_solution(model, args.solution)
    except (MpsError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    report = check_solution(scenario, sol)
    if not report.verdict:
        print("validation failed:", file=sys.stderr)
        for v in report.violations[:20]:
            print("  " + v.describe(), file=sys.stderr)
        return 1
    print(f"pass total={report.components[3]:.6g}")
    if args.out:
        emit_series(scenario, sol, args.out, solver_info={"status": "imported"})
    return 0


def cmd_report(args) -> int:
    scenario = _load(args.scenario)
    model = build_model(scenario)
    try:
        sol, _ = import_solution(model, args.solution)
    except (MpsError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    report = check_solution(scenario, sol)
    if not report.verdict:
        print("error: solution does not validate; refusing to report", file=sys.stderr)
        return 1
    emit_series(scenario, sol, args.out, solver_info={"status": "imported"})
    print(f"wrote series to {args.out}")
    return 0


def cmd_brute_force(args) -> int:
    scenario = _load(args.scenario)
    try:
        obj, sol = brute_force_optimum(scenario, state_cap=args.state_cap)
    except SearchSpaceExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if obj is None:
        print("Infeasible", file=sys.stderr)
        return 2
    print(f"Optimal {obj:.10g}")
    if args.out:
        model = build_model(scenario)
        values = {v.name: sol.get_value(v.name) for v in model.variables}
        write_solution_file(values, args.out, comment=f"exhaustive optimum {obj:.10g}")
    return 0


def main(argv=None) -> int:
    _setup_logging()
    p = argparse.ArgumentParser(prog="bcss", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("validate", help="parse and validate a scenario file")
    sp.add_argument("scenario")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("solve", help="heuristic + branch and bound + report bundle")
    sp.add_argument("scenario")
    sp.add_argument("--time-limit", type=float, default=300.0)
    sp.add_argument("--gap", type=float, default=0.0)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", default=None)
    sp.add_argument("--threads", type=int, default=1, help="cap on solver parallelism")
    sp.add_argument("--lp-engine", choices=["auto", "simplex", "scipy"], default="auto")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("export", help="write the model as free-format MPS")
    sp.add_argument("scenario")
    sp.add_argument("mps")
    sp.set_defaults(func=cmd_export)

    sp = sub.add_parser("import-check", help="validate an external solution file")
    sp.add_argument("scenario")
    sp.add_argument("solution")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_import_check)

    sp = sub.add_parser("report", help="emit the series bundle for a solution file")
    sp.add_argument("scenario")
    sp.add_argument("solution")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_report)

    sp = sub.add_parser("brute-force", help="exhaustive optimum of a tiny scenario")
    sp.add_argument("scenario")
    sp.add_argument("--state-cap", type=int, default=10_000_000)
    sp.add_argument("--out", default=None, help="write the optimum as a solution file")
    sp.set_defaults(func=cmd_brute_force)

    args = p.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit as exc:
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
