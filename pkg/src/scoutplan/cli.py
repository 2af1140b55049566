"""Command-line surface: validation, single solves, missions, ablations,
optimism sweeps and format exports.

Exit codes: 0 ok, 2 invalid input, 3 infeasible, 4 solver limit reached.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import report
from .branch_bound import SolveOptions
from .executor import run_ablation, run_mission
from .formulation import (
    build_model,
    compact_variable_count,
    paper_parity_variable_count,
)
from .graphs import ValidationError, launch_cost_at
from .milp import export_mps
from .planner import solve_scenario
from .scenario import ParseError, load_scenario_file

OK, INVALID, INFEASIBLE, LIMIT = 0, 2, 3, 4


def _solver_options(args) -> SolveOptions:
    return SolveOptions(
        gap=args.gap,
        node_limit=args.nodes_limit,
        time_limit=args.time_limit,
        deterministic=args.deterministic,
        node_selection=args.node_selection,
    )


def _load(path: str):
    try:
        return load_scenario_file(path)
    except FileNotFoundError:
        print(f"error: no such file: {path}", file=sys.stderr)
        raise SystemExit(INVALID)
    except (ParseError, ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(INVALID)


def _outdir(args) -> Path:
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_validate(args) -> int:
    scenario, truth = _load(args.scenario)
    g = scenario.graph
    print(f"nodes: {g.n_nodes}  undirected edges: {len(g.uedges)}  "
          f"locations: {g.n_locations}")
    print(f"carriers: {scenario.carrier_count}  scouts: {scenario.scout_count}  "
          f"horizon: {scenario.horizon}x{scenario.scout_steps}")
    for ue, (a, b, data) in enumerate(g.uedges):
        print(f"edge {g.node_labels[a]}-{g.node_labels[b]}: weight {data.weight:g} "
              f"effective uncertainty {scenario.edge_uncertainty(ue):g}")
    for v in range(g.n_nodes):
        print(f"node {g.node_labels[v]}: launch cost "
              f"{launch_cost_at(g, v, scenario.launch_scale):g}")
    print(f"variables (compact): {compact_variable_count(scenario)}")
    print(f"variables (paper parity): {paper_parity_variable_count(scenario)}")
    print("ground truth: " + ("present" if truth else "absent"))
    return OK


def cmd_plan(args) -> int:
    scenario, _ = _load(args.scenario)
    out = _outdir(args)
    if args.export_mps:
        model, _ = build_model(scenario)
        (out / "model.mps").write_text(export_mps(model))
        print(f"wrote {out / 'model.mps'}")
        return OK
    count = (compact_variable_count(scenario) if args.count_mode == "compact"
             else paper_parity_variable_count(scenario))
    print(f"decision variables ({args.count_mode}): {count}")
    outcome = solve_scenario(scenario, _solver_options(args))
    result = outcome.result
    if result.status == "infeasible":
        print("infeasible", file=sys.stderr)
        return INFEASIBLE
    if outcome.plan is None:
        print(f"solver stopped: {result.status}", file=sys.stderr)
        return LIMIT
    plan = outcome.plan
    (out / "plan.json").write_text(report.plan_to_json(plan, scenario))
    (out / "plan_costs.csv").write_text(report.plan_cost_csv(plan))
    if args.dot:
        (out / "routes.dot").write_text(report.routes_dot(scenario, plan))
    print(f"objective {result.objective:.6f} status {result.status} "
          f"nodes {result.nodes}")
    return OK if result.status == "optimal" else LIMIT


def cmd_simulate(args) -> int:
    scenario, truth = _load(args.scenario)
    if truth is None:
        print("error: scenario has no ground_truth section", file=sys.stderr)
        return INVALID
    out = _outdir(args)
    log = run_mission(scenario, truth, _solver_options(args))
    keep = not args.deterministic
    (out / "mission.json").write_text(
        report.mission_to_json(log, scenario, keep_timings=keep))
    (out / "mission_costs.csv").write_text(
        report.mission_cost_csv(log, keep_timings=keep))
    if args.dot:
        for step in log.steps:
            counts = report.scout_visit_counts(scenario, step.excursions)
            (out / f"step{step.index:03d}.dot").write_text(
                report.routes_dot(scenario, visit_counts=counts))
    print(f"status {log.status} steps {len(log.steps)} "
          f"route-true-cost {log.route_true_cost:.6f}")
    if log.status == "infeasible":
        return INFEASIBLE
    if log.status == "solver-limit":
        return LIMIT
    return OK


def cmd_ablate(args) -> int:
    scenario, truth = _load(args.scenario)
    if truth is None:
        print("error: scenario has no ground_truth section", file=sys.stderr)
        return INVALID
    out = _outdir(args)
    if args.variant:
        from .executor import variant_scenario
        log = run_mission(
            variant_scenario(scenario, args.variant), truth,
            _solver_options(args),
            inspection_decay=(args.variant != "scouts-nodecay"),
        )
        logs = {args.variant: log}
    else:
        logs = run_ablation(scenario, truth, _solver_options(args))
    rows = []
    for variant, log in logs.items():
        rows.append([variant, log.status, log.route_true_cost,
                     log.objective_true_cost])
        (out / f"mission_{variant}.json").write_text(
            report.mission_to_json(log, scenario,
                                   keep_timings=not args.deterministic))
        if args.dot:
            counts = report.scout_visit_counts(
                scenario, [e for s in log.steps for e in s.excursions])
            (out / f"routes_{variant}.dot").write_text(
                report.routes_dot(scenario, visit_counts=counts))
        print(f"{variant}: status {log.status} "
              f"route-true-cost {log.route_true_cost:.6f}")
    (out / "ablation.csv").write_text(report.comparison_csv(
        ["variant", "status", "route_true_cost", "objective_true_cost"], rows))
    if any(log.status == "infeasible" for log in logs.values()):
        return INFEASIBLE
    return OK


def cmd_sweep_beta(args) -> int:
    scenario, truth = _load(args.scenario)
    if truth is None:
        print("error: scenario has no ground_truth section", file=sys.stderr)
        return INVALID
    out = _outdir(args)
    try:
        betas = [float(b) for b in args.beta.split(",")]
    except ValueError:
        print(f"error: bad --beta list {args.beta!r}", file=sys.stderr)
        return INVALID
    g = scenario.graph
    header = ["edge"] + [f"beta={b:g}" for b in betas]
    per_edge = {ue: [] for ue in range(len(g.uedges))}
    totals = []
    for beta in betas:
        from dataclasses import replace
        swept = replace(scenario, optimism=beta)
        log = run_mission(swept, truth, _solver_options(args))
        counts = report.scout_visit_counts(
            scenario, [e for s in log.steps for e in s.excursions])
        for ue in per_edge:
            per_edge[ue].append(counts[ue])
        totals.append(sum(counts.values()))
        (out / f"routes_beta{beta:g}.dot").write_text(
            report.routes_dot(scenario, visit_counts=counts))
        print(f"beta={beta:g}: status {log.status} scout edge visits "
              f"{sum(counts.values())}")
    rows = []
    for ue in sorted(per_edge):
        a, b, _ = g.uedges[ue]
        rows.append([f"{g.node_labels[a]}-{g.node_labels[b]}"] + per_edge[ue])
    rows.append(["total"] + totals)
    (out / "beta_sweep.csv").write_text(report.comparison_csv(header, rows))
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scoutplan",
        description="Plan and simulate carrier/scout robot teams on "
                    "topological graphs with uncertain edge costs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, output=True):
        p.add_argument("scenario", help="scenario JSON file")
        if output:
            p.add_argument("-o", "--output", default="out",
                           help="output directory (default: out)")
        p.add_argument("--seed", type=int, default=0,
                       help="seed for randomized generation")
        p.add_argument("--gap", type=float, default=1e-6,
                       help="absolute optimality gap")
        p.add_argument("--time-limit", type=float, default=None)
        p.add_argument("--nodes-limit", type=int, default=None)
        p.add_argument("--deterministic", action="store_true",
                       help="deterministic solving; scrub wall times from outputs")
        p.add_argument("--node-selection", default="best-bound",
                       choices=["best-bound", "depth-first"])
        p.add_argument("--dot", action="store_true",
                       help="also write DOT renderings")

    p = sub.add_parser("validate", help="check a scenario and print derived sizes")
    common(p, output=False)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("plan", help="single solve: plan files or MPS export")
    common(p)
    p.add_argument("--export-mps", action="store_true",
                   help="write the model in MPS format and skip solving")
    p.add_argument("--count-mode", default="compact",
                   choices=["compact", "paper"],
                   help="variable counting mode used in diagnostics")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("simulate", help="receding-horizon mission")
    common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("ablate", help="run the four ablation variants")
    common(p)
    p.add_argument("--variant", default=None,
                   choices=["weights", "uncertainty", "scouts-nodecay", "full"],
                   help="restrict to one variant (default: all four)")
    p.set_defaults(func=cmd_ablate)

    p = sub.add_parser("sweep-beta", help="missions across optimism values")
    common(p)
    p.add_argument("--beta", default="0,0.15,0.3,0.45",
                   help="comma-separated optimism values")
    p.set_defaults(func=cmd_sweep_beta)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else INVALID
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INVALID


if __name__ == "__main__":
    raise SystemExit(main())
