"""Serialization of plans and mission logs: JSON, CSV and DOT renderings.

Every JSON writer has a matching loader so emitted files round-trip.  All
writers sort keys and avoid wall-clock content unless asked to keep it, so
deterministic runs serialize byte-identically.
"""

from __future__ import annotations

import json

from .executor import BeliefState, EdgeBelief, MissionLog, MissionStep
from .formulation import Excursion, Plan, StepCost
from .scenario import Scenario


def _loc(scenario: Scenario, label: str) -> int:
    g = scenario.graph
    if "->" in label:
        a, b = label.split("->")
        return g.edge_location(g.node_index(a), g.node_index(b))
    return g.node_index(label)


def _edge_label(scenario: Scenario, ue: int) -> str:
    g = scenario.graph
    a, b, _ = g.uedges[ue]
    return f"{g.node_labels[a]}-{g.node_labels[b]}"


def _edge_index(scenario: Scenario, label: str) -> int:
    g = scenario.graph
    a, b = label.split("-")
    ia, ib = g.node_index(a), g.node_index(b)
    key = (min(ia, ib), max(ia, ib))
    for idx, (x, y, _) in enumerate(g.uedges):
        if (x, y) == key:
            return idx
    raise ValueError(f"unknown edge {label!r}")


# -- plans ---------------------------------------------------------------------

def plan_to_dict(plan: Plan, scenario: Scenario) -> dict:
    g = scenario.graph
    return {
        "routes": [[g.location_label(loc) for loc in route]
                   for route in plan.carrier_routes],
        "excursions": [
            {
                "node": g.location_label(exc.node),
                "step": exc.step,
                "walk": [g.location_label(loc) for loc in exc.walk],
            }
            for exc in plan.scout_excursions
        ],
        "inspections": sorted(
            [_edge_label(scenario, ue), t] for ue, t in plan.inspections
        ),
        "steps": [
            {
                "step": s.step,
                "time_cost": s.time_cost,
                "traversal_cost": s.traversal_cost,
                "uncertainty_cost": s.uncertainty_cost,
                "launch_cost": s.launch_cost,
            }
            for s in plan.breakdown
        ],
        "total_cost": plan.total_cost,
    }


def plan_from_dict(doc: dict, scenario: Scenario) -> Plan:
    routes = tuple(
        tuple(_loc(scenario, label) for label in route) for route in doc["routes"]
    )
    excursions = tuple(
        Excursion(
            _loc(scenario, e["node"]), int(e["step"]),
            tuple(_loc(scenario, label) for label in e["walk"]),
        )
        for e in doc["excursions"]
    )
    inspections = frozenset(
        (_edge_index(scenario, label), int(t)) for label, t in doc["inspections"]
    )
    breakdown = tuple(
        StepCost(s["step"], s["time_cost"], s["traversal_cost"],
                 s["uncertainty_cost"], s["launch_cost"])
        for s in doc["steps"]
    )
    return Plan(routes, excursions, inspections, breakdown, doc["total_cost"])


def plan_to_json(plan: Plan, scenario: Scenario) -> str:
    return json.dumps(plan_to_dict(plan, scenario), indent=2, sort_keys=True) + "\n"


def plan_cost_csv(plan: Plan) -> str:
    lines = ["step,time_cost,traversal_cost,uncertainty_cost,launch_cost,total"]
    for s in plan.breakdown:
        lines.append(
            f"{s.step},{s.time_cost:.9g},{s.traversal_cost:.9g},"
            f"{s.uncertainty_cost:.9g},{s.launch_cost:.9g},{s.total:.9g}"
        )
    return "\n".join(lines) + "\n"


def scout_visit_counts(scenario: Scenario, excursions) -> dict[int, int]:
    """Sub-step traversal count per undirected edge (edge-shading source)."""
    g = scenario.graph
    counts = {ue: 0 for ue in range(len(g.uedges))}
    for exc in excursions:
        for loc in exc.walk:
            if not g.is_node(loc):
                counts[g.uedge_of_location(loc)] += 1
    return counts


def routes_dot(scenario: Scenario, plan: Plan | None = None,
               visit_counts: dict[int, int] | None = None) -> str:
    """Graphviz rendering: carrier routes in bold, scout-visited edges shaded
    darker the more sub-steps scouts spent on them."""
    g = scenario.graph
    if visit_counts is None:
        visit_counts = scout_visit_counts(
            scenario, plan.scout_excursions if plan else ()
        )
    carrier_edges = set()
    if plan:
        for route in plan.carrier_routes:
            for loc in route:
                if not g.is_node(loc):
                    carrier_edges.add(g.uedge_of_location(loc))
    peak = max(visit_counts.values(), default=0)

    lines = ["graph team {", "  layout=neato;", "  node [shape=circle];"]
    for label in g.node_labels:
        lines.append(f'  "{label}";')
    for ue, (a, b, data) in enumerate(g.uedges):
        visits = visit_counts.get(ue, 0)
        shade = 90 - int(round(70 * visits / peak)) if peak else 90
        attrs = [f'label="{data.weight:g}"', f"color=gray{shade}"]
        if ue in carrier_edges:
            attrs.append("penwidth=3")
        lines.append(
            f'  "{g.node_labels[a]}" -- "{g.node_labels[b]}" [{", ".join(attrs)}];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- missions ------------------------------------------------------------------

def mission_to_dict(log: MissionLog, scenario: Scenario,
                    keep_timings: bool = True) -> dict:
    g = scenario.graph
    return {
        "status": log.status,
        "route_true_cost": log.route_true_cost,
        "objective_true_cost": log.objective_true_cost,
        "steps": [
            {
                "index": s.index,
                "solve_seconds": s.solve_seconds if keep_timings else 0.0,
                "model_variables": s.model_variables,
                "planned_objective": s.planned_objective,
                "positions_after": [g.location_label(loc) for loc in s.positions_after],
                "excursions": [
                    {
                        "node": g.location_label(e.node),
                        "step": e.step,
                        "walk": [g.location_label(loc) for loc in e.walk],
                    }
                    for e in s.excursions
                ],
                "observations": [
                    [_edge_label(scenario, ue), cost] for ue, cost in s.observations
                ],
                "belief_after": [
                    {
                        "edge": _edge_label(scenario, ue),
                        "weight": eb.weight,
                        "unc_lower": eb.unc_lower,
                        "unc_upper": eb.unc_upper,
                        "age": eb.age,
                    }
                    for ue, eb in enumerate(s.belief_after.edges)
                ],
                "route_true_increment": s.route_true_increment,
                "scout_true_increment": s.scout_true_increment,
                "teaming_increment": s.teaming_increment,
                "launch_increment": s.launch_increment,
            }
            for s in log.steps
        ],
    }


def mission_from_dict(doc: dict, scenario: Scenario) -> MissionLog:
    steps = []
    for s in doc["steps"]:
        steps.append(MissionStep(
            index=s["index"],
            solve_seconds=s["solve_seconds"],
            model_variables=s["model_variables"],
            planned_objective=s["planned_objective"],
            positions_after=tuple(_loc(scenario, lbl) for lbl in s["positions_after"]),
            excursions=tuple(
                Excursion(
                    _loc(scenario, e["node"]), int(e["step"]),
                    tuple(_loc(scenario, lbl) for lbl in e["walk"]),
                )
                for e in s["excursions"]
            ),
            observations=tuple(
                (_edge_index(scenario, label), cost) for label, cost in s["observations"]
            ),
            belief_after=BeliefState(tuple(
                EdgeBelief(e["weight"], e["unc_lower"], e["unc_upper"], e["age"])
                for e in s["belief_after"]
            )),
            route_true_increment=s["route_true_increment"],
            scout_true_increment=s["scout_true_increment"],
            teaming_increment=s["teaming_increment"],
            launch_increment=s["launch_increment"],
        ))
    return MissionLog(doc["status"], tuple(steps),
                      doc["route_true_cost"], doc["objective_true_cost"])


def mission_to_json(log: MissionLog, scenario: Scenario,
                    keep_timings: bool = True) -> str:
    return json.dumps(
        mission_to_dict(log, scenario, keep_timings=keep_timings),
        indent=2, sort_keys=True,
    ) + "\n"


def mission_cost_csv(log: MissionLog, keep_timings: bool = True) -> str:
    lines = [
        "step,model_variables,solve_seconds,planned_objective,"
        "route_true,scout_true,teaming,launch"
    ]
    for s in log.steps:
        seconds = s.solve_seconds if keep_timings else 0.0
        lines.append(
            f"{s.index},{s.model_variables},{seconds:.6f},"
            f"{s.planned_objective:.9g},{s.route_true_increment:.9g},"
            f"{s.scout_true_increment:.9g},{s.teaming_increment:.9g},"
            f"{s.launch_increment:.9g}"
        )
    return "\n".join(lines) + "\n"


def comparison_csv(header: list[str], rows: list[list]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(
            f"{v:.9g}" if isinstance(v, float) else str(v) for v in row
        ))
    return "\n".join(lines) + "\n"
