"""Scenario data model and file I/O.

A scenario bundles a topological graph with team sizes, horizons, risk
parameters, start/goal requirements and (optionally) a ground-truth trace of
realized edge costs for simulation.  Scenario values are immutable after
construction and safe to share across threads.

The on-disk format is a single JSON document; see load_scenario for the
schema.  Unknown keys are rejected so that typos fail loudly.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field, replace

from .graphs import EdgeData, Graph, ValidationError, effective_uncertainty, launch_cost_at


class ParseError(ValueError):
    """The scenario document is not well-formed."""


@dataclass(frozen=True)
class TermWeights:
    """Scale factors for the four objective categories."""

    time: float = 1.0
    traversal: float = 1.0
    uncertainty: float = 1.0
    launch: float = 1.0

    def validate(self) -> None:
        for name, value in vars(self).items():
            if not math.isfinite(value) or value < 0:
                raise ValidationError(f"term weight {name} must be finite and >= 0")


@dataclass(frozen=True)
class Scenario:
    """Full input to one planning problem."""

    graph: Graph
    carrier_count: int          # number of carrier robots
    scout_count: int            # number of scouts (each rides a carrier)
    horizon: int                # carrier time steps
    scout_steps: int            # scout sub-steps per carrier step
    scout_cost_scale: float     # scout traversal cost scale in [0, 1]
    explore_weight: float       # weight of the all-edges uncertainty term
    decay_horizon: int          # steps for inspection credit / regrowth
    optimism: float             # Hurwicz coefficient in [0, 0.5)
    launch_scale: float
    term_weights: TermWeights = field(default_factory=TermWeights)
    starts: tuple[tuple[int, int], ...] = ()   # (location, count)
    goals: tuple[tuple[int, int], ...] = ()    # (location, min count)

    def __post_init__(self):
        g = self.graph
        if self.horizon < 2:
            raise ValidationError(f"horizon {self.horizon} must be >= 2")
        if self.scout_steps < 1:
            raise ValidationError(f"scout_steps {self.scout_steps} must be >= 1")
        if self.carrier_count < 1:
            raise ValidationError("carrier_count must be >= 1")
        if not 0 <= self.scout_count <= self.carrier_count:
            raise ValidationError(
                f"scout_count {self.scout_count} must be in [0, carrier_count]"
            )
        if not 0.0 <= self.scout_cost_scale <= 1.0:
            raise ValidationError("scout_cost_scale must be in [0, 1]")
        if self.explore_weight < 0:
            raise ValidationError("explore_weight must be >= 0")
        if self.decay_horizon < 1:
            raise ValidationError("decay_horizon must be >= 1")
        if not 0.0 <= self.optimism < 0.5:
            raise ValidationError(
                f"optimism {self.optimism} outside the risk-averse range [0, 0.5)"
            )
        if self.launch_scale < 0:
            raise ValidationError("launch_scale must be >= 0")
        self.term_weights.validate()

        if sum(c for _, c in self.starts) != self.carrier_count:
            raise ValidationError("start counts must sum to carrier_count")
        if sum(c for _, c in self.goals) > self.carrier_count:
            raise ValidationError("goal counts exceed carrier_count")
        for loc, count in self.starts:
            if not 0 <= loc < g.n_locations:
                raise ValidationError(f"start location {loc} not in graph")
            if count < 0:
                raise ValidationError("negative start count")
        for loc, count in self.goals:
            if not 0 <= loc < g.n_locations:
                raise ValidationError(f"goal location {loc} not in graph")
            if count < 0:
                raise ValidationError("negative goal count")

        for a, b, data in g.uedges:
            label = f"({g.node_labels[a]},{g.node_labels[b]})"
            if effective_uncertainty(data, self.optimism) < 0:
                raise ValidationError(
                    f"edge {label}: effective uncertainty is negative at "
                    f"optimism {self.optimism}"
                )
            if self.carrier_count * data.team_discount > data.weight:
                warnings.warn(
                    f"edge {label}: team discount {data.team_discount} x "
                    f"{self.carrier_count} carriers exceeds weight {data.weight}; "
                    "traversal cost can go negative",
                    stacklevel=2,
                )

    # -- derived quantities --------------------------------------------------

    def edge_uncertainty(self, uedge: int) -> float:
        return effective_uncertainty(self.graph.edge_data(uedge), self.optimism)

    def launch_cost(self, node: int) -> float:
        return launch_cost_at(self.graph, node, self.launch_scale)

    def with_team(self, carrier_count=None, scout_count=None) -> "Scenario":
        return replace(
            self,
            carrier_count=self.carrier_count if carrier_count is None else carrier_count,
            scout_count=self.scout_count if scout_count is None else scout_count,
        )


@dataclass(frozen=True)
class GroundTruth:
    """Realized cost of every undirected edge at each carrier step (1-based)."""

    traces: tuple[tuple[float, ...], ...]   # indexed by undirected edge id

    def cost(self, uedge: int, t: int) -> float:
        return self.traces[uedge][t - 1]

    def validate(self, scenario: Scenario) -> None:
        g = scenario.graph
        if len(self.traces) != len(g.uedges):
            raise ValidationError("ground truth must cover every undirected edge")
        for idx, trace in enumerate(self.traces):
            a, b, data = g.uedges[idx]
            label = f"({g.node_labels[a]},{g.node_labels[b]})"
            if len(trace) != scenario.horizon:
                raise ValidationError(
                    f"ground truth for edge {label} has {len(trace)} steps, "
                    f"expected {scenario.horizon}"
                )
            lo = data.weight - data.unc_lower
            hi = data.weight + data.unc_upper
            for t, value in enumerate(trace, start=1):
                if not lo - 1e-9 <= value <= hi + 1e-9:
                    raise ValidationError(
                        f"ground truth for edge {label} at step {t}: {value} "
                        f"outside [{lo}, {hi}]"
                    )

    @staticmethod
    def constant(scenario: Scenario) -> "GroundTruth":
        """True costs pinned to the expected weights."""
        return GroundTruth(
            tuple(
                tuple([data.weight] * scenario.horizon)
                for _, _, data in scenario.graph.uedges
            )
        )


_TOP_KEYS = {"nodes", "edges", "team", "horizon", "params", "starts", "goals", "ground_truth"}
_EDGE_KEYS = {"a", "b", "w", "u_lower", "u_upper", "r"}
_PARAM_KEYS = {"zeta", "xi", "lambda", "beta", "launch_scale", "term_weights"}


def _require(mapping: dict, allowed: set[str], context: str) -> None:
    unknown = set(mapping) - allowed
    if unknown:
        raise ParseError(f"{context}: unknown keys {sorted(unknown)}")


def load_scenario(text: str) -> tuple[Scenario, GroundTruth | None]:
    """Parse and validate a scenario document.

    Top-level keys: nodes (list of string labels), edges (list of
    {a, b, w, u_lower, u_upper, r}), team {n_A, n_K}, horizon {n_T, n_tau},
    params {zeta, xi, lambda, beta, launch_scale, term_weights}, starts
    [{node, count}], goals [{node, min_count}], optional ground_truth mapping
    "labelA-labelB" to a per-step cost list.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    _require(doc, _TOP_KEYS, "top level")
    for key in ("nodes", "edges", "team", "horizon", "params", "starts", "goals"):
        if key not in doc:
            raise ParseError(f"missing required key {key!r}")

    labels = [str(lbl) for lbl in doc["nodes"]]
    index = {lbl: i for i, lbl in enumerate(labels)}
    if len(index) != len(labels):
        raise ValidationError("duplicate node labels")

    edges = []
    for i, entry in enumerate(doc["edges"]):
        _require(entry, _EDGE_KEYS, f"edges[{i}]")
        for key in ("a", "b", "w", "u_lower", "u_upper"):
            if key not in entry:
                raise ParseError(f"edges[{i}]: missing key {key!r}")
        a, b = str(entry["a"]), str(entry["b"])
        if a not in index or b not in index:
            raise ValidationError(f"edges[{i}]: unknown endpoint {a!r} or {b!r}")
        data = EdgeData(
            weight=float(entry["w"]),
            unc_lower=float(entry["u_lower"]),
            unc_upper=float(entry["u_upper"]),
            team_discount=float(entry.get("r", 0.0)),
        )
        edges.append((index[a], index[b], data))
    graph = Graph(labels, edges)

    team = doc["team"]
    _require(team, {"n_A", "n_K"}, "team")
    hor = doc["horizon"]
    _require(hor, {"n_T", "n_tau"}, "horizon")
    params = doc["params"]
    _require(params, _PARAM_KEYS, "params")

    tw = params.get("term_weights", [1.0, 1.0, 1.0, 1.0])
    if not isinstance(tw, list) or len(tw) != 4:
        raise ParseError("params.term_weights must be a list of four weights")
    weights = TermWeights(*(float(w) for w in tw))

    def node_loc(entry: dict, i: int, keys: set[str], count_key: str) -> tuple[int, int]:
        _require(entry, keys, f"entry {i}")
        label = str(entry["node"])
        if label not in index:
            raise ValidationError(f"unknown node label {label!r}")
        return index[label], int(entry[count_key])

    starts = tuple(
        node_loc(s, i, {"node", "count"}, "count") for i, s in enumerate(doc["starts"])
    )
    goals = tuple(
        node_loc(g, i, {"node", "min_count"}, "min_count")
        for i, g in enumerate(doc["goals"])
    )

    scenario = Scenario(
        graph=graph,
        carrier_count=int(team["n_A"]),
        scout_count=int(team["n_K"]),
        horizon=int(hor["n_T"]),
        scout_steps=int(hor["n_tau"]),
        scout_cost_scale=float(params["zeta"]),
        explore_weight=float(params["xi"]),
        decay_horizon=int(params["lambda"]),
        optimism=float(params["beta"]),
        launch_scale=float(params["launch_scale"]),
        term_weights=weights,
        starts=starts,
        goals=goals,
    )

    truth = None
    if "ground_truth" in doc:
        key_of = {}
        for idx, (a, b, _) in enumerate(graph.uedges):
            key_of[f"{labels[a]}-{labels[b]}"] = idx
            key_of[f"{labels[b]}-{labels[a]}"] = idx
        traces: list[tuple[float, ...] | None] = [None] * len(graph.uedges)
        for key, values in doc["ground_truth"].items():
            if key not in key_of:
                raise ValidationError(f"ground_truth: unknown edge key {key!r}")
            if traces[key_of[key]] is not None:
                raise ValidationError(f"ground_truth: duplicate edge key {key!r}")
            traces[key_of[key]] = tuple(float(v) for v in values)
        for idx, trace in enumerate(traces):
            if trace is None:
                a, b, _ = graph.uedges[idx]
                raise ValidationError(
                    f"ground_truth: missing edge {labels[a]}-{labels[b]}"
                )
        truth = GroundTruth(tuple(traces))
        truth.validate(scenario)

    return scenario, truth


def load_scenario_file(path) -> tuple[Scenario, GroundTruth | None]:
    with open(path, "r", encoding="utf-8") as handle:
        return load_scenario(handle.read())


def scenario_to_document(scenario: Scenario, truth: GroundTruth | None = None) -> dict:
    """Inverse of load_scenario for node-started scenarios (round-trip support)."""
    g = scenario.graph
    doc = {
        "nodes": list(g.node_labels),
        "edges": [
            {
                "a": g.node_labels[a],
                "b": g.node_labels[b],
                "w": d.weight,
                "u_lower": d.unc_lower,
                "u_upper": d.unc_upper,
                "r": d.team_discount,
            }
            for a, b, d in g.uedges
        ],
        "team": {"n_A": scenario.carrier_count, "n_K": scenario.scout_count},
        "horizon": {"n_T": scenario.horizon, "n_tau": scenario.scout_steps},
        "params": {
            "zeta": scenario.scout_cost_scale,
            "xi": scenario.explore_weight,
            "lambda": scenario.decay_horizon,
            "beta": scenario.optimism,
            "launch_scale": scenario.launch_scale,
            "term_weights": [
                scenario.term_weights.time,
                scenario.term_weights.traversal,
                scenario.term_weights.uncertainty,
                scenario.term_weights.launch,
            ],
        },
        "starts": [
            {"node": g.location_label(loc), "count": count}
            for loc, count in scenario.starts
        ],
        "goals": [
            {"node": g.location_label(loc), "min_count": count}
            for loc, count in scenario.goals
        ],
    }
    if truth is not None:
        doc["ground_truth"] = {
            f"{g.node_labels[a]}-{g.node_labels[b]}": list(truth.traces[idx])
            for idx, (a, b, _) in enumerate(g.uedges)
        }
    return doc
