"""Seeded random scenario generation for cross-checks and scaling runs.

Distributions: expected weights uniform in [10, 60], uncertainty upper bound
uniform in [0, 0.5 * weight], lower bound uniform in [0, upper].  Graphs are
a random spanning tree plus extra edges; goals sit within one edge of every
start so the short default horizon stays feasible.
"""

from __future__ import annotations

import random

from .graphs import EdgeData, Graph
from .scenario import Scenario, TermWeights


def random_graph(rng: random.Random, n_nodes: int, n_edges: int) -> Graph:
    pairs = []
    for v in range(1, n_nodes):
        pairs.append((rng.randrange(v), v))          # spanning tree
    n_edges = max(n_edges, len(pairs))               # never truncate the tree
    candidates = [
        (a, b) for a in range(n_nodes) for b in range(a + 1, n_nodes)
        if (a, b) not in pairs and (b, a) not in pairs
    ]
    rng.shuffle(candidates)
    pairs.extend(candidates[: max(0, n_edges - len(pairs))])

    edges = []
    for a, b in pairs[:n_edges]:
        weight = rng.uniform(10.0, 60.0)
        upper = rng.uniform(0.0, 0.5 * weight)
        lower = rng.uniform(0.0, upper)
        edges.append((a, b, EdgeData(weight, lower, upper, rng.uniform(0.0, 2.0))))
    return Graph([str(v) for v in range(n_nodes)], edges)


def random_tiny_scenario(seed: int, *, max_nodes: int = 4, max_edges: int = 4,
                         max_carriers: int = 2, max_scouts: int = 1,
                         horizon: int = 3, scout_steps: int = 2) -> Scenario:
    """A scenario small enough for exhaustive verification, any seed."""
    rng = random.Random(seed)
    n_nodes = rng.randint(2, max_nodes)
    n_edges = min(max_edges, n_nodes * (n_nodes - 1) // 2)
    n_edges = rng.randint(n_nodes - 1, max(n_nodes - 1, n_edges))
    graph = random_graph(rng, n_nodes, n_edges)

    carriers = rng.randint(1, max_carriers)
    scouts = rng.randint(0, min(max_scouts, carriers))

    goal = rng.randrange(n_nodes)
    near = [goal] + [
        d.head for d in graph.dir_edges if d.tail == goal
    ]
    start_nodes = sorted(set(rng.choices(near, k=rng.randint(1, 2))))
    counts = [0] * len(start_nodes)
    for _ in range(carriers):
        counts[rng.randrange(len(start_nodes))] += 1
    starts = tuple(
        (node, count) for node, count in zip(start_nodes, counts) if count
    )

    return Scenario(
        graph=graph,
        carrier_count=carriers,
        scout_count=scouts,
        horizon=horizon,
        scout_steps=scout_steps,
        scout_cost_scale=rng.uniform(0.1, 0.5),
        explore_weight=rng.uniform(0.2, 1.0),
        decay_horizon=rng.randint(1, 5),
        optimism=rng.choice([0.0, 0.15, 0.3, 0.45]),
        launch_scale=rng.uniform(0.05, 0.5),
        term_weights=TermWeights(*(rng.uniform(0.5, 2.0) for _ in range(4))),
        starts=starts,
        goals=((goal, rng.randint(1, carriers)),),
    )


def random_scaling_scenario(seed: int, n_nodes: int, n_edges: int,
                            horizon: int, scout_steps: int,
                            carriers: int = 3, scouts: int = 3) -> Scenario:
    """Larger instances for decision-variable scaling runs."""
    rng = random.Random(seed)
    graph = random_graph(rng, n_nodes, n_edges)
    goal = n_nodes - 1
    return Scenario(
        graph=graph,
        carrier_count=carriers,
        scout_count=min(scouts, carriers),
        horizon=horizon,
        scout_steps=scout_steps,
        scout_cost_scale=0.25,
        explore_weight=1.0,
        decay_horizon=5,
        optimism=0.0,
        launch_scale=0.25,
        starts=((0, carriers),),
        goals=((goal, 1),),
    )
