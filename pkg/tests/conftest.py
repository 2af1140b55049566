import json
from pathlib import Path

import pytest

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


@pytest.fixture(scope="session")
def ablation_path() -> Path:
    return SCENARIOS / "ablation8.json"


@pytest.fixture(scope="session")
def ablation_scenario(ablation_path):
    from scoutplan import load_scenario_file

    return load_scenario_file(ablation_path)


def minimal_document(**overrides) -> str:
    doc = {
        "nodes": ["a", "b"],
        "edges": [{"a": "a", "b": "b", "w": 10.0, "u_lower": 2.0,
                   "u_upper": 5.0, "r": 0.5}],
        "team": {"n_A": 1, "n_K": 0},
        "horizon": {"n_T": 3, "n_tau": 2},
        "params": {"zeta": 0.25, "xi": 1.0, "lambda": 5, "beta": 0.0,
                   "launch_scale": 0.5, "term_weights": [1, 1, 1, 1]},
        "starts": [{"node": "a", "count": 1}],
        "goals": [{"node": "b", "min_count": 1}],
    }
    doc.update(overrides)
    return json.dumps(doc)
