#!/usr/bin/env python3
"""Run the four-variant ablation on the bundled scenario and print the
route-true-cost table (mirrors `scoutplan ablate`)."""

import sys
from pathlib import Path

from scoutplan.cli import main

ROOT = Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    scenario = sys.argv[1] if len(sys.argv) > 1 else str(ROOT / "scenarios/ablation8.json")
    raise SystemExit(main([
        "ablate", scenario, "-o", "out/ablation",
        "--nodes-limit", "25", "--deterministic", "--dot",
    ]))
