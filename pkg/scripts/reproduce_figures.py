#!/usr/bin/env python3
"""Regenerate every figure-data CSV with the documented default parameters.

Writes into out/ (created if missing):
  kickback_curves.csv        post-query temperature per promise class
  distinguishability.csv     machine ground-population gap over the energy grid
  sample_complexity.csv      thermal bound vs classical baselines
  detuning_sweep.csv         per-secret detuned temperature curves
"""

from pathlib import Path

from thermoquery.cli import main

OUT = Path(__file__).resolve().parent.parent / "out"

RUNS = {
    "kickback_curves.csv": ["dj-kickback"],
    "distinguishability.csv": ["distinguishability"],
    "sample_complexity.csv": ["sample-complexity"],
    "detuning_sweep.csv": ["detuning-sweep"],
}


def run() -> int:
    OUT.mkdir(exist_ok=True)
    for filename, args in RUNS.items():
        path = OUT / filename
        code = main(args + ["--out", str(path)])
        if code != 0:
            return code
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(run())
