#!/usr/bin/env python3
"""Run the analytic-vs-exact-simulator cross-check suite and print the report."""

import sys

from thermoquery.verify import run_verification

if __name__ == "__main__":
    seed = int(sys.argv[1]) if len(sys.argv) > 1 else 1234
    report = run_verification(seed=seed)
    for line in report.lines():
        print(line)
    raise SystemExit(0 if report.passed else 2)
