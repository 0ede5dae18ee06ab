#!/usr/bin/env python3
"""Calibrate the convergence and restart-escape acceptance thresholds.

Runs the two committed experiment protocols (seeds and sizes fixed in
evoforge.trials) and prints the observed statistics plus the suggested
frozen thresholds. The numbers asserted in tests/test_acceptance.py were
produced by this script; rerun it after any change to the corpus, the PCA,
the engine, or the experiment protocols, and update the frozen constants if
they moved.
"""

from __future__ import annotations

import json

from evoforge import trials


def main() -> None:
    reports = trials.run_convergence_experiment()
    summary = trials.summarize(reports)
    print("convergence experiment (committed protocol)")
    print(json.dumps(summary, indent=2))
    observed = summary["median_ratio"]
    suggested = min(0.5, round(observed * 1.15, 3))
    print(f"observed median final/initial ratio: {observed:.6f}")
    print(f"suggested frozen threshold (observed * 1.15, capped at 0.5): {suggested}")

    escape = trials.run_escape_experiment()
    print("\nrestart escape experiment (committed protocol)")
    print(json.dumps(escape, indent=2))


if __name__ == "__main__":
    main()
