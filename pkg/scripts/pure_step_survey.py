#!/usr/bin/env python3
"""Survey of the canonical pure-step profile: scattering data, factor
functions and leading-order asymptotics along a fan of rays.

Writes CSVs under out/ (scatter.csv, delta.csv, asymptote.csv) via the CLI,
so the emitted formats are exactly the published ones.
"""

import pathlib
import sys

from steplpd.cli import main

OUT = pathlib.Path(__file__).resolve().parent.parent / "out"


def run():
    OUT.mkdir(exist_ok=True)
    A, gamma = "2.0", str(1.0 / 27.0)
    jobs = [
        (["--out", str(OUT / "scatter.csv"), "scatter", "--A", A,
          "--gamma", gamma, "--n", "201"], "scatter.csv"),
        (["--out", str(OUT / "delta.csv"), "delta", "--A", A,
          "--gamma", gamma, "--mu", "0.5", "--n", "40"], "delta.csv"),
        (["--out", str(OUT / "asymptote.csv"), "asymptote", "--A", A,
          "--gamma", gamma, "--mu", "0.3", "0.5", "0.8",
          "--t", "10", "100", "1000", "10000"], "asymptote.csv"),
    ]
    for argv, name in jobs:
        code = main(argv)
        print(f"{name}: exit {code}")
        if code != 0:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(run())
