#!/usr/bin/env python
"""Relative error of the uncertainty product for both schemes, free and harmonic cases.

Writes one CSV per scenario with columns time, relative_error_tri,
relative_error_penta, suitable for plotting on a log axis.
"""
import argparse
import math
from pathlib import Path

from cayley_tdse.config import build_config, merge_settings
from cayley_tdse.harness import compare_schemes, write_comparison

SCENARIOS = {
    "free": dict(potential="free", x0=-50.0, sigma=2.0, p0=1.0, tmax=50.0),
    "harmonic": dict(potential="harmonic", omega=0.1, x0=-10.0, sigma=2.0, p0=0.0,
                     tmax=round(math.pi / 0.1, 2)),
}

if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--outdir", default="results")
    parser.add_argument("--dt", type=float, default=0.01)
    parser.add_argument("--J", type=int, default=4000)
    parser.add_argument("--every", type=int, default=10)
    args = parser.parse_args()

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for name, overrides in SCENARIOS.items():
        settings = merge_settings(None, {**overrides, "dt": args.dt, "J": args.J,
                                         "every": args.every})
        comp = compare_schemes(build_config(settings))
        with open(outdir / f"errors_{name}.csv", "w", newline="") as fh:
            write_comparison(comp, fh)
        print(f"{name:9s} max error tri {comp.tri.max_relative_error:.3e}  "
              f"penta {comp.penta.max_relative_error:.3e}  ratio {comp.ratio:.1f}")
