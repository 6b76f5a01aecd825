#!/usr/bin/env python
"""Spatial convergence order of both schemes for a free Gaussian packet."""
import argparse

from cayley_tdse.config import build_config, merge_settings
from cayley_tdse.harness import convergence_study

if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dx", type=float, nargs="+", default=[0.4, 0.2, 0.1])
    parser.add_argument("--dt", type=float, default=1e-4)
    parser.add_argument("--tmax", type=float, default=5.0)
    args = parser.parse_args()

    settings = merge_settings(None, dict(xmin=-50.0, xmax=50.0, J=1000, x0=-5.0, sigma=2.0,
                                         p0=1.0, dt=args.dt, tmax=args.tmax))
    for kind, res in convergence_study(build_config(settings), args.dx).items():
        errs = "  ".join(f"{dx:g}: {e:.3e}" for dx, e in zip(res.dx, res.errors))
        print(f"{kind.value:6s} order {res.order:.3f}   [{errs}]")
