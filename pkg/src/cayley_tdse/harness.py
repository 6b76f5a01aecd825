"""Scenario runs, scheme comparison and convergence studies."""

from __future__ import annotations

import contextlib
import csv
import io
import json
import sys
import time
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .analytic import omega0_of, uncertainty_free, uncertainty_harmonic
from .config import RunConfig
from .discretization import SchemeKind, build_scheme
from .grid import (
    FreePotential,
    HarmonicPotential,
    SpatialGrid,
    eval_potential,
    init_gaussian,
)
from .observables import ObservableRecord, mean_potential, record
from .propagator import propagate, start_run

CSV_COLUMNS = ("time", "norm", "mean_x", "mean_p", "delta_x", "delta_p",
               "uncertainty_product", "analytic_reference", "relative_error", "mean_H")

CONTAINMENT_BAND = 5
CONTAINMENT_TOL = 1e-8


def analytic_reference(config: RunConfig):
    """Closed-form uncertainty product as a function of time, or None."""
    w0 = omega0_of(config.packet, config.constants)
    hbar = config.constants.hbar
    if isinstance(config.potential, FreePotential):
        return lambda t: uncertainty_free(w0, t, hbar)
    if isinstance(config.potential, HarmonicPotential):
        omega = config.potential.omega
        return lambda t: uncertainty_harmonic(omega, w0, t, hbar)
    return None


def format_value(v) -> str:
    if v is None:
        return ""
    return f"{v:.17g}"


def write_records(records, stream, fmt: str = "csv") -> None:
    if fmt == "csv":
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for rec in records:
            d = rec.as_dict()
            writer.writerow([format_value(d[c]) for c in CSV_COLUMNS])
    elif fmt == "jsonl":
        for rec in records:
            d = rec.as_dict()
            stream.write(json.dumps({c: d[c] for c in CSV_COLUMNS}) + "\n")
    else:
        raise ValueError(f"unknown output format {fmt!r}")


@contextlib.contextmanager
def _open_out(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


@dataclass
class ScenarioResult:
    config: RunConfig
    records: list[ObservableRecord]
    wall_time: float
    contained: bool = True

    @property
    def max_relative_error(self) -> float | None:
        errs = [r.relative_error for r in self.records if r.relative_error is not None]
        return max(errs) if errs else None

    @property
    def norm_drift(self) -> float:
        return abs(self.records[-1].norm - 1.0)

    def summary(self) -> str:
        mre = self.max_relative_error
        mre_txt = "n/a" if mre is None else f"{mre:.6e}"
        return (f"scheme={self.config.scheme.value} steps={self.config.num_steps} "
                f"max_relative_error={mre_txt} final_norm_drift={self.norm_drift:.3e} "
                f"wall_time={self.wall_time:.2f}s")


def simulate(config: RunConfig, every: int | None = None) -> ScenarioResult:
    """Propagate the configured packet and collect observable records."""
    grid = config.grid
    constants = config.constants
    V = eval_potential(config.potential, grid, constants)
    with warnings.catch_warnings():
        warnings.simplefilter("always")
        psi0 = init_gaussian(grid, constants, config.packet)
    scheme = build_scheme(grid, V, constants, config.dt, config.scheme)
    ref = analytic_reference(config)
    v0 = mean_potential(psi0, grid, V)
    records: list[ObservableRecord] = []
    contained = [True]

    def observe(_, psi):
        band = np.abs(np.r_[psi.amplitudes[:CONTAINMENT_BAND + 1],
                            psi.amplitudes[-CONTAINMENT_BAND - 1:]])
        if contained[0] and band.max() > CONTAINMENT_TOL:
            contained[0] = False
            warnings.warn(f"wave function reaches the boundary band at t={psi.time:.6g} "
                          f"(|psi| = {band.max():.2e}); results may be contaminated",
                          RuntimeWarning)
        records.append(record(psi, grid, V, constants, config.packet, ref,
                              config.scheme, mean_v0=v0))

    start = time.perf_counter()
    run = start_run(scheme, psi0, config.diagnostics)
    propagate(run, config.num_steps, observe, every or config.every)
    return ScenarioResult(config, records, time.perf_counter() - start, contained[0])


def run_scenario(config: RunConfig) -> ScenarioResult:
    """Simulate, write records to ``config.out`` and return the result."""
    result = simulate(config)
    with _open_out(config.out) as fh:
        write_records(result.records, fh, config.format)
    return result


@dataclass
class Comparison:
    tri: ScenarioResult
    penta: ScenarioResult

    @property
    def times(self) -> np.ndarray:
        return np.array([r.time for r in self.tri.records])

    @property
    def ratio(self) -> float:
        """``max_err(tri) / max_err(penta)``."""
        return self.tri.max_relative_error / self.penta.max_relative_error

    def rows(self):
        for a, b in zip(self.tri.records, self.penta.records):
            yield a.time, a.relative_error, b.relative_error


def compare_schemes(config: RunConfig) -> Comparison:
    """Run both schemes on identical inputs; ``config.scheme`` is ignored."""
    if analytic_reference(config) is None:
        raise ValueError("scheme comparison needs a free or harmonic potential")
    tri = simulate(replace(config, scheme=SchemeKind.TRIDIAGONAL))
    penta = simulate(replace(config, scheme=SchemeKind.PENTADIAGONAL))
    return Comparison(tri, penta)


def write_comparison(comp: Comparison, stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(("time", "relative_error_tri", "relative_error_penta"))
    for t, e_tri, e_penta in comp.rows():
        writer.writerow((format_value(t), format_value(e_tri), format_value(e_penta)))


class InsufficientPointsError(ValueError):
    pass


@dataclass
class ConvergenceResult:
    scheme: SchemeKind
    dx: np.ndarray
    errors: np.ndarray

    @property
    def order(self) -> float:
        """Least-squares slope of ``log(error)`` against ``log(dx)``."""
        return float(np.polyfit(np.log(self.dx), np.log(self.errors), 1)[0])


def grid_for_spacing(config: RunConfig, dx: float) -> SpatialGrid:
    length = config.grid.x_max - config.grid.x_min
    J = round(length / dx)
    if abs(J * dx - length) > 1e-9 * length:
        raise ValueError(f"dx={dx} does not divide the domain length {length}")
    return SpatialGrid(config.grid.x_min, config.grid.x_max, J)


def convergence_study(config: RunConfig, dx_list, schemes=tuple(SchemeKind)
                      ) -> dict[SchemeKind, ConvergenceResult]:
    """Relative uncertainty-product error at ``t_max`` for each spacing and scheme."""
    dx_list = [float(d) for d in dx_list]
    if len(dx_list) < 3:
        raise InsufficientPointsError(
            f"convergence study needs at least 3 grid spacings, got {len(dx_list)}")
    if analytic_reference(config) is None:
        raise ValueError("convergence study needs a free or harmonic potential")
    out = {}
    for kind in schemes:
        kind = SchemeKind.parse(kind)
        errors = []
        for dx in dx_list:
            cfg = replace(config, scheme=kind, grid=grid_for_spacing(config, dx))
            res = simulate(cfg, every=cfg.num_steps)
            errors.append(res.records[-1].relative_error)
        out[kind] = ConvergenceResult(kind, np.array(dx_list), np.array(errors))
    return out


def render_records(records, fmt="csv") -> str:
    buf = io.StringIO()
    write_records(records, buf, fmt)
    return buf.getvalue()
