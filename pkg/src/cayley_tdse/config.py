"""Run configuration and its parsing from flags and key-value files."""

from __future__ import annotations

import argparse
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .discretization import SchemeKind
from .grid import (
    FreePotential,
    GridError,
    HarmonicPotential,
    PhysicalConstants,
    PotentialSpec,
    SpatialGrid,
    TabulatedPotential,
    WavePacketSpec,
)
from .propagator import Diagnostics


class ConfigError(ValueError):
    """Bad command line or configuration file."""


# free packet at x0=-50 moving right; stays clear of the walls until t ~ 48
DEFAULTS = {
    "scheme": "penta",
    "potential": "free",
    "omega": None,
    "potential_file": None,
    "xmin": -100.0,
    "xmax": 100.0,
    "J": 4000,
    "dt": 0.01,
    "tmax": 50.0,
    "x0": -50.0,
    "sigma": 2.0,
    "p0": 1.0,
    "hbar": 1.0,
    "mass": 1.0,
    "out": "-",
    "format": "csv",
    "every": 10,
    "check_residuals": False,
    "dx_list": None,
}

_TYPES = {
    "scheme": str, "potential": str, "omega": float, "potential_file": str,
    "xmin": float, "xmax": float, "J": int, "dt": float, "tmax": float,
    "x0": float, "sigma": float, "p0": float, "hbar": float, "mass": float,
    "out": str, "format": str, "every": int, "check_residuals": bool, "dx_list": str,
}


@dataclass(frozen=True)
class RunConfig:
    scheme: SchemeKind
    potential: PotentialSpec
    grid: SpatialGrid
    dt: float
    t_max: float
    packet: WavePacketSpec
    constants: PhysicalConstants = field(default_factory=PhysicalConstants)
    out: str = "-"
    format: str = "csv"
    every: int = 10
    diagnostics: Diagnostics = Diagnostics.NONE

    @property
    def num_steps(self) -> int:
        return steps_for(self.t_max, self.dt)


def steps_for(t_max: float, dt: float) -> int:
    ratio = t_max / dt
    n = round(ratio)
    if abs(ratio - n) <= 1e-9 * max(1.0, abs(ratio)):
        return int(n)
    n = math.floor(ratio)
    warnings.warn(f"tmax/dt = {ratio} is not an integer; running {n} steps", RuntimeWarning)
    return int(n)


def _bool(text) -> bool:
    if isinstance(text, bool):
        return text
    low = str(text).strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"invalid boolean {text!r}")


def read_config_file(path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment, keys mirror the flags."""
    values = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, val = (s.strip() for s in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        if key not in _TYPES:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = val
    return values


def _coerce(key, value):
    if value is None:
        return None
    typ = _TYPES[key]
    try:
        if typ is bool:
            return _bool(value)
        if typ is int:
            as_float = float(value)
            if as_float != int(as_float):
                raise ValueError
            return int(as_float)
        return typ(value)
    except (TypeError, ValueError):
        raise ConfigError(f"invalid value for {key}: {value!r}") from None


def merge_settings(file_values: dict | None, flag_values: dict) -> dict:
    """Defaults, then the config file, then explicitly given flags."""
    settings = dict(DEFAULTS)
    for source in (file_values or {}, flag_values):
        for key, val in source.items():
            if val is not None and key in _TYPES:
                settings[key] = _coerce(key, val)
    return settings


def build_config(settings: dict) -> RunConfig:
    s = settings
    try:
        scheme = SchemeKind.parse(s["scheme"])
    except ValueError as exc:
        raise ConfigError(f"invalid value for scheme: {exc}") from None
    for key in ("dt", "tmax", "sigma", "hbar", "mass"):
        if not (s[key] > 0 and math.isfinite(s[key])):
            raise ConfigError(f"invalid value for {key}: {s[key]!r} (must be positive)")
    if s["every"] < 1:
        raise ConfigError(f"invalid value for every: {s['every']!r}")
    if s["format"] not in ("csv", "jsonl"):
        raise ConfigError(f"invalid value for format: {s['format']!r}")
    try:
        grid = SpatialGrid(s["xmin"], s["xmax"], s["J"])
        constants = PhysicalConstants(s["hbar"], s["mass"])
        packet = WavePacketSpec(s["x0"], s["sigma"], s["p0"])
        kind = s["potential"]
        if kind == "free":
            potential = FreePotential()
        elif kind == "harmonic":
            if s["omega"] is None:
                raise ConfigError("inconsistent scenario: harmonic potential needs --omega")
            potential = HarmonicPotential(s["omega"])
        elif kind == "file":
            if not s["potential_file"]:
                raise ConfigError("inconsistent scenario: file potential needs --potential-file")
            values = np.loadtxt(s["potential_file"], dtype=float, ndmin=1)
            potential = TabulatedPotential(tuple(values.tolist()))
            if values.size != grid.num_points:
                raise ConfigError(
                    f"inconsistent scenario: potential file has {values.size} values, "
                    f"grid has {grid.num_points}")
        else:
            raise ConfigError(f"invalid value for potential: {kind!r}")
    except GridError as exc:
        raise ConfigError(f"invalid value: {exc}") from None
    diagnostics = Diagnostics.RESIDUAL_CHECK if s["check_residuals"] else Diagnostics.NONE
    return RunConfig(scheme=scheme, potential=potential, grid=grid, dt=s["dt"],
                     t_max=s["tmax"], packet=packet, constants=constants, out=s["out"],
                     format=s["format"], every=s["every"], diagnostics=diagnostics)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cayley-tdse",
                     description="Crank-Nicolson propagation of a 1D Gaussian wave packet.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, helptext in (("run", "propagate one scenario and write observables"),
                           ("compare", "run both schemes and compare relative errors"),
                           ("converge", "estimate spatial convergence order per scheme")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", help="key = value file; flags take precedence")
        if name != "compare":
            p.add_argument("--scheme", choices=["tri", "penta"])
        p.add_argument("--potential", choices=["free", "harmonic", "file"])
        p.add_argument("--potential-file", dest="potential_file",
                       help="one potential value per grid point (for --potential file)")
        p.add_argument("--omega", type=float)
        p.add_argument("--xmin", type=float)
        p.add_argument("--xmax", type=float)
        p.add_argument("--J", type=int)
        p.add_argument("--dt", type=float)
        p.add_argument("--tmax", type=float)
        p.add_argument("--x0", type=float)
        p.add_argument("--sigma", type=float)
        p.add_argument("--p0", type=float)
        p.add_argument("--hbar", type=float)
        p.add_argument("--mass", type=float)
        p.add_argument("--out")
        p.add_argument("--format", choices=["csv", "jsonl"])
        p.add_argument("--every", type=int, metavar="K")
        p.add_argument("--check-residuals", dest="check_residuals", action="store_true",
                       default=None)
        if name == "converge":
            p.add_argument("--dx-list", dest="dx_list",
                           help="comma-separated grid spacings, e.g. 0.4,0.2,0.1")
    return parser


def parse_config(argv=None) -> tuple[str, RunConfig, dict]:
    """Return ``(command, config, settings)`` for a command line.

    ``settings`` is the merged flat dictionary, which also carries
    subcommand-only values such as ``dx_list``.
    """
    args = make_parser().parse_args(argv)
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    file_values = read_config_file(args.config) if args.config else None
    settings = merge_settings(file_values, flags)
    settings["explicit"] = frozenset(
        k for k, v in {**(file_values or {}), **flags}.items() if v is not None)
    return args.command, build_config(settings), settings
