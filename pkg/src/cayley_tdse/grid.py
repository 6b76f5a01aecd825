"""Spatial grid, physical constants, wave-packet and potential definitions."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np


class GridError(ValueError):
    """Raised for an invalid grid, packet or potential specification."""


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        if not (self.hbar > 0 and self.mass > 0):
            raise GridError(f"hbar and mass must be positive, got {self.hbar}, {self.mass}")


@dataclass(frozen=True)
class SpatialGrid:
    """Uniform grid of ``J + 1`` points ``x_0 = x_min, ..., x_J = x_max``."""

    x_min: float
    x_max: float
    J: int

    def __post_init__(self):
        if not (self.x_max > self.x_min):
            raise GridError(f"invalid extent: x_max={self.x_max} must exceed x_min={self.x_min}")
        if self.J < 8:
            raise GridError(f"grid too small: J={self.J} < 8")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.J

    @property
    def num_points(self) -> int:
        return self.J + 1

    @property
    def x(self) -> np.ndarray:
        x = self.x_min + np.arange(self.J + 1) * self.dx
        # pin the right endpoint so it is reproduced exactly
        x[-1] = self.x_max
        return x

    @property
    def interior(self) -> slice:
        return slice(1, self.J)


def build_grid(x_min: float, x_max: float, J: int) -> SpatialGrid:
    return SpatialGrid(float(x_min), float(x_max), int(J))


@dataclass(frozen=True)
class TimeGrid:
    dt: float
    num_steps: int

    def __post_init__(self):
        if not self.dt > 0:
            raise GridError(f"dt must be positive, got {self.dt}")
        if self.num_steps < 1:
            raise GridError(f"num_steps must be >= 1, got {self.num_steps}")


@dataclass(frozen=True)
class WavePacketSpec:
    """Gaussian packet: centre ``x0``, position standard deviation ``sigma``, momentum ``p0``."""

    x0: float
    sigma: float
    p0: float = 0.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise GridError(f"sigma must be positive, got {self.sigma}")


@dataclass(frozen=True)
class FreePotential:
    pass


@dataclass(frozen=True)
class HarmonicPotential:
    omega: float

    def __post_init__(self):
        if not self.omega > 0:
            raise GridError(f"harmonic potential needs omega > 0, got {self.omega}")


@dataclass(frozen=True)
class TabulatedPotential:
    values: tuple[float, ...] = field(default=())

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=float)
        if not np.all(np.isfinite(arr)):
            raise GridError("tabulated potential must be finite everywhere")


PotentialSpec = FreePotential | HarmonicPotential | TabulatedPotential


def eval_potential(spec: PotentialSpec, grid: SpatialGrid,
                   constants: PhysicalConstants) -> np.ndarray:
    """Real potential energy at every grid point."""
    if isinstance(spec, FreePotential):
        return np.zeros(grid.num_points)
    if isinstance(spec, HarmonicPotential):
        return 0.5 * constants.mass * spec.omega**2 * grid.x**2
    if isinstance(spec, TabulatedPotential):
        values = np.asarray(spec.values, dtype=float)
        if values.shape != (grid.num_points,):
            raise GridError(
                f"tabulated potential has {values.size} values, grid has {grid.num_points}")
        return values.copy()
    raise GridError(f"unknown potential spec {spec!r}")


@dataclass(frozen=True)
class WaveFunction:
    """Complex amplitudes on every grid point at one instant; ends are held at zero."""

    amplitudes: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex)
        if amp.ndim != 1 or amp.size < 2:
            raise GridError("amplitudes must be a 1D array over the grid")
        if amp[0] != 0 or amp[-1] != 0:
            raise GridError("Dirichlet boundary violated: end amplitudes must be zero")
        object.__setattr__(self, "amplitudes", amp)

    def __len__(self):
        return self.amplitudes.size

    def norm(self, dx: float) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2) * dx)


def init_gaussian(grid: SpatialGrid, constants: PhysicalConstants,
                  spec: WavePacketSpec) -> WaveFunction:
    """Sample a minimum-uncertainty Gaussian and normalise it on the grid.

    The amplitude is ``exp(-(x - x0)^2 / (4 sigma^2)) * exp(i p0 x / hbar)``.
    Endpoints are zeroed before the discrete norm is set to one. Warns if the
    packet centre sits closer than ``5 sigma`` to either boundary.
    """
    if min(spec.x0 - grid.x_min, grid.x_max - spec.x0) < 5 * spec.sigma:
        warnings.warn(
            f"wave packet at x0={spec.x0} with sigma={spec.sigma} touches the boundary "
            f"of [{grid.x_min}, {grid.x_max}]", RuntimeWarning, stacklevel=2)
    x = grid.x
    psi = ((2 * np.pi * spec.sigma**2) ** -0.25
           * np.exp(-((x - spec.x0) ** 2) / (4 * spec.sigma**2))
           * np.exp(1j * spec.p0 * x / constants.hbar))
    psi[0] = psi[-1] = 0.0
    psi /= np.sqrt(np.sum(np.abs(psi) ** 2) * grid.dx)
    return WaveFunction(psi, 0.0)
