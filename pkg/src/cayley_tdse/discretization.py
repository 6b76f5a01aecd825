"""Crank-Nicolson band construction for the three- and five-point Laplacians.

Both schemes solve for the ``J - 1`` interior amplitudes ``psi_1 .. psi_{J-1}``.
Points beyond the grid are zero, so the five-point rows next to either wall
see the same Dirichlet data as the three-point rows.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .banded import (
    PentadiagonalSystem,
    PentaFactorization,
    TridiagonalSystem,
    banded_matvec,
    penta_factorize,
)
from .grid import PhysicalConstants, SpatialGrid


class SchemeKind(enum.Enum):
    TRIDIAGONAL = "tri"
    PENTADIAGONAL = "penta"

    @classmethod
    def parse(cls, value) -> SchemeKind:
        if isinstance(value, cls):
            return value
        aliases = {"tri": cls.TRIDIAGONAL, "tridiagonal": cls.TRIDIAGONAL,
                   "penta": cls.PENTADIAGONAL, "pentadiagonal": cls.PENTADIAGONAL}
        try:
            return aliases[str(value).lower()]
        except KeyError:
            raise ValueError(f"unknown scheme {value!r}") from None


def _ghosted(values, pad: int) -> np.ndarray:
    v = np.asarray(values)
    return np.concatenate([np.zeros(pad, v.dtype), v, np.zeros(pad, v.dtype)])


def second_derivative_stencil(values, j: int, dx: float, kind) -> complex:
    """Second derivative at index ``j`` with zero ghost points outside ``values``."""
    kind = SchemeKind.parse(kind)
    v = _ghosted(values, 2)
    k = j + 2
    if kind is SchemeKind.TRIDIAGONAL:
        return (v[k + 1] - 2 * v[k] + v[k - 1]) / dx**2
    return (-v[k + 2] + 16 * v[k + 1] - 30 * v[k] + 16 * v[k - 1] - v[k - 2]) / (12 * dx**2)


def laplacian(values, dx: float, kind) -> np.ndarray:
    """Vectorised :func:`second_derivative_stencil` at every index."""
    kind = SchemeKind.parse(kind)
    v = _ghosted(values, 2)
    c = slice(2, v.size - 2)
    if kind is SchemeKind.TRIDIAGONAL:
        return (v[3:v.size - 1] - 2 * v[c] + v[1:v.size - 3]) / dx**2
    return (-v[4:] + 16 * v[3:v.size - 1] - 30 * v[c]
            + 16 * v[1:v.size - 3] - v[:v.size - 4]) / (12 * dx**2)


def hamiltonian_apply(psi, potential, dx: float, constants: PhysicalConstants,
                      kind) -> np.ndarray:
    """Discrete ``H psi`` with the scheme's kinetic stencil."""
    psi = np.asarray(psi, dtype=complex)
    kinetic = -(constants.hbar**2 / (2 * constants.mass)) * laplacian(psi, dx, kind)
    return kinetic + np.asarray(potential) * psi


@dataclass(frozen=True)
class DiscretizedScheme:
    """Implicit (lhs) and explicit (rhs) half-step bands over the interior unknowns.

    ``rhs_diag``, ``rhs_off1`` and ``rhs_off2`` are complex conjugates of the
    lhs band when the potential is real. ``off2`` entries are ``None`` for the
    tridiagonal scheme, which also carries no cached factorisation.
    """

    kind: SchemeKind
    dt: float
    dx: float
    lhs_diag: np.ndarray
    lhs_off1: complex
    lhs_off2: complex | None
    rhs_diag: np.ndarray
    rhs_off1: complex
    rhs_off2: complex | None
    interior: slice
    factorization: PentaFactorization | None = None

    @property
    def n(self) -> int:
        return self.lhs_diag.size

    @property
    def lhs(self) -> TridiagonalSystem | PentadiagonalSystem:
        if self.kind is SchemeKind.TRIDIAGONAL:
            return TridiagonalSystem.constant(self.lhs_diag, self.lhs_off1)
        return PentadiagonalSystem.constant(self.lhs_diag, self.lhs_off1, self.lhs_off2)

    def lhs_matvec(self, vec) -> np.ndarray:
        return banded_matvec(self.lhs_diag, self.lhs_off1, vec, self.lhs_off2)


def scheme_coefficients(dx: float, dt: float, potential, constants: PhysicalConstants,
                        kind):
    """Return ``(a, b, c)`` of the implicit half-step matrix; ``c`` is None for tri.

    Three-point::

        a_j = 1 + (i dt / 2 hbar) (hbar^2 / m dx^2 + V_j),  b = -i hbar dt / (4 m dx^2)

    Five-point::

        a_j = 1 + (i dt / 2 hbar) (5 hbar^2 / (4 m dx^2) + V_j)
        b = -i hbar dt / (3 m dx^2),  c = i hbar dt / (48 m dx^2)
    """
    kind = SchemeKind.parse(kind)
    hbar, m = constants.hbar, constants.mass
    V = np.asarray(potential, dtype=float)
    half = 1j * dt / (2 * hbar)
    if kind is SchemeKind.TRIDIAGONAL:
        a = 1 + half * (hbar**2 / (m * dx**2) + V)
        b = -1j * hbar * dt / (4 * m * dx**2)
        return a, b, None
    a = 1 + half * (5 * hbar**2 / (4 * m * dx**2) + V)
    b = -1j * hbar * dt / (3 * m * dx**2)
    c = 1j * hbar * dt / (48 * m * dx**2)
    return a, b, c


def build_scheme(grid: SpatialGrid, potential, constants: PhysicalConstants,
                 dt: float, kind) -> DiscretizedScheme:
    """Assemble the Crank-Nicolson bands; the pentadiagonal lhs is factorised here.

    ``potential`` holds one real value per grid point. ``dt`` may be negative
    (backward propagation).
    """
    kind = SchemeKind.parse(kind)
    V = np.asarray(potential, dtype=float)
    if V.shape != (grid.num_points,):
        raise ValueError(f"potential has shape {V.shape}, grid has {grid.num_points} points")
    if not np.all(np.isfinite(V)):
        raise ValueError("potential must be real and finite")
    if dt == 0 or not np.isfinite(dt):
        raise ValueError(f"invalid time step {dt}")
    a, b, c = scheme_coefficients(grid.dx, dt, V[grid.interior], constants, kind)
    a.setflags(write=False)
    rhs_diag = np.conj(a)
    rhs_diag.setflags(write=False)
    fact = None
    if kind is SchemeKind.PENTADIAGONAL:
        fact = penta_factorize(PentadiagonalSystem.constant(a, b, c))
    return DiscretizedScheme(
        kind=kind, dt=float(dt), dx=grid.dx,
        lhs_diag=a, lhs_off1=b, lhs_off2=c,
        rhs_diag=rhs_diag, rhs_off1=np.conj(b),
        rhs_off2=None if c is None else np.conj(c),
        interior=grid.interior, factorization=fact,
    )


def compute_zeta(scheme: DiscretizedScheme, psi) -> np.ndarray:
    """Explicit half step applied to the interior amplitudes of ``psi``."""
    amp = getattr(psi, "amplitudes", psi)
    amp = np.asarray(amp, dtype=complex)
    if amp.size != scheme.n + 2:
        raise ValueError(f"wave function has {amp.size} points, scheme expects {scheme.n + 2}")
    return banded_matvec(scheme.rhs_diag, scheme.rhs_off1, amp[1:-1], scheme.rhs_off2)
