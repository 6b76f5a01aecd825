"""Closed-form uncertainty products for a Gaussian packet."""

from __future__ import annotations

import numpy as np

from .grid import PhysicalConstants, WavePacketSpec


def omega0_of(spec: WavePacketSpec, constants: PhysicalConstants = PhysicalConstants()) -> float:
    """Spreading frequency ``hbar / (2 m sigma^2)``."""
    return constants.hbar / (2 * constants.mass * spec.sigma**2)


def uncertainty_free(omega0, t, hbar: float = 1.0):
    """``(hbar/2) sqrt(1 + omega0^2 t^2)`` for a freely spreading packet."""
    t = np.asarray(t, dtype=float)
    out = 0.5 * hbar * np.sqrt(1.0 + (omega0 * t) ** 2)
    return float(out) if out.ndim == 0 else out


def uncertainty_harmonic(omega, omega0, t, hbar: float = 1.0):
    """Uncertainty product of a Gaussian in ``V = m omega^2 x^2 / 2``.

    With ``r = omega0 / omega`` the radicand
    ``cos^4 + sin^4 + (r^2 + r^-2) sin^2(2 omega t) / 4`` is evaluated as
    ``1 + (r - 1/r)^2 sin^2(2 omega t) / 4``, which is exactly one for a
    coherent state (``r = 1``).
    """
    if not omega > 0:
        raise ValueError(f"omega must be positive, got {omega}")
    t = np.asarray(t, dtype=float)
    s2 = np.sin(2 * omega * t) ** 2
    ratio = omega0 / omega
    out = 0.5 * hbar * np.sqrt(1.0 + 0.25 * (ratio - 1.0 / ratio) ** 2 * s2)
    return float(out) if out.ndim == 0 else out
