"""Cayley / Crank-Nicolson time stepping."""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .banded import TridiagonalSystem, penta_solve, thomas_solve
from .discretization import DiscretizedScheme, SchemeKind, compute_zeta
from .grid import WaveFunction

RESIDUAL_TOL = 1e-10


class ResidualError(ArithmeticError):
    """A banded solve left a relative residual above :data:`RESIDUAL_TOL`."""


class ObserverError(RuntimeError):
    """The observer callback raised; ``step_index`` says where."""

    def __init__(self, message: str, step_index: int):
        super().__init__(message)
        self.step_index = step_index


class Diagnostics(enum.Enum):
    NONE = "none"
    RESIDUAL_CHECK = "residual-check"
    FULL = "full"


@dataclass(frozen=True)
class PropagationRun:
    scheme: DiscretizedScheme
    state: WaveFunction
    step_index: int = 0
    diagnostics: Diagnostics = Diagnostics.NONE
    t0: float = 0.0

    @property
    def time(self) -> float:
        return self.t0 + self.step_index * self.scheme.dt


def start_run(scheme: DiscretizedScheme, psi: WaveFunction,
              diagnostics: Diagnostics | str = Diagnostics.NONE) -> PropagationRun:
    if psi.amplitudes.size != scheme.n + 2:
        raise ValueError("wave function does not match the scheme's grid")
    return PropagationRun(scheme, psi, 0, Diagnostics(diagnostics), psi.time)


def _solve(scheme: DiscretizedScheme, zeta: np.ndarray) -> np.ndarray:
    if scheme.kind is SchemeKind.TRIDIAGONAL:
        return thomas_solve(TridiagonalSystem.constant(scheme.lhs_diag, scheme.lhs_off1), zeta)
    return penta_solve(scheme.factorization, zeta)


def step(run: PropagationRun) -> PropagationRun:
    """Advance by one time step: ``lhs @ psi_new = conj(lhs) @ psi_old``."""
    scheme = run.scheme
    zeta = compute_zeta(scheme, run.state)
    interior = _solve(scheme, zeta)
    n = run.step_index + 1
    if run.diagnostics is not Diagnostics.NONE:
        scale = np.max(np.abs(zeta))
        resid = np.max(np.abs(scheme.lhs_matvec(interior) - zeta))
        if scale > 0 and resid > RESIDUAL_TOL * scale:
            raise ResidualError(
                f"relative residual {resid / scale:.3e} exceeds {RESIDUAL_TOL} at step {n}")
    amp = np.zeros(scheme.n + 2, dtype=complex)
    amp[1:-1] = interior
    # boundaries stay exactly zero
    return replace(run, state=WaveFunction(amp, run.t0 + n * scheme.dt), step_index=n)


Observer = Callable[[int, WaveFunction], None]


def _frozen(psi: WaveFunction) -> WaveFunction:
    view = psi.amplitudes.view()
    view.setflags(write=False)
    return WaveFunction(view, psi.time)


def propagate(run: PropagationRun, n_steps: int, observer: Observer | None = None,
              every: int = 1) -> PropagationRun:
    """Take ``n_steps`` steps, calling ``observer(step_index, state)`` on a schedule.

    The observer sees the starting state, every ``every``-th step and the
    final step. Exceptions from the observer are re-raised as
    :class:`ObserverError` carrying the step index.
    """
    if n_steps < 1:
        raise ValueError(f"n_steps must be >= 1, got {n_steps}")
    if every < 1:
        raise ValueError(f"observer interval must be >= 1, got {every}")

    def notify(r: PropagationRun):
        if observer is None:
            return
        try:
            observer(r.step_index, _frozen(r.state))
        except Exception as exc:
            raise ObserverError(f"observer failed at step {r.step_index}: {exc}",
                                r.step_index) from exc

    start = run.step_index
    notify(run)
    for k in range(1, n_steps + 1):
        run = step(run)
        if k % every == 0 or k == n_steps:
            notify(run)
    assert run.step_index == start + n_steps
    return run
