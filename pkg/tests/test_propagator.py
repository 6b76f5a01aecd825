import numpy as np
import pytest

from cayley_tdse.discretization import SchemeKind, build_scheme
from cayley_tdse.grid import (
    PhysicalConstants,
    WaveFunction,
    WavePacketSpec,
    build_grid,
    init_gaussian,
)
from cayley_tdse.observables import mean_energy, moment_x, norm
from cayley_tdse.propagator import (
    Diagnostics,
    ObserverError,
    ResidualError,
    propagate,
    start_run,
    step,
)

KINDS = list(SchemeKind)
C = PhysicalConstants()


def free_setup(kind, dt=0.01, grid=None, spec=WavePacketSpec(-10.0, 2.0, 1.0)):
    g = grid or build_grid(-40.0, 40.0, 1600)
    V = np.zeros(g.num_points)
    return g, V, build_scheme(g, V, C, dt, kind), init_gaussian(g, C, spec)


@pytest.mark.parametrize("kind", KINDS)
def test_vanishing_step_is_identity(kind):
    g, V, _, psi = free_setup(kind)
    scheme = build_scheme(g, V, C, 1e-300, kind)
    out = step(start_run(scheme, psi)).state
    assert np.max(np.abs(out.amplitudes - psi.amplitudes)) < 1e-12


@pytest.mark.parametrize("kind", KINDS)
def test_single_step_preserves_norm(kind):
    g, _, scheme, psi = free_setup(kind)
    run = step(start_run(scheme, psi))
    assert abs(norm(run.state, g) - 1) < 1e-12
    assert run.step_index == 1
    assert run.state.time == pytest.approx(0.01)
    assert run.state.amplitudes[0] == 0 and run.state.amplitudes[-1] == 0


# the three-point Laplacian needs a finer grid to reach the same tolerance
@pytest.mark.parametrize("kind,J", [("tri", 6000), ("penta", 1200)])
def test_harmonic_ground_state_is_stationary(kind, J):
    omega, dt = 0.1, 0.01
    g = build_grid(-30.0, 30.0, J)
    V = 0.5 * omega**2 * g.x**2
    amp = np.exp(-omega * g.x**2 / 2).astype(complex)
    amp[0] = amp[-1] = 0
    amp /= np.sqrt(np.sum(np.abs(amp) ** 2) * g.dx)
    scheme = build_scheme(g, V, C, dt, kind)
    run = propagate(start_run(scheme, WaveFunction(amp)), 100)
    out = run.state.amplitudes
    assert np.max(np.abs(np.abs(out) ** 2 - np.abs(amp) ** 2)) < 1e-8
    # phase accumulated at the centre after 100 steps of -E0 dt, E0 = omega / 2
    centre = J // 2
    phase = np.angle(out[centre] / amp[centre])
    assert phase == pytest.approx(-0.05 * dt * 100, rel=1e-4)


def test_observer_schedule():
    g, _, scheme, psi = free_setup("tri")
    seen = []
    propagate(start_run(scheme, psi), 1, lambda k, s: seen.append(k), every=5)
    assert seen == [0, 1]
    seen.clear()
    propagate(start_run(scheme, psi), 12, lambda k, s: seen.append(k), every=5)
    assert seen == [0, 5, 10, 12]


def test_observer_state_is_read_only():
    _, _, scheme, psi = free_setup("penta")

    def poke(k, state):
        state.amplitudes[5] = 1.0

    with pytest.raises(ObserverError) as info:
        propagate(start_run(scheme, psi), 3, poke)
    assert info.value.step_index == 0


def test_observer_failure_reports_step():
    _, _, scheme, psi = free_setup("penta")

    def fail_late(k, state):
        if k == 4:
            raise RuntimeError("boom")

    with pytest.raises(ObserverError, match="step 4"):
        propagate(start_run(scheme, psi), 10, fail_late, every=2)


def test_propagate_argument_checks():
    _, _, scheme, psi = free_setup("tri")
    with pytest.raises(ValueError):
        propagate(start_run(scheme, psi), 0)
    with pytest.raises(ValueError):
        propagate(start_run(scheme, psi), 3, every=0)


@pytest.mark.parametrize("kind,J", [("tri", 6000), ("penta", 2400)])
def test_free_packet_centre_follows_ehrenfest(kind, J):
    g = build_grid(-60.0, 60.0, J)
    _, _, scheme, psi = free_setup(kind, grid=g)
    run = propagate(start_run(scheme, psi), 1000)
    assert run.state.time == pytest.approx(10.0, rel=1e-14)
    assert abs(moment_x(run.state, g, 1) - 0.0) < 1e-3


@pytest.mark.parametrize("kind", KINDS)
def test_norm_and_energy_conserved(kind):
    g, V, scheme, psi = free_setup(kind)
    e0 = mean_energy(psi, g, V, C, kind)
    drift = []
    propagate(start_run(scheme, psi), 500,
              lambda k, s: drift.append((abs(norm(s, g) - 1),
                                         abs(mean_energy(s, g, V, C, kind) - e0) / e0)),
              every=50)
    assert max(d[0] for d in drift) < 1e-10
    assert max(d[1] for d in drift) < 1e-8


@pytest.mark.parametrize("kind", KINDS)
def test_time_reversal(kind):
    g, V, fwd, psi = free_setup(kind, dt=0.02)
    back = build_scheme(g, V, C, -0.02, kind)
    run = propagate(start_run(fwd, psi), 200)
    ret = propagate(start_run(back, run.state), 200)
    assert np.max(np.abs(ret.state.amplitudes - psi.amplitudes)) < 1e-8


def test_residual_check_passes_for_cn_matrices():
    _, _, scheme, psi = free_setup("penta")
    run = propagate(start_run(scheme, psi, Diagnostics.RESIDUAL_CHECK), 20)
    assert run.step_index == 20


def test_residual_check_detects_corruption():
    from dataclasses import replace
    _, _, scheme, psi = free_setup("penta")
    # factorisation of a different matrix than the stored lhs band
    other = build_scheme(build_grid(-40.0, 40.0, 1600), np.ones(1601), C, 0.5, "penta")
    bad = replace(scheme, factorization=other.factorization)
    with pytest.raises(ResidualError, match="step 1"):
        step(start_run(bad, psi, "residual-check"))


def test_start_run_rejects_mismatched_state():
    _, _, scheme, _ = free_setup("tri")
    with pytest.raises(ValueError):
        start_run(scheme, WaveFunction(np.zeros(10, complex)))
