import numpy as np
import pytest

from cayley_tdse.analytic import omega0_of, uncertainty_free
from cayley_tdse.discretization import build_scheme
from cayley_tdse.grid import (
    HarmonicPotential,
    PhysicalConstants,
    WavePacketSpec,
    build_grid,
    eval_potential,
    init_gaussian,
)
from cayley_tdse.observables import (
    HermiticityError,
    first_derivative,
    mean_p2_direct,
    mean_p2_energy_method,
    moment_p,
    moment_x,
    norm,
    record,
)
from cayley_tdse.propagator import propagate, start_run

C = PhysicalConstants()


@pytest.fixture
def grid():
    return build_grid(-100.0, 100.0, 4000)


def test_symmetric_packet_centred(grid):
    psi = init_gaussian(grid, C, WavePacketSpec(0.0, 2.0, 0.0))
    assert abs(moment_x(psi, grid, 1)) < 1e-10


def test_second_moment_gaussian_identity(grid):
    psi = init_gaussian(grid, C, WavePacketSpec(-10.0, 2.0, 0.0))
    assert moment_x(psi, grid, 2) == pytest.approx(104.0, abs=1e-4)


def test_first_moment_far_left(grid):
    psi = init_gaussian(grid, C, WavePacketSpec(-50.0, 2.0, 1.0))
    assert abs(moment_x(psi, grid, 1) + 50) < 1e-6


def test_moment_x_divides_by_norm(grid):
    psi = init_gaussian(grid, C, WavePacketSpec(3.0, 2.0, 0.0))
    assert moment_x(3 * psi.amplitudes, grid, 1) == pytest.approx(3.0, abs=1e-10)
    with pytest.raises(ValueError):
        moment_x(psi, grid, 3)


@pytest.mark.parametrize("method", ["spectral", "five_point"])
def test_real_wavefunction_has_no_momentum(grid, method):
    psi = init_gaussian(grid, C, WavePacketSpec(-10.0, 2.0, 0.0))
    assert abs(moment_p(psi, grid, C, method)) < 1e-10


@pytest.mark.parametrize("method,p0", [("spectral", 1.0), ("spectral", -3.0), ("five_point", 1.0)])
def test_momentum_of_plane_wave_factor(grid, method, p0):
    psi = init_gaussian(grid, C, WavePacketSpec(0.0, 2.0, p0))
    assert moment_p(psi, grid, C, method) == pytest.approx(p0, abs=1e-6)


def test_five_point_momentum_bias_is_fourth_order():
    # <p> of exp(i k x) under the five-point rule is k (1 - (k h)^4 / 30 + ...)
    p0, biases = -3.0, []
    for J in (2000, 4000):
        g = build_grid(-100.0, 100.0, J)
        psi = init_gaussian(g, C, WavePacketSpec(0.0, 2.0, p0))
        biases.append(moment_p(psi, g, C, "five_point") - p0)
    assert biases[0] / biases[1] == pytest.approx(16, rel=0.05)
    assert abs(biases[1]) > 1e-6    # why the spectral rule is the default


def test_five_point_first_derivative_formula():
    v = np.arange(7.0) ** 3
    d = first_derivative(v, 1.0, "five_point")
    assert d[3] == pytest.approx(27.0)     # exact for cubics
    with pytest.raises(ValueError):
        first_derivative(v, 1.0, "bogus")


@pytest.mark.parametrize("method", ["spectral", "five_point"])
def test_moment_p_detects_wall_leak(method):
    # a ramp that does not vanish at the right wall leaves a boundary term
    g = build_grid(0.0, 1.0, 100)
    with pytest.raises(HermiticityError):
        moment_p(np.linspace(0, 1, 101).astype(complex), g, C, method)


def test_energy_method_free_space(grid):
    spec = WavePacketSpec(-50.0, 2.0, 1.0)
    V = np.zeros(grid.num_points)
    psi = init_gaussian(grid, C, spec)
    assert mean_p2_energy_method(psi, spec, V, grid, C) == 1.0625


def test_energy_method_initial_state_any_potential(grid):
    spec = WavePacketSpec(-10.0, 2.0, 0.5)
    V = eval_potential(HarmonicPotential(0.1), grid, C)
    psi = init_gaussian(grid, C, spec)
    assert mean_p2_energy_method(psi, spec, V, grid, C) == 0.25 + 1 / 16


def test_energy_method_quarter_period_matches_direct(grid):
    omega = 0.1
    spec = WavePacketSpec(-10.0, 2.0, 0.0)
    V = eval_potential(HarmonicPotential(omega), grid, C)
    psi = init_gaussian(grid, C, spec)
    scheme = build_scheme(grid, V, C, 0.01, "penta")
    n = round(np.pi / (2 * omega) / 0.01)
    state = propagate(start_run(scheme, psi), n).state
    assert abs(moment_x(state, grid, 1)) < 0.05
    energy = mean_p2_energy_method(state, spec, V, grid, C)
    direct = mean_p2_direct(state, grid, C)
    assert energy > 1.0      # potential energy ~ 0.5 converted to kinetic
    assert abs(energy - direct) / direct < 1e-4


def test_record_at_start(grid):
    spec = WavePacketSpec(-50.0, 2.0, 1.0)
    psi = init_gaussian(grid, C, spec)
    w0 = omega0_of(spec, C)
    rec = record(psi, grid, np.zeros(grid.num_points), C, spec, lambda t: uncertainty_free(w0, t))
    assert abs(rec.uncertainty_product - 0.5) < 1e-8
    assert rec.relative_error <= 2e-8
    assert abs(rec.norm - 1) < 1e-10
    assert rec.delta_x**2 == pytest.approx(rec.mean_x2 - rec.mean_x**2)
    assert rec.mean_H == pytest.approx(1.0625 / 2, rel=1e-6)


def test_record_free_packet_at_t8():
    g = build_grid(-60.0, 60.0, 2400)
    spec = WavePacketSpec(-10.0, 2.0, 1.0)
    V = np.zeros(g.num_points)
    psi = init_gaussian(g, C, spec)
    w0 = omega0_of(spec, C)
    assert w0 == 0.125
    state = propagate(start_run(build_scheme(g, V, C, 0.01, "penta"), psi), 800).state
    rec = record(state, g, V, C, spec, lambda t: uncertainty_free(w0, t))
    assert rec.analytic_reference == pytest.approx(0.7071068, abs=1e-7)
    assert rec.relative_error < 5e-5   # dominated by the dt = 0.01 time error
    assert abs(rec.norm - 1) < 1e-10
    assert rec.uncertainty_product >= 0.5 - 1e-6


def test_record_without_reference(grid):
    spec = WavePacketSpec(0.0, 2.0, 0.0)
    psi = init_gaussian(grid, C, spec)
    rec = record(psi, grid, np.zeros(grid.num_points), C, spec)
    assert rec.analytic_reference is None and rec.relative_error is None


def test_norm_trapezoid(grid):
    psi = init_gaussian(grid, C, WavePacketSpec(0.0, 2.0, 0.0))
    assert norm(psi, grid) == pytest.approx(1.0, abs=1e-14)
