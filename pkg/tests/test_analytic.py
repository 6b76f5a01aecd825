import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cayley_tdse.analytic import omega0_of, uncertainty_free, uncertainty_harmonic
from cayley_tdse.grid import PhysicalConstants, WavePacketSpec


def test_free_reference_values():
    assert uncertainty_free(0.125, 0.0) == 0.5
    assert uncertainty_free(0.125, 8.0) == pytest.approx(0.7071068, abs=1e-7)
    assert uncertainty_free(0.125, 1e9) / (0.5 * 0.125 * 1e9) == pytest.approx(1.0, rel=1e-12)
    assert uncertainty_free(0.125, 8.0, hbar=2.0) == pytest.approx(2 * 0.7071068, abs=1e-6)


def test_harmonic_reference_values():
    assert uncertainty_harmonic(0.1, 0.125, 0.0) == 0.5
    assert uncertainty_harmonic(0.1, 0.125, np.pi / 2 / 0.1) == pytest.approx(0.5, abs=1e-15)
    # radicand 0.5 + 0.25 (1.5625 + 0.64) = 1.050625 = 1.025^2
    assert uncertainty_harmonic(0.1, 0.125, np.pi / 4 / 0.1) == pytest.approx(0.5125, abs=1e-12)


def test_harmonic_reference_matches_textbook_form():
    t = np.linspace(0, 40, 401)
    w, w0 = 0.1, 0.125
    c, s = np.cos(w * t), np.sin(w * t)
    textbook = 0.5 * np.sqrt(c**4 + s**4 + 0.25 * (w0**2 / w**2 + w**2 / w0**2) * np.sin(2 * w * t) ** 2)
    np.testing.assert_allclose(uncertainty_harmonic(w, w0, t), textbook, rtol=1e-14)


def test_harmonic_requires_positive_omega():
    with pytest.raises(ValueError):
        uncertainty_harmonic(0.0, 0.125, 1.0)


def test_omega0():
    c = PhysicalConstants()
    assert omega0_of(WavePacketSpec(0, 2.0), c) == 0.125
    assert omega0_of(WavePacketSpec(0, 1 / np.sqrt(2)), c) == pytest.approx(1.0, rel=1e-15)
    assert omega0_of(WavePacketSpec(0, 1e100), c) < 1e-200


@given(st.floats(1e-3, 10.0))
def test_coherent_state_is_minimum_uncertainty(omega):
    t = np.linspace(0, np.pi / omega, 257)
    np.testing.assert_allclose(uncertainty_harmonic(omega, omega, t), 0.5, rtol=0, atol=1e-12)


@given(st.floats(1e-2, 5.0), st.floats(1e-2, 5.0), st.floats(0, 100))
def test_harmonic_is_periodic(omega, omega0, t):
    a = uncertainty_harmonic(omega, omega0, t)
    b = uncertainty_harmonic(omega, omega0, t + np.pi / omega)
    assert a == pytest.approx(b, rel=1e-9)
    assert a >= 0.5


def test_small_omega_limit_is_free():
    t = np.linspace(0, 10, 101)
    np.testing.assert_allclose(uncertainty_harmonic(1e-4, 0.125, t), uncertainty_free(0.125, t),
                               rtol=0, atol=1e-6)
