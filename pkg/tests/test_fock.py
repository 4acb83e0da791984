import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, strategies as st

from twprobe.fock import (
    jc_evolve,
    jc_trajectory,
    oscillation_regime_check,
    rabi_margin,
    short_pulse_valid,
    zero_crossing_frequency,
)


def test_initial_state():
    s = jc_evolve(5, 1.0, 0.0)
    assert s.c_g == 1 and s.c_e == 0


def test_single_photon_first_peak():
    s = jc_evolve(1, 1.0, math.pi / 2)
    assert s.p_e == pytest.approx(1.0, abs=1e-15)


def test_matches_matrix_exponential():
    n, g, t = 9, 0.7, 1.3
    # JC Hamiltonian restricted to {|g,n>, |e,n-1>}
    h = g * math.sqrt(n) * np.array([[0, 1], [1, 0]])
    ref = scipy.linalg.expm(-1j * h * t) @ np.array([1, 0])
    s = jc_evolve(n, g, t)
    np.testing.assert_allclose([s.c_g, s.c_e], ref, atol=1e-14)


@given(st.integers(1, 10**6), st.floats(0, 10), st.floats(0, 100))
def test_norm(n, g, t):
    assert jc_evolve(n, g, t).norm() == pytest.approx(1.0, abs=1e-12)


def test_trajectory_agrees_with_pointwise():
    t = np.linspace(0, 3, 11)
    c_g, c_e = jc_trajectory(4, 0.5, t)
    for ti, a, b in zip(t, c_g, c_e):
        s = jc_evolve(4, 0.5, ti)
        assert (a, b) == (pytest.approx(s.c_g), pytest.approx(s.c_e))


def test_frequency_doubles_from_n_to_4n():
    t = np.linspace(0, 50, 200_001)
    f1 = zero_crossing_frequency(t, jc_trajectory(100, 0.3, t)[0].real)
    f4 = zero_crossing_frequency(t, jc_trajectory(400, 0.3, t)[0].real)
    assert f4 / f1 == pytest.approx(2.0, abs=1e-6)
    assert f1 == pytest.approx(0.3 * 10 / (2 * math.pi), rel=1e-6)


def test_frequency_needs_crossings():
    with pytest.raises(ValueError):
        zero_crossing_frequency([0, 1, 2], [1, 1, 1])


@pytest.mark.parametrize("n", [0, -1, 2.5])
def test_bad_photon_number(n):
    with pytest.raises(ValueError):
        jc_evolve(n, 1.0, 1.0)


def test_regime_examples():
    assert oscillation_regime_check(10_000, 1.0, 0.01, 50.0).satisfied
    assert oscillation_regime_check(10_000, 1.0, 0.01, 50.0).margin == pytest.approx(2.0)
    assert not oscillation_regime_check(100, 1.0, 0.01, 50.0).satisfied
    with pytest.raises(ValueError):
        oscillation_regime_check(1, 0.0, 1.0, 1.0)


@given(n=st.integers(1, 10**6), gamma=st.floats(1e-3, 10.0), tau=st.floats(1e-4, 1.0),
       ratio=st.floats(1.0, 1e6))
def test_margin_is_squared_rabi_phase(n, gamma, tau, ratio):
    # kappa = gamma / ratio, g_eff = sqrt(kappa / tau)
    g_eff = math.sqrt(gamma / ratio / tau)
    margin = oscillation_regime_check(n, gamma, tau, ratio).margin
    assert rabi_margin(n, g_eff, tau) ** 2 == pytest.approx(margin, rel=1e-12)


def test_short_pulse_flag():
    assert short_pulse_valid(1.0, 0.01)
    assert not short_pulse_valid(1.0, 0.5)
    assert not short_pulse_valid(1.0, 0.1)
