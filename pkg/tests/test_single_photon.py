import math

import numpy as np
import pytest
import scipy.linalg
import scipy.optimize
from hypothesis import given, settings, strategies as st

from twprobe.errors import DomainError
from twprobe.single_photon import (
    closed_form_a_e,
    discrete_series_a_e,
    init_square_pulse,
    optimize_pulse_length,
    peak_probability,
    post_pulse_decay,
    run_recursion,
    step_recursion,
)


def brute_force_a_e(n_slices, dt, kappa, gamma_np):
    """Amplitudes in the one-excitation sector {e, 1_0, ..., 1_{N-1}} via explicit slice unitaries."""
    theta = math.sqrt(kappa * dt)
    vec = np.zeros(n_slices + 1, dtype=complex)
    vec[1:] = 1 / math.sqrt(n_slices)
    out = [vec[0]]
    for k in range(n_slices):
        h = np.zeros((n_slices + 1, n_slices + 1))
        h[0, k + 1] = h[k + 1, 0] = theta
        vec[0] *= math.exp(-0.5 * gamma_np * dt)
        vec = scipy.linalg.expm(-1j * h) @ vec
        out.append(vec[0])
    return np.array(out), vec


class TestInit:
    @pytest.mark.parametrize("n,amp", [(4, 0.5), (1, 1.0)])
    def test_amplitudes(self, n, amp):
        s = init_square_pulse(n, 0.1, 1.0, 0.0)
        np.testing.assert_array_equal(s.a_modes, amp)
        assert s.a_e == 0 and s.k == 0

    @given(st.integers(1, 5000))
    def test_norm_one(self, n):
        assert init_square_pulse(n, 1e-3, 0.02, 0.98).norm() == pytest.approx(1.0, abs=1e-12)

    def test_total_rate(self):
        assert init_square_pulse(3, 0.1, 0.02, 0.98).gamma_total == pytest.approx(1.0)

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            init_square_pulse(0, 0.1, 1.0, 0.0)


class TestStep:
    def test_first_slice_example(self):
        s = step_recursion(init_square_pulse(100, 0.01, 1.0, 0.0))
        assert s.a_e == pytest.approx(-1j * math.sin(0.1) / 10, abs=1e-15)
        assert s.a_e.imag == pytest.approx(-0.0099833, abs=1e-7)

    def test_vacuum_factor(self):
        s = init_square_pulse(10, 0.01, 1.0, 0.0)
        s = type(s)(1.0 + 0j, np.zeros(10, complex), 0, 0.01, 1.0, 0.0)
        assert step_recursion(s).a_e == pytest.approx(math.cos(0.1), abs=1e-15)

    def test_zero_kappa_unchanged(self):
        s0 = init_square_pulse(5, 0.1, 0.0, 0.0)
        s1 = step_recursion(s0)
        assert s1.a_e == 0
        np.testing.assert_array_equal(s1.a_modes, s0.a_modes)

    def test_unarrived_modes_untouched(self):
        s = init_square_pulse(20, 0.05, 2.0, 0.3)
        for k in range(20):
            s = step_recursion(s)
            np.testing.assert_array_equal(s.a_modes[k + 1:], 1 / math.sqrt(20))

    def test_past_end_raises(self):
        s = step_recursion(init_square_pulse(1, 0.1, 1.0, 0.0))
        with pytest.raises(IndexError):
            step_recursion(s)

    def test_post_pulse_decay(self):
        s = init_square_pulse(2, 0.1, 0.5, 0.5)
        s = step_recursion(step_recursion(s))
        assert post_pulse_decay(s, 2.0) == pytest.approx(s.a_e * math.exp(-1.0))


class TestRecursion:
    @pytest.mark.parametrize("n,gamma_np", [(1, 0.0), (7, 0.0), (15, 0.0), (15, 0.8)])
    def test_matches_explicit_unitaries(self, n, gamma_np):
        dt, kappa = 0.13, 0.9
        ref, _ = brute_force_a_e(n, dt, kappa, gamma_np)
        res = run_recursion(n, dt, kappa, gamma_np, n * dt)
        np.testing.assert_allclose(res.a_e, ref, atol=1e-13)

    def test_matches_step_function(self):
        n, dt = 12, 0.1
        s = init_square_pulse(n, dt, 0.7, 0.2)
        res = run_recursion(n, dt, 0.7, 0.2, n * dt)
        for k in range(n):
            s = step_recursion(s)
            assert res.a_e[k + 1] == pytest.approx(s.a_e, abs=1e-15)
        np.testing.assert_allclose(res.final.a_modes, s.a_modes, atol=1e-15)

    def test_matches_geometric_series(self):
        n, dt = 1000, 2.5e-3
        res = run_recursion(n, dt, 0.02, 0.98, n * dt)
        np.testing.assert_allclose(res.a_e, discrete_series_a_e(np.arange(n + 1), n, dt, 0.02, 0.98),
                                   atol=1e-13)

    def test_norm_conserved_without_loss(self):
        res = run_recursion(500, 0.01, 0.8, 0.0, 5.0)
        assert np.max(np.abs(res.norm - 1)) <= 1e-12

    def test_norm_nonincreasing_with_loss(self):
        res = run_recursion(500, 0.01, 0.02, 0.98, 10.0)
        assert np.all(np.diff(res.norm) <= 1e-15)
        assert res.norm[0] == pytest.approx(1.0, abs=1e-12)

    def test_starts_in_ground(self):
        assert run_recursion(10, 0.1, 1.0, 0.0, 1.0).p_e[0] == 0

    def test_monotone_during_pulse(self):
        res = run_recursion(2000, 2.5 / 2000, 0.02, 0.98, 2.5)
        assert np.all(np.diff(res.p_e) >= 0)

    def test_post_pulse_decays_at_total_rate(self):
        n, dt = 100, 0.025
        res = run_recursion(n, dt, 0.02, 0.98, 5.0)
        tail = res.a_e[n:]
        expected = res.a_e[n] * np.exp(-0.5 * (res.t[n:] - res.t[n]))
        np.testing.assert_allclose(tail, expected, rtol=1e-12)

    def test_frozen_emitted_field_after_pulse(self):
        res = run_recursion(50, 0.05, 0.5, 0.0, 5.0)
        # field keeps its norm, atom loses its share
        assert res.norm[-1] < 1.0
        assert res.final.norm() == pytest.approx(1.0, abs=1e-12)

    def test_vacuum_decay_limit(self):
        dt, t = 1e-4, 1.0
        n = int(round(t / dt))
        res = run_recursion(n, dt, 1.0, 0.0, t, modes=np.zeros(n), a_e0=1.0)
        assert abs(res.a_e[-1]) == pytest.approx(math.exp(-0.5), rel=1e-4)

    def test_convergence_to_closed_form(self):
        kappa, gamma, tau = 0.02, 1.0, 2.5
        errs = []
        for n in (100, 1000, 10000):
            res = run_recursion(n, tau / n, kappa, gamma - kappa, tau)
            errs.append(abs(res.a_e[n] - closed_form_a_e(tau, kappa, gamma, tau)))
        orders = -np.diff(np.log10(errs))
        assert np.all(np.abs(orders - 1.0) <= 0.2), orders

    def test_bad_modes_shape(self):
        with pytest.raises(ValueError):
            run_recursion(4, 0.1, 1.0, 0.0, 0.4, modes=np.zeros(3))

    @settings(max_examples=30, deadline=None)
    @given(kappa_over_gamma=st.floats(1e-3, 0.99), gamma_tau=st.floats(0.05, 20.0))
    def test_no_full_excitation(self, kappa_over_gamma, gamma_tau):
        n = 400
        res = run_recursion(n, gamma_tau / n, kappa_over_gamma, 1.0 - kappa_over_gamma, 2 * gamma_tau)
        assert res.p_e.max() < kappa_over_gamma


class TestClosedForm:
    def test_peak_value(self):
        a = closed_form_a_e(2.5, 0.02, 1.0, 2.5)
        assert abs(a) ** 2 == pytest.approx(0.032 * (1 - math.exp(-1.25)) ** 2, rel=1e-14)
        assert abs(a) ** 2 == pytest.approx(0.016290, abs=5e-7)
        assert peak_probability(0.02, 1.0, 2.5) == pytest.approx(abs(a) ** 2, rel=1e-14)

    def test_zero_time(self):
        assert closed_form_a_e(0.0, 0.02, 1.0, 2.5) == 0

    def test_no_spont_is_full_with_gamma_kappa(self):
        t = np.linspace(0, 3.0, 7)
        np.testing.assert_allclose(closed_form_a_e(t, 0.3, 1.0, 3.0, "no-spont"),
                                   closed_form_a_e(t, 0.3, 0.3, 3.0, "full"), rtol=1e-15)

    @pytest.mark.parametrize("gt", [1e-3, 1e-4, 1e-5])
    def test_small_time_limit(self, gt):
        kappa, gamma, tau = 0.02, 1.0, 2.5
        g_eff = math.sqrt(kappa / tau)
        a = closed_form_a_e(gt / gamma, kappa, gamma, tau)
        assert abs(a - (-1j * g_eff * gt)) <= gt * g_eff * gt

    def test_domain(self):
        with pytest.raises(DomainError):
            closed_form_a_e(3.0, 0.02, 1.0, 2.5)
        with pytest.raises(DomainError):
            closed_form_a_e(1.0, 0.5, 0.2, 2.5)
        with pytest.raises(ValueError):
            closed_form_a_e(1.0, 0.5, 1.0, 2.5, variant="nope")


class TestOptimum:
    def test_value(self):
        tau, p = optimize_pulse_length(0.02, 1.0)
        assert tau == pytest.approx(2.5128, abs=1e-3)
        assert p / 0.02 == pytest.approx(0.8147, abs=1e-3)

    def test_against_scipy(self):
        res = scipy.optimize.minimize_scalar(lambda x: -peak_probability(1.0, 1.0, x),
                                             bounds=(0.5, 6.0), method="bounded",
                                             options={"xatol": 1e-10})
        tau, p = optimize_pulse_length(1.0, 1.0)
        assert tau == pytest.approx(res.x, abs=1e-5)
        assert p == pytest.approx(-res.fun, rel=1e-12)

    def test_root_of_stationarity(self):
        x = 0.5 * optimize_pulse_length(1.0, 1.0)[0]
        assert 2 * x * math.exp(-x) == pytest.approx(1 - math.exp(-x), abs=1e-10)

    def test_zero_kappa(self):
        tau, p = optimize_pulse_length(0.0, 2.0)
        assert p == 0 and 2.0 * tau == pytest.approx(2.5128, abs=1e-3)

    @given(st.floats(0.01, 100.0))
    def test_scales_with_linewidth(self, gamma):
        tau, _ = optimize_pulse_length(0.1, gamma)
        assert gamma * tau == pytest.approx(optimize_pulse_length(0.1, 1.0)[0], rel=1e-9)

    def test_rejects_zero_linewidth(self):
        with pytest.raises(ValueError):
            optimize_pulse_length(0.1, 0.0)
