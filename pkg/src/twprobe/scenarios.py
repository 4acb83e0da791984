"""Turn a validated :class:`ScenarioConfig` into a :class:`TimeSeries`.

Each runner records the resolved parameters, every derived coupling and the
formula it came from, and a few headline numbers in the metadata.
"""

from __future__ import annotations

import math

import numpy as np

from . import __version__
from .coherent import (
    DrivenAtomConfig,
    SliceOracleConfig,
    build_driven_generator,
    compare_with_lindblad,
    extract_measurement_rate,
)
from .config import ScenarioConfig
from .core import SIGMA_Z, DensityMatrix, evolve_lindblad, steady_state
from .errors import TwprobeError
from .faraday import FaradayConfig, build_dephasing_generator, compose_slices
from .fock import jc_trajectory, oscillation_regime_check, rabi_margin, short_pulse_valid
from .params import AtomParams, BeamParams, CoarseGraining, derive_faraday, derive_resonant, validate_regime
from .single_photon import closed_form_a_e, peak_probability, run_recursion
from .timeseries import TimeSeries

PLUS_STATE = DensityMatrix(0.5 * np.ones((2, 2)))


def _thin(n_points: int, every: int, keep=()) -> np.ndarray:
    idx = set(range(0, n_points, every)) | {n_points - 1} | {k for k in keep if 0 <= k < n_points}
    return np.array(sorted(idx))


def _meta(cfg: ScenarioConfig, derived: dict, provenance: dict, **results) -> dict:
    return {
        "name": cfg.name,
        "scenario": cfg.scenario,
        "version": __version__,
        "seed": cfg.seed,
        "params": dict(sorted(cfg.params.items())),
        "derived": dict(sorted(derived.items())),
        "provenance": dict(sorted(provenance.items())),
        "results": results,
    }


def _single_photon(cfg: ScenarioConfig) -> TimeSeries:
    p = cfg.params
    gamma = p["gamma"]
    n = p["n_slices"]
    tau = p["gamma_tau"] / gamma
    atom = AtomParams(gamma_total=gamma)
    grid = CoarseGraining.from_tau(tau, n)
    dc = derive_resonant(atom, BeamParams(), grid, sigma_eff_over_area=p["kappa_over_gamma"])
    kappa = dc.kappa_resonant
    gamma_np = gamma - kappa
    res = run_recursion(n, grid.dt, kappa, gamma_np, p["t_final"])

    t = res.t
    during = t <= tau * (1 + 1e-12)
    closed = np.empty(len(t), dtype=complex)
    closed[during] = closed_form_a_e(np.minimum(t[during], tau), kappa, gamma, tau)
    a_tau = closed_form_a_e(tau, kappa, gamma, tau)
    closed[~during] = a_tau * np.exp(-0.5 * gamma * (t[~during] - tau))
    cavity = np.sin(dc.g_eff * t) ** 2

    keep = _thin(len(t), p["sample_every"], keep=(min(n, len(t) - 1),))
    cols = {
        "t": t[keep],
        "P_e": res.p_e[keep],
        "Re_A_e": res.a_e.real[keep],
        "Im_A_e": res.a_e.imag[keep],
        "norm": res.norm[keep],
        "P_e_closed_form": np.abs(closed[keep]) ** 2,
        "P_e_cavity": cavity[keep],
    }
    derived = {**dc.as_dict(), "gamma_np": gamma_np, "dt": grid.dt, "tau": tau}
    prov = {**dc.provenance, "gamma_np": "gamma_np = gamma - kappa", "dt": "dt = tau / N",
            "tau": "tau = gamma_tau / gamma"}
    pulse_end = min(n, len(t) - 1)
    results = {
        "P_e_at_tau_discrete": float(res.p_e[pulse_end]) if pulse_end == n else None,
        "P_e_at_tau_closed_form": peak_probability(kappa, gamma, tau),
    }
    return TimeSeries(cols, _meta(cfg, derived, prov, **results))


def _coherent_drive(cfg: ScenarioConfig) -> TimeSeries:
    p = cfg.params
    kappa = p["gamma"] * p["kappa_over_gamma"]
    dac = DrivenAtomConfig(rabi=p["rabi"], kappa=kappa, extra_decay=p.get("extra_decay", 0.0))
    gen = build_driven_generator(dac)
    rho0 = DensityMatrix.basis(2, 0 if p.get("initial_excited", 0) else 1)
    traj = evolve_lindblad(rho0, gen, p["t_final"], p["step"], p["sample_every"])
    rho01 = traj.element(0, 1)
    cols = {
        "t": traj.times,
        "P_e": traj.element(0, 0).real,
        "Re_rho_01": rho01.real,
        "Im_rho_01": rho01.imag,
        "sigma_z": traj.expect(SIGMA_Z),
        "trace": np.array([s.trace().real for s in traj.states]),
    }
    results = {}
    if kappa + dac.extra_decay > 0:
        results["P_e_steady_state"] = float(steady_state(gen)[0, 0].real)
    derived = {"kappa_resonant": kappa, "rabi": p["rabi"]}
    prov = {"kappa_resonant": "kappa = gamma * (sigma_eff / A) (ratio given)", "rabi": "Omega (given)"}
    return TimeSeries(cols, _meta(cfg, derived, prov, **results))


def _fock_pulse(cfg: ScenarioConfig) -> TimeSeries:
    p = cfg.params
    gamma, n = p["gamma"], p["n_photons"]
    tau = p["gamma_tau"] / gamma
    atom = AtomParams(gamma_total=gamma)
    dc = derive_resonant(atom, BeamParams(), CoarseGraining(dt=tau), sigma_eff_over_area=p["kappa_over_gamma"])
    n_steps = int(math.ceil(p["t_final"] / p["step"] - 1e-9))
    t = np.linspace(0.0, p["t_final"], n_steps + 1)
    c_g, c_e = jc_trajectory(n, dc.g_eff, t)
    keep = _thin(len(t), p["sample_every"])
    cols = {
        "t": t[keep],
        "P_e": np.abs(c_e[keep]) ** 2,
        "Re_c_g": c_g.real[keep],
        "Im_c_e": c_e.imag[keep],
        "norm": (np.abs(c_g) ** 2 + np.abs(c_e) ** 2)[keep],
    }
    check = oscillation_regime_check(n, gamma, tau, 1.0 / p["kappa_over_gamma"])
    report = validate_regime(dc, atom, BeamParams(), n_photons=n, tau=tau)
    derived = {"kappa_resonant": dc.kappa_resonant, "g_eff": dc.g_eff, "tau": tau}
    prov = {k: dc.provenance[k] for k in ("kappa_resonant", "g_eff")}
    prov["tau"] = "tau = gamma_tau / gamma"
    results = {
        "regime_margin": check.margin,
        "oscillation_regime_satisfied": check.satisfied,
        "rabi_margin": rabi_margin(n, dc.g_eff, tau),
        "short_pulse_valid": short_pulse_valid(gamma, tau),
        "warnings": report.warnings,
    }
    return TimeSeries(cols, _meta(cfg, derived, prov, **results))


def _faraday(cfg: ScenarioConfig) -> TimeSeries:
    p = cfg.params
    kappa, t_final = p["kappa"], p["t_final"]
    n_slices = int(math.ceil(t_final / p["dt"] - 1e-9))
    dt = t_final / n_slices
    fc = FaradayConfig.from_kappa(kappa, p["chi"], dt)
    atom = AtomParams(gamma_total=p["gamma"])
    grid = CoarseGraining(dt=dt, n_slices=n_slices)
    dc = derive_faraday(atom, BeamParams(alpha_sq_per_slice=fc.alpha_sq), grid, chi=fc.chi)
    report = validate_regime(dc, atom, BeamParams())

    slices = compose_slices(PLUS_STATE, fc, n_slices)
    sub = max(1, int(math.ceil(dt / p["step"] - 1e-9)))
    lind = evolve_lindblad(PLUS_STATE, build_dephasing_generator(kappa), t_final, dt / sub,
                           sample_every=sub)
    t = np.arange(n_slices + 1) * dt
    t[-1] = t_final
    rho01 = np.array([s[0, 1] for s in slices])
    keep = _thin(len(t), p["sample_every"])
    cols = {
        "t": t[keep],
        "Re_rho_01": rho01.real[keep],
        "Im_rho_01": rho01.imag[keep],
        "sigma_z": np.array([s.expect(SIGMA_Z) for s in slices])[keep],
        "Re_rho_01_lindblad": lind.element(0, 1).real[keep],
        "rho_01_analytic": (0.5 * np.exp(-2.0 * kappa * t))[keep],
    }
    derived = {**dc.as_dict(), "kappa": kappa, "dt": dt, "n_slices": n_slices}
    prov = {**dc.provenance,
            "kappa": "kappa (given); slice photons |alpha|^2 = kappa dt / sin^2 chi",
            "alpha_sq": "|alpha|^2 = kappa dt / sin^2 chi",
            "dt": "dt = t_final / ceil(t_final / dt_requested)", "n_slices": "n = t_final / dt"}
    results = {
        "final_abs_rho_01": float(abs(rho01[-1])),
        "final_abs_rho_01_lindblad": float(abs(lind.final[0, 1])),
        "warnings": report.warnings,
    }
    return TimeSeries(cols, _meta(cfg, derived, prov, **results))


def _oracle_compare(cfg: ScenarioConfig) -> TimeSeries:
    p = cfg.params
    gamma = p["gamma"]
    kappa = gamma * p["kappa_over_gamma"]
    dt = p["kappa_dt"] / kappa
    n_slices = int(round(p["t_final"] / dt))
    atom = AtomParams(gamma_total=gamma)
    grid = CoarseGraining(dt=dt, n_slices=n_slices)
    dc = derive_resonant(atom, BeamParams(alpha_sq_per_slice=p["alpha_sq"]), grid,
                         sigma_eff_over_area=p["kappa_over_gamma"])
    cmp = compare_with_lindblad(dc.rabi, kappa, dt, n_slices, DensityMatrix.basis(2, 1))
    oracle_cfg = SliceOracleConfig.from_rates(dc.rabi, kappa, dt, 1)
    keep = _thin(len(cmp.times), p["sample_every"])
    cols = {
        "t": cmp.times[keep],
        "P_e_oracle": cmp.oracle.element(0, 0).real[keep],
        "P_e_lindblad": cmp.lindblad.element(0, 0).real[keep],
        "trace_distance": cmp.distances[keep],
    }
    derived = {**dc.as_dict(), "dt": dt, "n_slices": n_slices, "fock_cutoff": oracle_cfg.fock_cutoff}
    prov = {**dc.provenance, "dt": "dt = kappa_dt / kappa", "n_slices": "n = round(t_final / dt)",
            "fock_cutoff": "n_max = ceil(|alpha|^2 + 5 sqrt(|alpha|^2 + 1))"}
    results = {
        "max_trace_distance": cmp.max_distance,
        "oracle_measurement_rate": extract_measurement_rate(oracle_cfg),
    }
    return TimeSeries(cols, _meta(cfg, derived, prov, **results))


RUNNERS = {
    "coherent-drive": _coherent_drive,
    "single-photon": _single_photon,
    "fock-pulse": _fock_pulse,
    "faraday": _faraday,
    "oracle-compare": _oracle_compare,
}


def run_scenario(cfg: ScenarioConfig) -> TimeSeries:
    """Run one configured scenario; library errors are re-raised with the run name attached."""
    try:
        return RUNNERS[cfg.scenario](cfg)
    except TwprobeError as exc:
        raise type(exc)(f"[{cfg.name}] {exc}") from exc
