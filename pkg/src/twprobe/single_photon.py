"""Square single-photon pulse exciting a two-level atom.

The one-excitation sector is tracked exactly on the coarse-grained mode
ladder: one excited-state amplitude plus one amplitude per slice mode. Decay
into non-paraxial modes (rate ``gamma_np``) is folded in as a per-slice
damping of the excited amplitude, so the norm drops by the probability
scattered out of the beam.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError

# Bracket for x = gamma*tau/2 in 2x e^-x = 1 - e^-x (excludes the trivial root x = 0).
_OPT_BRACKET = (0.5, 3.0)


@dataclass(frozen=True)
class SinglePhotonState:
    """Amplitudes after ``k`` slices have passed the atom.

    ``a_modes[j]`` is the amplitude of one photon in slice mode ``j``; modes
    ``j >= k`` have not reached the atom yet.
    """

    a_e: complex
    a_modes: np.ndarray
    k: int
    dt: float
    kappa: float
    gamma_np: float

    @property
    def n_slices(self) -> int:
        return len(self.a_modes)

    @property
    def gamma_total(self) -> float:
        return self.gamma_np + self.kappa

    @property
    def t(self) -> float:
        return self.k * self.dt

    @property
    def p_e(self) -> float:
        return abs(self.a_e) ** 2

    def norm(self) -> float:
        return abs(self.a_e) ** 2 + float(np.sum(np.abs(self.a_modes) ** 2))


def init_square_pulse(n_slices: int, dt: float, kappa: float, gamma_np: float) -> SinglePhotonState:
    if n_slices < 1:
        raise ValueError("n_slices must be >= 1")
    if dt <= 0 or kappa < 0 or gamma_np < 0:
        raise ValueError("need dt > 0, kappa >= 0, gamma_np >= 0")
    modes = np.full(n_slices, 1.0 / math.sqrt(n_slices), dtype=complex)
    return SinglePhotonState(0j, modes, 0, dt, kappa, gamma_np)


def _slice_factors(kappa: float, dt: float, gamma_np: float) -> tuple[float, float, float]:
    theta = math.sqrt(kappa * dt)
    return math.sin(theta), math.cos(theta), math.exp(-0.5 * gamma_np * dt)


def step_recursion(state: SinglePhotonState) -> SinglePhotonState:
    """Let mode ``k`` pass the atom; returns a new state."""
    k = state.k
    if k >= state.n_slices:
        raise IndexError("pulse has fully passed the atom; use post_pulse_decay")
    s, c, damp = _slice_factors(state.kappa, state.dt, state.gamma_np)
    a_k = state.a_modes[k]
    modes = state.a_modes.copy()
    modes[k] = a_k * c - 1j * state.a_e * s
    a_e = state.a_e * c * damp - 1j * a_k * s
    return replace(state, a_e=a_e, a_modes=modes, k=k + 1)


def post_pulse_decay(state: SinglePhotonState, t: float) -> complex:
    """Excited amplitude a time ``t`` after the last slice, with the source switched off."""
    return state.a_e * math.exp(-0.5 * state.gamma_total * t)


@dataclass(frozen=True)
class RecursionResult:
    t: np.ndarray
    a_e: np.ndarray
    p_e: np.ndarray
    norm: np.ndarray
    final: SinglePhotonState  # state when the pulse ends (or at t_final if earlier)


def run_recursion(n_slices: int, dt: float, kappa: float, gamma_np: float, t_final: float, *,
                  modes=None, a_e0: complex = 0j) -> RecursionResult:
    """Discrete trajectory sampled once per slice up to ``t_final``.

    The default initial state is the square pulse with the atom in ``|g>``.
    ``modes`` replaces the pulse envelope (length ``n_slices``) and ``a_e0``
    the initial excited amplitude; an all-zero ``modes`` with ``a_e0 = 1``
    gives decay into vacuum. After the pulse the amplitude decays at
    ``gamma_total / 2`` while the mode amplitudes stay frozen.
    """
    if t_final < 0:
        raise ValueError("t_final must be >= 0")
    state = init_square_pulse(n_slices, dt, kappa, gamma_np)
    if modes is not None:
        m = np.asarray(modes, dtype=complex)
        if m.shape != (n_slices,):
            raise ValueError(f"modes must have length {n_slices}")
        state = replace(state, a_modes=m.copy())
    state = replace(state, a_e=complex(a_e0))

    n_total = int(math.floor(t_final / dt + 1e-9))
    n_pulse = min(n_total, n_slices)
    s, c, damp = _slice_factors(kappa, dt, gamma_np)
    cd = c * damp

    a_modes = state.a_modes.copy()
    a_e = state.a_e
    emitted = 0.0
    amps = np.empty(n_total + 1, dtype=complex)
    norms = np.empty(n_total + 1)
    amps[0] = a_e
    tail = float(np.sum(np.abs(a_modes) ** 2))
    norms[0] = abs(a_e) ** 2 + tail
    for k in range(n_pulse):
        a_k = a_modes[k]
        tail -= abs(a_k) ** 2
        new_k = a_k * c - 1j * a_e * s
        a_e = a_e * cd - 1j * a_k * s
        a_modes[k] = new_k
        emitted += abs(new_k) ** 2
        amps[k + 1] = a_e
        norms[k + 1] = abs(a_e) ** 2 + emitted + tail
    final = replace(state, a_e=a_e, a_modes=a_modes, k=n_pulse)

    field_norm = emitted + tail
    decay = math.exp(-0.5 * (kappa + gamma_np) * dt)
    for k in range(n_pulse, n_total):
        a_e = a_e * decay
        amps[k + 1] = a_e
        norms[k + 1] = abs(a_e) ** 2 + field_norm

    t = np.arange(n_total + 1) * dt
    return RecursionResult(t, amps, np.abs(amps) ** 2, norms, final)


def discrete_series_a_e(k, n_slices: int, dt: float, kappa: float, gamma_np: float = 0.0):
    """Geometric-series solution for ``A_e`` after ``k <= N`` slices of a square pulse."""
    s, c, damp = _slice_factors(kappa, dt, gamma_np)
    r = c * damp
    k = np.asarray(k)
    return -1j * s / math.sqrt(n_slices) * (1.0 - r**k) / (1.0 - r)


def closed_form_a_e(t, kappa: float, gamma_total: float, tau: float, variant: str = "full"):
    """Continuum-limit excited amplitude during a square pulse (``0 <= t <= tau``).

    ``variant="no-spont"`` ignores decay outside the beam (``gamma -> kappa``);
    ``variant="full"`` uses the total linewidth.
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0) or np.any(t_arr > tau * (1 + 1e-12)):
        raise DomainError("closed form only holds during the pulse, 0 <= t <= tau")
    if variant == "no-spont":
        rate = kappa
    elif variant == "full":
        if gamma_total < kappa:
            raise DomainError("gamma_total must be >= kappa")
        rate = gamma_total
    else:
        raise ValueError(f"unknown variant {variant!r}")
    if rate == 0:
        return 0j * t_arr
    return -2j / rate * math.sqrt(kappa / tau) * (1.0 - np.exp(-0.5 * rate * t_arr))


def peak_probability(kappa: float, gamma_total: float, tau: float) -> float:
    """``P_e(tau) = 4 kappa / (gamma^2 tau) (1 - e^{-gamma tau/2})^2``."""
    return 4.0 * kappa / (gamma_total**2 * tau) * (1.0 - math.exp(-0.5 * gamma_total * tau)) ** 2


def optimize_pulse_length(kappa: float, gamma_total: float, *, tol: float = 1e-10) -> tuple[float, float]:
    """Pulse length maximising the end-of-pulse excitation, and that excitation.

    Stationarity of ``P_e(tau)`` reduces to ``2x e^{-x} = 1 - e^{-x}`` with
    ``x = gamma tau / 2``; the root is found by bisection.
    """
    if gamma_total <= 0:
        raise ValueError("gamma_total must be > 0")

    def f(x):
        return 2.0 * x * math.exp(-x) - (1.0 - math.exp(-x))

    lo, hi = _OPT_BRACKET
    f_lo = f(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    tau = 2.0 * (0.5 * (lo + hi)) / gamma_total
    return tau, peak_probability(kappa, gamma_total, tau)
