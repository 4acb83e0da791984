"""Large-n Fock pulse treated as a single effective mode.

Inside the n-excitation manifold ``{|g, n>, |e, n-1>}`` the Jaynes-Cummings
dynamics close on two amplitudes and oscillate at ``g_eff sqrt(n)``. This
description only holds for pulses short against the lifetime
(``gamma tau << 1``), and a full oscillation only fits inside the pulse when
``n gamma tau >~ A / sigma_eff``. No Markov measurement rate is offered here
because the pulse modes are entangled across slices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SHORT_PULSE_THRESHOLD = 0.1


@dataclass(frozen=True)
class JCManifoldState:
    n: int
    c_g: complex
    c_e: complex

    @property
    def p_e(self) -> float:
        return abs(self.c_e) ** 2

    def norm(self) -> float:
        return abs(self.c_g) ** 2 + abs(self.c_e) ** 2


def _check_n(n: int) -> None:
    if int(n) != n or n < 1:
        raise ValueError(f"n must be an integer >= 1 (n = 0 has no dynamics), got {n!r}")


def jc_evolve(n: int, g_eff: float, t: float) -> JCManifoldState:
    """State at time ``t`` starting from ``|g, n>``."""
    _check_n(n)
    if t < 0:
        raise ValueError("t must be >= 0")
    phase = g_eff * math.sqrt(n) * t
    return JCManifoldState(n, complex(math.cos(phase)), -1j * math.sin(phase))


def jc_trajectory(n: int, g_eff: float, times) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised ``(c_g, c_e)`` over an array of times."""
    _check_n(n)
    phase = g_eff * math.sqrt(n) * np.asarray(times, dtype=float)
    return np.cos(phase).astype(complex), -1j * np.sin(phase)


def zero_crossing_frequency(times, values) -> float:
    """Oscillation frequency (cycles per unit time) from sign changes of ``values``.

    Crossings are located by linear interpolation between bracketing samples;
    two crossings are half a period apart.
    """
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    idx = np.nonzero(np.signbit(v[:-1]) != np.signbit(v[1:]))[0]
    if len(idx) < 2:
        raise ValueError("need at least two zero crossings to estimate a frequency")
    roots = t[idx] - v[idx] * (t[idx + 1] - t[idx]) / (v[idx + 1] - v[idx])
    return (len(roots) - 1) / (2.0 * (roots[-1] - roots[0]))


@dataclass(frozen=True)
class RegimeCheck:
    satisfied: bool
    margin: float


def oscillation_regime_check(n: int, gamma_total: float, tau: float, area_ratio: float) -> RegimeCheck:
    """``margin = n gamma tau / (A / sigma_eff)``; oscillations need ``margin >= 1``."""
    if min(n, gamma_total, tau, area_ratio) <= 0:
        raise ValueError("all arguments must be positive")
    margin = n * gamma_total * tau / area_ratio
    return RegimeCheck(margin >= 1.0, margin)


def rabi_margin(n: int, g_eff: float, tau: float) -> float:
    """``g_eff sqrt(n) tau``; equals the square root of the regime-check margin."""
    return g_eff * math.sqrt(n) * tau


def short_pulse_valid(gamma_total: float, tau: float, threshold: float = SHORT_PULSE_THRESHOLD) -> bool:
    """Whether ``gamma tau`` is small enough to neglect the unoccupied modes."""
    return gamma_total * tau < threshold
