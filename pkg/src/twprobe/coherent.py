"""Atom driven by a coherent traveling beam.

Two routes to the same reduced dynamics:

* the master equation of a driven atom decaying at the measurement rate
  ``kappa`` (``build_driven_generator``), and
* an exact slice-by-slice simulation in which every coarse-grained mode
  arrives in the coherent state ``|alpha>``, interacts for one slice through
  ``exp(-i g sqrt(dt) (a s+ + a^dag s-))`` and is traced out
  (``simulate_slicewise_coherent``). No Markov or displacement step is used
  here, so it serves as an independent oracle for the first route.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import (
    SIGMA_MINUS,
    SIGMA_PLUS,
    DensityMatrix,
    LindbladGenerator,
    Trajectory,
    apply_channel,
    evolve_lindblad,
    trace_distance,
)
from .errors import ConfigError, DimensionError, NumericalValidityError
from .linalg import MAX_DIM, expm

FIELD_DEFICIT_LIMIT = 1e-8


@dataclass(frozen=True)
class DrivenAtomConfig:
    rabi: float
    kappa: float
    extra_decay: float = 0.0

    def __post_init__(self):
        for name in ("rabi", "kappa", "extra_decay"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise ConfigError(f"{name} must be finite and >= 0, got {v!r}")


def build_driven_generator(cfg: DrivenAtomConfig) -> LindbladGenerator:
    """``H = (Omega/2)(s+ + s-)`` with jump ``sqrt(kappa) s-`` (and ``sqrt(gamma') s-`` if set)."""
    h = 0.5 * cfg.rabi * (SIGMA_PLUS + SIGMA_MINUS)
    jumps = [math.sqrt(cfg.kappa) * SIGMA_MINUS]
    if cfg.extra_decay > 0:
        jumps.append(math.sqrt(cfg.extra_decay) * SIGMA_MINUS)
    return LindbladGenerator(h, tuple(jumps))


def min_fock_cutoff(alpha_sq: float) -> int:
    """Smallest photon-number cutoff allowed for a mode holding ``|alpha|^2`` photons."""
    return int(math.ceil(alpha_sq + 5.0 * math.sqrt(alpha_sq + 1.0)))


@dataclass(frozen=True)
class SliceOracleConfig:
    """One coherent mode per slice with amplitude ``alpha`` and coupling ``g_dt = sqrt(kappa dt)``.

    ``fock_cutoff`` defaults to the 5-sigma rule. ``dt`` only labels the time
    axis of the output.
    """

    alpha: complex
    g_dt: float
    n_slices: int
    fock_cutoff: int | None = None
    dt: float = 1.0

    def __post_init__(self):
        alpha_sq = abs(self.alpha) ** 2
        needed = min_fock_cutoff(alpha_sq)
        if self.fock_cutoff is None:
            object.__setattr__(self, "fock_cutoff", needed)
        elif self.fock_cutoff < needed:
            raise ConfigError(f"fock_cutoff {self.fock_cutoff} below the required {needed} "
                              f"for |alpha|^2 = {alpha_sq:g}")
        if self.n_slices < 1:
            raise ConfigError("n_slices must be >= 1")
        if self.g_dt < 0 or not math.isfinite(self.g_dt):
            raise ConfigError("g_dt must be finite and >= 0")
        if self.dt <= 0:
            raise ConfigError("dt must be > 0")
        if 2 * (self.fock_cutoff + 1) > MAX_DIM:
            raise DimensionError(
                f"atom x mode space of dim {2 * (self.fock_cutoff + 1)} exceeds {MAX_DIM}; "
                "reduce |alpha|^2 per slice")

    @classmethod
    def from_rates(cls, rabi: float, kappa: float, dt: float, n_slices: int,
                   fock_cutoff: int | None = None) -> "SliceOracleConfig":
        """Amplitude from ``Omega = 2 g alpha`` with ``g = sqrt(kappa / dt)``; phase fixed to zero."""
        if kappa <= 0:
            raise ConfigError("the slice oracle needs kappa > 0")
        alpha = rabi * math.sqrt(dt) / (2.0 * math.sqrt(kappa))
        return cls(alpha=alpha, g_dt=math.sqrt(kappa * dt), n_slices=n_slices,
                   fock_cutoff=fock_cutoff, dt=dt)

    @property
    def kappa_dt(self) -> float:
        return self.g_dt**2


def coherent_amplitudes(alpha: complex, n_max: int) -> np.ndarray:
    """Fock amplitudes ``<n|alpha>`` for ``n = 0..n_max`` (not renormalised)."""
    amps = np.empty(n_max + 1, dtype=complex)
    amps[0] = math.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, n_max + 1):
        amps[n] = amps[n - 1] * alpha / math.sqrt(n)
    return amps


def _annihilation(n_max: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, n_max + 1, dtype=float)), k=1).astype(complex)


def slice_unitary(g_dt: float, n_max: int) -> np.ndarray:
    """Exact one-slice propagator on atom (x) mode, atom index major."""
    a = _annihilation(n_max)
    h = np.kron(SIGMA_PLUS, a) + np.kron(SIGMA_MINUS, a.conj().T)
    return expm(h, -1j * g_dt)


def slice_kraus(cfg: SliceOracleConfig) -> list[np.ndarray]:
    """Atom Kraus operators ``K_n = <n| U |alpha>`` of one slice."""
    m = cfg.fock_cutoff + 1
    amps = coherent_amplitudes(cfg.alpha, cfg.fock_cutoff)
    deficit = 1.0 - float(np.sum(np.abs(amps) ** 2))
    if deficit > FIELD_DEFICIT_LIMIT:
        raise NumericalValidityError(
            f"coherent-state truncation leaks {deficit:.3e} of the field norm per slice")
    amps = amps / np.linalg.norm(amps)
    u = slice_unitary(cfg.g_dt, cfg.fock_cutoff).reshape(2, m, 2, m)
    # K_n[a, b] = sum_k U[(a, n), (b, k)] amps[k]
    return [np.einsum("abk,k->ab", u[:, n, :, :], amps) for n in range(m)]


def slice_superoperator(kraus) -> np.ndarray:
    """Row-major superoperator ``sum_k K kron conj(K)`` of a Kraus set."""
    return sum(np.kron(k, k.conj()) for k in kraus)


def simulate_slicewise_coherent(cfg: SliceOracleConfig, rho0: DensityMatrix) -> Trajectory:
    """Reduced atom state after each of ``cfg.n_slices`` fresh coherent modes."""
    if rho0.dim != 2:
        raise DimensionError("slicewise oracle acts on a two-level atom")
    if cfg.kappa_dt > 1e-2:
        warnings.warn(f"kappa*dt = {cfg.kappa_dt:.3g} is not small; the slice picture is coarse",
                      stacklevel=2)
    kraus = slice_kraus(cfg)
    states = [rho0]
    rho = rho0
    for _ in range(cfg.n_slices):
        rho = apply_channel(rho, kraus)
        states.append(rho)
    times = np.arange(cfg.n_slices + 1) * cfg.dt
    return Trajectory(times, tuple(states))


def extract_measurement_rate(cfg: SliceOracleConfig) -> float:
    """Decay rate seen by the oracle, ``-ln det(S) / (2 dt)`` for the slice map ``S``.

    For a generator ``-i[H, .] + kappa D[s-]`` the superoperator trace is
    ``-2 kappa`` whatever ``H`` is, so this isolates the dissipative rate
    from the coherent drive.
    """
    sup = slice_superoperator(slice_kraus(cfg))
    sign, logdet = np.linalg.slogdet(sup)
    return float(-logdet / (2.0 * cfg.dt))


@dataclass(frozen=True)
class OracleComparison:
    times: np.ndarray
    oracle: Trajectory
    lindblad: Trajectory
    distances: np.ndarray

    @property
    def max_distance(self) -> float:
        return float(np.max(self.distances))


def compare_with_lindblad(rabi: float, kappa: float, dt: float, n_slices: int,
                          rho0: DensityMatrix, *, fock_cutoff: int | None = None,
                          step: float | None = None) -> OracleComparison:
    """Run the slice oracle and the master equation on a common grid and diff them."""
    cfg = SliceOracleConfig.from_rates(rabi, kappa, dt, n_slices, fock_cutoff)
    oracle = simulate_slicewise_coherent(cfg, rho0)
    gen = build_driven_generator(DrivenAtomConfig(rabi=rabi, kappa=kappa))
    # integrate on a grid that divides dt so samples coincide with slice ends
    sub = 1 if step is None else max(1, int(math.ceil(dt / step - 1e-9)))
    lind = evolve_lindblad(rho0, gen, n_slices * dt, dt / sub, sample_every=sub)
    dist = np.array([trace_distance(a.data, b.data)
                     for a, b in zip(oracle.states, lind.states)])
    return OracleComparison(oracle.times, oracle, lind, dist)
