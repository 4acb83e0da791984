"""QND spin measurement through Faraday rotation of an off-resonant probe.

Each slice carries ``|alpha>`` in x polarisation and vacuum in y. Its
polarisation is rotated by ``chi sigma_z``, so the two spin components
become tagged with the field states ``|alpha cos chi>|-+alpha sin chi>``.
Tracing the field out leaves the populations untouched and multiplies the
coherence by the overlap of the two y-mode states,
``<alpha sin chi | -alpha sin chi> = exp(-2 |alpha|^2 sin^2 chi)``.

The scalar (index-of-refraction) part of the coupling is a global phase and
is dropped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import IDENTITY2, SIGMA_Z, DensityMatrix, LindbladGenerator, apply_channel
from .errors import ConfigError, DimensionError


@dataclass(frozen=True)
class FaradayConfig:
    """Per-slice rotation ``chi``, photons per slice ``alpha_sq`` and slice length ``dt``.

    ``kappa`` defaults to ``alpha_sq chi^2 / dt`` (the photon flux times
    ``chi^2``). Pass :meth:`with_exact_kappa` when composing slice maps must
    reproduce ``exp(-2 kappa t)`` to rounding.
    """

    chi: float
    alpha_sq: float
    dt: float
    kappa: float | None = None

    def __post_init__(self):
        if not math.isfinite(self.chi):
            raise ConfigError("chi must be finite")
        if self.alpha_sq < 0 or not math.isfinite(self.alpha_sq):
            raise ConfigError("alpha_sq must be finite and >= 0")
        if self.dt <= 0:
            raise ConfigError("dt must be > 0")
        if self.kappa is None:
            object.__setattr__(self, "kappa", self.alpha_sq * self.chi**2 / self.dt)
        elif self.kappa > 0:
            mismatch = abs(self.kappa * self.dt - self.alpha_sq * math.sin(self.chi) ** 2)
            if mismatch / (self.kappa * self.dt) > self.chi**2 / 3 + 1e-12:
                raise ConfigError(
                    f"kappa = {self.kappa:g} inconsistent with |alpha|^2 sin^2(chi) / dt")

    @classmethod
    def from_kappa(cls, kappa: float, chi: float, dt: float) -> "FaradayConfig":
        """Photons per slice chosen so that ``kappa dt = |alpha|^2 sin^2 chi`` exactly."""
        if chi == 0:
            raise ConfigError("chi must be nonzero to realise kappa > 0")
        return cls(chi=chi, alpha_sq=kappa * dt / math.sin(chi) ** 2, dt=dt, kappa=kappa)

    def with_exact_kappa(self) -> "FaradayConfig":
        return FaradayConfig(self.chi, self.alpha_sq, self.dt,
                             self.alpha_sq * math.sin(self.chi) ** 2 / self.dt)

    @property
    def coherence_factor(self) -> float:
        return math.exp(-2.0 * self.alpha_sq * math.sin(self.chi) ** 2)


def _qubit(rho: DensityMatrix) -> None:
    if rho.dim != 2:
        raise DimensionError("Faraday maps act on a spin-1/2 (dim 2)")


def exact_slice_kraus(cfg: FaradayConfig) -> list[np.ndarray]:
    """Two-element Kraus set ``{sqrt((1+l)/2) 1, sqrt((1-l)/2) sigma_z}`` with ``l`` the overlap factor."""
    lam = cfg.coherence_factor
    return [math.sqrt(0.5 * (1 + lam)) * IDENTITY2, math.sqrt(0.5 * (1 - lam)) * SIGMA_Z]


def exact_slice_map(rho: DensityMatrix, cfg: FaradayConfig) -> DensityMatrix:
    _qubit(rho)
    out = np.array(rho.data)
    lam = cfg.coherence_factor
    out[0, 1] *= lam
    out[1, 0] *= lam
    return DensityMatrix(out)


def perturbative_slice_map(rho: DensityMatrix, cfg: FaradayConfig) -> DensityMatrix:
    """Map to first order in ``|alpha|^2``:
    ``rho + |alpha|^2 (-rho + S rho S + C rho C)`` with ``S, C = sin, cos(chi sigma_z)``.
    """
    _qubit(rho)
    s = np.diag([math.sin(cfg.chi), -math.sin(cfg.chi)]).astype(complex)
    c = math.cos(cfg.chi) * np.eye(2, dtype=complex)
    r = rho.data
    return DensityMatrix(r + cfg.alpha_sq * (-r + s @ r @ s + c @ r @ c))


def compose_slices(rho: DensityMatrix, cfg: FaradayConfig, n_slices: int, *,
                   perturbative: bool = False) -> list[DensityMatrix]:
    """States after 0..n_slices slices."""
    step = perturbative_slice_map if perturbative else exact_slice_map
    out = [rho]
    for _ in range(n_slices):
        rho = step(rho, cfg)
        out.append(rho)
    return out


def build_dephasing_generator(kappa: float) -> LindbladGenerator:
    """``d rho/dt = -(kappa/2)[s_z, [s_z, rho]]``, written as one jump ``sqrt(kappa) s_z``."""
    if kappa < 0 or not math.isfinite(kappa):
        raise ConfigError("kappa must be finite and >= 0")
    return LindbladGenerator(np.zeros((2, 2), dtype=complex), (math.sqrt(kappa) * SIGMA_Z,))


def apply_exact_slice_channel(rho: DensityMatrix, cfg: FaradayConfig) -> DensityMatrix:
    """Same map as :func:`exact_slice_map`, routed through the generic Kraus machinery."""
    _qubit(rho)
    return apply_channel(rho, exact_slice_kraus(cfg))
