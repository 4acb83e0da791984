"""Physical parameters and the couplings derived from them.

Two input routes are supported. The cgs route takes the wavenumber, mode
area, detuning, beam power and so on. The ratio route takes the
dimensionless combinations (``sigma_eff/A``, ``chi``) plus a photon flux.
Rates are in whatever unit ``gamma_total`` is given in (the scenarios use
``gamma_total = 1``).

All derived quantities are built so that the coarse-graining interval ``dt``
cancels analytically before any floating point arithmetic touches it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ConfigError

HBAR_CGS = 1.054571817e-27  # erg s

# chi^2 |alpha|^2 per slice above which the perturbative Faraday map is not trusted
PERTURBATIVE_FARADAY_LIMIT = 1e-3


def _require_positive(name, value, *, allow_zero=False):
    if value is None:
        return
    if not math.isfinite(value) or value < 0 or (value == 0 and not allow_zero):
        bound = ">= 0" if allow_zero else "> 0"
        raise ConfigError(f"{name} must be finite and {bound}, got {value!r}")


@dataclass(frozen=True)
class AtomParams:
    gamma_total: float
    dipole: float | None = None
    omega0: float | None = None
    k0: float | None = None
    sigma0: float | None = None

    def __post_init__(self):
        _require_positive("gamma_total", self.gamma_total)
        _require_positive("k0", self.k0)
        _require_positive("omega0", self.omega0)
        _require_positive("sigma0", self.sigma0, allow_zero=True)

    @property
    def sigma_eff(self) -> float | None:
        """Cross-section for scattering into the paraxial modes, 3*pi/(2 k0^2)."""
        if self.k0 is None:
            return None
        return 3.0 * math.pi / (2.0 * self.k0**2)


@dataclass(frozen=True)
class BeamParams:
    area: float | None = None
    power: float | None = None
    detuning: float | None = None
    alpha_sq_per_slice: float | None = None

    def __post_init__(self):
        _require_positive("area", self.area)
        _require_positive("power", self.power, allow_zero=True)
        _require_positive("alpha_sq_per_slice", self.alpha_sq_per_slice, allow_zero=True)
        if self.detuning is not None and not math.isfinite(self.detuning):
            raise ConfigError("detuning must be finite")


@dataclass(frozen=True)
class CoarseGraining:
    """Slices of duration ``dt``; a square pulse spans ``n_slices`` of them."""

    dt: float
    n_slices: int = 1

    def __post_init__(self):
        _require_positive("dt", self.dt)
        if int(self.n_slices) != self.n_slices or self.n_slices < 1:
            raise ConfigError(f"n_slices must be an integer >= 1, got {self.n_slices!r}")

    @classmethod
    def from_tau(cls, tau: float, n_slices: int) -> "CoarseGraining":
        return cls(dt=tau / n_slices, n_slices=n_slices)

    @property
    def tau(self) -> float:
        return self.n_slices * self.dt

    def theta(self, i: int, t: float) -> int:
        """Indicator of slice ``i`` (1-based): 1 on ((i-1) dt, i dt], else 0."""
        return int((i - 1) * self.dt < t <= i * self.dt)


@dataclass(frozen=True)
class DerivedCouplings:
    """Couplings derived for one run. ``None`` means the inputs did not determine it.

    ``provenance`` maps every populated field to the formula used.
    """

    kappa_resonant: float | None = None
    g: float | None = None
    rabi: float | None = None
    sigma_eff: float | None = None
    chi: float | None = None
    kappa_faraday: float | None = None
    g_eff: float | None = None
    alpha_sq: float | None = None
    photon_flux: float | None = None
    provenance: dict = field(default_factory=dict, compare=False)

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in (
            "kappa_resonant", "g", "rabi", "sigma_eff", "chi", "kappa_faraday",
            "g_eff", "alpha_sq", "photon_flux") if getattr(self, k) is not None}


def _photon_flux(atom: AtomParams, beam: BeamParams, grid: CoarseGraining | None,
                 photon_flux: float | None) -> tuple[float | None, str | None]:
    if photon_flux is not None:
        _require_positive("photon_flux", photon_flux, allow_zero=True)
        return photon_flux, "photon_flux (given)"
    if beam.power is not None and atom.omega0 is not None:
        return beam.power / (HBAR_CGS * atom.omega0), "photon_flux = P / (hbar omega0)"
    if beam.alpha_sq_per_slice is not None and grid is not None:
        return beam.alpha_sq_per_slice / grid.dt, "photon_flux = |alpha|^2 / dt"
    return None, None


def derive_resonant(atom: AtomParams, beam: BeamParams, grid: CoarseGraining, *,
                    sigma_eff_over_area: float | None = None,
                    photon_flux: float | None = None) -> DerivedCouplings:
    """Measurement strength, slice coupling and Rabi frequency for a resonant beam.

    ``kappa = gamma * sigma_eff / A``, ``g = sqrt(kappa / dt)``,
    ``Omega = 2 g alpha = 2 sqrt(kappa * flux)`` and ``g_eff = sqrt(kappa / tau)``.
    """
    prov = {}
    sigma_eff = atom.sigma_eff
    if sigma_eff is not None:
        prov["sigma_eff"] = "sigma_eff = 3 pi / (2 k0^2)"

    if sigma_eff_over_area is not None:
        _require_positive("sigma_eff_over_area", sigma_eff_over_area)
        ratio = sigma_eff_over_area
        prov["kappa_resonant"] = "kappa = gamma * (sigma_eff / A) (ratio given)"
    elif sigma_eff is not None and beam.area is not None:
        ratio = sigma_eff / beam.area
        prov["kappa_resonant"] = "kappa = gamma * sigma_eff / A"
    else:
        raise ConfigError("kappa needs sigma_eff_over_area, or k0 together with the beam area")
    kappa = atom.gamma_total * ratio

    g = math.sqrt(kappa / grid.dt)
    prov["g"] = "g = sqrt(kappa / dt)"
    g_eff = math.sqrt(kappa / grid.tau)
    prov["g_eff"] = "g_eff = sqrt(kappa / tau)"

    flux, flux_src = _photon_flux(atom, beam, grid, photon_flux)
    rabi = alpha_sq = None
    if flux is not None:
        prov["photon_flux"] = flux_src
        rabi = 2.0 * math.sqrt(kappa * flux)
        prov["rabi"] = "Omega = 2 g alpha = 2 sqrt(kappa * photon_flux)"
        alpha_sq = flux * grid.dt
        prov["alpha_sq"] = "|alpha|^2 = photon_flux * dt"

    return DerivedCouplings(kappa_resonant=kappa, g=g, rabi=rabi, sigma_eff=sigma_eff,
                            g_eff=g_eff, alpha_sq=alpha_sq, photon_flux=flux,
                            provenance=prov)


def derive_faraday(atom: AtomParams, beam: BeamParams, grid: CoarseGraining, *,
                   chi: float | None = None, sigma0_over_area: float | None = None,
                   photon_flux: float | None = None) -> DerivedCouplings:
    """Faraday rotation per slice and the QND measurement strength.

    ``chi = (sigma0 / A) * gamma / (-2 Delta)`` in the far-detuned limit and
    ``kappa = photon_flux * chi^2``. ``chi`` carries the sign of the detuning.
    """
    prov = {}
    if chi is not None:
        if not math.isfinite(chi):
            raise ConfigError("chi must be finite")
        prov["chi"] = "chi (given)"
    else:
        if beam.detuning is None:
            raise ConfigError("chi needs the detuning")
        if beam.detuning == 0:
            raise ConfigError("chi formula is invalid on resonance (detuning = 0)")
        if sigma0_over_area is None:
            if atom.sigma0 is None or beam.area is None:
                raise ConfigError("chi needs sigma0 and the beam area, or sigma0_over_area")
            sigma0_over_area = atom.sigma0 / beam.area
        chi = sigma0_over_area * (atom.gamma_total / (-2.0 * beam.detuning))
        prov["chi"] = "chi = (sigma0 / A) * gamma / (-2 detuning)"

    flux, flux_src = _photon_flux(atom, beam, grid, photon_flux)
    if flux is None:
        raise ConfigError("Faraday kappa needs a photon flux (power and omega0, |alpha|^2 and dt, or flux)")
    prov["photon_flux"] = flux_src
    kappa = flux * chi**2
    prov["kappa_faraday"] = "kappa = P chi^2 / (hbar omega0) = photon_flux * chi^2"
    alpha_sq = flux * grid.dt
    prov["alpha_sq"] = "|alpha|^2 = photon_flux * dt"
    return DerivedCouplings(chi=chi, kappa_faraday=kappa, alpha_sq=alpha_sq,
                            photon_flux=flux, provenance=prov)


@dataclass
class RegimeReport:
    warnings: list = field(default_factory=list)
    kappa_over_gamma: float | None = None
    fock_margin: float | None = None
    fock_oscillations: bool | None = None
    faraday_per_slice: float | None = None
    faraday_perturbative_ok: bool | None = None

    @property
    def ok(self) -> bool:
        return not self.warnings


def validate_regime(couplings: DerivedCouplings, atom: AtomParams, beam: BeamParams, *,
                    n_photons: int | None = None, tau: float | None = None) -> RegimeReport:
    """Diagnostics only; never raises on physics grounds."""
    rep = RegimeReport()
    if couplings.kappa_resonant is not None:
        ratio = couplings.kappa_resonant / atom.gamma_total
        rep.kappa_over_gamma = ratio
        if ratio > 1.0:
            rep.warnings.append(
                f"kappa/gamma = {ratio:.4g} exceeds diffraction-limited bound (kappa <= gamma); "
                "mode area is smaller than sigma_eff")
        if n_photons is not None and tau is not None and ratio > 0:
            rep.fock_margin = n_photons * atom.gamma_total * tau * ratio
            rep.fock_oscillations = rep.fock_margin >= 1.0
            if not rep.fock_oscillations:
                rep.warnings.append(
                    f"n*gamma*tau = {n_photons * atom.gamma_total * tau:.4g} is below "
                    f"A/sigma_eff = {1.0 / ratio:.4g}; no Rabi oscillation within the pulse")
    if atom.dipole is not None and atom.k0 is not None:
        implied = 4.0 * atom.k0**3 * atom.dipole**2 / (3.0 * HBAR_CGS)
        if abs(implied / atom.gamma_total - 1.0) > 1e-2:
            rep.warnings.append(
                f"gamma_total = {atom.gamma_total:.6g} disagrees with 4 k0^3 d^2 / (3 hbar) = {implied:.6g}")
    if couplings.chi is not None and couplings.alpha_sq is not None:
        per_slice = couplings.chi**2 * couplings.alpha_sq
        rep.faraday_per_slice = per_slice
        rep.faraday_perturbative_ok = per_slice <= PERTURBATIVE_FARADAY_LIMIT
        if not rep.faraday_perturbative_ok:
            rep.warnings.append(
                f"chi^2 |alpha|^2 = {per_slice:.3g} per slice exceeds {PERTURBATIVE_FARADAY_LIMIT:g}; "
                "use the exact slice map")
    return rep
