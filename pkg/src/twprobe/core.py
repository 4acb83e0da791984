"""Small dense open-system engine: density matrices, Lindblad generators,
fixed-step RK4 integration, Kraus channels and steady states.

Basis convention for a two-level system: index 0 is the upper state
(``|e>`` for the resonant atom, ``|up>`` for the spin), index 1 the lower one,
so ``sigma_z = diag(1, -1)`` and ``sigma_minus = |1><0|``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    DimensionError,
    NonUniqueSteadyStateError,
    NumericalValidityError,
    StateError,
)
from .linalg import MAX_DIM, expm

__all__ = [
    "SIGMA_MINUS", "SIGMA_PLUS", "SIGMA_Z", "SIGMA_X", "IDENTITY2",
    "DensityMatrix", "LindbladGenerator", "Trajectory",
    "as_operator", "liouvillian", "evolve_lindblad", "steady_state",
    "apply_channel", "trace_distance", "expm",
]

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-10
TRACE_DRIFT_LIMIT = 1e-6
COMPLETENESS_TOL = 1e-10
STEADY_RESIDUAL_TOL = 1e-10


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.flags.writeable = False
    return a


SIGMA_MINUS = _frozen([[0, 0], [1, 0]])
SIGMA_PLUS = _frozen([[0, 1], [0, 0]])
SIGMA_Z = _frozen([[1, 0], [0, -1]])
SIGMA_X = _frozen([[0, 1], [1, 0]])
IDENTITY2 = _frozen(np.eye(2))


def as_operator(m) -> np.ndarray:
    """Validate and return ``m`` as a square, finite complex matrix."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise StateError("operator has non-finite entries")
    return a


class DensityMatrix:
    """Immutable Hermitian, unit-trace, positive semidefinite matrix.

    ``validate=False`` skips the checks; it exists for sub-normalised results of
    trace-decreasing maps and should not be used otherwise.
    """

    __slots__ = ("_data",)

    def __init__(self, matrix, *, validate: bool = True):
        data = as_operator(matrix).copy()
        data.flags.writeable = False
        self._data = data
        if validate:
            self.check()

    def check(self, *, hermitian_tol=HERMITIAN_TOL, trace_tol=TRACE_TOL,
              positivity_tol=POSITIVITY_TOL) -> None:
        d = self._data
        herm = np.max(np.abs(d - d.conj().T))
        if herm > hermitian_tol:
            raise StateError(f"not Hermitian: max |rho - rho^dag| = {herm:.3e}")
        tr = np.trace(d)
        if abs(tr - 1.0) > trace_tol:
            raise StateError(f"trace {tr.real:.15g} deviates from 1 by {abs(tr - 1.0):.3e}")
        lam = np.linalg.eigvalsh(0.5 * (d + d.conj().T))[0]
        if lam < -positivity_tol:
            raise StateError(f"negative eigenvalue {lam:.3e}")

    @classmethod
    def from_ket(cls, psi) -> "DensityMatrix":
        v = np.asarray(psi, dtype=complex).ravel()
        v = v / np.linalg.norm(v)
        return cls(np.outer(v, v.conj()))

    @classmethod
    def basis(cls, dim: int, index: int) -> "DensityMatrix":
        m = np.zeros((dim, dim), dtype=complex)
        m[index, index] = 1.0
        return cls(m)

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def dim(self) -> int:
        return self._data.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self._data, dtype=dtype)

    def __getitem__(self, idx):
        return self._data[idx]

    def trace(self) -> complex:
        return complex(np.trace(self._data))

    def expect(self, op) -> float:
        return float(np.real(np.trace(self._data @ np.asarray(op))))

    def populations(self) -> np.ndarray:
        return np.real(np.diag(self._data)).copy()

    def __repr__(self) -> str:
        return f"DensityMatrix(dim={self.dim})"


@dataclass(frozen=True)
class LindbladGenerator:
    """``H`` in rate units (H/hbar) and jump operators already scaled by sqrt(rate)."""

    hamiltonian: np.ndarray
    jumps: tuple = ()

    def __post_init__(self):
        h = _frozen(as_operator(self.hamiltonian))
        if np.max(np.abs(h - h.conj().T)) > HERMITIAN_TOL:
            raise StateError("Hamiltonian is not Hermitian")
        jumps = tuple(_frozen(as_operator(j)) for j in self.jumps)
        for j in jumps:
            if j.shape != h.shape:
                raise DimensionError(f"jump operator shape {j.shape} != Hamiltonian shape {h.shape}")
        if h.shape[0] > MAX_DIM:
            raise DimensionError(f"dimension {h.shape[0]} exceeds the cap of {MAX_DIM}")
        object.__setattr__(self, "hamiltonian", h)
        object.__setattr__(self, "jumps", jumps)

    @property
    def dim(self) -> int:
        return self.hamiltonian.shape[0]

    def apply(self, rho) -> np.ndarray:
        """Evaluate the right-hand side of the master equation at ``rho``."""
        r = np.asarray(rho)
        h = self.hamiltonian
        out = -1j * (h @ r - r @ h)
        for l in self.jumps:
            ldag = l.conj().T
            ll = ldag @ l
            out += l @ r @ ldag - 0.5 * (ll @ r + r @ ll)
        return out


def liouvillian(gen: LindbladGenerator) -> np.ndarray:
    """Superoperator acting on row-major ``vec(rho)``: vec(A rho B) = (A kron B^T) vec(rho)."""
    d = gen.dim
    ident = np.eye(d)
    h = gen.hamiltonian
    sup = -1j * (np.kron(h, ident) - np.kron(ident, h.T))
    for l in gen.jumps:
        ll = l.conj().T @ l
        sup += np.kron(l, l.conj()) - 0.5 * (np.kron(ll, ident) + np.kron(ident, ll.T))
    return sup


@dataclass(frozen=True)
class Trajectory:
    """Sampled states ``states[i]`` at ``times[i]``."""

    times: np.ndarray
    states: tuple = field(repr=False)

    def __len__(self):
        return len(self.states)

    def element(self, i: int, j: int) -> np.ndarray:
        return np.array([s.data[i, j] for s in self.states])

    def expect(self, op) -> np.ndarray:
        return np.array([s.expect(op) for s in self.states])

    @property
    def final(self) -> DensityMatrix:
        return self.states[-1]


def _check_dims(rho: DensityMatrix, dim: int) -> None:
    if rho.dim != dim:
        raise DimensionError(f"state dim {rho.dim} does not match operator dim {dim}")


def evolve_lindblad(rho0: DensityMatrix, gen: LindbladGenerator, t_final: float,
                    step: float, sample_every: int = 1) -> Trajectory:
    """Integrate the master equation with the classical fixed-step RK4 scheme.

    The step is shrunk (never enlarged) so that an integer number of steps lands
    exactly on ``t_final``. States are recorded at ``t = 0``, every
    ``sample_every`` steps, and at ``t_final``.

    Raises
    ------
    NumericalValidityError
        If the trace drifts by more than 1e-6 or a sample breaks the
        density-matrix invariants; both mean the step is too large.
    """
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    if t_final < 0:
        raise ValueError(f"t_final must be non-negative, got {t_final}")
    if sample_every < 1:
        raise ValueError("sample_every must be >= 1")
    _check_dims(rho0, gen.dim)

    n_steps = int(np.ceil(t_final / step - 1e-9)) if t_final > 0 else 0
    h = t_final / n_steps if n_steps else 0.0
    d = gen.dim
    sup = liouvillian(gen)
    v = rho0.data.reshape(-1).copy()
    diag = np.arange(d) * (d + 1)

    times = [0.0]
    states = [rho0]
    for k in range(1, n_steps + 1):
        k1 = sup @ v
        k2 = sup @ (v + 0.5 * h * k1)
        k3 = sup @ (v + 0.5 * h * k2)
        k4 = sup @ (v + h * k3)
        v = v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        drift = abs(v[diag].sum() - 1.0)
        if drift > TRACE_DRIFT_LIMIT or not np.all(np.isfinite(v)):
            raise NumericalValidityError(
                f"trace drift {drift:.3e} at t={k * h:.6g} (step {h:.3e}); reduce the step")
        if k % sample_every == 0 or k == n_steps:
            try:
                states.append(DensityMatrix(v.reshape(d, d)))
            except StateError as exc:
                raise NumericalValidityError(
                    f"state invalid at t={k * h:.6g} (step {h:.3e}): {exc}") from exc
            times.append(k * h)
    return Trajectory(np.array(times), tuple(states))


def steady_state(gen: LindbladGenerator) -> DensityMatrix:
    """Unique fixed point of the generator from a dense null-space solve.

    Degenerate kernels (e.g. pure dephasing, where every diagonal state is
    stationary) raise :class:`NonUniqueSteadyStateError` instead of returning
    an arbitrary representative.
    """
    d = gen.dim
    sup = liouvillian(gen)
    _, sv, vh = np.linalg.svd(sup)
    tol = max(sv[0], 1.0) * 1e-10
    nullity = int(np.sum(sv <= tol))
    if nullity > 1:
        raise NonUniqueSteadyStateError(
            f"non-unique steady state: Liouvillian kernel has dimension {nullity}")
    if nullity == 0:
        raise NumericalValidityError("Liouvillian has no kernel; generator is not trace preserving")
    rho = vh[-1].conj().reshape(d, d)
    rho = rho / np.trace(rho)
    rho = 0.5 * (rho + rho.conj().T)
    residual = np.max(np.abs(sup @ rho.reshape(-1)))
    if residual > STEADY_RESIDUAL_TOL:
        raise NumericalValidityError(f"steady-state residual {residual:.3e} too large")
    return DensityMatrix(rho)


def apply_channel(rho: DensityMatrix, kraus: Sequence, *,
                  allow_trace_decreasing: bool = False) -> DensityMatrix:
    """Return ``sum_k K rho K^dag``.

    The Kraus set must be complete (``sum K^dag K = 1`` within 1e-10) unless
    ``allow_trace_decreasing`` is set, in which case a sub-normalised,
    unvalidated :class:`DensityMatrix` may be returned.
    """
    ops = [as_operator(k) for k in kraus]
    if not ops:
        raise ValueError("empty Kraus set")
    for k in ops:
        _check_dims(rho, k.shape[0])
    completeness = sum(k.conj().T @ k for k in ops)
    deviation = np.max(np.abs(completeness - np.eye(rho.dim)))
    if allow_trace_decreasing:
        if np.linalg.eigvalsh(completeness)[-1] > 1.0 + COMPLETENESS_TOL:
            raise StateError("Kraus set is trace increasing")
    elif deviation > COMPLETENESS_TOL:
        raise StateError(f"Kraus set violates completeness by {deviation:.3e}")
    r = rho.data
    out = sum(k @ r @ k.conj().T for k in ops)
    return DensityMatrix(out, validate=not allow_trace_decreasing)


def trace_distance(a, b) -> float:
    """Half the trace norm of ``a - b``."""
    diff = np.asarray(a) - np.asarray(b)
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(0.5 * (diff + diff.conj().T)))))
