"""Continuous measurement of a single atom by traveling-wave probes.

Master-equation models for coherent-beam, single-photon, Fock-pulse and
Faraday probes, each checked against exact coarse-grained slice evolution.
"""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    DensityMatrix,
    LindbladGenerator,
    apply_channel,
    evolve_lindblad,
    expm,
    steady_state,
)

__all__ = [
    "__version__",
    "DensityMatrix",
    "LindbladGenerator",
    "apply_channel",
    "evolve_lindblad",
    "expm",
    "steady_state",
]
