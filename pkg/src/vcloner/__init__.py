"""Cavity-QED simulator of photonic qubit cloning.

N three-level atoms in a two-mode cavity copy an arbitrary single-photon
qubit into the cavity field; an optional classical bias field on a fourth,
metastable level steers the process.  The package provides exact closed-form
solutions for one atom, numerical propagation (spectral and adaptive
Runge-Kutta) for any atom number, photon-statistics observables, and
phase/Bloch-sphere averaging utilities, plus a CLI for reproducing the
standard figure-style datasets.
"""

from .analytic import (
    DEGENERATE_BIAS_CUTOFF,
    DegenerateBiasError,
    RabiPair,
    amplitudes_biased,
    amplitudes_unbiased,
    fidelity_biased,
    fidelity_matched,
    fidelity_unbiased,
    probs_biased,
    rabi_pair,
    theta_avg_probs_unbiased,
)
from .dynamics import (
    IntegratorConfig,
    Propagator,
    StepUnderflowError,
    evolve_series,
    rk5_propagate,
    spectral_propagate,
)
from .hilbert import (
    AtomLevel,
    BasisState,
    HilbertBasis,
    StateVector,
    enumerate_basis,
    initial_state,
)
from .model import (
    BiasField,
    Hamiltonian,
    QubitState,
    build_hamiltonian,
    orthogonal_mode,
    primed_bias,
    universal_bias,
)
from .observables import (
    BlochPoint,
    PhotonStats,
    ProbabilityTable,
    bloch_average,
    bloch_averaged_series,
    convert_fock_basis,
    convert_state_modes,
    fidelity,
    mean_photons,
    phase_average,
    photon_probabilities,
    probability_series,
    theta_averaged_series,
)

__version__ = "0.1.0"

__all__ = [
    "AtomLevel",
    "BasisState",
    "BiasField",
    "BlochPoint",
    "DEGENERATE_BIAS_CUTOFF",
    "DegenerateBiasError",
    "Hamiltonian",
    "HilbertBasis",
    "IntegratorConfig",
    "PhotonStats",
    "ProbabilityTable",
    "Propagator",
    "QubitState",
    "RabiPair",
    "StateVector",
    "StepUnderflowError",
    "amplitudes_biased",
    "amplitudes_unbiased",
    "bloch_average",
    "bloch_averaged_series",
    "build_hamiltonian",
    "convert_fock_basis",
    "convert_state_modes",
    "enumerate_basis",
    "evolve_series",
    "fidelity",
    "fidelity_biased",
    "fidelity_matched",
    "fidelity_unbiased",
    "initial_state",
    "mean_photons",
    "orthogonal_mode",
    "phase_average",
    "photon_probabilities",
    "primed_bias",
    "probability_series",
    "probs_biased",
    "rabi_pair",
    "spectral_propagate",
    "theta_avg_probs_unbiased",
    "theta_averaged_series",
    "universal_bias",
    "__version__",
]
