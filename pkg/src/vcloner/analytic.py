"""Closed-form single-atom solutions used as exact references.

Two regimes have exact solutions for one atom:

* no bias field: the full seven-amplitude solution in the lab frame for an
  arbitrary input qubit, its phase-averaged photon table and the universal
  fidelity 3/4 + cos(sqrt(2) tau)/4;
* matched bias (primed couplings (0, G2')): a two-frequency solution in the
  primed frame whose pair of Rabi frequencies satisfies
  omega1 * omega2 = 2 G2' and omega1^2 + omega2^2 = 2 G2'^2 + 4.

The sqrt(2) Rabi branch (clone-mode emission) is bias independent in the
matched case, which is the whole point of the cycling field: only the
unwanted branch gets shelved.

The numerical propagators remain authoritative; every expression here is
cross-checked against them in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .hilbert import AtomLevel, BasisState, HilbertBasis, StateVector, enumerate_basis
from .model import QubitState
from .observables import ProbabilityTable

__all__ = [
    "DEGENERATE_BIAS_CUTOFF",
    "DegenerateBiasError",
    "RabiPair",
    "amplitudes_unbiased",
    "theta_avg_probs_unbiased",
    "fidelity_unbiased",
    "rabi_pair",
    "amplitudes_biased",
    "probs_biased",
    "fidelity_biased",
    "fidelity_matched",
]

SQRT2 = np.sqrt(2.0)

# below this coupling the two-frequency form is numerically degenerate
# (omega2 -> 0 makes the A, B coefficients 0/0); use the unbiased forms
DEGENERATE_BIAS_CUTOFF = 1e-8

_G = AtomLevel.GROUND
_E1 = AtomLevel.EXCITED_ONE
_E2 = AtomLevel.EXCITED_TWO


class DegenerateBiasError(ValueError):
    """Two-frequency closed form requested at (numerically) zero bias."""


@lru_cache(maxsize=None)
def single_atom_basis(include_metastable: bool) -> HilbertBasis:
    """Shared one-atom, excitation-2 sector the closed forms are expressed on."""
    return enumerate_basis(1, 2, include_metastable=include_metastable)


def amplitudes_unbiased(qubit: QubitState, theta: float, tau: float) -> StateVector:
    """Exact one-atom, zero-bias amplitudes in the lab frame.

    The atom starts in (|e1> + e^{i theta}|e2>)/sqrt(2) and the field holds
    one photon in the qubit's clone mode, so the photon labels of the returned
    vector are lab-mode occupations.

    Parameters
    ----------
    qubit : QubitState
        Input qubit defining the photon mode being cloned.
    theta : float
        Superposition phase of the initial atomic state.
    tau : float
        Dimensionless time g t.
    """
    a, b = qubit.alpha, qubit.beta
    ph = np.exp(1j * float(theta))
    c = np.cos(SQRT2 * tau)
    s = np.sin(SQRT2 * tau)
    plus = b + a * ph
    mapping = {
        BasisState((_E1,), 1, 0): a / SQRT2 * c,
        BasisState((_G,), 2, 0): -1j * a / SQRT2 * s,
        BasisState((_E2,), 1, 0): ((a * ph - b) + plus * c) / (2.0 * SQRT2),
        BasisState((_E1,), 0, 1): ((b - a * ph) + plus * c) / (2.0 * SQRT2),
        BasisState((_G,), 1, 1): -0.5j * plus * s,
        BasisState((_G,), 0, 2): -1j * b * ph / SQRT2 * s,
        BasisState((_E2,), 0, 1): b * ph / SQRT2 * c,
    }
    return StateVector.from_mapping(single_atom_basis(False), mapping)


def theta_avg_probs_unbiased(tau):
    """Phase-averaged photon table of the one-atom, zero-bias cloner.

    Accepts a scalar or an array of times; entries follow suit.  The (0, 2)
    entry is an exact structural zero: the single atom can emit at most one
    photon into the orthogonal mode.
    """
    tau = np.asarray(tau, dtype=float) if np.ndim(tau) else float(tau)
    c = np.cos(SQRT2 * tau)
    s = np.sin(SQRT2 * tau)
    return ProbabilityTable({
        (2, 0): 0.5 * s * s,
        (1, 1): 0.25 * s * s,
        (0, 1): 0.125 * c * c - 0.25 * c + 0.125,
        (1, 0): 0.625 * c * c + 0.25 * c + 0.125,
        (0, 2): 0.0 * c,
    })


def fidelity_unbiased(tau):
    """Universal one-atom fidelity without bias, 3/4 + cos(sqrt(2) tau)/4."""
    tau = np.asarray(tau, dtype=float) if np.ndim(tau) else float(tau)
    return 0.75 + 0.25 * np.cos(SQRT2 * tau)


@dataclass(frozen=True)
class RabiPair:
    """The two Rabi frequencies of the matched-bias solution plus the
    constant coefficients multiplying their sine branches."""

    omega1: float
    omega2: float
    big_a: complex
    big_b: complex


def rabi_pair(g2p: float, theta: float = 0.0) -> RabiPair:
    """Frequencies and coefficients of the matched-bias two-frequency form.

    Raises DegenerateBiasError for g2p <= DEGENERATE_BIAS_CUTOFF, where
    omega2 -> 0 makes the coefficients indeterminate; route tiny couplings to
    the unbiased expressions instead.
    """
    g2p = float(g2p)
    if g2p <= DEGENERATE_BIAS_CUTOFF:
        raise DegenerateBiasError(
            f"g2p = {g2p!r} is degenerate; use the unbiased forms"
        )
    root = np.sqrt(g2p**4 + 4.0)
    omega1 = np.sqrt(g2p * g2p + 2.0 + root)
    # equal to sqrt(g2p^2 + 2 - root); this form avoids cancellation near 0
    omega2 = 2.0 * g2p / omega1
    ph = np.exp(1j * float(theta))
    big_a = 0.5j * ph * (omega2**2 - 2.0 * g2p**2 - 4.0) / (omega1 * root)
    big_b = -0.5j * ph * (omega1**2 - 2.0 * g2p**2 - 4.0) / (omega2 * root)
    return RabiPair(float(omega1), float(omega2), complex(big_a), complex(big_b))


def _biased_curves(g2p: float, theta: float, tau):
    """The six nonzero matched-bias amplitudes, vectorized over tau.

    The direct assembly of the cosine branches divides A, B combinations by
    g2p^2 and loses all precision for small couplings.  Substituting the
    frequency identities (omega1^2 omega2^2 = 4 g2p^2 and friends) cancels
    those divisions symbolically, so every factor below stays O(1) down to
    the degenerate cutoff; the propagator cross-checks cover both regimes.
    """
    pair = rabi_pair(g2p, theta)
    o1, o2 = pair.omega1, pair.omega2
    tau = np.asarray(tau, dtype=float) if np.ndim(tau) else float(tau)
    s1 = np.sin(o1 * tau / SQRT2)
    c1 = np.cos(o1 * tau / SQRT2)
    s2 = np.sin(o2 * tau / SQRT2)
    c2 = np.cos(o2 * tau / SQRT2)
    ph = np.exp(1j * float(theta))
    root = np.sqrt(g2p**4 + 4.0)
    g2sq = g2p * g2p
    return {
        "g11": -0.5j * ph * (o1 * s1 - o2 * s2) / root,
        "f10": -0.25j * ph * (g2p * (1.0 + g2sq / (root + 2.0)) * o1 * s1
                              + (root + 2.0 - g2sq) * (2.0 / o1) * s2) / root,
        "e2_10": ph * ((g2sq / root) * (c1 - c2) + (c1 + c2)) / (2.0 * SQRT2),
        "e1_01": ph * (c1 - c2) / (SQRT2 * root),
        "e1_10": np.cos(SQRT2 * tau) / SQRT2,
        "g20": -1j * np.sin(SQRT2 * tau) / SQRT2,
    }


def amplitudes_biased(g2p: float, theta: float, tau: float) -> StateVector:
    """Exact one-atom amplitudes under a matched bias, in the primed frame.

    Only six of the nine sector states are reachable when the primed coupling
    G1' vanishes; the other three amplitudes are exact zeros.
    """
    cur = _biased_curves(g2p, theta, float(tau))
    f = AtomLevel.METASTABLE
    mapping = {
        BasisState((_E1,), 1, 0): cur["e1_10"],
        BasisState((_E2,), 1, 0): cur["e2_10"],
        BasisState((f,), 1, 0): cur["f10"],
        BasisState((_G,), 1, 1): cur["g11"],
        BasisState((_G,), 2, 0): cur["g20"],
        BasisState((_E1,), 0, 1): cur["e1_01"],
    }
    return StateVector.from_mapping(single_atom_basis(True), mapping)


def probs_biased(g2p: float, tau) -> ProbabilityTable:
    """Photon table of the matched-bias one-atom cloner.

    Every entry is independent of the superposition phase theta: the two
    branches of the initial state never share an atomic configuration, so the
    phase cancels in each modulus.
    """
    cur = _biased_curves(g2p, 0.0, tau)

    def mag2(x):
        return np.abs(x) ** 2

    return ProbabilityTable({
        (2, 0): mag2(cur["g20"]),
        (1, 1): mag2(cur["g11"]),
        (1, 0): mag2(cur["f10"]) + mag2(cur["e2_10"]) + mag2(cur["e1_10"]),
        (0, 1): mag2(cur["e1_01"]),
        (0, 2): 0.0 * mag2(cur["g20"]),
    })


def fidelity_biased(g2p: float, tau):
    """Matched-bias one-atom fidelity, 1 - [p(0,1) + p(1,1)/2]."""
    table = probs_biased(g2p, tau)
    return 1.0 - (table.get(0, 1) + 0.5 * table.get(1, 1))


def fidelity_matched(g2p: float, tau):
    """One-atom fidelity under a matched bias of any strength including zero."""
    if float(g2p) <= DEGENERATE_BIAS_CUTOFF:
        return fidelity_unbiased(tau)
    return fidelity_biased(g2p, tau)
