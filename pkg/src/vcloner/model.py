"""Interaction-picture Hamiltonian and the qubit-matched rotations.

Conventions: hbar = 1 and all couplings are measured in units of the
atom-field constant g, so times are the dimensionless tau = g t.  The working
single-atom basis is the primed one, in which the input qubit's clone mode is
mode 1 and the bias field enters through the primed pair (G1', G2'); the
universality condition is exactly G1' = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hilbert import AtomLevel, BasisState, HilbertBasis

__all__ = [
    "QubitState",
    "BiasField",
    "Hamiltonian",
    "orthogonal_mode",
    "primed_bias",
    "universal_bias",
    "build_hamiltonian",
]

_NORM_TOL = 1e-12


@dataclass(frozen=True)
class QubitState:
    """Input qubit alpha|0> + beta|1>, encoded as the photon mode to clone."""

    alpha: complex
    beta: complex

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))
        weight = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(weight - 1.0) > _NORM_TOL:
            raise ValueError(f"|alpha|^2 + |beta|^2 = {weight!r}, must be 1")

    @classmethod
    def from_bloch(cls, chi: float, phi: float) -> "QubitState":
        """Polar parametrization alpha = cos(chi/2), beta = sin(chi/2) e^{i phi}."""
        return cls(np.cos(chi / 2.0), np.sin(chi / 2.0) * np.exp(1j * phi))


def orthogonal_mode(qubit: QubitState) -> tuple[complex, complex]:
    """Coefficients (over the lab mode pair) of the mode orthogonal to the qubit."""
    return (-np.conj(qubit.beta), np.conj(qubit.alpha))


def primed_bias(
    qubit: QubitState, lab: tuple[complex, complex]
) -> tuple[complex, complex]:
    """Rotate lab-frame bias couplings (G1, G2) into the qubit's primed frame."""
    g1, g2 = complex(lab[0]), complex(lab[1])
    a, b = qubit.alpha, qubit.beta
    return (np.conj(a) * g1 + np.conj(b) * g2, -b * g1 + a * g2)


def universal_bias(qubit: QubitState, strength: float) -> tuple[complex, complex]:
    """Lab couplings that cycle only the unwanted transition for this qubit.

    Returns (G1, G2) = strength * (-conj(beta), conj(alpha)), the unique ray
    (up to phase) whose primed image is (0, strength): the wanted transition
    is untouched while the orthogonal one is shelved.
    """
    strength = float(strength)
    if strength < 0:
        raise ValueError(f"bias strength must be >= 0, got {strength}")
    lab = (-strength * np.conj(qubit.beta), strength * np.conj(qubit.alpha))
    g1p, _ = primed_bias(qubit, lab)
    assert abs(g1p) <= 1e-12
    return lab


@dataclass(frozen=True)
class BiasField:
    """A classical bias configuration: lab couplings plus their primed image."""

    g1: complex
    g2: complex
    g1p: complex
    g2p: complex

    @classmethod
    def none(cls) -> "BiasField":
        return cls(0.0, 0.0, 0.0, 0.0)

    @classmethod
    def matched(cls, qubit: QubitState, strength: float) -> "BiasField":
        g1, g2 = universal_bias(qubit, strength)
        return cls(g1, g2, 0.0, complex(strength))

    @classmethod
    def from_lab(cls, qubit: QubitState, g1: complex, g2: complex) -> "BiasField":
        g1p, g2p = primed_bias(qubit, (g1, g2))
        return cls(complex(g1), complex(g2), g1p, g2p)

    @property
    def primed(self) -> tuple[complex, complex]:
        return (self.g1p, self.g2p)


@dataclass(frozen=True, eq=False)
class Hamiltonian:
    """Dense Hermitian matrix over one excitation sector, in units of g."""

    basis: HilbertBasis
    matrix: np.ndarray


def _with_atom(state: BasisState, mu: int, level: AtomLevel,
               dn1: int = 0, dn2: int = 0) -> BasisState:
    atoms = list(state.atoms)
    atoms[mu] = level
    return BasisState(tuple(atoms), state.n1 + dn1, state.n2 + dn2)


def build_hamiltonian(
    basis: HilbertBasis, bias_primed: tuple[complex, complex] = (0.0, 0.0)
) -> Hamiltonian:
    """Assemble the sector Hamiltonian for given primed bias couplings.

    Nonzero elements, with n1, n2 the photon numbers of the ket:

    * <..e1'..; n1-1, n2| H |..g..; n1, n2> = sqrt(n1)
    * <..e2'..; n1, n2-1| H |..g..; n1, n2> = sqrt(n2)
    * <..e1'..; n1, n2  | H |..f..; n1, n2> = G1'
    * <..e2'..; n1, n2  | H |..f..; n1, n2> = G2'

    plus Hermitian conjugates.  Each atom contributes independently; the atoms
    share the field modes.

    Raises
    ------
    ValueError
        If the bias is nonzero but the basis was enumerated without the
        metastable level.
    """
    g1p, g2p = complex(bias_primed[0]), complex(bias_primed[1])
    has_bias = abs(g1p) > 0.0 or abs(g2p) > 0.0
    if has_bias and not basis.includes_metastable:
        raise ValueError(
            "nonzero bias needs the metastable level; "
            "enumerate the basis with include_metastable=True"
        )
    dim = len(basis)
    h = np.zeros((dim, dim), dtype=complex)

    def couple(bra: BasisState, ket_pos: int, value: complex) -> None:
        i = basis.position(bra)
        h[i, ket_pos] += value
        h[ket_pos, i] += np.conj(value)

    for j, state in enumerate(basis.states):
        for mu, level in enumerate(state.atoms):
            if level is AtomLevel.GROUND:
                # photon absorption edges, generated once from the ground side
                if state.n1 > 0:
                    bra = _with_atom(state, mu, AtomLevel.EXCITED_ONE, dn1=-1)
                    couple(bra, j, np.sqrt(state.n1))
                if state.n2 > 0:
                    bra = _with_atom(state, mu, AtomLevel.EXCITED_TWO, dn2=-1)
                    couple(bra, j, np.sqrt(state.n2))
            elif level is AtomLevel.METASTABLE and has_bias:
                # bias edges, generated once from the metastable side
                if abs(g1p) > 0.0:
                    couple(_with_atom(state, mu, AtomLevel.EXCITED_ONE), j, g1p)
                if abs(g2p) > 0.0:
                    couple(_with_atom(state, mu, AtomLevel.EXCITED_TWO), j, g2p)
    return Hamiltonian(basis, h)
