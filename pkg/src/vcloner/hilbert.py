"""Excitation-conserving Hilbert space for atoms coupled to two cavity modes.

A composite configuration assigns one level to every atom plus photon
occupations (n1, n2) of the two field modes.  Every Hamiltonian built in this
package conserves the total excitation number (photons plus non-ground atoms),
so a simulation lives inside one fixed-excitation sector, enumerated here in a
deterministic order.  All containers are immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from itertools import product
from typing import Mapping, Sequence

import numpy as np

__all__ = [
    "AtomLevel",
    "BasisState",
    "HilbertBasis",
    "StateVector",
    "enumerate_basis",
    "initial_state",
]

_SQRT_HALF = 1.0 / np.sqrt(2.0)


class AtomLevel(IntEnum):
    """One atomic level of the working (primed) basis.

    GROUND couples to mode 1 via EXCITED_ONE and to mode 2 via EXCITED_TWO;
    METASTABLE couples to the excited pair only through the classical bias
    field and carries one excitation like the excited levels.
    """

    GROUND = 0
    EXCITED_ONE = 1
    EXCITED_TWO = 2
    METASTABLE = 3

    @property
    def excitation(self) -> int:
        return 0 if self is AtomLevel.GROUND else 1


_LEVEL_LABELS = {
    AtomLevel.GROUND: "g",
    AtomLevel.EXCITED_ONE: "e1",
    AtomLevel.EXCITED_TWO: "e2",
    AtomLevel.METASTABLE: "f",
}


@dataclass(frozen=True)
class BasisState:
    """A single composite configuration: one level per atom, two photon counts."""

    atoms: tuple[AtomLevel, ...]
    n1: int
    n2: int

    @property
    def excitation(self) -> int:
        return self.n1 + self.n2 + sum(level.excitation for level in self.atoms)

    def __str__(self) -> str:
        atoms = ",".join(_LEVEL_LABELS[a] for a in self.atoms)
        return f"|{atoms};{self.n1},{self.n2}>"


@dataclass(frozen=True, eq=False)
class HilbertBasis:
    """An ordered fixed-excitation sector with a position lookup.

    Instances compare by identity; two bases enumerated with equal arguments
    hold identical `states` tuples, which is what structural checks use.
    """

    n_atoms: int
    excitation: int
    includes_metastable: bool
    states: tuple[BasisState, ...]
    index: dict[BasisState, int]

    def __len__(self) -> int:
        return len(self.states)

    def position(self, state: BasisState) -> int:
        try:
            return self.index[state]
        except KeyError:
            raise ValueError(f"state {state} is not in this basis") from None


def same_basis(a: HilbertBasis, b: HilbertBasis) -> bool:
    """True when two bases enumerate the same states in the same order."""
    return a is b or a.states == b.states


def enumerate_basis(
    n_atoms: int, excitation: int, include_metastable: bool = True
) -> HilbertBasis:
    """Enumerate every composite state with the given total excitation.

    Parameters
    ----------
    n_atoms : int
        Number of atoms, at least 1.
    excitation : int
        Conserved total excitation of the sector, at least 0.
    include_metastable : bool
        Whether each atom has the metastable shelf level.  Required whenever a
        nonzero bias field will act on the sector.

    Returns
    -------
    HilbertBasis
        States ordered deterministically: atom-level tuples ascending in the
        AtomLevel order, then n1 descending within each tuple.
    """
    if n_atoms < 1:
        raise ValueError(f"n_atoms must be >= 1, got {n_atoms}")
    if excitation < 0:
        raise ValueError(f"excitation must be >= 0, got {excitation}")
    levels = [AtomLevel.GROUND, AtomLevel.EXCITED_ONE, AtomLevel.EXCITED_TWO]
    if include_metastable:
        levels.append(AtomLevel.METASTABLE)
    states = []
    for combo in product(levels, repeat=n_atoms):
        photons = excitation - sum(level.excitation for level in combo)
        if photons < 0:
            continue
        for n1 in range(photons, -1, -1):
            states.append(BasisState(combo, n1, photons - n1))
    index = {state: i for i, state in enumerate(states)}
    return HilbertBasis(n_atoms, excitation, include_metastable, tuple(states), index)


@dataclass(frozen=True, eq=False)
class StateVector:
    """Complex amplitudes over a HilbertBasis.

    Physical states are unit norm; intermediate arithmetic may hold anything.
    The amplitude array is owned by the instance and must not be mutated.
    """

    basis: HilbertBasis
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        if self.amplitudes.shape != (len(self.basis),):
            raise ValueError(
                f"amplitude vector has shape {self.amplitudes.shape}, "
                f"basis has {len(self.basis)} states"
            )

    @classmethod
    def from_mapping(
        cls, basis: HilbertBasis, mapping: Mapping[BasisState, complex]
    ) -> "StateVector":
        """Build a vector from a sparse {BasisState: amplitude} mapping."""
        amps = np.zeros(len(basis), dtype=complex)
        for state, value in mapping.items():
            amps[basis.position(state)] = value
        return cls(basis, amps)

    def amplitude(self, state: BasisState) -> complex:
        return complex(self.amplitudes[self.basis.position(state)])

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def initial_state(basis: HilbertBasis, phases: Sequence[float]) -> StateVector:
    """Product state of the cloning run: excited atoms, one photon in mode 1.

    Each atom mu starts in (|e1'> + exp(i theta_mu)|e2'>)/sqrt(2); the field
    starts in |1,0> of the working mode pair.  The basis must therefore sit in
    the sector with excitation = n_atoms + 1.

    Parameters
    ----------
    basis : HilbertBasis
        Sector to expand the product state in.
    phases : sequence of float
        One superposition phase theta_mu per atom.
    """
    phases = tuple(float(p) for p in phases)
    if len(phases) != basis.n_atoms:
        raise ValueError(
            f"need {basis.n_atoms} phases (one per atom), got {len(phases)}"
        )
    if basis.excitation != basis.n_atoms + 1:
        raise ValueError(
            f"initial state carries excitation {basis.n_atoms + 1}, "
            f"basis sector has {basis.excitation}"
        )
    amps = np.zeros(len(basis), dtype=complex)
    weight = _SQRT_HALF**basis.n_atoms
    excited = (AtomLevel.EXCITED_ONE, AtomLevel.EXCITED_TWO)
    for combo in product(excited, repeat=basis.n_atoms):
        phase = sum(
            phases[i] for i, level in enumerate(combo)
            if level is AtomLevel.EXCITED_TWO
        )
        state = BasisState(combo, 1, 0)
        amps[basis.position(state)] = weight * np.exp(1j * phase)
    return StateVector(basis, amps)
