"""Photon statistics, cloning fidelity, and the two input averages.

Probabilities p(k, l) are diagonal readouts in whichever mode pair the state
vector is expressed in; the cloning fidelity of a table is the expected
fraction of photons sitting in the clone mode, sum of p(k, l) * k / (k + l).

Two averages appear throughout: the uniform average over the superposition
phases theta_mu of the initial atomic states (a finite grid is exact because
every observable is a trigonometric polynomial of degree <= 1 per angle) and
the uniform average over pure input qubits on the Bloch sphere
(Gauss-Legendre in cos chi times a uniform azimuthal grid).

Everything here is a pure function with a fixed accumulation order, so
results are bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import comb, factorial
from typing import Callable, Mapping, Sequence

import numpy as np

from .dynamics import IntegratorConfig, Propagator, evolve_series
from .hilbert import (
    BasisState,
    HilbertBasis,
    StateVector,
    enumerate_basis,
    initial_state,
)
from .model import QubitState, build_hamiltonian, primed_bias

__all__ = [
    "ProbabilityTable",
    "PhotonStats",
    "BlochPoint",
    "photon_probabilities",
    "probability_series",
    "fidelity",
    "mean_photons",
    "phase_average",
    "bloch_average",
    "convert_fock_basis",
    "convert_state_modes",
    "theta_averaged_series",
    "bloch_averaged_series",
]

_VACUUM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class ProbabilityTable:
    """Photon-number distribution over (n_clone_mode, n_other_mode) pairs.

    Entries are floats for a single state or equal-length arrays for a whole
    time series; both work in the linear formulas below.
    """

    entries: dict[tuple[int, int], float | np.ndarray]

    def get(self, k: int, l: int):
        return self.entries.get((k, l), 0.0)

    def sorted_items(self):
        return sorted(self.entries.items())

    def total(self):
        acc = 0.0
        for _, value in self.sorted_items():
            acc = acc + value
        return acc


@dataclass(frozen=True)
class PhotonStats:
    """A table together with its first moments."""

    table: ProbabilityTable
    n_right: float | np.ndarray
    n_all: float | np.ndarray

    @classmethod
    def from_table(cls, table: ProbabilityTable) -> "PhotonStats":
        n_right, n_all = mean_photons(table)
        return cls(table, n_right, n_all)


@dataclass(frozen=True)
class BlochPoint:
    """Polar coordinates of a pure input qubit."""

    chi: float
    phi: float

    @property
    def qubit(self) -> QubitState:
        return QubitState.from_bloch(self.chi, self.phi)


def photon_probabilities(psi: StateVector) -> ProbabilityTable:
    """Diagonal photon-number readout of a (normalized) state vector."""
    weights = np.abs(psi.amplitudes) ** 2
    probs: dict[tuple[int, int], float] = {}
    for state, w in zip(psi.basis.states, weights):
        key = (state.n1, state.n2)
        probs[key] = probs.get(key, 0.0) + float(w)
    return ProbabilityTable(probs)


def probability_series(basis: HilbertBasis, amplitudes: np.ndarray) -> ProbabilityTable:
    """Photon readout of a whole trajectory; amplitudes is (len(basis), n_t)."""
    weights = np.abs(amplitudes) ** 2
    probs: dict[tuple[int, int], np.ndarray] = {}
    for i, state in enumerate(basis.states):
        key = (state.n1, state.n2)
        if key in probs:
            probs[key] = probs[key] + weights[i]
        else:
            probs[key] = weights[i].copy() if weights[i].ndim else weights[i]
    return ProbabilityTable(probs)


def fidelity(table: ProbabilityTable):
    """Expected fraction of photons found in the clone mode.

    Raises if any weight sits on (0, 0): the cloning runs always keep at least
    one photon, so vacuum weight signals a broken pipeline upstream.
    """
    vacuum = np.max(np.atleast_1d(np.asarray(table.get(0, 0))))
    if vacuum > _VACUUM_TOL:
        raise ValueError(f"table has vacuum weight {vacuum:.3e}; fidelity undefined")
    acc = 0.0
    for (k, l), p in table.sorted_items():
        if k + l == 0:
            continue
        acc = acc + p * (k / (k + l))
    return acc


def mean_photons(table: ProbabilityTable):
    """First moments (n_clone_mode, n_total) of a photon-number table."""
    n_right = 0.0
    n_all = 0.0
    for (k, l), p in table.sorted_items():
        n_right = n_right + k * p
        n_all = n_all + (k + l) * p
    return n_right, n_all


def _scale(value, factor: float):
    if isinstance(value, ProbabilityTable):
        return ProbabilityTable(
            {key: v * factor for key, v in value.sorted_items()}
        )
    return value * factor


def _add(left, right):
    if isinstance(left, ProbabilityTable):
        keys = sorted(set(left.entries) | set(right.entries))
        return ProbabilityTable(
            {key: left.get(*key) + right.get(*key) for key in keys}
        )
    return left + right


def phase_average(func: Callable, n_angles: int, grid_m: int = 4):
    """Average func over a uniform product grid of superposition phases.

    func receives a tuple of n_angles phases in [0, 2 pi) and may return a
    float, an array, or a ProbabilityTable.  A grid with grid_m >= 2 already
    averages exactly, because the observables are trigonometric polynomials of
    degree <= 1 in each phase; the default keeps a safety margin.
    """
    if grid_m < 2:
        raise ValueError(f"grid_m must be >= 2, got {grid_m}")
    if n_angles < 1:
        raise ValueError(f"n_angles must be >= 1, got {n_angles}")
    step = 2.0 * np.pi / grid_m
    acc = None
    for combo in product(range(grid_m), repeat=n_angles):
        value = func(tuple(step * j for j in combo))
        acc = value if acc is None else _add(acc, value)
    return _scale(acc, 1.0 / grid_m**n_angles)


def bloch_average(func: Callable, quad_chi: int = 16, quad_phi: int = 16):
    """Uniform average of func over pure input qubits on the Bloch sphere.

    Gauss-Legendre nodes in u = cos(chi) and a uniform grid in phi; the
    integrand of every observable here is analytic in u, so the quadrature
    converges geometrically.
    """
    if quad_chi < 4 or quad_phi < 4:
        raise ValueError("quadrature orders must be >= 4")
    nodes, weights = np.polynomial.legendre.leggauss(quad_chi)
    acc = None
    for u, w in zip(nodes, weights):
        cos_half = np.sqrt(0.5 * (1.0 + u))
        sin_half = np.sqrt(0.5 * (1.0 - u))
        for j in range(quad_phi):
            phi = 2.0 * np.pi * j / quad_phi
            qubit = QubitState(cos_half, sin_half * np.exp(1j * phi))
            value = _scale(func(qubit), 0.5 * w / quad_phi)
            acc = value if acc is None else _add(acc, value)
    return acc


def _mode_overlap(qubit: QubitState, n: int) -> np.ndarray:
    """Overlaps <m1,m2|_lab |k,l>_rotated within the n-photon sector.

    Index convention: position i holds the pair (n - i, i) for both sides.
    """
    a, b = qubit.alpha, qubit.beta
    c, d = -np.conj(b), np.conj(a)  # orthogonal-mode coefficients
    dim = n + 1
    u = np.zeros((dim, dim), dtype=complex)
    root_fact = [np.sqrt(float(factorial(m))) for m in range(n + 1)]
    for col in range(dim):
        k, l = n - col, col
        norm = root_fact[k] * root_fact[l]
        for i in range(k + 1):
            for j in range(l + 1):
                m1 = i + j
                m2 = n - m1
                coeff = (
                    comb(k, i) * comb(l, j)
                    * a**i * b ** (k - i) * c**j * d ** (l - j)
                )
                u[n - m1, col] += coeff * root_fact[m1] * root_fact[m2] / norm
    return u


def convert_fock_basis(
    amps: Mapping[tuple[int, int], complex],
    qubit: QubitState,
    inverse: bool = False,
    max_photons: int = 8,
) -> dict[tuple[int, int], complex]:
    """Re-express two-mode Fock amplitudes in the qubit's rotated mode pair.

    Forward: lab-mode amplitudes -> (clone, orthogonal) amplitudes.  The map
    is block unitary per total photon number; `inverse` applies the adjoint.
    The cost of a sector grows with its photon number, hence the cap.
    """
    sectors: dict[int, dict[tuple[int, int], complex]] = {}
    for (m1, m2), value in sorted(amps.items()):
        if m1 < 0 or m2 < 0:
            raise ValueError(f"negative photon number in key ({m1}, {m2})")
        n = m1 + m2
        if n > max_photons:
            raise ValueError(f"sector {n} exceeds the photon cap {max_photons}")
        sectors.setdefault(n, {})[(m1, m2)] = complex(value)
    out: dict[tuple[int, int], complex] = {}
    for n in sorted(sectors):
        pairs = [(n - i, i) for i in range(n + 1)]
        u = _mode_overlap(qubit, n)
        vec = np.array([sectors[n].get(p, 0.0) for p in pairs], dtype=complex)
        res = (u @ vec) if inverse else (u.conj().T @ vec)
        for pair, value in zip(pairs, res):
            out[pair] = complex(value)
    return out


def convert_state_modes(
    psi: StateVector, qubit: QubitState, inverse: bool = False
) -> StateVector:
    """Apply the mode rotation to a full atom-field state, per atomic config.

    The returned vector lives on the same basis object; its photon labels are
    to be read in the rotated mode pair.
    """
    basis = psi.basis
    groups: dict[tuple, dict[tuple[int, int], complex]] = {}
    for state, amp in zip(basis.states, psi.amplitudes):
        groups.setdefault(state.atoms, {})[(state.n1, state.n2)] = complex(amp)
    amps = np.zeros(len(basis), dtype=complex)
    for atoms in sorted(groups, key=lambda t: tuple(int(a) for a in t)):
        converted = convert_fock_basis(
            groups[atoms], qubit, inverse=inverse, max_photons=basis.excitation
        )
        for (n1, n2), value in converted.items():
            amps[basis.position(BasisState(atoms, n1, n2))] = value
    return StateVector(basis, amps)


def theta_averaged_series(
    n_atoms: int,
    bias_primed: tuple[complex, complex],
    taus: Sequence[float],
    phase_grid: int = 4,
    method: str = "spectral",
    config: IntegratorConfig | None = None,
) -> ProbabilityTable:
    """Phase-averaged photon table of the N-atom cloner on a time grid.

    Builds the sector Hamiltonian for the given primed bias couplings, evolves
    the standard initial state for every phase-grid point and averages the
    diagonal photon readout.  Entries of the result are arrays over taus.
    """
    g1p, g2p = bias_primed
    has_bias = abs(complex(g1p)) > 0.0 or abs(complex(g2p)) > 0.0
    basis = enumerate_basis(n_atoms, n_atoms + 1, include_metastable=has_bias)
    ham = build_hamiltonian(basis, bias_primed)
    taus = np.asarray(taus, dtype=float)
    if method == "spectral":
        prop = Propagator(ham)

        def tables(phases):
            psi0 = initial_state(basis, phases)
            return probability_series(basis, prop.series(psi0.amplitudes, taus))

    elif method == "rk5":

        def tables(phases):
            psi0 = initial_state(basis, phases)
            states = evolve_series(ham, psi0, taus, method="rk5", config=config)
            amps = np.stack([st.amplitudes for st in states], axis=1)
            return probability_series(basis, amps)

    else:
        raise ValueError(f"unknown method {method!r}; use 'spectral' or 'rk5'")
    return phase_average(tables, n_atoms, phase_grid)


def bloch_averaged_series(
    n_atoms: int,
    lab_bias: tuple[complex, complex],
    taus: Sequence[float],
    phase_grid: int = 4,
    quad_chi: int = 16,
    quad_phi: int = 16,
    method: str = "spectral",
    config: IntegratorConfig | None = None,
    fixed_primed: bool = False,
) -> ProbabilityTable:
    """Bloch-sphere average of the phase-averaged table, fixed bias field.

    By default `lab_bias` is held fixed in the lab frame and its primed image
    is recomputed for every sampled qubit.  With fixed_primed=True the couple
    is instead applied as the primed pair for every qubit (the matched-field
    reading, under which the average is trivial by universality).
    """

    def per_qubit(qubit: QubitState) -> ProbabilityTable:
        primed = tuple(lab_bias) if fixed_primed else primed_bias(qubit, lab_bias)
        return theta_averaged_series(
            n_atoms, primed, taus, phase_grid=phase_grid,
            method=method, config=config,
        )

    return bloch_average(per_qubit, quad_chi, quad_phi)
