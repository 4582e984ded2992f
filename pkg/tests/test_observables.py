import numpy as np
import pytest

from vcloner import (
    BlochPoint,
    PhotonStats,
    ProbabilityTable,
    Propagator,
    QubitState,
    StateVector,
    bloch_average,
    bloch_averaged_series,
    build_hamiltonian,
    convert_fock_basis,
    convert_state_modes,
    enumerate_basis,
    fidelity,
    mean_photons,
    phase_average,
    photon_probabilities,
    probability_series,
    theta_averaged_series,
)
from vcloner import analytic
from vcloner.hilbert import AtomLevel, BasisState

SQRT2 = np.sqrt(2.0)

# the quarter-period table; fidelity 3/4, moments (11/8, 7/4)
QUARTER = ProbabilityTable({(2, 0): 0.5, (1, 1): 0.25, (0, 1): 0.125,
                            (1, 0): 0.125})


def random_qubit(rng):
    v = rng.normal(size=4)
    n = np.linalg.norm(v)
    return QubitState(complex(v[0], v[1]) / n, complex(v[2], v[3]) / n)


def test_photon_probabilities_groups_by_occupation():
    basis = enumerate_basis(1, 2, include_metastable=False)
    psi = StateVector.from_mapping(basis, {
        BasisState((AtomLevel.EXCITED_ONE,), 1, 0): 0.6,
        BasisState((AtomLevel.EXCITED_TWO,), 1, 0): 0.8j,
    })
    table = photon_probabilities(psi)
    assert table.get(1, 0) == pytest.approx(1.0)
    assert table.get(2, 0) == 0.0


def test_probability_series_matches_per_column():
    basis = analytic.single_atom_basis(False)
    prop = Propagator(build_hamiltonian(basis))
    psi0 = analytic.amplitudes_unbiased(QubitState(1.0, 0.0), 0.3, 0.0)
    taus = np.linspace(0.0, 6.0, 25)
    amps = prop.series(psi0.amplitudes, taus)
    table = probability_series(basis, amps)
    for i in range(len(taus)):
        single = photon_probabilities(StateVector(basis, amps[:, i]))
        for key, series in table.sorted_items():
            assert np.asarray(series)[i] == pytest.approx(
                single.get(*key), abs=1e-12)


def test_fidelity_and_moments_frozen_table():
    assert fidelity(QUARTER) == pytest.approx(0.75)
    n_right, n_all = mean_photons(QUARTER)
    assert n_right == pytest.approx(1.375)
    assert n_all == pytest.approx(1.75)


def test_fidelity_rejects_vacuum_weight():
    with pytest.raises(ValueError):
        fidelity(ProbabilityTable({(0, 0): 1e-6, (1, 0): 1.0 - 1e-6}))


def test_moment_markers_along_the_curve():
    # at cos(sqrt2 tau) = -1 the clone mode holds half a photon on average
    table = theta_averaged_series(1, (0.0, 0.0), np.array([np.pi / SQRT2]))
    n_right, n_all = mean_photons(table)
    assert float(np.asarray(n_right)[0]) == pytest.approx(0.5, abs=1e-12)
    assert float(np.asarray(n_all)[0]) == pytest.approx(1.0, abs=1e-12)


def test_photon_stats_wrapper():
    stats = PhotonStats.from_table(QUARTER)
    assert stats.n_right == pytest.approx(1.375)
    assert stats.n_all == pytest.approx(1.75)
    assert stats.table is QUARTER


def test_phase_average_kills_single_harmonics():
    avg = phase_average(lambda ph: np.cos(ph[0]), 1, grid_m=2)
    assert avg == pytest.approx(0.0, abs=1e-15)
    avg2 = phase_average(lambda ph: 1.5 + np.sin(ph[0]) - np.cos(ph[1]), 2)
    assert avg2 == pytest.approx(1.5, abs=1e-14)
    with pytest.raises(ValueError):
        phase_average(lambda ph: 0.0, 1, grid_m=1)
    with pytest.raises(ValueError):
        phase_average(lambda ph: 0.0, 0)


def test_phase_grid_two_already_exact_for_the_tables():
    taus = np.linspace(0.0, 12.0, 61)
    coarse = theta_averaged_series(1, (0.0, 3.0), taus, phase_grid=2)
    fine = theta_averaged_series(1, (0.0, 3.0), taus, phase_grid=8)
    for key, series in fine.sorted_items():
        assert np.max(np.abs(np.asarray(coarse.get(*key))
                             - np.asarray(series))) < 1e-12


def test_bloch_average_moments_of_the_uniform_measure():
    assert bloch_average(lambda q: abs(q.alpha) ** 2) == pytest.approx(0.5)
    assert bloch_average(lambda q: abs(q.alpha) ** 4) == pytest.approx(1 / 3)
    assert bloch_average(lambda q: q.beta) == pytest.approx(0.0, abs=1e-14)
    with pytest.raises(ValueError):
        bloch_average(lambda q: 1.0, quad_chi=2)


def test_bloch_point_maps_to_qubit():
    point = BlochPoint(0.8, 2.2)
    assert point.qubit.alpha == pytest.approx(np.cos(0.4))
    assert point.qubit.beta == pytest.approx(np.sin(0.4) * np.exp(2.2j))


def test_mode_conversion_two_photon_example():
    # |2,0> in the rotated pair spreads binomially over the lab modes
    q = QubitState(0.6, 0.8j)
    a, b = q.alpha, q.beta
    lab = {(2, 0): a * a, (1, 1): SQRT2 * a * b, (0, 2): b * b}
    rotated = convert_fock_basis(lab, q)
    assert rotated[(2, 0)] == pytest.approx(1.0)
    assert rotated[(1, 1)] == pytest.approx(0.0, abs=1e-14)
    assert rotated[(0, 2)] == pytest.approx(0.0, abs=1e-14)
    back = convert_fock_basis({(2, 0): 1.0}, q, inverse=True)
    assert back[(2, 0)] == pytest.approx(a * a)
    assert back[(1, 1)] == pytest.approx(SQRT2 * a * b)
    assert back[(0, 2)] == pytest.approx(b * b)


def test_mode_conversion_unitary_roundtrip():
    rng = np.random.default_rng(29)
    q = random_qubit(rng)
    amps = {}
    for n in range(4):
        for i in range(n + 1):
            amps[(n - i, i)] = complex(rng.normal(), rng.normal())
    norm = np.sqrt(sum(abs(v) ** 2 for v in amps.values()))
    amps = {k: v / norm for k, v in amps.items()}
    fwd = convert_fock_basis(amps, q)
    assert sum(abs(v) ** 2 for v in fwd.values()) == pytest.approx(1.0)
    back = convert_fock_basis(fwd, q, inverse=True)
    for key, value in amps.items():
        assert back[key] == pytest.approx(value, abs=1e-12)


def test_mode_conversion_guards():
    q = QubitState(1.0, 0.0)
    with pytest.raises(ValueError):
        convert_fock_basis({(-1, 0): 1.0}, q)
    with pytest.raises(ValueError):
        convert_fock_basis({(9, 0): 1.0}, q, max_photons=8)


def test_convert_state_modes_preserves_norm_and_atoms():
    basis = analytic.single_atom_basis(False)
    rng = np.random.default_rng(31)
    q = random_qubit(rng)
    raw = rng.normal(size=len(basis)) + 1j * rng.normal(size=len(basis))
    psi = StateVector(basis, raw / np.linalg.norm(raw))
    rot = convert_state_modes(psi, q)
    assert rot.norm() == pytest.approx(1.0)
    back = convert_state_modes(rot, q, inverse=True)
    assert np.max(np.abs(back.amplitudes - psi.amplitudes)) < 1e-12


def test_lab_route_reproduces_the_averaged_table():
    # evolve in the lab frame, rotate the modes, average the phase: must land
    # on the same four formulas the primed frame gives directly
    q = QubitState(np.sqrt(0.3), np.sqrt(0.7) * np.exp(0.9j))
    basis = analytic.single_atom_basis(False)
    prop = Propagator(build_hamiltonian(basis))
    taus = np.linspace(0.0, 12.0, 61)

    def per_phase(phases):
        psi0 = analytic.amplitudes_unbiased(q, phases[0], 0.0)
        amps = prop.series(psi0.amplitudes, taus)
        cols = [
            photon_probabilities(
                convert_state_modes(StateVector(basis, amps[:, i]), q))
            for i in range(len(taus))
        ]
        return ProbabilityTable({
            key: np.array([c.get(*key) for c in cols])
            for key in {(2, 0), (1, 1), (0, 1), (1, 0), (0, 2)}
        })

    table = phase_average(per_phase, 1)
    ref = analytic.theta_avg_probs_unbiased(taus)
    for key in ((2, 0), (1, 1), (0, 1), (1, 0), (0, 2)):
        assert np.max(np.abs(np.asarray(table.get(*key))
                             - np.asarray(ref.get(*key)))) < 1e-9


def test_theta_averaged_series_rk5_route_agrees():
    taus = np.linspace(0.0, 8.0, 33)
    spectral = theta_averaged_series(2, (0.0, 3.0), taus, method="spectral")
    rk5 = theta_averaged_series(2, (0.0, 3.0), taus, method="rk5")
    for key, series in spectral.sorted_items():
        assert np.max(np.abs(np.asarray(rk5.get(*key))
                             - np.asarray(series))) < 1e-8


def test_matched_bias_bloch_average_is_trivial():
    # with the primed couple pinned, every qubit gives the same table
    taus = np.linspace(0.0, 6.0, 31)
    pinned = bloch_averaged_series(1, (0.0, 3.0), taus, quad_chi=4,
                                   quad_phi=4, fixed_primed=True)
    direct = theta_averaged_series(1, (0.0, 3.0), taus)
    for key, series in direct.sorted_items():
        assert np.max(np.abs(np.asarray(pinned.get(*key))
                             - np.asarray(series))) < 1e-12


def test_probability_table_invariants_along_series():
    taus = np.linspace(0.0, 12.0, 61)
    for bias in ((0.0, 0.0), (0.0, 3.0)):
        table = theta_averaged_series(1, bias, taus)
        assert float(np.max(np.abs(np.asarray(table.total()) - 1.0))) < 1e-9
        for _, series in table.sorted_items():
            assert float(np.min(np.asarray(series))) >= -1e-12
        assert float(np.max(np.asarray(table.get(0, 0)))) == 0.0
