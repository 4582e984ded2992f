import numpy as np
import pytest

from vcloner import (
    IntegratorConfig,
    Propagator,
    StepUnderflowError,
    build_hamiltonian,
    enumerate_basis,
    evolve_series,
    initial_state,
    rk5_propagate,
    spectral_propagate,
)
from vcloner import analytic
from vcloner.model import QubitState


def make_system(n_atoms=1, g2p=3.0):
    basis = enumerate_basis(n_atoms, n_atoms + 1, include_metastable=True)
    ham = build_hamiltonian(basis, (0.0, g2p))
    psi0 = initial_state(basis, [0.9, 2.1][:n_atoms])
    return ham, psi0


def test_spectral_identity_at_zero():
    ham, psi0 = make_system()
    out = spectral_propagate(ham, psi0, 0.0)
    assert np.max(np.abs(out.amplitudes - psi0.amplitudes)) < 1e-14


def test_spectral_matches_unbiased_closed_form():
    basis = analytic.single_atom_basis(False)
    prop = Propagator(build_hamiltonian(basis))
    q = QubitState(0.6, 0.8j)
    theta = 1.7
    psi0 = analytic.amplitudes_unbiased(q, theta, 0.0)
    taus = np.linspace(0.0, 12.0, 121)
    amps = prop.series(psi0.amplitudes, taus)
    for i, tau in enumerate(taus):
        ref = analytic.amplitudes_unbiased(q, theta, float(tau))
        assert np.max(np.abs(amps[:, i] - ref.amplitudes)) < 1e-10


def test_spectral_matches_biased_closed_form():
    basis = analytic.single_atom_basis(True)
    prop = Propagator(build_hamiltonian(basis, (0.0, 3.0)))
    theta = 0.4
    psi0 = initial_state(basis, [theta])
    taus = np.linspace(0.0, 12.0, 121)
    amps = prop.series(psi0.amplitudes, taus)
    for i, tau in enumerate(taus):
        ref = analytic.amplitudes_biased(3.0, theta, float(tau))
        assert np.max(np.abs(amps[:, i] - ref.amplitudes)) < 1e-10


def test_spectral_norm_and_composition():
    ham, psi0 = make_system(2, 8.0)
    prop = Propagator(ham)
    step = prop.advance(prop.advance(psi0.amplitudes, 1.3), 2.1)
    direct = prop.advance(psi0.amplitudes, 3.4)
    assert np.max(np.abs(step - direct)) < 1e-12
    assert np.linalg.norm(direct) == pytest.approx(1.0, abs=1e-12)


def test_rk5_tracks_spectral():
    ham, psi0 = make_system(1, 3.0)
    for tau in (0.6, 3.7, 12.0):
        rk = rk5_propagate(ham, psi0, tau)
        sp = spectral_propagate(ham, psi0, tau)
        assert np.max(np.abs(rk.amplitudes - sp.amplitudes)) < 1e-9
        assert rk.norm() == pytest.approx(1.0, abs=1e-9)


def test_rk5_series_reuses_the_running_step():
    ham, psi0 = make_system(2, 8.0)
    taus = np.linspace(0.0, 20.0, 81)
    rk_states = evolve_series(ham, psi0, taus, method="rk5")
    sp_amps = Propagator(ham).series(psi0.amplitudes, taus)
    worst = max(
        float(np.max(np.abs(s.amplitudes - sp_amps[:, i])))
        for i, s in enumerate(rk_states)
    )
    assert worst < 1e-8
    assert max(abs(s.norm() - 1.0) for s in rk_states) < 1e-9


def test_evolve_series_spectral_columns():
    ham, psi0 = make_system()
    taus = [0.0, 0.5, 1.5]
    states = evolve_series(ham, psi0, taus, method="spectral")
    assert len(states) == 3
    for tau, state in zip(taus, states):
        ref = spectral_propagate(ham, psi0, tau)
        assert np.max(np.abs(state.amplitudes - ref.amplitudes)) < 1e-12


def test_grid_validation():
    ham, psi0 = make_system()
    with pytest.raises(ValueError):
        evolve_series(ham, psi0, [0.0, 2.0, 1.0])
    with pytest.raises(ValueError):
        evolve_series(ham, psi0, [-0.5, 1.0])
    with pytest.raises(ValueError):
        evolve_series(ham, psi0, [0.0, 1.0], method="euler")
    with pytest.raises(ValueError):
        rk5_propagate(ham, psi0, -1.0)


def test_basis_mismatch_rejected():
    ham, _ = make_system()
    other = initial_state(enumerate_basis(2, 3, include_metastable=True),
                          [0.0, 0.0])
    with pytest.raises(ValueError):
        spectral_propagate(ham, other, 1.0)
    with pytest.raises(ValueError):
        rk5_propagate(ham, other, 1.0)


def test_integrator_config_validation():
    with pytest.raises(ValueError):
        IntegratorConfig(abs_tol=0.0)
    with pytest.raises(ValueError):
        IntegratorConfig(max_step=-0.1)


def test_step_underflow_signalled():
    ham, psi0 = make_system()
    impossible = IntegratorConfig(abs_tol=1e-30, rel_tol=1e-30)
    with pytest.raises(StepUnderflowError):
        rk5_propagate(ham, psi0, 1.0, config=impossible)
