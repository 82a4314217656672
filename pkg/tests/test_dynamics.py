import numpy as np
import pytest

from bec_qpt.core import Domain, PhysicalParams, hamiltonian_energy
from bec_qpt.dynamics import (
    EvolutionSettings,
    cn_step,
    cn_step_real,
    conservation_report,
    evolve,
    hamilton_rhs,
    hamiltonian_gradient,
    standing_wave_deviation,
)
from bec_qpt.errors import ImplicitStepDivergence, InvalidInputError
from bec_qpt.reduced import asymptotic_solution, critical_beta
from bec_qpt.solver import newton_solve, residual
from bec_qpt.spectral import analytic_modes, discrete_eigenvalue, numeric_modes


@pytest.fixture(scope="module")
def ground(std):
    p, d = std
    m1 = numeric_modes(d, 1)[0]
    return newton_solve(asymptotic_solution(m1, -1.5, "+", p), -1.5, p, d)


def test_settings_validation():
    with pytest.raises(InvalidInputError):
        EvolutionSettings(dt=0.0)
    with pytest.raises(InvalidInputError):
        EvolutionSettings(scheme="split_step")
    assert EvolutionSettings(2e-3, 500).total_time == pytest.approx(1.0)


def test_stationary_state_is_standing_wave(std, ground):
    p, d = std
    traj = evolve(ground.phi, -1.5, p, d, EvolutionSettings(1e-3, 1000))
    assert standing_wave_deviation(traj, ground.phi) <= 1e-6
    drift_N, drift_H = conservation_report(traj)
    assert drift_N <= 1e-8
    assert drift_H <= 1e-6


def test_standing_wave_with_frequency():
    # lambda != 0: the stationary state rotates as exp(-i lambda t) under the beta-only dynamics
    p = PhysicalParams(lam=0.7)
    d = Domain(np.pi, 200)
    m1 = numeric_modes(d, 1)[0]
    beta = critical_beta(m1, p).beta_k - 0.8
    sol = newton_solve(asymptotic_solution(m1, beta, "+", p), beta, p, d)
    e = EvolutionSettings(1e-3, 500)
    traj = evolve(sol.phi, beta, p, d, e, store_every=100)
    assert standing_wave_deviation(traj, sol.phi) <= 1e-6
    t = traj.state_times[-1]
    # implicit-midpoint phase: 2 arctan(lambda dt / 2) per step
    phase = 2 * np.arctan(p.lam * e.dt / 2) * e.n_steps
    np.testing.assert_allclose(traj.states[-1], np.exp(-1j * phase) * sol.phi, atol=1e-9)
    assert phase == pytest.approx(p.lam * t, abs=1e-6)


def test_zero_field_stays_zero(std):
    p, d = std
    traj = evolve(d.zeros(), -1.5, p, d, EvolutionSettings(1e-2, 20))
    assert not np.any(traj.states)
    assert conservation_report(traj) == (0.0, 0.0)


def test_linear_evolution_matches_closed_form():
    p = PhysicalParams(g=0.0)
    d = Domain(np.pi, 300)
    e1 = analytic_modes(d, 1)[0].shape
    beta = -0.5
    omega = (p.kappa * discrete_eigenvalue(d, 1) + beta) / p.hbar
    errors = []
    for dt in (0.02, 0.01):
        e = EvolutionSettings(dt, int(round(1.0 / dt)))
        traj = evolve(e1, beta, p, d, e, store_every=e.n_steps)
        exact = np.exp(-1j * omega * 1.0) * e1
        errors.append(np.max(np.abs(traj.states[-1] - exact)))
        assert errors[-1] <= abs(omega) ** 3 * dt**2 * 1.0  # O(dt^2 T)
    assert errors[0] / errors[1] == pytest.approx(4.0, rel=0.05)


def test_energy_drift_second_order(std):
    p, d = std
    m = numeric_modes(d, 2)
    psi0 = 1.5 * m[0].shape + 0.3 * m[1].shape
    drifts = []
    for dt in (4e-3, 2e-3, 1e-3):
        traj = evolve(psi0, -1.5, p, d, EvolutionSettings(dt, int(round(1 / dt))), store_every=0)
        dN, dH = conservation_report(traj)
        assert dN <= 1e-8
        drifts.append(dH)
    orders = np.log2(np.array(drifts[:-1]) / drifts[1:])
    assert np.all(np.abs(orders - 2.0) <= 0.3), orders


def test_real_and_complex_steps_agree(std, ground):
    p, d = std
    rng = np.random.default_rng(3)
    psi = ground.phi * np.exp(0.3j) + 0.05 * (rng.normal(size=d.n_interior) + 1j * rng.normal(size=d.n_interior))
    psi[[0, -1]] = 0
    e = EvolutionSettings(dt=5e-3, n_steps=1)
    np.testing.assert_allclose(cn_step(psi, -1.5, p, d, e), cn_step_real(psi, -1.5, p, d, e), rtol=0, atol=1e-12)


def test_hamilton_form(std):
    p, d = std
    rng = np.random.default_rng(11)
    psi = rng.normal(size=d.n_interior) + 1j * rng.normal(size=d.n_interior)
    beta = -2.0
    # gradient of the discrete energy, by central differences along random directions
    g1, g2 = hamiltonian_gradient(psi, beta, p, d)
    for _ in range(5):
        v = rng.normal(size=d.n_interior)
        eps = 1e-6
        dH1 = (hamiltonian_energy(psi + eps * v, beta, p, d) - hamiltonian_energy(psi - eps * v, beta, p, d)) / (2 * eps)
        dH2 = (hamiltonian_energy(psi + 1j * eps * v, beta, p, d) - hamiltonian_energy(psi - 1j * eps * v, beta, p, d)) / (2 * eps)
        assert dH1 == pytest.approx(d.h * np.dot(g1, v), rel=1e-6)
        assert dH2 == pytest.approx(d.h * np.dot(g2, v), rel=1e-6)
    # the canonical pair reproduces i hbar psi_t = -kappa D2 psi + beta psi + g |psi|^2 psi
    r1, r2 = hamilton_rhs(psi, beta, p, d)
    lhs = (r1 + 1j * r2) * 1j * p.hbar
    rhs = residual(psi.real, beta, PhysicalParams(g=0.0), d) + 1j * residual(psi.imag, beta, PhysicalParams(g=0.0), d)
    rhs = rhs + p.g * np.abs(psi) ** 2 * psi
    np.testing.assert_allclose(lhs, rhs, rtol=1e-12, atol=1e-9)


def test_residual_transfer(std):
    p, d = std
    m1 = numeric_modes(d, 1)[0]
    beta = critical_beta(m1, p).beta_k - 0.03
    phi = asymptotic_solution(m1, beta, "+", p)  # not an exact solution
    eps = np.max(np.abs(residual(phi, beta, p, d)))
    T = 0.2
    traj = evolve(phi, beta, p, d, EvolutionSettings(1e-3, 200))
    deviation = np.max(np.abs(traj.states - phi[None, :]))
    assert deviation <= 10 * eps * T


def test_large_step_diverges(std):
    p, d = std
    m1 = numeric_modes(d, 1)[0]
    with pytest.raises(ImplicitStepDivergence):
        evolve(20 * m1.shape, -1.0, p, d, EvolutionSettings(dt=0.5, n_steps=1))


def test_conservation_report_requires_data(std):
    p, d = std
    traj = evolve(d.zeros(), 0.0, p, d, EvolutionSettings(1e-3, 0))
    assert len(traj.times) == 1
    assert conservation_report(traj) == (0.0, 0.0)
