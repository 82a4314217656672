"""Time-dependent GP equation as a Hamilton system, integrated by Crank-Nicolson.

    i hbar psi_t = kappa (-D2 psi) + beta psi + g |psi|^2 psi

The kinetic coefficient is the same kappa = hbar^2/(4m) as in the stationary
problem, so stationary solutions (lambda = 0) are fixed points of the flow.
The nonlinearity is evaluated at the time midpoint, which makes the step the
implicit midpoint rule: the discrete particle number is conserved exactly and
the energy to O(dt^2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.linalg import solve_banded
from scipy.sparse.linalg import spsolve

from .core import Domain, PhysicalParams, hamiltonian_energy, particle_number
from .errors import ImplicitStepDivergence, InvalidInputError
from .solver import minus_laplacian


@dataclass(frozen=True)
class EvolutionSettings:
    dt: float = 1e-3
    n_steps: int = 1000
    scheme: str = "crank_nicolson"
    fp_tol: float = 1e-12
    fp_max_sweeps: int = 50

    def __post_init__(self):
        if not self.dt > 0:
            raise InvalidInputError(f"dt must be positive, got {self.dt}")
        if self.n_steps < 0:
            raise InvalidInputError(f"n_steps must be >= 0, got {self.n_steps}")
        if self.scheme != "crank_nicolson":
            raise InvalidInputError(f"unknown scheme {self.scheme!r}; only 'crank_nicolson' is available")

    @property
    def total_time(self) -> float:
        return self.dt * self.n_steps


@dataclass
class Trajectory:
    times: np.ndarray
    N: np.ndarray
    H: np.ndarray
    sup_abs: np.ndarray
    states: np.ndarray  # stored fields, one row per entry of ``state_times``
    state_times: np.ndarray

    def rows(self) -> list[tuple]:
        return list(zip(self.times, self.N, self.H, self.sup_abs))


def hamiltonian_gradient(psi: np.ndarray, beta: float, p: PhysicalParams, d: Domain):
    """Real gradient (dH/dpsi1, dH/dpsi2) of the discrete energy, divided by h."""
    force = p.kappa * minus_laplacian_c(psi, d) + (beta + p.g * np.abs(psi) ** 2) * psi
    return 2.0 * force.real, 2.0 * force.imag


def minus_laplacian_c(psi: np.ndarray, d: Domain) -> np.ndarray:
    return minus_laplacian(psi.real, d) + 1j * minus_laplacian(psi.imag, d)


def hamilton_rhs(psi: np.ndarray, beta: float, p: PhysicalParams, d: Domain):
    """Canonical pair  psi1_t = a dH/dpsi2,  psi2_t = -a dH/dpsi1  with a = 1/(2 hbar).

    With Wirtinger-normalized derivatives (half the real gradient) the
    constant is 1/hbar.
    """
    g1, g2 = hamiltonian_gradient(psi, beta, p, d)
    a = 1.0 / (2.0 * p.hbar)
    return a * g2, -a * g1


def _bands(d: Domain, p: PhysicalParams, beta: float, rho: np.ndarray, c: complex):
    """Banded form of I + c * (kappa (-D2) + beta + g rho)."""
    n = d.n_interior
    k = p.kappa / d.h**2
    ab = np.zeros((3, n), dtype=complex)
    ab[0, 1:] = -c * k
    ab[1] = 1.0 + c * (2.0 * k + beta + p.g * rho)
    ab[2, :-1] = -c * k
    return ab


def _apply(psi, d, p, beta, rho, c):
    return psi + c * (p.kappa * minus_laplacian_c(psi, d) + (beta + p.g * rho) * psi)


def _fixed_point(psi, solve_linear, e: EvolutionSettings):
    new = psi
    for _ in range(e.fp_max_sweeps):
        rho = np.abs(0.5 * (new + psi)) ** 2
        nxt = solve_linear(rho)
        change = np.max(np.abs(nxt - new)) if nxt.size else 0.0
        new = nxt
        if change <= e.fp_tol * max(1.0, np.max(np.abs(new), initial=0.0)):
            return new
    raise ImplicitStepDivergence(
        f"midpoint iteration did not reach {e.fp_tol:g} in {e.fp_max_sweeps} sweeps (last change {change:.3e}); reduce dt"
    )


def cn_step(psi: np.ndarray, beta: float, p: PhysicalParams, d: Domain, e: EvolutionSettings) -> np.ndarray:
    """One implicit-midpoint step of the complex equation."""
    c = 0.5j * e.dt / p.hbar

    def solve_linear(rho):
        return solve_banded((1, 1), _bands(d, p, beta, rho, c), _apply(psi, d, p, beta, rho, -c))

    return _fixed_point(psi, solve_linear, e)


def cn_step_real(psi: np.ndarray, beta: float, p: PhysicalParams, d: Domain, e: EvolutionSettings) -> np.ndarray:
    """Same step written for the real pair (psi1, psi2) of the Hamilton system.

    hbar psi1_t =  A psi2,  hbar psi2_t = -A psi1,  A = kappa (-D2) + beta + g |psi|^2.
    """
    n = d.n_interior
    c = 0.5 * e.dt / p.hbar
    k = p.kappa / d.h**2
    lap = sp.diags([-k * np.ones(n - 1), 2 * k * np.ones(n), -k * np.ones(n - 1)], [-1, 0, 1])
    eye = sp.identity(n)
    u1, u2 = psi.real.copy(), psi.imag.copy()

    def solve_linear(rho):
        A = (lap + sp.diags(beta + p.g * rho)).tocsr()
        lhs = sp.bmat([[eye, -c * A], [c * A, eye]], format="csc")
        rhs = np.concatenate([u1 + c * (A @ u2), u2 - c * (A @ u1)])
        sol = spsolve(lhs, rhs)
        return sol[:n] + 1j * sol[n:]

    return _fixed_point(psi.astype(complex), solve_linear, e)


def evolve(
    psi0: np.ndarray,
    beta: float,
    p: PhysicalParams,
    d: Domain,
    e: EvolutionSettings = EvolutionSettings(),
    store_every: int = 1,
) -> Trajectory:
    """Integrate from psi0; N, H and sup|psi| are recorded at every step."""
    d.check(psi0)
    psi = np.asarray(psi0, dtype=complex).copy()
    times = e.dt * np.arange(e.n_steps + 1)
    N = np.empty(e.n_steps + 1)
    H = np.empty(e.n_steps + 1)
    sup_abs = np.empty(e.n_steps + 1)
    states, state_times = [], []
    for i in range(e.n_steps + 1):
        if i > 0:
            psi = cn_step(psi, beta, p, d, e)
        N[i] = particle_number(psi, d)
        H[i] = hamiltonian_energy(psi, beta, p, d)
        sup_abs[i] = np.max(np.abs(psi))
        if store_every and (i % store_every == 0 or i == e.n_steps):
            states.append(psi.copy())
            state_times.append(times[i])
    return Trajectory(times, N, H, sup_abs, np.array(states), np.array(state_times))


def conservation_report(traj: Trajectory) -> tuple[float, float]:
    """Maximal relative drifts of N and H; absolute when the initial value is zero."""
    if len(traj.times) == 0:
        raise InvalidInputError("empty trajectory")
    N0, H0 = traj.N[0], traj.H[0]
    dN = np.max(np.abs(traj.N - N0))
    dH = np.max(np.abs(traj.H - H0))
    drift_N = dN / N0 if N0 > 0 else dN
    drift_H = dH / max(abs(H0), 1e-12) if H0 != 0 else dH
    return float(drift_N), float(drift_H)


def standing_wave_deviation(traj: Trajectory, phi: np.ndarray) -> float:
    """max over stored times of sup_x | |psi(t)| - |phi| |."""
    return float(np.max(np.abs(np.abs(traj.states) - np.abs(phi)[None, :])))
