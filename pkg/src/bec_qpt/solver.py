"""Finite-difference stationary GP equation: residual, Jacobian, damped Newton, multi-start search.

The discrete problem on the interior nodes is

    kappa * (-D2 phi) + (beta - hbar*lambda) * phi + g * phi**3 = 0,

with D2 the three-point second difference and zero Dirichlet ghosts.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.linalg import lapack

from .core import Domain, GridFunction, PhysicalParams, l2_inner, particle_number
from .errors import (
    InvalidInputError,
    MaxIterationsExceeded,
    NumericalError,
    SingularJacobianError,
    StepUnderflowError,
)

log = logging.getLogger(__name__)

PIVOT_FLOOR = 1e-14


@dataclass(frozen=True)
class NewtonSettings:
    tol_residual: float = 1e-10
    max_iter: int = 50
    damping: float = 0.5
    min_step: float = 1e-12
    # Besides a small residual, the last correction must be below
    # tol_step * max(1, sup|phi|); this rejects stalls at degenerate roots.
    tol_step: float = 1e-8

    def __post_init__(self):
        if not self.tol_residual > 0:
            raise InvalidInputError("tol_residual must be positive")
        if self.max_iter < 0:
            raise InvalidInputError("max_iter must be >= 0")
        if not 0 < self.damping < 1:
            raise InvalidInputError("damping must lie in (0, 1)")
        if not self.min_step > 0:
            raise InvalidInputError("min_step must be positive")
        if not self.tol_step > 0:
            raise InvalidInputError("tol_step must be positive")


@dataclass
class Solution:
    phi: GridFunction
    beta: float
    residual_norm: float
    newton_iters: int
    label: tuple | None = field(default=None, compare=False)
    tolerance: float = 0.0  # residual bound actually enforced, see residual_tolerance


@dataclass(frozen=True)
class Tridiagonal:
    """Square tridiagonal matrix stored by bands."""

    lower: np.ndarray
    diag: np.ndarray
    upper: np.ndarray

    def __matmul__(self, v: np.ndarray) -> np.ndarray:
        out = self.diag * v
        out[:-1] += self.upper * v[1:]
        out[1:] += self.lower * v[:-1]
        return out

    def toarray(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.upper, 1) + np.diag(self.lower, -1)

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        """LU with partial pivoting (LAPACK gttrf/gttrs).

        Raises SingularJacobianError when a pivot of U falls below 1e-14.
        """
        dl, d, du, du2, ipiv, info = lapack.dgttrf(self.lower, self.diag, self.upper)
        if info < 0:  # pragma: no cover - argument error
            raise NumericalError(f"dgttrf argument error {info}")
        smallest = float(np.min(np.abs(d)))
        if info > 0 or smallest < PIVOT_FLOOR:
            raise SingularJacobianError(
                f"pivot {smallest:.3e} below {PIVOT_FLOOR:g}; Jacobian is singular (near a critical point?)"
            )
        x, info = lapack.dgttrs(dl, d, du, du2, ipiv, rhs)
        if info != 0:  # pragma: no cover
            raise NumericalError(f"dgttrs failed with info={info}")
        return x


def minus_laplacian(phi: GridFunction, d: Domain) -> np.ndarray:
    # difference of neighbour differences: the inner subtraction is exact for
    # close samples, which keeps rounding well below 2*phi - left - right
    padded = np.concatenate(([0.0], phi, [0.0]))
    return -np.diff(np.diff(padded)) / d.h**2


def residual(phi: GridFunction, beta: float, p: PhysicalParams, d: Domain) -> GridFunction:
    d.check(phi)
    return p.kappa * minus_laplacian(phi, d) + (beta - p.energy) * phi + p.g * phi * phi * phi


def jacobian(phi: GridFunction, beta: float, p: PhysicalParams, d: Domain) -> Tridiagonal:
    d.check(phi)
    n = d.n_interior
    c = p.kappa / d.h**2
    off = np.full(n - 1, -c)
    diag = 2.0 * c + beta - p.energy + 3.0 * p.g * phi * phi
    return Tridiagonal(off, diag, off.copy())


def stationarity_pairing(phi: GridFunction, beta: float, p: PhysicalParams, d: Domain) -> float:
    """<Q(phi, beta), phi>: vanishes for every solution of the stationary problem."""
    return l2_inner(residual(phi, beta, p, d), phi, d)


def _sup(v: np.ndarray) -> float:
    return float(np.max(np.abs(v))) if v.size else 0.0


def residual_tolerance(phi: GridFunction, beta: float, p: PhysicalParams, d: Domain, s: NewtonSettings) -> float:
    """max(tol_residual, eps * ||J||_inf * ||phi||_inf).

    Rounding phi to doubles alone changes the residual by about the second
    term (~1e-10 * sup|phi| at n = 1000), so a smaller bound cannot be met.
    """
    top = _sup(phi)
    jnorm = 4.0 * p.kappa / d.h**2 + abs(beta - p.energy) + 3.0 * abs(p.g) * top**2
    return max(s.tol_residual, np.finfo(float).eps * jnorm * top)


def newton_solve(
    seed: GridFunction,
    beta: float,
    p: PhysicalParams,
    d: Domain,
    s: NewtonSettings = NewtonSettings(),
) -> Solution:
    """Damped Newton; backtracking enforces sufficient decrease of the residual sup-norm."""
    d.check(seed)
    phi = np.array(seed, dtype=float)
    F = residual(phi, beta, p, d)
    rn = _sup(F)
    last_step = None
    for it in range(s.max_iter + 1):
        small_step = last_step is None or last_step <= s.tol_step * max(1.0, _sup(phi))
        tol = residual_tolerance(phi, beta, p, d, s)
        if rn <= tol and small_step:
            return Solution(phi, beta, rn, it, tolerance=tol)
        if it == s.max_iter:
            break
        delta = jacobian(phi, beta, p, d).solve(-F)
        t = 1.0
        while True:
            trial = phi + t * delta
            Ft = residual(trial, beta, p, d)
            rt = _sup(Ft)
            if np.isfinite(rt) and (rt <= (1.0 - 1e-4 * t) * rn or rt <= tol):
                break
            t *= s.damping
            if t < s.min_step:
                raise StepUnderflowError(
                    f"backtracking step fell below {s.min_step:g} at iteration {it}, residual {rn:.3e}"
                )
        phi, F, rn = trial, Ft, rt
        last_step = t * _sup(delta)
    raise MaxIterationsExceeded(
        f"no convergence in {s.max_iter} iterations at beta={beta}: residual {rn:.3e}, last step {last_step:.3e}"
    )


def deflated_search(
    seeds: Sequence[GridFunction],
    beta: float,
    p: PhysicalParams,
    d: Domain,
    s: NewtonSettings = NewtonSettings(),
    labels: Sequence[tuple] | None = None,
    dedup_tol: float | None = None,
    zero_tol: float = 1e-6,
) -> list[Solution]:
    """Newton from every seed; keep distinct nontrivial solutions.

    Seeds are processed in ascending label order so the result does not depend
    on the order they were passed in. Failed seeds are skipped. A solution is
    trivial when sup|phi| <= zero_tol. Two solutions coincide when their L2
    distance is at most ``dedup_tol`` (default 1e-4 * max(1, ||phi||)).
    """
    if labels is None:
        labels = [(i,) for i in range(len(seeds))]
    if len(labels) != len(seeds):
        raise InvalidInputError("labels and seeds differ in length")
    found: list[Solution] = []
    for label, seed in sorted(zip(labels, seeds), key=lambda pair: pair[0]):
        try:
            sol = newton_solve(seed, beta, p, d, s)
        except NumericalError as exc:
            log.debug("seed %s failed at beta=%s: %s", label, beta, exc)
            continue
        if _sup(sol.phi) <= zero_tol:
            continue
        tol = dedup_tol if dedup_tol is not None else 1e-4 * max(1.0, np.sqrt(particle_number(sol.phi, d)))
        if any(np.sqrt(particle_number(sol.phi - other.phi, d)) <= tol for other in found):
            continue
        sol.label = label
        found.append(sol)
    return found
