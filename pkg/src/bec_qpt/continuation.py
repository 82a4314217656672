"""Natural-parameter continuation of the pitchfork branches, state census and diagram data."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import Domain, GridFunction, PhysicalParams, hamiltonian_energy, l2_inner, particle_number
from .errors import ContinuationStallError, InvalidInputError, NumericalError, WrongSideError
from .reduced import asymptotic_solution, branch_exists, critical_beta, parse_sign
from .solver import NewtonSettings, Solution, deflated_search, newton_solve
from .spectral import Mode, numeric_modes

MIN_STEP = 1e-6
FALLBACK_STEP = 0.1  # census fallback continuation step in beta


@dataclass
class BranchPoint:
    beta: float
    solution: Solution
    N: float
    H: float
    amplitude: float
    nodal_count: int


@dataclass
class Branch:
    k: int
    sign: int
    beta_k: float
    domain: Domain
    points: list[BranchPoint] = field(default_factory=list)

    @property
    def label(self) -> str:
        return f"{self.k}{'+' if self.sign > 0 else '-'}"

    @property
    def betas(self) -> np.ndarray:
        return np.array([pt.beta for pt in self.points])

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([pt.amplitude for pt in self.points])

    @property
    def nodal_counts(self) -> np.ndarray:
        return np.array([pt.nodal_count for pt in self.points], dtype=int)

    @property
    def fields(self) -> np.ndarray:
        return np.array([pt.solution.phi for pt in self.points])


def nodal_count(phi: GridFunction) -> int:
    """Strict sign changes between samples above 1e-9 * sup|phi| (smaller samples are skipped)."""
    phi = np.asarray(phi)
    if phi.size == 0:
        return 0
    top = np.max(np.abs(phi))
    if top == 0:
        return 0
    signs = np.sign(phi[np.abs(phi) > 1e-9 * top])
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def _point(sol: Solution, mode: Mode, p: PhysicalParams, d: Domain) -> BranchPoint:
    return BranchPoint(
        beta=sol.beta,
        solution=sol,
        N=particle_number(sol.phi, d),
        H=hamiltonian_energy(sol.phi, sol.beta, p, d),
        amplitude=l2_inner(sol.phi, mode.shape, d),
        nodal_count=nodal_count(sol.phi),
    )


def continue_branch(
    mode: Mode,
    sign,
    beta_end: float,
    step: float,
    p: PhysicalParams,
    d: Domain,
    s: NewtonSettings = NewtonSettings(),
) -> Branch:
    """March beta from just past beta_k to beta_end, seeding each solve with the previous point.

    The first point sits at distance delta_0 = min(step, |beta_k - beta_end|/10)
    from beta_k and is seeded by the leading-order pitchfork profile. Later
    seeds are the previous solution rescaled by sqrt(|beta - beta_k|). A solve
    that fails, or lands on the trivial state or the mirror branch, halves the
    step (down to 1e-6); after a success it grows back toward the nominal step.
    """
    sign = parse_sign(sign)
    if not step > 0:
        raise InvalidInputError(f"step must be positive, got {step}")
    beta_k = critical_beta(mode, p).beta_k
    direction = -1.0 if p.g > 0 else 1.0
    if not branch_exists(mode, beta_end, p):
        side = "<" if p.g > 0 else ">"
        raise WrongSideError(
            f"branch {mode.k} exists only for beta {side} beta_k={beta_k:.6g} when g={p.g}; got beta_end={beta_end}"
        )
    span = abs(beta_end - beta_k)
    delta0 = min(step, span / 10.0)
    beta = beta_k + direction * delta0
    sol = newton_solve(asymptotic_solution(mode, beta, sign, p), beta, p, d, s)
    branch = Branch(mode.k, sign, beta_k, d, [_point(sol, mode, p, d)])

    h = step
    while direction * (beta_end - beta) > 1e-12 * max(1.0, abs(beta_end)):
        target = beta + direction * h
        if direction * (target - beta_end) > 0:
            target = beta_end
        # predictor: previous state rescaled by the sqrt(|beta - beta_k|) law
        seed = sol.phi * math.sqrt(abs(target - beta_k) / abs(beta - beta_k))
        try:
            trial = newton_solve(seed, target, p, d, s)
            amp = l2_inner(trial.phi, mode.shape, d)
            if sign * amp <= 0:
                raise NumericalError(f"Newton left branch {branch.label} (projection {amp:.3e})")
        except NumericalError as exc:
            h /= 2.0
            if h < MIN_STEP:
                raise ContinuationStallError(
                    f"branch {branch.label} stalled at beta={beta:.8g}: {exc}"
                ) from exc
            continue
        sol, beta = trial, target
        branch.points.append(_point(sol, mode, p, d))
        h = min(step, 2.0 * h)
    return branch


def branch_separation(b1: Branch, b2: Branch, exclude_onset: float = 0.0) -> tuple[float, bool]:
    """Minimum L2 distance between two branches over their shared beta range.

    Both branches are interpolated linearly in beta onto the union of their
    beta grids. Points within ``exclude_onset`` of either onset are skipped.
    Returns ``(distance, overlap)``; without overlap the distance is inf.
    """
    if not b1.points or not b2.points:
        return math.inf, False
    beta1, beta2 = b1.betas, b2.betas
    lo = max(beta1.min(), beta2.min())
    hi = min(beta1.max(), beta2.max())
    if lo > hi:
        return math.inf, False
    grid = np.union1d(beta1, beta2)
    grid = grid[(grid >= lo) & (grid <= hi)]
    if exclude_onset > 0:
        keep = (np.abs(grid - b1.beta_k) >= exclude_onset) & (np.abs(grid - b2.beta_k) >= exclude_onset)
        grid = grid[keep]
    if grid.size == 0:
        return math.inf, False
    f1 = _interp_fields(beta1, b1.fields, grid)
    f2 = _interp_fields(beta2, b2.fields, grid)
    dist = np.sqrt(b1.domain.h * np.sum((f1 - f2) ** 2, axis=1))
    return float(dist.min()), True


def _interp_fields(betas: np.ndarray, fields: np.ndarray, grid: np.ndarray) -> np.ndarray:
    order = np.argsort(betas)
    betas, fields = betas[order], fields[order]
    if betas.size == 1:
        return np.repeat(fields, grid.size, axis=0)
    idx = np.clip(np.searchsorted(betas, grid) - 1, 0, betas.size - 2)
    w = (grid - betas[idx]) / (betas[idx + 1] - betas[idx])
    return fields[idx] * (1 - w)[:, None] + fields[idx + 1] * w[:, None]


@dataclass
class CensusReport:
    beta: float
    j: int
    expected_min: int
    found_count: int
    solutions: list[Solution]
    proven: bool  # False for g < 0: the count is conjectured by symmetry

    @property
    def ok(self) -> bool:
        return self.found_count >= self.expected_min


def modes_needed(beta: float, p: PhysicalParams, d: Domain) -> int:
    """Smallest K with beta_K < beta for g > 0 (so no branch at beta is missed); 0 for g < 0."""
    if p.g < 0:
        return 0
    # discrete xi_k <= (k pi / L)^2, so this analytic bound is a safe start
    k = max(1, int(math.floor(math.sqrt(max(p.energy - beta, 0.0) / p.kappa) * d.length / math.pi)))
    while k <= d.n_interior and critical_beta(numeric_modes(d, k)[-1], p).beta_k >= beta:
        k += 1
    return k


def state_census(
    beta: float,
    K: int,
    p: PhysicalParams,
    d: Domain,
    s: NewtonSettings = NewtonSettings(),
    dedup_tol: float | None = None,
) -> CensusReport:
    """Count distinct nontrivial states at ``beta`` from the 2j pitchfork seeds.

    j is the number of modes k <= K whose branch exists at beta. For g > 0
    this requires beta_K < beta, otherwise higher branches would be missed.
    """
    modes = numeric_modes(d, K)
    if p.g > 0 and modes and critical_beta(modes[-1], p).beta_k >= beta:
        raise InvalidInputError(
            f"K={K} too small: beta_K={critical_beta(modes[-1], p).beta_k:.6g} is not below beta={beta}"
        )
    seeds, labels = [], []
    for m in modes:
        if branch_exists(m, beta, p):
            for sg in "+-":
                seeds.append(asymptotic_solution(m, beta, sg, p))
                labels.append((m.k, sg))
    j = len(seeds) // 2
    sols = deflated_search(seeds, beta, p, d, s, labels=labels, dedup_tol=dedup_tol)
    missing = set(labels) - {sol.label for sol in sols}
    if missing:
        # far from onset the one-mode seed can leave the basin; follow the
        # branch from its critical point instead
        seeds, labels = [sol.phi for sol in sols], [sol.label for sol in sols]
        for k, sg in sorted(missing):
            try:
                br = continue_branch(modes[k - 1], sg, beta, FALLBACK_STEP, p, d, s)
            except NumericalError:
                continue
            seeds.append(br.points[-1].solution.phi)
            labels.append((k, sg))
        sols = deflated_search(seeds, beta, p, d, s, labels=labels, dedup_tol=dedup_tol)
    return CensusReport(beta, j, 2 * j, len(sols), sols, proven=p.g > 0)


DIAGRAM_COLUMNS = ("k", "sign", "beta", "amplitude", "N", "H", "nodal_count", "residual_norm")


@dataclass
class Diagram:
    branches: list[Branch]
    errors: dict[str, str] = field(default_factory=dict)

    def rows(self) -> list[tuple]:
        out = []
        for b in self.branches:
            for pt in b.points:
                out.append((b.k, "+" if b.sign > 0 else "-", pt.beta, pt.amplitude, pt.N, pt.H,
                            pt.nodal_count, pt.solution.residual_norm))
        return out


def bifurcation_diagram(
    beta_min: float,
    beta_max: float,
    K: int,
    p: PhysicalParams,
    d: Domain,
    s: NewtonSettings = NewtonSettings(),
    step: float = 0.05,
) -> Diagram:
    """All 2K pitchfork branches restricted to [beta_min, beta_max], ordered by (k, +, -).

    A branch that fails is recorded in ``errors`` under its label and the
    others carry on.
    """
    if not beta_min < beta_max:
        raise InvalidInputError(f"need beta_min < beta_max, got [{beta_min}, {beta_max}]")
    branches, errors = [], {}
    beta_end = beta_min if p.g > 0 else beta_max
    for m in numeric_modes(d, K):
        # branch k meets the window iff it exists at the far end of it
        if not branch_exists(m, beta_end, p):
            continue
        for sg in (1, -1):
            try:
                b = continue_branch(m, sg, beta_end, step, p, d, s)
            except NumericalError as exc:
                errors[f"{m.k}{'+' if sg > 0 else '-'}"] = str(exc)
                continue
            b.points = [pt for pt in b.points if beta_min <= pt.beta <= beta_max]
            branches.append(b)
    return Diagram(branches, errors)
