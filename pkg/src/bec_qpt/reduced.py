"""Leading-order Lyapunov-Schmidt theory of the pitchfork at each critical point.

Projecting the stationary equation onto the critical mode e_k gives the
scalar cubic ``gamma_k(beta) x + g alpha_k x^3 = 0``. Its nonzero roots seed
the Newton solver; the correction beyond leading order is left to Newton.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import GridFunction, PhysicalParams
from .errors import InvalidInputError, NoBranchError
from .spectral import Mode


@dataclass(frozen=True)
class ReducedCubic:
    gamma: float
    g: float
    alpha: float

    def __post_init__(self):
        if self.g == 0:
            raise InvalidInputError("g must be nonzero")
        if not self.alpha > 0:
            raise InvalidInputError(f"alpha must be positive, got {self.alpha}")

    def __call__(self, x):
        return self.gamma * x + self.g * self.alpha * np.asarray(x) ** 3


@dataclass(frozen=True)
class CriticalPoint:
    k: int
    beta_k: float


def gamma(mode: Mode, beta: float, p: PhysicalParams) -> float:
    """Eigenvalue of the linearization at phi=0 along e_k: kappa xi_k - hbar lambda + beta."""
    return p.kappa * mode.xi - p.energy + beta


def critical_beta(mode: Mode, p: PhysicalParams) -> CriticalPoint:
    return CriticalPoint(mode.k, p.energy - p.kappa * mode.xi)


def _require_nonlinear(p: PhysicalParams) -> None:
    if p.g == 0:
        raise InvalidInputError("pitchfork branches need g != 0")


def branch_exists(mode: Mode, beta: float, p: PhysicalParams) -> bool:
    """True when the pitchfork from beta_k has nontrivial members at this beta."""
    _require_nonlinear(p)
    return gamma(mode, beta, p) / p.g < 0


def reduced_roots(c: ReducedCubic) -> list[float]:
    """Real roots of the reduced cubic, ascending; 0 always, +-sqrt(-gamma/(g alpha)) when real."""
    ratio = -c.gamma / (c.g * c.alpha)
    if ratio > 0:
        r = math.sqrt(ratio)
        return [-r, 0.0, r]
    return [0.0]


def asymptotic_amplitude(mode: Mode, beta: float, p: PhysicalParams) -> float:
    """Positive root sqrt(-gamma_k / (g alpha_k)); raises NoBranchError if not real."""
    _require_nonlinear(p)
    gam = gamma(mode, beta, p)
    if gam == 0:
        return 0.0
    if gam / p.g > 0:
        raise NoBranchError(
            f"no branch of mode {mode.k} at beta={beta} for g={p.g} (gamma={gam:.6g})"
        )
    return math.sqrt(-gam / (p.g * mode.alpha))


def parse_sign(sign) -> int:
    """Accept +1/-1 or '+'/'-'."""
    if sign in (1, "+", "+1"):
        return 1
    if sign in (-1, "-", "-1"):
        return -1
    raise InvalidInputError(f"sign must be '+' or '-', got {sign!r}")


def asymptotic_solution(mode: Mode, beta: float, sign, p: PhysicalParams) -> GridFunction:
    """Leading-order branch member  sign * sqrt(-gamma/(g alpha)) * e_k."""
    return parse_sign(sign) * asymptotic_amplitude(mode, beta, p) * mode.shape
