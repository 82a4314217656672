"""Model constants, the uniform Dirichlet grid and quadrature helpers.

Grid functions are plain 1-D float arrays holding the interior samples of a
function on ``[0, L]``; the two boundary values are zero and never stored.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import InvalidInputError

GridFunction = np.ndarray


@dataclass(frozen=True)
class PhysicalParams:
    """Constants of the stationary GP model.

    ``lam`` is the frequency lambda = E / hbar (``lambda`` is reserved).
    The model needs g != 0; g = 0 is allowed as a linear reference case.
    """

    hbar: float = 1.0
    mass: float = 0.25
    g: float = 1.0
    lam: float = 0.0

    def __post_init__(self):
        if not self.hbar > 0:
            raise InvalidInputError(f"hbar must be positive, got {self.hbar}")
        if not self.mass > 0:
            raise InvalidInputError(f"mass must be positive, got {self.mass}")
        # g = 0 is the linear limit; branch analysis rejects it, the rest works
        if not np.isfinite(self.g):
            raise InvalidInputError(f"g must be finite, got {self.g}")
        if not np.isfinite(self.lam):
            raise InvalidInputError(f"lam must be finite, got {self.lam}")

    @property
    def kappa(self) -> float:
        """Kinetic coefficient hbar**2 / (4 m)."""
        return self.hbar**2 / (4.0 * self.mass)

    @property
    def energy(self) -> float:
        """E = hbar * lambda."""
        return self.hbar * self.lam


@dataclass(frozen=True)
class Domain:
    """The interval [0, L] with ``n_interior`` equally spaced interior nodes."""

    length: float = np.pi
    n_interior: int = 1000

    def __post_init__(self):
        if not self.length > 0:
            raise InvalidInputError(f"length must be positive, got {self.length}")
        if int(self.n_interior) != self.n_interior or self.n_interior < 3:
            raise InvalidInputError(f"n_interior must be an integer >= 3, got {self.n_interior}")
        object.__setattr__(self, "n_interior", int(self.n_interior))

    @property
    def h(self) -> float:
        return self.length / (self.n_interior + 1)

    @cached_property
    def x(self) -> np.ndarray:
        """Interior node coordinates x_1 .. x_n."""
        return self.h * np.arange(1, self.n_interior + 1)

    @property
    def x_full(self) -> np.ndarray:
        """All nodes including the endpoints 0 and L."""
        return self.h * np.arange(self.n_interior + 2)

    def zeros(self) -> GridFunction:
        return np.zeros(self.n_interior)

    def sample(self, f) -> GridFunction:
        """Sample a callable on the interior nodes."""
        return np.asarray(f(self.x), dtype=float)

    def check(self, *fields: np.ndarray) -> None:
        for f in fields:
            if np.shape(f) != (self.n_interior,):
                raise InvalidInputError(
                    f"grid function has shape {np.shape(f)}, domain expects ({self.n_interior},)"
                )


def standard_config(n_interior: int = 1000) -> tuple[PhysicalParams, Domain]:
    """hbar=1, m=1/4 (kappa=1), g=1, lambda=0 on [0, pi]; critical points are -k**2."""
    return PhysicalParams(), Domain(np.pi, n_interior)


def l2_inner(f: GridFunction, g: GridFunction, d: Domain) -> float:
    """Trapezoid approximation of the integral of f*g over [0, L]."""
    d.check(f, g)
    return float(d.h * np.dot(f, g))


def particle_number(phi: GridFunction, d: Domain) -> float:
    """N = integral of |phi|^2 (works for complex fields too)."""
    d.check(phi)
    return float(d.h * np.sum(np.abs(phi) ** 2))


def edge_gradient(phi: GridFunction, d: Domain) -> np.ndarray:
    """Differences (phi_{i+1} - phi_i)/h on all n+1 cell edges, zero ghosts at both ends.

    Each difference is a centered approximation of phi' at the cell midpoint.
    """
    padded = np.concatenate(([0.0], phi, [0.0]))
    return np.diff(padded) / d.h


def hamiltonian_energy(phi: GridFunction, beta: float, p: PhysicalParams, d: Domain) -> float:
    """Discrete energy  int [ kappa |phi'|^2 + beta |phi|^2 + g/2 |phi|^4 ] dx.

    Accepts real or complex samples. The gradient term is the sum over cell
    edges, so its variation reproduces the three-point Laplacian used by the
    residual and the time stepper.
    """
    d.check(phi)
    grad = edge_gradient(phi, d)
    dens = np.abs(phi) ** 2
    kinetic = p.kappa * d.h * np.sum(np.abs(grad) ** 2)
    potential = d.h * np.sum(beta * dens + 0.5 * p.g * dens**2)
    return float(kinetic + potential)
