"""Dirichlet Laplacian eigenpairs on [0, L], analytic and from the 3-point stencil."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .core import Domain, GridFunction
from .errors import EigensolverError, InvalidInputError


@dataclass(frozen=True)
class Mode:
    """One eigenpair of -Laplacian: index k, eigenvalue xi, sampled shape e_k and alpha = int e_k^4."""

    k: int
    xi: float
    shape: GridFunction
    alpha: float


def quartic_overlap(shape: GridFunction, d: Domain) -> float:
    return float(d.h * np.sum(shape**4))


def _normalize(v: np.ndarray, d: Domain) -> np.ndarray:
    v = v / np.sqrt(d.h * np.dot(v, v))
    if v[0] < 0:
        v = -v
    return v


def analytic_modes(d: Domain, K: int) -> list[Mode]:
    """Closed-form modes xi_k = (k pi / L)^2, e_k = sqrt(2/L) sin(k pi x / L)."""
    if K < 0:
        raise InvalidInputError(f"K must be >= 0, got {K}")
    modes = []
    for k in range(1, K + 1):
        wave = k * np.pi / d.length
        shape = np.sqrt(2.0 / d.length) * np.sin(wave * d.x)
        modes.append(Mode(k, wave**2, shape, quartic_overlap(shape, d)))
    return modes


def laplacian_bands(d: Domain) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal and off-diagonal of the discrete -Laplacian (Dirichlet)."""
    n = d.n_interior
    inv_h2 = 1.0 / d.h**2
    return np.full(n, 2.0 * inv_h2), np.full(n - 1, -inv_h2)


def discrete_eigenvalue(d: Domain, k: int) -> float:
    """(2/h^2)(1 - cos(k pi h / L)), the exact eigenvalue of the 3-point stencil."""
    return 2.0 / d.h**2 * (1.0 - np.cos(k * np.pi * d.h / d.length))


def numeric_modes(d: Domain, K: int) -> list[Mode]:
    """Lowest K eigenpairs of the tridiagonal -Laplacian, ascending, positive first sample."""
    if K < 0:
        raise InvalidInputError(f"K must be >= 0, got {K}")
    if K > d.n_interior:
        raise InvalidInputError(
            f"K exceeds grid resolution: K={K} > n_interior={d.n_interior}"
        )
    if K == 0:
        return []
    diag, off = laplacian_bands(d)
    try:
        w, v = eigh_tridiagonal(diag, off, select="i", select_range=(0, K - 1))
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise EigensolverError(f"tridiagonal eigensolver failed for n={d.n_interior}, K={K}: {exc}") from exc
    if not np.all(np.isfinite(w)):
        raise EigensolverError(f"non-finite eigenvalues returned: {w}")
    order = np.argsort(w)
    modes = []
    for k, idx in enumerate(order, start=1):
        shape = _normalize(v[:, idx], d)
        modes.append(Mode(k, float(w[idx]), shape, quartic_overlap(shape, d)))
    return modes


def mode(d: Domain, k: int, numeric: bool = True) -> Mode:
    """Single mode k (1-based)."""
    if k < 1:
        raise InvalidInputError(f"mode index must be >= 1, got {k}")
    return (numeric_modes if numeric else analytic_modes)(d, k)[k - 1]
