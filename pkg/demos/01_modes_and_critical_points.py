"""
Laplacian modes and quantum critical points
===========================================

The linearization of the stationary GP equation at phi = 0 is
``kappa (-Laplacian) + beta - hbar*lambda``. Its k-th eigenvalue vanishes at
``beta_k = hbar*lambda - kappa*xi_k``, where the pitchforks are born.
"""

import numpy as np

from bec_qpt import PhysicalParams, analytic_modes, critical_beta, numeric_modes, standard_config

# %%
# With hbar = 1 and m = 1/4 the kinetic coefficient is 1, so on [0, pi]
# the critical points are simply -k^2.
p, d = standard_config()
print(f"kappa = {p.kappa}, L = {d.length:.6f}, n = {d.n_interior}")

analytic = analytic_modes(d, 6)
numeric = numeric_modes(d, 6)
print(f"{'k':>2} {'xi exact':>10} {'xi grid':>14} {'alpha':>10} {'beta_k':>8}")
for a, m in zip(analytic, numeric):
    print(f"{a.k:>2} {a.xi:>10.4f} {m.xi:>14.8f} {m.alpha:>10.6f} {critical_beta(a, p).beta_k:>8.2f}")

# %%
# The quartic overlap alpha_k = int e_k^4 is 3/(2L) for every k on an interval.
print("3/(2L) =", 3 / (2 * d.length))

# %%
# A positive frequency lambda shifts all critical points up by hbar*lambda.
shifted = PhysicalParams(lam=5.0)
print([critical_beta(a, shifted).beta_k for a in analytic[:4]])

# %%
# Grid error of the discrete eigenvalues is second order in h.
for n in (250, 500, 1000):
    from bec_qpt import Domain

    dd = Domain(np.pi, n)
    print(n, abs(numeric_modes(dd, 3)[-1].xi - 9.0))
