"""
Leading-order pitchfork versus Newton
=====================================

Projecting onto e_k reduces the problem to ``gamma x + g alpha x^3 = 0``.
The nonzero roots give the leading-order branch amplitude
``sqrt(-gamma/(g alpha))``; Newton supplies the rest.
"""

import math

import numpy as np

from bec_qpt import (
    ReducedCubic,
    asymptotic_solution,
    continue_branch,
    critical_beta,
    gamma,
    newton_solve,
    numeric_modes,
    reduced_roots,
    residual,
    standard_config,
)

p, d = standard_config()
m1, m2 = numeric_modes(d, 2)

# %%
# Roots of the reduced cubic on either side of beta_1 (g > 0: only below).
for beta in (-0.9, -1.0, -1.1):
    c = ReducedCubic(gamma(m1, beta, p), p.g, m1.alpha)
    print(f"beta = {beta:5.2f}: roots {np.round(reduced_roots(c), 5)}")

# %%
# The leading-order profile leaves an O(delta^{3/2}) residual; Newton removes it.
beta = critical_beta(m1, p).beta_k - 0.03
seed = asymptotic_solution(m1, beta, "+", p)
print("seed residual:", np.abs(residual(seed, beta, p, d)).max())
sol = newton_solve(seed, beta, p, d)
print(f"Newton: {sol.newton_iters} iterations, residual {sol.residual_norm:.1e}")

# %%
# The relative gap between continued and leading-order amplitudes shrinks
# linearly with the distance to onset.
for m in (m1, m2):
    bk = critical_beta(m, p).beta_k
    for delta in (0.16, 0.08, 0.04, 0.02, 0.01):
        pt = continue_branch(m, "+", bk - delta, 0.05, p, d).points[-1]
        lead = math.sqrt(delta / (p.g * m.alpha))
        print(f"k={m.k} delta={delta:5.2f} amplitude={pt.amplitude:.6f} relative gap={pt.amplitude / lead - 1:+.2e}")
