"""
Counting states between critical points
=======================================

Between beta_{j+1} and beta_j there are at least 2j nontrivial states.
Multi-start Newton from the 2j leading-order seeds finds them.
"""

from bec_qpt import PhysicalParams, l2_inner, numeric_modes, standard_config, state_census
from bec_qpt.continuation import modes_needed

p, d = standard_config()
modes = numeric_modes(d, 6)

for beta in (-0.5, -1.5, -4.5, -9.5, -20.0):
    report = state_census(beta, modes_needed(beta, p, d), p, d)
    amps = [round(l2_inner(s.phi, modes[s.label[0] - 1].shape, d), 3) for s in report.solutions]
    print(f"beta={beta:6.1f}  j={report.j}  found {report.found_count} >= {report.expected_min}: {report.ok}  {amps}")

# %%
# For attractive interactions the branches open to the other side. The count
# is reported, but only as a conjecture by symmetry.
att = PhysicalParams(g=-1.0)
r = state_census(-2.0, 3, att, d)
print("g=-1, beta=-2:", r.found_count, "states, proven:", r.proven)
