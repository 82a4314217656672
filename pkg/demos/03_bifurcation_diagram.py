"""
Bifurcation diagram
===================

Continue every pitchfork branch for k <= 3 from its critical point down to
beta = -10 and plot the projection onto e_k, the particle number, and a few
profiles. Requires matplotlib.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from bec_qpt import bifurcation_diagram, branch_separation, standard_config

p, d = standard_config()
diagram = bifurcation_diagram(-10.0, 0.0, 3, p, d)

# %%
# Each branch keeps its node count, and distinct branches never meet.
for b in diagram.branches:
    print(b.label, len(b.points), "points, nodes", set(b.nodal_counts.tolist()))
seps = [
    branch_separation(a, b, exclude_onset=0.01)[0]
    for i, a in enumerate(diagram.branches)
    for b in diagram.branches[i + 1:]
]
print("smallest separation between branches:", min(seps))

# %%
fig, axes = plt.subplots(1, 3, figsize=(13, 4))
for b in diagram.branches:
    style = "-" if b.sign > 0 else "--"
    axes[0].plot(b.betas, b.amplitudes, style, color=f"C{b.k - 1}", label=b.label)
    axes[1].plot(b.betas, [pt.N for pt in b.points], style, color=f"C{b.k - 1}")
for b in diagram.branches:
    if b.sign > 0:
        axes[2].plot(d.x, b.points[-1].solution.phi, color=f"C{b.k - 1}", label=f"k={b.k}, beta=-10")
axes[0].axhline(0, color="k", lw=0.8)
axes[0].set(xlabel="beta", ylabel="<phi, e_k>", title="branches")
axes[1].set(xlabel="beta", ylabel="N", title="particle number")
axes[2].set(xlabel="x", title="profiles")
axes[0].legend(ncol=3, fontsize=8)
axes[2].legend(fontsize=8)
fig.tight_layout()
out = Path(__file__).with_name("bifurcation_diagram.png")
fig.savefig(out, dpi=120)
print("saved", out)
