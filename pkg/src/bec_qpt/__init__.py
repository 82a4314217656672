"""Bifurcation structure of the stationary Gross-Pitaevskii equation on [0, L].

Critical points of the control parameter beta, pitchfork branches from the
reduced cubic, Newton continuation, state counting, and Crank-Nicolson
dynamics with conservation checks.
"""

__version__ = "0.1.0"

from .core import (
    Domain,
    PhysicalParams,
    hamiltonian_energy,
    l2_inner,
    particle_number,
    standard_config,
)
from .spectral import Mode, analytic_modes, numeric_modes
from .reduced import (
    CriticalPoint,
    ReducedCubic,
    asymptotic_solution,
    critical_beta,
    gamma,
    reduced_roots,
)
from .solver import NewtonSettings, Solution, deflated_search, jacobian, newton_solve, residual, residual_tolerance
from .continuation import (
    Branch,
    bifurcation_diagram,
    branch_separation,
    continue_branch,
    nodal_count,
    state_census,
)
from .dynamics import EvolutionSettings, Trajectory, conservation_report, evolve
