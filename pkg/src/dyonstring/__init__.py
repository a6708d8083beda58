"""Cylindrically symmetric Einstein-Yang-Mills dyons with a cosmological constant.

Typical use::

    from dyonstring import Params, initial_state, integrate, count_nodes

    params = Params(lam=0.0025, a=1.0, b=0.35, r0=0.01)
    traj = integrate(initial_state(params), params)
    count_nodes(traj).count
"""
from .diagnostics import (Classification, NodeReport, classify, count_nodes, energy_density,
                          energy_density_profile, scale_state, scale_transform)
from .integrator import (ConvergenceReport, Crosscheck, IntegrationError, IntegratorConfig,
                         Method, TerminalReason, TerminalRecord, Trajectory, crosscheck,
                         integrate, self_convergence)
from .model import (DomainError, Derivatives, FieldState, Params, residual, residual_by_equation,
                    rhs)
from .seed import SeedError, SeedOptions, eval_paper_c_constant, initial_state
from .sweep import SweepRow, SweepSpec, rh_curve, run_sweep

__version__ = "0.1.0"
