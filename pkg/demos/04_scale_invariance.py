"""
The scale symmetry
==================

C -> gamma C, Phi -> sqrt(gamma) Phi, B -> beta B, W -> beta W maps solutions
to solutions. Integrating a scaled seed should therefore reproduce the scaled
profile, with the same nodes and the same horizon.
"""
import numpy as np

from dyonstring import Params, SeedOptions, count_nodes, initial_state, integrate
from dyonstring.diagnostics import scale_transform
from dyonstring.integrator import relative_discrepancy, shared_grid

p = Params(lam=0.015, a=1.0, b=0.35, r0=0.01)
base = integrate(initial_state(p), p)

for gamma, beta in [(4.0, 2.0), (0.25, 3.0), (10.0, 0.1)]:
    seed = initial_state(p, SeedOptions(scale_gamma=gamma, scale_beta=beta))
    run = integrate(seed, p)
    _, ya, yb = shared_grid(scale_transform(base, gamma, beta), run)
    print(f"gamma={gamma:<5g} beta={beta:<4g} discrepancy={relative_discrepancy(ya, yb):.1e} "
          f"r_h={run.terminal.r_h:.8f} nodes={count_nodes(run).count}")

###############################################################################
# Rescaling C(r0) alone is not a symmetry: it changes the effective shooting
# parameter and the solution with it.
other = integrate(initial_state(p, SeedOptions(c0=4.0)), p)
print("c0=4 only:", other.terminal.reason.value, count_nodes(other).count, "nodes",
      "r_h =", other.terminal.r_h)
print("base     :", base.terminal.reason.value, count_nodes(base).count, "nodes",
      "r_h =", np.round(base.terminal.r_h, 8))
