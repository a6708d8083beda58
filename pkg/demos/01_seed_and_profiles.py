"""
Seeding a dyon and following it outward
=======================================

The core series fixes all eight fields at a small radius r0 from the two
shooting numbers a and b. From there one adaptive integration carries the
profile out to r_max, or stops at a horizon.
"""
from pathlib import Path

import numpy as np

from dyonstring import Params, count_nodes, classify, initial_state, integrate
from dyonstring.diagnostics import energy_density_profile
from dyonstring.svgplot import write_panels

out = Path(__file__).with_suffix("")
out.mkdir(exist_ok=True)

###############################################################################
# The seed. With C(r0) = 1 the energy density at the core is close to
# a^2 + 2 b^2.
params = Params(lam=0.001, a=1.0, b=0.35, r0=0.01)
seed = initial_state(params)
print(seed)

###############################################################################
# Integrate. Samples land on a uniform grid r0 + k * dense_dr.
traj = integrate(seed, params)
print(traj.terminal, len(traj), "samples")

###############################################################################
# W winds around zero many times before r = 50.
nodes = count_nodes(traj)
print(nodes.count, "nodes, first few at", np.round(nodes.radii[:4], 3))
print("classification:", classify(traj, nodes).value)

###############################################################################
# Profiles and the energy density, written as a plain SVG.
t_tt = energy_density_profile(traj, params)
print("T_tt at the core:", t_tt[0])
write_panels(out / "profiles.svg", [
    ("B", traj.r, traj.column("B")),
    ("C", traj.r, traj.column("C")),
    ("W", traj.r, traj.column("W")),
    ("Phi", traj.r, traj.column("Phi")),
    ("T_tt", traj.r, t_tt),
])
print("wrote", out / "profiles.svg")
