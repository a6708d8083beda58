"""
Where the horizon appears
=========================

Sweeping the cosmological constant shows the onset of a horizon and how its
radius moves. Each row is independent, so the sweep can be split across
processes without changing the table.
"""
from pathlib import Path

from dyonstring import Params
from dyonstring.svgplot import write_panels
from dyonstring.sweep import SweepSpec, has_pushed_horizon, lambda_grid, rh_curve, run_sweep

out = Path(__file__).with_suffix("")
out.mkdir(exist_ok=True)

###############################################################################
# A coarse grid keeps the demo quick; the CLI default is 81 points.
grid = lambda_grid(0.0, 0.02, 1e-3)
rows = run_sweep(SweepSpec(grid, Params(a=1.0, b=0.35, r0=0.01)))
for row in rows:
    rh = "-" if row.r_h is None else f"{row.r_h:.4f}"
    print(f"{row.lam:<7g} {row.terminal_reason:<14} r_h={rh:<9} nodes={row.node_count}")

###############################################################################
# Under the C(r0) = 1 normalisation the horizon only moves inward as lambda
# grows.
curve = rh_curve(rows)
print("any increase in r_h:", has_pushed_horizon(curve))
write_panels(out / "rh_curve.svg", [("r_h", [c[0] for c in curve], [c[1] for c in curve])],
             columns=1, xlabel="lambda")
