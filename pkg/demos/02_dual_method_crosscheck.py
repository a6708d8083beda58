"""
Two embedded pairs, one answer
==============================

Every run can be repeated with a second Runge-Kutta pair of a different
order. Agreement on the shared dense grid is a cheap guard against a
tolerance that is too loose for the problem.
"""
from dyonstring import Params, count_nodes, crosscheck, initial_state

lambdas = [0.0, 0.001, 0.0025, 0.0075, 0.015]

###############################################################################
# The comparison stops at 99% of the shorter run, since near a horizon both
# solutions approach C = 0 and relative errors grow.
for lam in lambdas:
    p = Params(lam=lam, a=1.0, b=0.35, r0=0.01)
    res = crosscheck(initial_state(p), p)
    n1 = count_nodes(res.primary).count
    n2 = count_nodes(res.alternate).count
    print(f"lambda={lam:<7g} discrepancy={res.discrepancy:.2e} "
          f"nodes={n1}/{n2} reliable={res.reliable}")

###############################################################################
# The lower-order pair needs more work for the same tolerance.
print(res.primary.stats)
print(res.alternate.stats)
