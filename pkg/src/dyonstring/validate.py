"""Built-in validation battery: each check is its own oracle."""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, replace

import numpy as np

from .diagnostics import classify, count_nodes, scale_factors
from .integrator import (IntegratorConfig, Method, TerminalReason, crosscheck, integrate,
                         relative_discrepancy, self_convergence, shared_grid)
from .model import FieldState, Params
from .seed import SeedOptions, initial_state

__all__ = ["CheckResult", "closed_form_state", "closed_form_c", "run_battery",
           "check_closed_form", "check_scale_invariance", "check_self_convergence",
           "check_crosscheck"]

REFERENCE_SEED = dict(a=1.0, b=0.35, r0=0.01, kappa=1.0)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    value: float
    threshold: float
    detail: str = ""
    seconds: float = 0.0

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return (f"{tag} {self.name} value={self.value:.6g} threshold={self.threshold:.6g} "
                f"time={self.seconds:.2f}s {self.detail}").rstrip()

    def as_dict(self) -> dict:
        d = asdict(self)
        if not math.isfinite(d["value"]):
            d["value"] = None
        return d


def closed_form_state(r0: float = 0.01) -> FieldState:
    """Gauge-free state with ``C = C' = 1`` where the C equation decouples."""
    return FieldState(r0, 1.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0)


def closed_form_c(r, r0: float = 0.01):
    """``C(r) = (1 + 3/4 (r - r0))^(4/3)`` and ``C'(r)``, solving ``C'' = C'^2 / (4 C)``."""
    u = 1.0 + 0.75 * (np.asarray(r, dtype=float) - r0)
    return u ** (4.0 / 3.0), np.cbrt(u)


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        return replace(res, seconds=time.perf_counter() - t0)
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@_timed
def check_closed_form(rhs=None, method: Method = Method.PRIMARY, r_max: float = 10.0,
                      threshold: float = 1e-8) -> CheckResult:
    """Integrated C against the closed form on ``[r0, r_max]``."""
    s = closed_form_state()
    traj = integrate(s, Params(lam=0.0, kappa=1.0, r0=s.r),
                     IntegratorConfig(method=method, r_max=r_max), rhs=rhs)
    exact, _ = closed_form_c(traj.r, s.r)
    err = float(np.max(np.abs(traj.column("C") / exact - 1.0)))
    ok = err <= threshold and traj.terminal.reason is TerminalReason.REACHED_R_MAX
    return CheckResult(f"closed_form_metric[{method.value}]", ok, err, threshold,
                       f"reason={traj.terminal.reason.value}")


@_timed
def check_scale_invariance(gamma: float = 4.0, beta: float = 2.0, lam: float = 0.001,
                           rhs=None, threshold: float = 1e-8) -> CheckResult:
    """Scaled seed integrates to the scaled profile with identical events."""
    params = Params(lam=lam, **REFERENCE_SEED)
    base = integrate(initial_state(params), params, rhs=rhs)
    scaled = integrate(initial_state(params, SeedOptions(scale_gamma=gamma, scale_beta=beta)),
                       params, rhs=rhs)
    _, yb, ys = shared_grid(base, scaled)
    err = relative_discrepancy(yb * scale_factors(gamma, beta), ys)
    nb, ns = count_nodes(base), count_nodes(scaled)
    same = (base.terminal.reason == scaled.terminal.reason and nb.count == ns.count
            and classify(base, nb) == classify(scaled, ns))
    return CheckResult(f"scale_invariance[gamma={gamma:g},beta={beta:g},lambda={lam:g}]",
                       bool(err <= threshold and same), err, threshold,
                       f"nodes={nb.count}/{ns.count} reason={scaled.terminal.reason.value}")


@_timed
def check_self_convergence(rhs=None, tolerances=(1e-6, 1e-8, 1e-10),
                           band: float = 0.5) -> CheckResult:
    """Observed order of the primary method on the closed-form problem."""
    s = closed_form_state()
    r_max = 10.0
    cfg = IntegratorConfig(r_max=r_max, h_max=r_max)
    c_end, cp_end = closed_form_c(r_max, s.r)
    exact = np.array([0, 0, c_end, cp_end, 0, 0, 0, 0], dtype=float)
    rep = self_convergence(s, Params(lam=0.0, r0=s.r), tolerances, cfg,
                           exact=exact, components=[2, 3], rhs=rhs)
    nominal = Method.PRIMARY.order
    ok = (not rep.degenerate) and abs(rep.order - nominal) <= band
    return CheckResult("self_convergence", ok, rep.order, band,
                       f"nominal={nominal} mean_steps={[round(h, 4) for h in rep.mean_steps]}")


@_timed
def check_crosscheck(lam: float = 0.0025, rhs=None, threshold: float = 1e-6) -> CheckResult:
    """Both embedded pairs agree on the reference seed."""
    params = Params(lam=lam, **REFERENCE_SEED)
    res = crosscheck(initial_state(params), params, threshold=threshold, rhs=rhs)
    n1, n2 = count_nodes(res.primary).count, count_nodes(res.alternate).count
    return CheckResult(f"dual_method_crosscheck[lambda={lam:g}]",
                       bool(res.reliable and n1 == n2), res.discrepancy, threshold,
                       f"nodes={n1}/{n2}")


def run_battery(rhs=None) -> list[CheckResult]:
    """Run every check; ``rhs`` replaces the field equations (sensitivity fixture)."""
    return [
        check_closed_form(rhs=rhs),
        check_scale_invariance(rhs=rhs),
        check_self_convergence(rhs=rhs),
        check_crosscheck(rhs=rhs),
    ]
