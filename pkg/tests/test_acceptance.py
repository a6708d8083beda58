"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run just this gate with ``pytest tests/test_acceptance.py -v`` or
``python tests/test_acceptance.py``. Criteria 7, 8 and 10 are known to fail
under the default normalisation; the failures are genuine results, not bugs
in the harness.
"""
import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dyonstring import (IntegratorConfig, Method, Params, SeedError, SeedOptions, TerminalReason,
                        classify, count_nodes, crosscheck, energy_density, eval_paper_c_constant,
                        initial_state, integrate, residual, self_convergence)
from dyonstring.diagnostics import scale_factors
from dyonstring.integrator import relative_discrepancy, shared_grid
from dyonstring.sweep import SweepSpec, lambda_grid, rh_curve, run_sweep
from dyonstring.validate import closed_form_c, closed_form_state
from conftest import NEGATIVE_LAMBDAS, POSITIVE_LAMBDAS, REF_SEED

REF_PARAMS = Params(**REF_SEED)
SCALINGS = ((4.0, 2.0), (0.25, 3.0), (10.0, 0.1))


def report(number, passed, detail):
    line = f"{'PASS' if passed else 'FAIL'} criterion {number:2d}: {detail}"
    capman = _CAPTURE.get("capsys")
    if capman is not None:
        with capman.disabled():
            print("\n" + line)
    else:
        print(line)
    return passed


_CAPTURE = {}


@pytest.fixture(autouse=True)
def _uncaptured(capsys):
    _CAPTURE["capsys"] = capsys
    yield
    _CAPTURE.pop("capsys", None)


def _reference(lam):
    return REF_PARAMS.with_lambda(lam)


def _run(params, opts=None, **cfg):
    return integrate(initial_state(params, opts), params, IntegratorConfig(**cfg))


def criterion_1():
    s = closed_form_state()
    t0 = time.perf_counter()
    traj = integrate(s, Params(lam=0.0, kappa=1.0, r0=s.r), IntegratorConfig(r_max=10.0))
    elapsed = time.perf_counter() - t0
    exact, _ = closed_form_c(traj.r, s.r)
    err = float(np.max(np.abs(traj.column("C") / exact - 1.0)))
    ok = err <= 1e-8 and elapsed < 1.0 and traj.terminal.reason is TerminalReason.REACHED_R_MAX
    return report(1, ok, f"closed-form C max rel err {err:.3g} (<= 1e-8), {elapsed:.3f} s (< 1 s)")


def criterion_2():
    p = Params(lam=0.0, a=0.0, b=0.0, r0=0.01)
    traj = _run(p, r_max=10.0)
    drift = float(np.max(np.abs(traj.y - traj.y[0])))
    ok = drift <= 1e-10 and traj.terminal.reason is TerminalReason.REACHED_R_MAX
    return report(2, ok, f"vacuum max drift {drift:.3g} (<= 1e-10)")


def criterion_3():
    worst, same = 0.0, True
    for lam in (-0.01, 0.001):
        p = _reference(lam)
        base = _run(p)
        nb = count_nodes(base)
        for gamma, beta in SCALINGS:
            scaled = _run(p, SeedOptions(scale_gamma=gamma, scale_beta=beta))
            _, yb, ys = shared_grid(base, scaled)
            worst = max(worst, relative_discrepancy(yb * scale_factors(gamma, beta), ys))
            ns = count_nodes(scaled)
            rh_same = (base.terminal.r_h is None) == (scaled.terminal.r_h is None)
            if base.terminal.r_h is not None:
                rh_same = math.isclose(base.terminal.r_h, scaled.terminal.r_h, rel_tol=1e-8)
            same &= (rh_same and nb.count == ns.count
                     and base.terminal.reason == scaled.terminal.reason
                     and classify(base, nb) == classify(scaled, ns))
    ok = worst <= 1e-8 and same
    return report(3, ok, f"worst scaled-profile rel discrepancy {worst:.3g} (<= 1e-8), "
                         f"events invariant: {same}")


def criterion_4():
    worst, nodes_ok = 0.0, True
    for lam in POSITIVE_LAMBDAS:
        p = _reference(lam)
        res = crosscheck(initial_state(p), p, threshold=1e-6, fraction=0.99)
        worst = max(worst, res.discrepancy)
        nodes_ok &= count_nodes(res.primary).count == count_nodes(res.alternate).count
    ok = worst <= 1e-6 and nodes_ok
    return report(4, ok, f"worst dual-method discrepancy {worst:.3g} (<= 1e-6), "
                         f"node counts equal: {nodes_ok}")


def criterion_5():
    s = closed_form_state()
    c_end, cp_end = closed_form_c(10.0, s.r)
    exact = np.array([0, 0, c_end, cp_end, 0, 0, 0, 0], dtype=float)
    rep = self_convergence(s, Params(lam=0.0, r0=s.r), (1e-6, 1e-8, 1e-10),
                           IntegratorConfig(r_max=10.0, h_max=10.0),
                           exact=exact, components=[2, 3])
    nominal = Method.PRIMARY.order
    ok = nominal >= 4 and not rep.degenerate and abs(rep.order - nominal) <= 0.5
    return report(5, ok, f"observed order {rep.order:.3f} vs nominal {nominal} (+-0.5)")


def criterion_6():
    t0 = time.perf_counter()
    rows = run_sweep(SweepSpec(POSITIVE_LAMBDAS, REF_PARAMS))
    elapsed = time.perf_counter() - t0
    by_lam = {r.lam: r for r in rows}
    trend = [by_lam[lam].node_count for lam in (0.0005, 0.001, 0.0025)]
    horizons = sum(r.terminal_reason == "horizon" for r in rows)
    ok = trend == sorted(trend) and horizons >= 1 and elapsed < 30.0
    return report(6, ok, f"nodes at 0.0005/0.001/0.0025 = {trend}, {horizons} horizon rows, "
                         f"grid {elapsed:.1f} s (< 30 s)")


def criterion_7():
    parts, ok = [], True
    for lam in NEGATIVE_LAMBDAS:
        traj = _run(_reference(lam), r_max=50.0)
        n = count_nodes(traj).count
        ok &= traj.terminal.reason is not TerminalReason.HORIZON and n <= 1
        parts.append(f"{lam:g}: {traj.terminal.reason.value}, {n} nodes")
    return report(7, ok, "; ".join(parts) + " (need no horizon, <= 1 node)")


def _diff_signs(curve):
    rh = [c[1] for c in curve]
    return tuple(int(np.sign(b - a)) for a, b in zip(rh, rh[1:]))


def criterion_8():
    grid = lambda_grid(0.0, 0.02, 2.5e-4)
    curves = {}
    for r0 in (0.01, 1e-8):
        rows = run_sweep(SweepSpec(grid, REF_PARAMS.__class__(**{**REF_SEED, "r0": r0})))
        curves[r0] = rh_curve(rows)
    coarse, fine = curves[0.01], curves[1e-8]
    pushed = any(s > 0 for s in _diff_signs(coarse))
    fine_monotone = len(set(s for s in _diff_signs(fine) if s)) <= 1
    primary = pushed and fine_monotone
    shared = sorted(set(c[0] for c in coarse) & set(c[0] for c in fine))
    prof = [_diff_signs([c for c in cur if c[0] in shared]) for cur in (coarse, fine)]
    downgraded = prof[0] != prof[1] or [c[0] for c in coarse] != [c[0] for c in fine]
    ok = primary or downgraded
    return report(8, ok, f"r0=0.01: {len(coarse)} horizons, increase present {pushed}; "
                         f"r0=1e-8: {len(fine)} horizons, monotone {fine_monotone}; "
                         f"monotonicity profiles differ {downgraded}")


def criterion_9():
    worst = 0.0
    for r0 in (1e-2, 1e-4, 1e-6):
        p = Params(lam=0.0, a=1.0, b=0.35, r0=r0)
        s = initial_state(p)
        limit = p.a ** 2 + 2 * p.b ** 2 * s.C
        worst = max(worst, abs(energy_density(s, p) / limit - 1.0))
    return report(9, worst <= 0.01, f"worst seed T_tt deviation from series limit {worst:.3g} "
                                    f"(<= 0.01)")


def _acceptance_runs():
    s = closed_form_state()
    yield "closed-form", s, Params(lam=0.0, r0=s.r), dict(r_max=10.0)
    vac = Params(lam=0.0, a=0.0, b=0.0, r0=0.01)
    yield "vacuum", initial_state(vac), vac, dict(r_max=10.0)
    for lam in sorted(set(NEGATIVE_LAMBDAS) | {0.001} | set(POSITIVE_LAMBDAS)):
        p = _reference(lam)
        yield f"lambda={lam:g}", initial_state(p), p, {}


def criterion_10():
    worst, parts = math.inf, []
    for name, s, p, cfg in _acceptance_runs():
        coarse = integrate(s, p, IntegratorConfig(**cfg))
        if coarse.terminal.reason is TerminalReason.HORIZON:
            continue
        fine = integrate(s, p, IntegratorConfig(dense_dr=coarse.dense_dr / 2, **cfg))
        rc, rf = residual(coarse, p), residual(fine, p)
        ratio = math.inf if rc == rf == 0.0 else (rc / rf if rf > 0 else 0.0)
        worst = min(worst, ratio)
        parts.append(f"{name} {ratio:.3g}")
    return report(10, worst >= 3.5, f"residual ratios on halving dense_dr (>= 3.5): "
                                    + ", ".join(parts))


def criterion_11():
    value = eval_paper_c_constant(1.0, 0.35)
    raised = False
    try:
        initial_state(REF_PARAMS, SeedOptions(use_paper_c_formula=True))
    except SeedError:
        raised = True
    ok = abs(value + 3.511) <= 0.001 and raised
    return report(11, ok, f"closed-form C constant {value:.6f} (-3.511 +- 0.001), "
                          f"seed error raised {raised}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11]


@pytest.mark.parametrize("check", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 12)])
def test_criterion(check):
    assert check()


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    print(f"{sum(results)}/{len(results)} criteria pass")
    sys.exit(0 if all(results) else 1)
