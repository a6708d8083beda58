"""Families of runs over a grid of cosmological constants."""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .diagnostics import Classification, classify, count_nodes
from .integrator import IntegratorConfig, integrate
from .model import Params
from .seed import SeedOptions, initial_state

__all__ = ["SweepSpec", "SweepRow", "run_sweep", "rh_curve", "lambda_grid", "has_pushed_horizon",
           "FAILED"]

# terminal_reason recorded for rows whose run raised or timed out
FAILED = "failed"


@dataclass(frozen=True)
class SweepSpec:
    lambda_values: Sequence[float]
    base: Params = field(default_factory=Params)
    seed_opts: SeedOptions = field(default_factory=SeedOptions)
    integ: IntegratorConfig = field(default_factory=IntegratorConfig)
    workers: int = 1
    allow_empty: bool = False
    time_budget: float = 30.0

    def __post_init__(self):
        lams = tuple(float(x) for x in self.lambda_values)
        object.__setattr__(self, "lambda_values", lams)
        if not lams and not self.allow_empty:
            raise ValueError("lambda_values is empty (pass allow_empty=True to permit)")
        if any(b <= a for a, b in zip(lams, lams[1:])):
            raise ValueError("lambda_values must be strictly increasing")
        if self.workers < 1:
            raise ValueError("workers must be a positive integer")


@dataclass(frozen=True)
class SweepRow:
    lam: float
    r_h: float | None
    node_count: int
    terminal_reason: str
    classification: Classification
    wall_time: float
    error: str | None = None


def _run_row(lam: float, spec: SweepSpec) -> SweepRow:
    t0 = time.perf_counter()
    try:
        params = spec.base.with_lambda(lam)
        traj = integrate(initial_state(params, spec.seed_opts), params, spec.integ,
                         deadline=time.monotonic() + spec.time_budget)
        nodes = count_nodes(traj)
        label = classify(traj, nodes)
    except Exception as exc:  # recorded per row, never aborts the sweep
        return SweepRow(lam, None, 0, FAILED, Classification.INDETERMINATE,
                        time.perf_counter() - t0, f"{type(exc).__name__}: {exc}")
    term = traj.terminal
    return SweepRow(lam, term.r_h, nodes.count, term.reason.value, label,
                    time.perf_counter() - t0)


def run_sweep(spec: SweepSpec) -> list[SweepRow]:
    """Seed, integrate, count nodes and classify at every ``lambda``.

    Rows come back in grid order. Each row depends only on its own
    ``lambda`` so the output does not depend on ``workers`` (apart from
    ``wall_time``).
    """
    lams = spec.lambda_values
    if spec.workers == 1 or len(lams) <= 1:
        return [_run_row(lam, spec) for lam in lams]
    with ProcessPoolExecutor(max_workers=min(spec.workers, len(lams))) as pool:
        return list(pool.map(_run_row, lams, [spec] * len(lams)))


def rh_curve(rows: Sequence[SweepRow]) -> list[tuple[float, float]]:
    """``(lambda, r_h)`` for the rows that ended at a horizon, in lambda order."""
    return sorted((row.lam, row.r_h) for row in rows if row.r_h is not None)


def has_pushed_horizon(curve: Sequence[tuple[float, float]]) -> bool:
    """True if ``r_h`` increases between some pair of adjacent curve points."""
    rh = [p[1] for p in curve]
    return any(b > a for a, b in zip(rh, rh[1:]))


def lambda_grid(lo: float = 0.0, hi: float = 0.02, step: float = 2.5e-4) -> list[float]:
    """Inclusive uniform grid, free of accumulated rounding."""
    if step <= 0:
        raise ValueError("step must be positive")
    n = int(np.floor((hi - lo) / step + 1e-9))
    return [float(np.round(lo + k * step, 12)) for k in range(n + 1)]
