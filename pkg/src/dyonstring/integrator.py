"""Adaptive integration of the field equations outward from the core.

Two embedded explicit pairs are available so that every run can be checked
against an independent discretisation:

* ``primary_high_order``: Dormand-Prince 5(4), fifth order, with its native
  fourth-order continuous extension for dense output.
* ``crosscheck_alt_order``: Fehlberg 4(5) propagating the fourth-order
  solution, with cubic Hermite dense output.

Integration stops at the first of: reaching ``r_max``, the metric function
``C`` falling to ``horizon_epsilon * C(r0)`` (a cosmological horizon), a
component exceeding ``blowup_limit``, or the step size dropping below
``h_min``.
"""
from __future__ import annotations

import enum
import math
import time
from dataclasses import dataclass, field, replace
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .model import DomainError, FieldState, Params, STATE_FIELDS, rhs_vector
from .tableaus import DORMAND_PRINCE, FEHLBERG, Tableau

__all__ = [
    "Method",
    "TerminalReason",
    "IntegratorConfig",
    "TerminalRecord",
    "IntegrationStats",
    "Trajectory",
    "IntegrationError",
    "IntegrationTimeout",
    "integrate",
    "crosscheck",
    "Crosscheck",
    "relative_discrepancy",
    "self_convergence",
    "ConvergenceReport",
]

SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 5.0
# horizon radius is bracketed to this width
HORIZON_BRACKET = 1e-10


class Method(str, enum.Enum):
    PRIMARY = "primary_high_order"
    CROSSCHECK = "crosscheck_alt_order"

    @property
    def tableau(self) -> Tableau:
        return DORMAND_PRINCE if self is Method.PRIMARY else FEHLBERG

    @property
    def order(self) -> int:
        return self.tableau.order


class TerminalReason(str, enum.Enum):
    REACHED_R_MAX = "reached_r_max"
    HORIZON = "horizon"
    BLOWUP = "blowup"
    STEP_UNDERFLOW = "step_underflow"


class IntegrationError(RuntimeError):
    """The integration could not be started."""


class IntegrationTimeout(RuntimeError):
    """The wall-clock deadline passed during integration."""


@dataclass(frozen=True)
class IntegratorConfig:
    method: Method = Method.PRIMARY
    abs_tol: float = 1e-12
    rel_tol: float = 1e-12
    h_init: float = 1e-6
    h_min: float = 1e-14
    h_max: float = 0.1
    r_max: float = 50.0
    blowup_limit: float = 1e12
    horizon_epsilon: float = 1e-8
    dense_dr: float = 1e-3

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        if not 0 < self.h_min < self.h_init <= self.h_max:
            raise ValueError("need 0 < h_min < h_init <= h_max")
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")
        if not self.r_max > 0:
            raise ValueError("r_max must be positive")
        if not 0 < self.horizon_epsilon < 1:
            raise ValueError("horizon_epsilon must lie in (0, 1)")
        if not self.dense_dr > 0:
            raise ValueError("dense_dr must be positive")
        if not self.blowup_limit > 0:
            raise ValueError("blowup_limit must be positive")


@dataclass(frozen=True)
class TerminalRecord:
    reason: TerminalReason
    r_end: float
    r_h: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "reason", TerminalReason(self.reason))
        if (self.reason is TerminalReason.HORIZON) != (self.r_h is not None):
            raise ValueError("r_h is present exactly when the reason is horizon")


@dataclass(frozen=True)
class IntegrationStats:
    method: Method
    accepted: int = 0
    rejected: int = 0
    rhs_evals: int = 0
    # sums of accepted step sizes and their squares
    h_sum: float = 0.0
    h2_sum: float = 0.0

    @property
    def mean_step(self) -> float:
        """Radius-weighted mean step size ``sum(h^2) / sum(h)``.

        Barely affected by the short start-up ramp from ``h_init``.
        """
        return self.h2_sum / self.h_sum if self.h_sum > 0 else math.nan


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Dense samples of one integration.

    ``r`` has shape ``(n,)`` and ``y`` shape ``(n, 8)`` in
    :data:`~dyonstring.model.STATE_FIELDS` order. All samples but possibly
    the last lie on the grid ``r0 + k * dense_dr``; the last sample is the
    exact terminal point. Both arrays are read-only.
    """

    r: np.ndarray
    y: np.ndarray
    terminal: TerminalRecord
    dense_dr: float
    stats: IntegrationStats = field(default=None, compare=False)

    def __post_init__(self):
        r = np.array(self.r, dtype=float)
        y = np.array(self.y, dtype=float).reshape(len(r), 8)
        r.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "y", y)

    def __len__(self) -> int:
        return len(self.r)

    def __getitem__(self, i: int) -> FieldState:
        return FieldState.from_array(self.r[i], self.y[i])

    @property
    def samples(self) -> list[FieldState]:
        return [self[i] for i in range(len(self))]

    def column(self, name: str) -> np.ndarray:
        """Samples of one field, e.g. ``traj.column("W")``."""
        return self.y[:, STATE_FIELDS.index(name)]

    @property
    def r0(self) -> float:
        return float(self.r[0])

    def grid(self) -> tuple[np.ndarray, np.ndarray]:
        """The uniformly spaced part of the samples (terminal point dropped if off-grid)."""
        if len(self.r) >= 2:
            k = (self.r[-1] - self.r[0]) / self.dense_dr
            if abs(k - round(k)) > 1e-6:
                return self.r[:-1], self.y[:-1]
        return self.r, self.y


class _Interpolant:
    """Continuous extension over one accepted step."""

    def __init__(self, tab: Tableau, r, h, y, y_new, K, f_new):
        self.r, self.h, self.y = r, h, y
        if tab.dense is not None:
            self.Q = K.T @ tab.dense
            self.hermite = None
        else:
            self.Q = None
            self.hermite = (y, y_new, K[0], f_new)

    def __call__(self, theta) -> np.ndarray:
        """States at ``r + theta * h``; returns shape ``(len(theta), 8)``."""
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        h = self.h
        if self.Q is not None:
            powers = np.cumprod(np.tile(theta[:, None], (1, self.Q.shape[1])), axis=1)
            return self.y + h * powers @ self.Q.T
        y0, y1, f0, f1 = self.hermite
        t2 = theta * theta
        t3 = t2 * theta
        h00 = 2 * t3 - 3 * t2 + 1
        h10 = t3 - 2 * t2 + theta
        h01 = -2 * t3 + 3 * t2
        h11 = t3 - t2
        return (h00[:, None] * y0 + (h * h10)[:, None] * f0
                + h01[:, None] * y1 + (h * h11)[:, None] * f1)


def _refine_horizon(interp: _Interpolant, threshold: float) -> float:
    """Bisect ``C(theta) = threshold`` on the step; returns theta with C <= threshold."""
    lo, hi = 0.0, 1.0
    width = HORIZON_BRACKET / 2 / interp.h
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if interp(mid)[0, 2] > threshold:
            lo = mid
        else:
            hi = mid
    return hi


def integrate(initial: FieldState, params: Params,
              config: IntegratorConfig | None = None, *,
              rhs: Callable[[float, Sequence[float], Params], Sequence[float]] | None = None,
              deadline: float | None = None) -> Trajectory:
    """Integrate from ``initial.r`` outward.

    Parameters
    ----------
    initial : FieldState
        Starting point, normally from :func:`dyonstring.seed.initial_state`.
    params : Params
        Physical constants.
    config : IntegratorConfig, optional
        Method, tolerances and stopping rules.
    rhs : callable, optional
        Replacement right-hand side ``rhs(r, y, params) -> 8 floats``. Meant
        for validation fixtures; defaults to the field equations.
    deadline : float, optional
        ``time.monotonic()`` value after which :class:`IntegrationTimeout`
        is raised.

    Returns
    -------
    Trajectory

    Raises
    ------
    IntegrationError
        If the initial state already satisfies the horizon or blowup
        condition, or lies outside the regular chart.
    """
    cfg = config or IntegratorConfig()
    f = rhs or rhs_vector
    tab = cfg.method.tableau
    s = tab.stages
    A, c, b, e = tab.A, tab.c, tab.b, tab.e
    expo = -1.0 / (tab.err_order + 1)

    r = float(initial.r)
    y = initial.as_array()
    r0 = r
    if not np.all(np.isfinite(y)):
        raise IntegrationError("initial state is not finite")
    if not r < cfg.r_max:
        raise IntegrationError(f"r0={r} is not below r_max={cfg.r_max}")
    c_start = y[2]
    if not c_start > 0:
        raise IntegrationError(f"initial C={c_start} is already at or past a horizon")
    threshold = cfg.horizon_epsilon * c_start
    if np.max(np.abs(y)) > cfg.blowup_limit:
        raise IntegrationError("initial state already exceeds blowup_limit")
    try:
        f0 = np.array(f(r, y, params), dtype=float)
    except DomainError as exc:
        raise IntegrationError(str(exc)) from exc

    dr = cfg.dense_dr
    out_r = [np.array([r])]
    out_y = [y[None, :].copy()]
    next_k = 1

    K = np.empty((s, 8))
    h = cfg.h_init
    accepted = rejected = 0
    n_rhs = 1
    h_sum = h2_sum = 0.0
    terminal = None

    while terminal is None:
        if deadline is not None and (accepted + rejected) % 64 == 0 \
                and time.monotonic() > deadline:
            raise IntegrationTimeout(f"deadline passed at r={r}")
        last = False
        remaining = cfg.r_max - r
        if h >= remaining:
            h = remaining
            last = True
        elif h < cfg.h_min:
            terminal = TerminalRecord(TerminalReason.STEP_UNDERFLOW, r)
            break

        K[0] = f0
        try:
            for i in range(1, s):
                K[i] = f(r + c[i] * h, y + h * (A[i, :i] @ K[:i]), params)
            n_rhs += s - 1
            y_new = y + h * (b @ K)
            if tab.fsal:
                f_new = K[-1].copy()
            else:
                f_new = np.array(f(r + h, y_new, params), dtype=float)
                n_rhs += 1
        except DomainError:
            rejected += 1
            h *= MIN_FACTOR
            continue

        scale = cfg.abs_tol + cfg.rel_tol * np.maximum(np.abs(y), np.abs(y_new))
        err = float(np.max(np.abs(h * (e @ K)) / scale))
        if not (math.isfinite(err) and np.all(np.isfinite(y_new)) and np.all(np.isfinite(f_new))):
            rejected += 1
            h *= MIN_FACTOR
            continue
        if err > 1.0:
            rejected += 1
            h *= max(MIN_FACTOR, SAFETY * err ** expo)
            continue

        accepted += 1
        h_sum += h
        h2_sum += h * h
        r_new = cfg.r_max if last else r + h
        interp = _Interpolant(tab, r, h, y, y_new, K, f_new)

        r_stop = None
        y_stop = None
        if y_new[2] <= threshold:
            theta = _refine_horizon(interp, threshold)
            r_stop = r + theta * h
            y_stop = interp(theta)[0]
            terminal = TerminalRecord(TerminalReason.HORIZON, r_stop, r_stop)
        elif np.max(np.abs(y_new)) > cfg.blowup_limit:
            r_stop, y_stop = r_new, y_new
            terminal = TerminalRecord(TerminalReason.BLOWUP, r_new)
        elif last:
            r_stop, y_stop = r_new, y_new
            terminal = TerminalRecord(TerminalReason.REACHED_R_MAX, r_new)

        # dense grid points inside (r, min(r_new, r_stop))
        upper = r_new if r_stop is None else r_stop
        k_hi = math.floor((upper - r0) / dr)
        if r_stop is not None:
            # keep the exact terminal point as the last sample
            while k_hi >= next_k and r0 + k_hi * dr >= r_stop - 1e-9 * dr:
                k_hi -= 1
        if k_hi >= next_k:
            ks = np.arange(next_k, k_hi + 1)
            rk = r0 + ks * dr
            out_r.append(rk)
            out_y.append(interp((rk - r) / h))
            next_k = k_hi + 1
        if r_stop is not None:
            out_r.append(np.array([r_stop]))
            out_y.append(y_stop[None, :])
            break

        fac = MAX_FACTOR if err == 0 else min(MAX_FACTOR, max(MIN_FACTOR, SAFETY * err ** expo))
        r, y, f0 = r_new, y_new, f_new
        h = min(h * fac, cfg.h_max)

    stats = IntegrationStats(cfg.method, accepted, rejected, n_rhs, h_sum, h2_sum)
    return Trajectory(np.concatenate(out_r), np.concatenate(out_y), terminal, dr, stats)


def relative_discrepancy(ya: np.ndarray, yb: np.ndarray) -> float:
    """Largest per-component normwise relative difference.

    For each column ``j`` this is ``max|ya[:, j] - yb[:, j]| / max(|ya[:, j]|, |yb[:, j]|)``;
    columns that vanish identically in both inputs contribute zero.
    """
    ya = np.asarray(ya, dtype=float)
    yb = np.asarray(yb, dtype=float)
    if ya.shape != yb.shape:
        raise ValueError(f"shape mismatch {ya.shape} vs {yb.shape}")
    if ya.size == 0:
        return 0.0
    diff = np.max(np.abs(ya - yb), axis=0)
    scale = np.maximum(np.max(np.abs(ya), axis=0), np.max(np.abs(yb), axis=0))
    rel = np.where(scale > 0, diff / np.where(scale > 0, scale, 1.0), 0.0)
    return float(np.max(rel))


def shared_grid(ta: Trajectory, tb: Trajectory, fraction: float = 1.0):
    """Grid samples common to two trajectories, up to ``fraction`` of the shorter range.

    Returns ``(r, ya, yb)``.
    """
    if ta.dense_dr != tb.dense_dr or ta.r0 != tb.r0:
        raise ValueError("trajectories do not share a sample grid")
    ra, ya = ta.grid()
    rb, yb = tb.grid()
    r_end = min(ta.terminal.r_end, tb.terminal.r_end)
    limit = ta.r0 + fraction * (r_end - ta.r0)
    n = min(len(ra), len(rb))
    n = int(np.searchsorted(ra[:n], limit, side="right"))
    return ra[:n], ya[:n], yb[:n]


class Crosscheck(NamedTuple):
    primary: Trajectory
    alternate: Trajectory
    discrepancy: float
    reliable: bool


def crosscheck(initial: FieldState, params: Params, config: IntegratorConfig | None = None,
               *, threshold: float = 1e-6, fraction: float = 0.99, **kwargs) -> Crosscheck:
    """Integrate with both methods and compare them on shared dense samples.

    The comparison covers grid samples up to ``fraction`` of the shorter
    trajectory's range (agreement degrades close to a horizon). ``reliable``
    is false when the discrepancy, measured by :func:`relative_discrepancy`,
    exceeds ``threshold``.
    """
    cfg = config or IntegratorConfig()
    first = integrate(initial, params, replace(cfg, method=Method.PRIMARY), **kwargs)
    second = integrate(initial, params, replace(cfg, method=Method.CROSSCHECK), **kwargs)
    _, ya, yb = shared_grid(first, second, fraction)
    d = relative_discrepancy(ya, yb)
    return Crosscheck(first, second, d, d <= threshold)


@dataclass(frozen=True)
class ConvergenceReport:
    """Observed order of a tolerance ladder.

    ``errors[i]`` is the endpoint error of level ``i`` against the exact
    endpoint when one was supplied, otherwise the endpoint difference between
    levels ``i`` and ``i + 1``. ``steps`` holds the accepted step counts.
    ``order`` is NaN when the problem is degenerate (all errors at rounding
    level), e.g. for a fixed point.
    """

    order: float
    degenerate: bool
    tolerances: tuple
    errors: tuple
    mean_steps: tuple


def self_convergence(initial: FieldState, params: Params, tolerances: Sequence[float],
                     config: IntegratorConfig | None = None, *,
                     exact: Sequence[float] | None = None,
                     components: Sequence[int] | None = None,
                     rhs=None) -> ConvergenceReport:
    """Estimate the convergence order from runs at several tolerances.

    Each level uses ``abs_tol = rel_tol = tol``. The error measure is the max
    norm of the endpoint state (optionally restricted to ``components``); the
    order is the least-squares slope of ``log(error)`` against
    ``log(mean step size)`` (see :attr:`IntegrationStats.mean_step`).

    Keep ``config.h_max`` large enough not to clip the steps of the loosest
    level, otherwise the step size stops tracking the tolerance.
    """
    tols = sorted((float(t) for t in tolerances), reverse=True)
    if len(tols) < 3:
        raise ValueError("need at least 3 tolerance levels")
    ratios = [tols[i] / tols[i + 1] for i in range(len(tols) - 1)]
    if max(ratios) / min(ratios) > 1 + 1e-9:
        raise ValueError("tolerance levels must be a fixed factor apart")

    cfg = config or IntegratorConfig()
    runs = [integrate(initial, params, replace(cfg, abs_tol=t, rel_tol=t), rhs=rhs) for t in tols]
    reasons = {t.terminal.reason for t in runs}
    if len(reasons) != 1:
        raise ValueError(f"levels terminate for different reasons: {sorted(r.value for r in reasons)}")
    if reasons != {TerminalReason.REACHED_R_MAX}:
        raise ValueError("self-convergence needs runs that reach r_max")

    cols = list(components) if components is not None else list(range(8))
    ends = np.array([t.y[-1][cols] for t in runs])
    hbar = np.array([t.stats.mean_step for t in runs])
    if exact is not None:
        errs = np.max(np.abs(ends - np.asarray(exact, dtype=float)[cols]), axis=1)
        h = hbar
    else:
        errs = np.max(np.abs(np.diff(ends, axis=0)), axis=1)
        h = hbar[:-1]

    floor = 64 * np.finfo(float).eps * max(1.0, float(np.max(np.abs(ends))))
    if np.all(errs <= floor):
        return ConvergenceReport(math.nan, True, tuple(tols), tuple(errs), tuple(hbar))
    if np.any(errs <= floor) or len(set(h)) < 2:
        raise ValueError("error ladder reaches rounding level; choose looser tolerances")
    slope = np.polyfit(np.log(h), np.log(errs), 1)[0]
    return ConvergenceReport(float(slope), False, tuple(tols), tuple(float(e) for e in errs),
                             tuple(float(x) for x in hbar))
