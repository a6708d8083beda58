"""Physical diagnostics of states and trajectories."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .integrator import TerminalReason, Trajectory
from .model import DomainError, FieldState, MAGNITUDE_FLOOR, Params

__all__ = [
    "Classification",
    "NodeReport",
    "energy_density",
    "energy_density_profile",
    "count_nodes",
    "scale_transform",
    "scale_state",
    "scale_factors",
    "classify",
]


class Classification(str, enum.Enum):
    STRING_LIKE = "string_like"
    OSCILLATORY = "oscillatory"
    HORIZON_TERMINATED = "horizon_terminated"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class NodeReport:
    count: int
    radii: tuple[float, ...]


def energy_density(state: FieldState, params: Params) -> float:
    """Energy density ``T_tt`` of the gauge field at ``state``.

    ``(B^2 r^2 Phi'^2 + Phi^2 W^2 + C W'^2) / (2 g^2 B^2 r^2)``
    """
    r, B = state.r, state.B
    if abs(r) <= MAGNITUDE_FLOOR or abs(B) <= MAGNITUDE_FLOOR:
        raise DomainError(f"energy density undefined at r={r!r}, B={B!r}")
    Br2 = B * B * r * r
    num = Br2 * state.Phip ** 2 + (state.Phi * state.W) ** 2 + state.C * state.Wp ** 2
    return num / (2.0 * params.g ** 2 * Br2)


def energy_density_profile(traj: Trajectory, params: Params) -> np.ndarray:
    """:func:`energy_density` at every sample of ``traj``."""
    B, _, C, _, W, Wp, Phi, Phip = traj.y.T
    Br2 = B * B * traj.r * traj.r
    if np.any(np.abs(Br2) <= MAGNITUDE_FLOOR):
        raise DomainError("energy density undefined where B r vanishes")
    return (Br2 * Phip ** 2 + (Phi * W) ** 2 + C * Wp ** 2) / (2.0 * params.g ** 2 * Br2)


def count_nodes(traj: Trajectory, w_floor: float = 1e-10) -> NodeReport:
    """Count sign changes of ``W`` between samples.

    Samples with ``|W| <= w_floor`` are skipped, so a crossing is counted
    between the nearest samples on either side that clear the floor. Each
    crossing radius is found by linear interpolation between those samples.
    """
    if w_floor < 0:
        raise ValueError("w_floor must be non-negative")
    W = traj.column("W")
    keep = np.abs(W) > w_floor
    r = traj.r[keep]
    w = W[keep]
    if len(w) < 2:
        return NodeReport(0, ())
    idx = np.nonzero(np.signbit(w[1:]) != np.signbit(w[:-1]))[0]
    w0, w1 = w[idx], w[idx + 1]
    r0, r1 = r[idx], r[idx + 1]
    radii = r0 + (r1 - r0) * w0 / (w0 - w1)
    return NodeReport(len(idx), tuple(float(x) for x in radii))


def scale_factors(gamma: float, beta: float) -> np.ndarray:
    """Per-component factors of the scale symmetry, in state order."""
    if not (gamma > 0 and beta > 0):
        raise ValueError(f"scale factors must be positive, got gamma={gamma}, beta={beta}")
    sg = math.sqrt(gamma)
    return np.array([beta, beta, gamma, gamma, beta, beta, sg, sg])


def scale_state(state: FieldState, gamma: float, beta: float) -> FieldState:
    return FieldState.from_array(state.r, state.as_array() * scale_factors(gamma, beta))


def scale_transform(traj: Trajectory, gamma: float, beta: float) -> Trajectory:
    """Apply ``C -> gamma C, Phi -> sqrt(gamma) Phi, B -> beta B, W -> beta W``.

    Derivatives scale with their fields; radii and the terminal record are
    unchanged. ``gamma = beta = 1`` returns bit-identical samples.
    """
    factors = scale_factors(gamma, beta)
    return Trajectory(traj.r, traj.y * factors, traj.terminal, traj.dense_dr, traj.stats)


def _monotone(x: np.ndarray) -> bool:
    if len(x) < 2:
        return True
    d = np.diff(x)
    tol = 1e-12 * float(np.max(np.abs(x)))
    return bool(np.all(d >= -tol) or np.all(d <= tol))


def classify(traj: Trajectory, nodes: NodeReport, *, tail_fraction: float = 0.2,
             max_string_nodes: int = 1) -> Classification:
    """Coarse label of a run.

    * ``horizon_terminated``: the run ended at a horizon.
    * ``string_like``: reached ``r_max`` with at most ``max_string_nodes``
      nodes, and ``W`` and ``Phi`` monotone over the last ``tail_fraction``
      of the radial range.
    * ``oscillatory``: two or more nodes otherwise.
    * ``indeterminate``: anything else.
    """
    reason = traj.terminal.reason
    if reason is TerminalReason.HORIZON:
        return Classification.HORIZON_TERMINATED
    if reason is TerminalReason.REACHED_R_MAX and nodes.count <= max_string_nodes:
        r_cut = traj.r[-1] - tail_fraction * (traj.r[-1] - traj.r[0])
        tail = traj.r >= r_cut
        if _monotone(traj.column("W")[tail]) and _monotone(traj.column("Phi")[tail]):
            return Classification.STRING_LIKE
    if nodes.count >= 2:
        return Classification.OSCILLATORY
    return Classification.INDETERMINATE
