"""Field equations of the cylindrically symmetric SU(2) Einstein-Yang-Mills dyon.

The metric is ``ds^2 = C(-dt^2 + dz^2) + dr^2 + B^2 r^2 dphi^2`` and the gauge
field is reduced to a magnetic amplitude ``W(r)`` and an electric amplitude
``Phi(r)``. The four coupled second-order equations are integrated as an
eight-component first-order system with the state ordered as

    (B, B', C, C', W, W', Phi, Phi')

which is the layout of :data:`STATE_FIELDS` and of every ``y`` array used in
this package.
"""
from __future__ import annotations

from dataclasses import astuple, dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "STATE_FIELDS",
    "MAGNITUDE_FLOOR",
    "DomainError",
    "Params",
    "FieldState",
    "Derivatives",
    "rhs",
    "rhs_vector",
    "second_derivatives",
    "residual",
    "residual_by_equation",
]

STATE_FIELDS = ("B", "Bp", "C", "Cp", "W", "Wp", "Phi", "Phip")

# Below this magnitude B, C and r are treated as zero.
MAGNITUDE_FLOOR = 1e-30

# Order of the equations in residual_by_equation.
EQUATIONS = ("C", "B", "Phi", "W")


class DomainError(ValueError):
    """The state lies outside the chart where the field equations are regular."""


@dataclass(frozen=True)
class Params:
    """Physical constants of one run.

    Parameters
    ----------
    lam : float
        Cosmological constant.
    kappa : float
        Coupling ``4 pi G / g^2``; the only combination entering the field
        equations.
    g : float
        Gauge coupling. Only the energy-density normalisation uses it.
    a, b : float
        Shooting parameters of the near-core series ``Phi ~ a r`` and
        ``W ~ 1 - b r^2``.
    r0 : float
        Core radius where the integration starts.
    """

    lam: float = 0.0
    kappa: float = 1.0
    g: float = 1.0
    a: float = 1.0
    b: float = 0.35
    r0: float = 0.01

    def __post_init__(self):
        if not self.r0 > 0:
            raise ValueError(f"r0 must be positive, got {self.r0}")
        if not self.kappa > 0:
            raise ValueError(f"kappa must be positive, got {self.kappa}")
        if self.g == 0:
            raise ValueError("g must be non-zero")

    def with_lambda(self, lam: float) -> "Params":
        return Params(lam, self.kappa, self.g, self.a, self.b, self.r0)


@dataclass(frozen=True)
class FieldState:
    """A point of phase space: radius plus the eight field values."""

    r: float
    B: float
    Bp: float
    C: float
    Cp: float
    W: float
    Wp: float
    Phi: float
    Phip: float

    def as_array(self) -> np.ndarray:
        """The eight field values in :data:`STATE_FIELDS` order (no radius)."""
        return np.array(astuple(self)[1:], dtype=float)

    @classmethod
    def from_array(cls, r: float, y: Sequence[float]) -> "FieldState":
        if len(y) != 8:
            raise ValueError(f"expected 8 field values, got {len(y)}")
        return cls(float(r), *(float(v) for v in y))


@dataclass(frozen=True)
class Derivatives:
    """Radial derivative of each :class:`FieldState` field."""

    dB: float
    dBp: float
    dC: float
    dCp: float
    dW: float
    dWp: float
    dPhi: float
    dPhip: float

    def as_array(self) -> np.ndarray:
        return np.array(astuple(self), dtype=float)


def _check_chart(r, B, C):
    if abs(r) <= MAGNITUDE_FLOOR:
        raise DomainError(f"r={r!r} is at the axis")
    if abs(B) <= MAGNITUDE_FLOOR:
        raise DomainError(f"B={B!r} vanishes at r={r!r}")
    if abs(C) <= MAGNITUDE_FLOOR:
        raise DomainError(f"C={C!r} vanishes at r={r!r}")


def second_derivatives(r, B, Bp, C, Cp, W, Wp, Phi, Phip, lam, kappa):
    """Return ``(B'', C'', W'', Phi'')``.

    Works elementwise on floats or broadcastable numpy arrays. No domain
    checks are made here.
    """
    r2 = r * r
    Bsq = B * B
    W2 = W * W
    PW2 = Phi * Phi * W2
    BrPp2 = Bsq * r2 * Phip * Phip
    CWp2 = C * Wp * Wp
    Cp2 = Cp * Cp

    Cpp = Cp2 / (4.0 * C) - kappa / (Bsq * r2) * (PW2 - BrPp2 - CWp2) - lam * C
    Bpp = (B * Cp2 / (4.0 * C * C) - 2.0 / r * Bp
           + kappa / (B * C * r2) * (PW2 + BrPp2 - 2.0 * CWp2))
    # (r B Phi')' = Phi W^2 / (B r) and (C W' / (B r))' = -Phi^2 W / (B r)
    Phipp = Phi * W2 / (Bsq * r2) - Phip * (1.0 / r + Bp / B)
    Wpp = -Phi * Phi * W / C + Wp * (Bp / B + 1.0 / r - Cp / C)
    return Bpp, Cpp, Wpp, Phipp


def rhs_vector(r: float, y: Sequence[float], params: Params) -> tuple:
    """First-order right-hand side on a plain 8-sequence.

    This is the hot path of the integrator; it returns a tuple of floats.

    Raises
    ------
    DomainError
        If ``r``, ``B`` or ``C`` is below :data:`MAGNITUDE_FLOOR` in magnitude.
    """
    B, Bp, C, Cp, W, Wp, Phi, Phip = y
    _check_chart(r, B, C)
    Bpp, Cpp, Wpp, Phipp = second_derivatives(
        r, B, Bp, C, Cp, W, Wp, Phi, Phip, params.lam, params.kappa)
    return (Bp, Bpp, Cp, Cpp, Wp, Wpp, Phip, Phipp)


def rhs(state: FieldState, params: Params) -> Derivatives:
    """Evaluate the field equations at ``state``.

    Examples
    --------
    >>> s = FieldState(1.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    >>> rhs(s, Params(lam=0.5)).dCp
    -0.5
    """
    return Derivatives(*rhs_vector(state.r, astuple(state)[1:], params))


def _window_arrays(window) -> tuple[np.ndarray, np.ndarray]:
    # Trajectories contribute their uniform dense grid only
    if hasattr(window, "grid"):
        r, y = window.grid()
        return np.asarray(r, dtype=float), np.asarray(y, dtype=float)
    if hasattr(window, "r") and hasattr(window, "y") and not isinstance(window, FieldState):
        return np.asarray(window.r, dtype=float), np.asarray(window.y, dtype=float)
    states = list(window)
    r = np.array([s.r for s in states], dtype=float)
    y = np.array([astuple(s)[1:] for s in states], dtype=float).reshape(len(states), 8)
    return r, y


def residual_by_equation(window: Iterable[FieldState], params: Params) -> np.ndarray:
    """Per-equation residual of a uniformly sampled window.

    At every interior sample the central difference
    ``(f[i+1] - 2 f[i] + f[i-1]) / h^2`` of ``C, B, Phi, W`` is compared with
    the second derivative predicted by the field equations. The maximum
    absolute mismatch is returned for each equation, ordered ``(C, B, Phi, W)``.
    A trajectory contributes its uniform dense grid; an off-grid terminal
    sample is left out.

    For an exact solution every entry is ``O(h^2)``.

    Raises
    ------
    ValueError
        If the window has fewer than 3 samples or is not uniformly spaced to
        one part in ``1e6``.
    """
    r, y = _window_arrays(window)
    if len(r) < 3:
        raise ValueError("residual needs at least 3 samples")
    dr = np.diff(r)
    h = (r[-1] - r[0]) / (len(r) - 1)
    if h <= 0 or np.max(np.abs(dr - h)) > 1e-6 * h:
        raise ValueError("window samples are not uniformly spaced")

    ri = r[1:-1]
    mid = y[1:-1]
    B, Bp, C, Cp, W, Wp, Phi, Phip = mid.T
    if (np.any(np.abs(B) <= MAGNITUDE_FLOOR) or np.any(np.abs(C) <= MAGNITUDE_FLOOR)
            or np.any(np.abs(ri) <= MAGNITUDE_FLOOR)):
        raise DomainError("window leaves the regular chart")
    Bpp, Cpp, Wpp, Phipp = second_derivatives(
        ri, B, Bp, C, Cp, W, Wp, Phi, Phip, params.lam, params.kappa)

    fd = (y[2:] - 2.0 * mid + y[:-2]) / (h * h)
    out = np.empty(4)
    for k, (col, model) in enumerate(((2, Cpp), (0, Bpp), (6, Phipp), (4, Wpp))):
        out[k] = np.max(np.abs(fd[:, col] - model))
    return out


def residual(window: Iterable[FieldState], params: Params) -> float:
    """Largest residual over the four field equations; see :func:`residual_by_equation`."""
    return float(np.max(residual_by_equation(window, params)))

