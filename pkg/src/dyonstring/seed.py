"""Near-core initial data from the shooting parameters ``(a, b)``."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .model import FieldState, Params

__all__ = ["SeedOptions", "SeedError", "initial_state", "eval_paper_c_constant"]


class SeedError(ValueError):
    """The requested initial data cannot serve as a metric seed."""


@dataclass(frozen=True)
class SeedOptions:
    """Choices for the metric function ``C`` at the core.

    ``c0`` and ``cp0`` give ``C(r0)`` and ``C'(r0)``. With
    ``use_paper_c_formula`` the closed-form constant of
    :func:`eval_paper_c_constant` replaces ``c0``.

    ``scale_gamma`` and ``scale_beta`` apply the scale symmetry of the field
    equations to the finished seed (``C, Phi^2`` by gamma; ``B, W`` by beta).
    Rescaling ``c0`` on its own is *not* a symmetry.
    """

    c0: float = 1.0
    cp0: float = 0.0
    use_paper_c_formula: bool = False
    scale_gamma: float = 1.0
    scale_beta: float = 1.0

    def __post_init__(self):
        if not self.use_paper_c_formula and not self.c0 > 0:
            raise SeedError(f"c0 must be positive, got {self.c0}")
        if not (self.scale_gamma > 0 and self.scale_beta > 0):
            raise SeedError("scale factors must be positive")


def eval_paper_c_constant(a: float, b: float) -> float:
    """Closed-form ``C(r0)`` of the near-core expansion.

    Returns ``1 - a^2/(8 b^2) * (sqrt(3) ln(3 - 1.5 sqrt(3)) + 6)``. For the
    commonly quoted ``a=1, b=0.35`` this is about ``-3.511``, which is not
    admissible as a metric component.
    """
    if b == 0:
        raise ValueError("b must be non-zero")
    s3 = math.sqrt(3.0)
    return 1.0 - a * a / (8.0 * b * b) * (s3 * math.log(3.0 - 1.5 * s3) + 6.0)


def initial_state(params: Params, opts: SeedOptions | None = None) -> FieldState:
    """Build the state at ``r = r0``.

    The magnetic and electric amplitudes follow ``W = 1 - b r^2`` and
    ``Phi = a r``; the angular metric function follows ``B = 1 - b r^2 / 2``.
    First derivatives are those of the truncated series.

    Raises
    ------
    SeedError
        If the closed-form ``C(r0)`` is requested and is not positive.
    """
    opts = opts or SeedOptions()
    a, b, r0 = params.a, params.b, params.r0
    if b * r0 * r0 > 0.1:
        warnings.warn(f"b*r0^2 = {b * r0 * r0:g}: near-core series is poorly truncated",
                      stacklevel=2)

    if opts.use_paper_c_formula:
        c0 = eval_paper_c_constant(a, b)
        if c0 <= 0:
            raise SeedError(
                f"closed-form C(r0) = {c0:.6g} is not positive for a={a}, b={b}")
    else:
        c0 = opts.c0

    g, beta = opts.scale_gamma, opts.scale_beta
    sg = math.sqrt(g)
    return FieldState(
        r=r0,
        B=beta * (1.0 - 0.5 * b * r0 * r0),
        Bp=beta * (-b * r0),
        C=g * c0,
        Cp=g * opts.cp0,
        W=beta * (1.0 - b * r0 * r0),
        Wp=beta * (-2.0 * b * r0),
        Phi=sg * a * r0,
        Phip=sg * a,
    )
