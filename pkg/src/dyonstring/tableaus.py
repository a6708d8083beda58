"""Butcher tableaus of the two embedded explicit Runge-Kutta pairs."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class Tableau:
    """An embedded explicit pair.

    ``b`` propagates the solution (order ``order``); ``e = b - b_hat`` gives
    the local error estimate, whose leading term is ``O(h^(err_order + 1))``.
    ``fsal`` pairs evaluate their last stage at the new point, so that stage
    doubles as the first stage of the next step. ``dense`` maps the stages to
    the coefficients of ``theta, theta^2, ...`` of a continuous extension;
    ``None`` means cubic Hermite interpolation is used instead.
    """

    name: str
    order: int
    err_order: int
    c: np.ndarray
    A: np.ndarray
    b: np.ndarray
    e: np.ndarray
    fsal: bool
    dense: np.ndarray | None

    @property
    def stages(self) -> int:
        return len(self.c)


def _dormand_prince() -> Tableau:
    c = np.array([0, 1/5, 3/10, 4/5, 8/9, 1, 1])
    A = np.zeros((7, 7))
    A[1, :1] = [1/5]
    A[2, :2] = [3/40, 9/40]
    A[3, :3] = [44/45, -56/15, 32/9]
    A[4, :4] = [19372/6561, -25360/2187, 64448/6561, -212/729]
    A[5, :5] = [9017/3168, -355/33, 46732/5247, 49/176, -5103/18656]
    A[6, :6] = [35/384, 0, 500/1113, 125/192, -2187/6784, 11/84]
    b = np.array([35/384, 0, 500/1113, 125/192, -2187/6784, 11/84, 0])
    b_hat = np.array([5179/57600, 0, 7571/16695, 393/640, -92097/339200, 187/2100, 1/40])
    # Shampine's fourth-order continuous extension
    dense = np.array([
        [1, -8048581381/2820520608, 8663915743/2820520608, -12715105075/11282082432],
        [0, 0, 0, 0],
        [0, 131558114200/32700410799, -68118460800/10900136933, 87487479700/32700410799],
        [0, -1754552775/470086768, 14199869525/1410260304, -10690763975/1880347072],
        [0, 127303824393/49829197408, -318862633887/49829197408, 701980252875/199316789632],
        [0, -282668133/205662961, 2019193451/616988883, -1453857185/822651844],
        [0, 40617522/29380423, -110615467/29380423, 69997945/29380423],
    ])
    return Tableau("dormand_prince_5(4)", 5, 4, c, A, b, b - b_hat, True, dense)


def _fehlberg() -> Tableau:
    c = np.array([0, 1/4, 3/8, 12/13, 1, 1/2])
    A = np.zeros((6, 6))
    A[1, :1] = [1/4]
    A[2, :2] = [3/32, 9/32]
    A[3, :3] = [1932/2197, -7200/2197, 7296/2197]
    A[4, :4] = [439/216, -8, 3680/513, -845/4104]
    A[5, :5] = [-8/27, 2, -3544/2565, 1859/4104, -11/40]
    b4 = np.array([25/216, 0, 1408/2565, 2197/4104, -1/5, 0])
    b5 = np.array([16/135, 0, 6656/12825, 28561/56430, -9/50, 2/55])
    # propagates the fourth-order solution, no local extrapolation
    return Tableau("fehlberg_4(5)", 4, 4, c, A, b4, b4 - b5, False, None)


DORMAND_PRINCE = _dormand_prince()
FEHLBERG = _fehlberg()
