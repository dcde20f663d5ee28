"""The unstable line bundle ``W^u`` on the hyperbolic side ``t < 0``.

``W^u`` is the graph ``y = h_u(t, eps) x`` of the forward-attracting slow
manifold of the projective (Riccati) equation ``eps u' = -mu - u^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .problem import ProblemSpec, action
from .reference import WindowError, riccati_reference
from .series import hyp_riccati_coeffs

GUARD_C = 3.0


class TurningRegionError(WindowError):
    """Point too close to the turning point; use the blowup charts instead."""


@dataclass(frozen=True)
class SlopeValue:
    """Slope ``h = y/x`` of ``W^u`` at ``(t, eps)`` and how it was obtained."""

    t: float
    eps: float
    h: float
    method: str


@dataclass(frozen=True)
class WuState:
    """``(x, y) * exp(log)`` on ``W^u``."""

    x: float
    y: float
    log: float

    def xy(self) -> tuple[float, float]:
        s = math.exp(self.log)
        return self.x * s, self.y * s


def _check_window(p: ProblemSpec, t: float, eps: float, c: float) -> None:
    edge = -c * eps ** (2.0 / 3.0)
    if t < -p.nu0 - 1e-15 or t > edge:
        raise TurningRegionError(
            f"t={t} outside the hyperbolic window [-{p.nu0}, {edge:.6g}]; "
            "use turnpoint.blowup near the turning point")


def h_u(p: ProblemSpec, t: float, eps: float, N: int = 4, method: str = "series",
        c: float = GUARD_C) -> SlopeValue:
    """Slope of ``W^u`` at ``t`` in the hyperbolic window ``[-nu0, -c eps^{2/3}]``.

    Parameters
    ----------
    method : {"series", "riccati"}
        Truncated slow-manifold series of order ``N``, or the integrated
        Riccati reference.

    Raises
    ------
    TurningRegionError
        If ``t`` lies outside the window.
    """
    t, eps = float(t), float(eps)
    if eps < 0:
        raise ValueError("eps must be >= 0")
    if eps == 0.0:
        if not (-p.nu0 <= t < 0):
            raise TurningRegionError("t must lie in [-nu0, 0)")
        return SlopeValue(t, eps, math.sqrt(-p.mu(t)), "critical")
    _check_window(p, t, eps, c)
    if method == "series":
        s = hyp_riccati_coeffs(p, t, N)
        return SlopeValue(t, eps, float(s(eps)), f"series({N})")
    if method == "riccati":
        return SlopeValue(t, eps, riccati_reference(p, eps, t), "riccati-integrated")
    raise ValueError("method must be 'series' or 'riccati'")


def wu_state(p: ProblemSpec, t: float, t0: float, x0: float, eps: float, N: int = 1,
             c: float = GUARD_C) -> WuState:
    """Leading-order solution on ``W^u`` through ``(t0, x0)``.

    ``x(t) = (mu(t0)/mu(t))^{1/4} exp(eps^{-1} int_{t0}^t sqrt(-mu)) x0`` and
    ``y = h_u(t) x``; the exponential is returned as ``log``.
    """
    if x0 == 0:
        raise ValueError("x0 must be nonzero")
    _check_window(p, t, eps, c)
    _check_window(p, t0, eps, c)
    amp = (p.mu(t0) / p.mu(t)) ** 0.25
    log = action(p, t0, t) / eps
    x = amp * x0
    y = h_u(p, t, eps, N, c=c).h * x
    return WuState(float(x), float(y), float(log))


__all__ = ["SlopeValue", "WuState", "TurningRegionError", "h_u", "wu_state", "GUARD_C"]
