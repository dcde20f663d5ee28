"""Uniform three-interval approximation of ``W^u`` across the turning point.

With ``b = eps^{2/3} delta^{-2/3}`` the window ``[-nu0, nu0]`` is split into

* ``J1 = [-nu0, -b]``: Airy times the exponential correction and
  ``mu_hat^{-1/4}``;
* ``J2 = [-b, b]``: the pure Airy pair in ``eps^{-2/3} t``;
* ``J3 = [b, nu0]``: the real part of ``(Ai - i Bi)`` times a phase
  correction.

All pieces share one normalisation: coefficient 1 on ``Ai`` at ``t = 0``.
The ``1 + O(eps^{2/3})`` remainder factors are dropped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy.optimize import least_squares

from .airy import airy_eval
from .blowup import DELTA, _j1_piece, _j3_piece
from .problem import ProblemError, ProblemSpec, action
from .reference import wu_reference


class GridTooCoarseError(ValueError):
    """Phase increments between consecutive grid points exceed ``pi``."""


class Intervals(NamedTuple):
    """Boundaries ``-nu0 <= -b <= b <= nu0`` of ``J1, J2, J3``."""

    nu0: float
    b: float

    def tag(self, t: float) -> str:
        if abs(t) > self.nu0:
            raise ValueError(f"|t| = {abs(t)} exceeds nu0 = {self.nu0}")
        if t < -self.b:
            return "J1"
        if t > self.b:
            return "J3"
        return "J2"


def intervals(p: ProblemSpec, eps: float, delta: float = DELTA) -> Intervals:
    """Interval boundaries; ``b`` is clipped to ``nu0``."""
    if not eps > 0 or not delta > 0:
        raise ValueError("eps and delta must be positive")
    b = eps ** (2.0 / 3.0) * delta ** (-2.0 / 3.0)
    return Intervals(float(p.nu0), min(b, float(p.nu0)))


class WuPoint(NamedTuple):
    """Approximant value ``(x, y) * exp(log)`` and the interval used."""

    t: float
    x: float
    y: float
    log: float
    interval: str


def _require_normalized(p: ProblemSpec) -> None:
    if abs(p.dmu(0.0) - 1.0) > 1e-12:
        raise ProblemError("uniform approximant needs mu'(0) = 1; apply problem.normalize first")


@dataclass(frozen=True)
class UniformApproximant:
    """Closed-form evaluator of the uniform ``W^u`` solution.

    Parameters
    ----------
    p : ProblemSpec
        Normalised problem (``mu'(0) = 1``).
    eps, delta : float
    """

    p: ProblemSpec
    eps: float
    delta: float = DELTA

    def __post_init__(self) -> None:
        _require_normalized(self.p)
        intervals(self.p, self.eps, self.delta)

    @property
    def intervals(self) -> Intervals:
        return intervals(self.p, self.eps, self.delta)

    def __call__(self, t: float) -> WuPoint:
        t = float(t)
        tag = self.intervals.tag(t)
        eps = self.eps
        if tag == "J1":
            x, y, log = _j1_piece(self.p, t, eps)
            return WuPoint(t, x, y, log, tag)
        if tag == "J2":
            q = airy_eval(-t * eps ** (-2.0 / 3.0))
            return WuPoint(t, q.ai, -eps ** (1.0 / 3.0) * q.aip, 0.0, tag)
        x, y = _j3_piece(self.p, t, eps)
        return WuPoint(t, x, y, 0.0, tag)

    def grid(self, ts: Sequence[float]) -> list[WuPoint]:
        return [self(t) for t in ts]


def uniform_wu_solution(p: ProblemSpec, eps: float, delta: float, t: float) -> WuPoint:
    """Evaluate the uniform approximant at one point.

    Raises
    ------
    ValueError
        If ``|t| > nu0``.
    ProblemError
        If ``mu'(0) != 1``.
    """
    return UniformApproximant(p, eps, delta)(t)


def uniform_wu_grid(p: ProblemSpec, eps: float, delta: float, ts: Sequence[float]) -> list[WuPoint]:
    return UniformApproximant(p, eps, delta).grid(ts)


# ---------------------------------------------------------------------------
# comparison with the reference
# ---------------------------------------------------------------------------


def _weight(p: ProblemSpec, t: np.ndarray, eps: float) -> np.ndarray:
    """Local ``y`` scale ``sqrt(max(|mu|, eps^{2/3}))``."""
    return np.sqrt(np.maximum(np.abs(p.mu(t)), eps ** (2.0 / 3.0)))


class ApproxError(NamedTuple):
    eps: float
    sup: float
    t_sup: float
    errors: np.ndarray
    ts: np.ndarray


def approximant_error(p: ProblemSpec, eps: float, delta: float = DELTA, window: float = 0.2,
                      n: int = 401, tol: float = 1e-12) -> ApproxError:
    """Sup relative deviation of the approximant from the reference on ``[-window, window]``.

    The reference ``W^u`` solution (started at ``-nu0``) is scaled by the real
    factor that best matches the approximant at ``t = 0``.  Errors are
    measured in the norm ``sqrt(x^2 + (y/s)^2)`` with
    ``s = sqrt(max(|mu|, eps^{2/3}))`` so oscillation zeros of ``x`` do not
    produce spurious spikes.
    """
    ts = np.linspace(-window, window, n)
    if 0.0 not in ts:
        ts = np.sort(np.append(ts, 0.0))
    ref = wu_reference(p, eps, ts, tol=tol)
    app = uniform_wu_grid(p, eps, delta, ts)
    s = _weight(p, ts, eps)
    ax = np.array([w.x for w in app])
    ay = np.array([w.y for w in app]) / s
    al = np.array([w.log for w in app])
    rx, ry, rl = ref.x, ref.y / s, ref.log
    i0 = int(np.flatnonzero(ts == 0.0)[0])
    k = (ax[i0] * rx[i0] + ay[i0] * ry[i0]) / (rx[i0] ** 2 + ry[i0] ** 2)
    scale = k * np.exp(rl - rl[i0] - al)
    num = np.hypot(ax - scale * rx, ay - scale * ry)
    err = num / np.hypot(ax, ay)
    j = int(np.argmax(err))
    return ApproxError(float(eps), float(err[j]), float(ts[j]), err, ts)


# ---------------------------------------------------------------------------
# W^u direction on the oscillatory side
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Direction2:
    """Unit vector identified with its negative."""

    x: float
    y: float

    def __post_init__(self) -> None:
        n = math.hypot(self.x, self.y)
        if n == 0:
            raise ValueError("zero vector has no direction")
        object.__setattr__(self, "x", self.x / n)
        object.__setattr__(self, "y", self.y / n)

    def angle(self, yscale: float = 1.0) -> float:
        """Angle of ``(x, y/yscale)`` in ``(-pi/2, pi/2]``."""
        a = math.atan2(self.y / yscale, self.x)
        return _wrap_half(a)

    def angle_to(self, other: "Direction2", yscale: float = 1.0) -> float:
        """Absolute angle difference modulo ``pi``, in ``[0, pi/2]``."""
        return abs(_wrap_half(self.angle(yscale) - other.angle(yscale)))


def _wrap_half(a):
    """Wrap angles to ``(-pi/2, pi/2]``."""
    return np.pi / 2 - np.mod(np.pi / 2 - a, np.pi)


def _check_osc(p: ProblemSpec, nu: float) -> None:
    if not (0 < nu <= p.nu0):
        raise ValueError(f"nu must lie in (0, {p.nu0}]")
    if np.any(p.mu(np.linspace(nu * 1e-6, nu, 65)) <= 0):
        raise ValueError("mu must be positive on (0, nu]")


def wu_direction(p: ProblemSpec, nu: float, eps: float) -> Direction2:
    """Leading-order direction of ``W^u`` at ``t = nu``.

    ``(cos(Phi - pi/4), -sqrt(mu(nu)) sin(Phi - pi/4))`` with
    ``Phi = eps^{-1} int_0^nu sqrt(mu)``.
    """
    _check_osc(p, nu)
    ph = action(p, 0.0, nu) / eps - math.pi / 4
    return Direction2(math.cos(ph), -math.sqrt(p.mu(nu)) * math.sin(ph))


def reference_direction(p: ProblemSpec, nu: float, eps: float, tol: float = 1e-12) -> Direction2:
    """Direction of the integrated ``W^u`` solution at ``t = nu``."""
    _check_osc(p, nu)
    tr = wu_reference(p, eps, [nu], tol=tol)
    return Direction2(float(tr.x[0]), float(tr.y[0]))


def direction_error(p: ProblemSpec, nu: float, eps: float, tol: float = 1e-12) -> float:
    """Angle (mod ``pi``) between ``wu_direction`` and the reference.

    Angles are taken in the ``(x, y/sqrt(mu(nu)))`` plane, where they equal
    the oscillation phase.
    """
    s = math.sqrt(p.mu(nu))
    return wu_direction(p, nu, eps).angle_to(reference_direction(p, nu, eps, tol), s)


# ---------------------------------------------------------------------------
# phase / amplitude correction fit
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PhaseFit:
    """Polynomial fits in ``eps^{1/3}`` of the corrections ``rho, phi1, phi2``.

    ``coeffs[k]`` holds the ascending coefficients of ``rho``, ``phi1`` and
    ``phi2`` for ``k = 0, 1, 2``.
    """

    degree: int
    rho: np.ndarray
    phi1: np.ndarray
    phi2: np.ndarray
    residual: float
    eps: np.ndarray
    angles: np.ndarray

    def evaluate(self, eps) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        e = np.asarray(eps, dtype=float) ** (1.0 / 3.0)
        return (np.polyval(self.rho[::-1], e), np.polyval(self.phi1[::-1], e),
                np.polyval(self.phi2[::-1], e))


def _model_angle(base: np.ndarray, eps: np.ndarray, rho, phi1, phi2) -> np.ndarray:
    w = eps ** (2.0 / 3.0)
    X = np.cos(base + w * phi1)
    Y = (1 + w * rho) * np.sin(base + w * phi2)
    return np.arctan2(Y, X)


def phase_fit(p: ProblemSpec, nu: float, eps_grid: Sequence[float], degree: int = 1,
              angles: Sequence[float] | None = None, tol: float = 1e-12) -> PhaseFit:
    """Fit the corrections of ``X = cos(Phi - pi/4 + eps^{2/3} phi1)``,
    ``Y = (1 + eps^{2/3} rho) sin(Phi - pi/4 + eps^{2/3} phi2)``.

    Only the direction of ``(X, Y)`` is observable, so the three corrections
    are fitted jointly by least squares on the angle (modulo ``pi``) of
    ``(X, Y)``; each is a polynomial of ``degree`` in ``eps^{1/3}``.  The
    variation of ``Phi`` along the grid separates the three corrections.

    Parameters
    ----------
    eps_grid : sequence of float
        At least six values.  Adjacent values must not change ``Phi`` by
        more than ``pi``.
    angles : sequence of float, optional
        Observed angles of ``(x, -y/sqrt(mu(nu)))``; by default taken from
        the reference integrator.

    Raises
    ------
    GridTooCoarseError
        If ``Phi`` jumps by more than ``pi`` between adjacent grid points.
    """
    _check_osc(p, nu)
    eps = np.sort(np.asarray(eps_grid, dtype=float))
    if eps.size < 6:
        raise ValueError("phase_fit needs at least six eps values")
    npar = 3 * (degree + 1)
    if eps.size < npar:
        raise ValueError(f"degree {degree} needs at least {npar} eps values")
    A = action(p, 0.0, nu)
    base = A / eps - math.pi / 4
    if np.any(np.abs(np.diff(base)) > math.pi):
        raise GridTooCoarseError("phase increments exceed pi; refine the eps grid")
    s = math.sqrt(p.mu(nu))
    if angles is None:
        obs = []
        for e in eps:
            d = reference_direction(p, nu, float(e), tol)
            obs.append(math.atan2(-d.y / s, d.x))
        obs = np.array(obs)
    else:
        obs = np.asarray(angles, dtype=float)
        if obs.shape != eps.shape:
            raise ValueError("angles must match eps_grid")
    e13 = eps ** (1.0 / 3.0)

    def unpack(c):
        c = c.reshape(3, degree + 1)
        return [np.polyval(ci[::-1], e13) for ci in c]

    def resid(c):
        return _wrap_half(_model_angle(base, eps, *unpack(c)) - obs)

    sol = least_squares(resid, np.zeros(npar), xtol=1e-15, ftol=1e-15, gtol=1e-15)
    c = sol.x.reshape(3, degree + 1)
    r = float(np.sqrt(np.mean(sol.fun ** 2)))
    return PhaseFit(degree, c[0], c[1], c[2], r, eps, obs)


def synthetic_angles(p: ProblemSpec, nu: float, eps_grid, rho, phi1, phi2) -> np.ndarray:
    """Angles generated from known correction polynomials (ascending coefficients)."""
    eps = np.sort(np.asarray(eps_grid, dtype=float))
    e13 = eps ** (1.0 / 3.0)
    base = action(p, 0.0, nu) / eps - math.pi / 4
    ev = [np.polyval(np.asarray(c, dtype=float)[::-1], e13) for c in (rho, phi1, phi2)]
    return _model_angle(base, eps, *ev)


__all__ = [
    "Intervals",
    "intervals",
    "WuPoint",
    "UniformApproximant",
    "uniform_wu_solution",
    "uniform_wu_grid",
    "ApproxError",
    "approximant_error",
    "Direction2",
    "wu_direction",
    "reference_direction",
    "direction_error",
    "PhaseFit",
    "phase_fit",
    "synthetic_angles",
    "GridTooCoarseError",
]
