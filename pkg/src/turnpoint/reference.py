"""Ground-truth integrators and rate fitting.

The linear system ``x' = y/eps``, ``y' = -mu(t) x/eps`` is integrated with a
high-order Taylor-series method: with polynomial ``mu`` the Taylor
coefficients of the solution follow from a two-term recursion, so each step
is exact up to truncation order ``K`` and the step length is chosen from the
size of the last two coefficients relative to the state norm.  The state is
renormalised whenever its norm leaves ``[1e-3, 1e3]`` and the logarithm of
the removed factor is accumulated, so exponential growth of order
``exp(c/eps)`` never overflows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from scipy import stats

from . import _backend
from .problem import ProblemSpec
from .series import SeriesDomainError, hyp_riccati_coeffs

DEFAULT_TOL = 1e-12
DEFAULT_ORDER = 24


class IntegrationError(ArithmeticError):
    """Step-size underflow or other failure of the reference integrator."""


class RiccatiBlowupError(ArithmeticError):
    """The slope left the basin of the slow manifold (x crossed zero)."""


class WindowError(ValueError):
    """Requested point lies outside the admissible window."""


@dataclass(frozen=True)
class LogScaledState:
    """Unit direction ``(xhat, yhat)`` and log-magnitude at time ``t``."""

    xhat: float
    yhat: float
    log: float
    t: float
    eps: float

    @classmethod
    def from_xy(cls, x: float, y: float, t: float, eps: float, log: float = 0.0):
        n = math.hypot(x, y)
        if n == 0:
            raise ValueError("zero state has no direction")
        return cls(x / n, y / n, log + math.log(n), float(t), float(eps))

    def xy(self) -> tuple[float, float]:
        """Reconstruct ``(x, y)``; may overflow to inf when not representable."""
        with np.errstate(over="ignore"):
            s = math.exp(self.log) if self.log < 709 else math.inf
        return self.xhat * s, self.yhat * s

    @property
    def angle(self) -> float:
        return math.atan2(self.yhat, self.xhat)


class Trajectory(NamedTuple):
    """Sampled solution: scaled state ``(x, y)`` times ``exp(log)``."""

    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    log: np.ndarray
    nsteps: int
    nzeros: int

    def unit(self) -> tuple[np.ndarray, np.ndarray]:
        n = np.hypot(self.x, self.y)
        return self.x / n, self.y / n

    def lognorm(self) -> np.ndarray:
        return self.log + np.log(np.hypot(self.x, self.y))


class ReferenceIntegrator:
    """Taylor-series integrator bound to one problem and one ``eps``.

    Instances keep private stepping statistics and are meant to be confined
    to a single thread; create one per worker for parallel sweeps.

    Parameters
    ----------
    p : ProblemSpec or sequence of float
        Problem (or raw ``mu`` coefficients).
    eps : float
    tol : float
        Local relative tolerance, ``>= 1e-15``.
    order : int
        Taylor order.
    max_phase : float
        Optional bound on the phase advance ``h sqrt|mu|/eps`` per step
        (``0`` disables); a bound below ``pi`` makes zero counting by sign
        changes reliable.
    """

    def __init__(self, p, eps: float, tol: float = DEFAULT_TOL, order: int = DEFAULT_ORDER,
                 max_phase: float = 0.0):
        coeffs = p.mu_coeffs if isinstance(p, ProblemSpec) else p
        self.mu = np.ascontiguousarray(coeffs, dtype=float)
        if not eps > 0:
            raise ValueError("eps must be positive")
        if not tol >= 1e-15:
            raise ValueError("tol must be >= 1e-15")
        self.eps = float(eps)
        self.tol = float(tol)
        self.order = int(order)
        self.max_phase = float(max_phase)
        self.steps = 0
        self.zeros = 0

    def run(self, t0: float, state0, t_out: Iterable[float]) -> Trajectory:
        """Integrate from ``t0`` and sample at the monotone times ``t_out``."""
        t_out = np.atleast_1d(np.asarray(t_out, dtype=float))
        if t_out.size > 1:
            d = np.diff(np.concatenate([[t0], t_out]))
            if not (np.all(d >= 0) or np.all(d <= 0)):
                raise ValueError("output times must be monotone away from t0")
        if isinstance(state0, LogScaledState):
            x0, y0, log0 = state0.xhat, state0.yhat, state0.log
        else:
            x0, y0 = (float(v) for v in state0)
            log0 = 0.0
        try:
            xs, ys, logs, ns, nz = _backend.taylor_integrate(
                self.mu, self.eps, float(t0), x0, y0, t_out, self.tol, self.order,
                self.max_phase)
        except ArithmeticError as exc:
            raise IntegrationError(f"{exc} (eps={self.eps}, tol={self.tol})") from exc
        self.steps += int(ns)
        self.zeros += int(nz)
        return Trajectory(t_out, np.asarray(xs), np.asarray(ys), np.asarray(logs) + log0,
                          int(ns), int(nz))


def integrate(p, eps: float, t0: float, state0, t1: float, tol: float = DEFAULT_TOL,
              order: int = DEFAULT_ORDER) -> LogScaledState:
    """Integrate the linear system from ``t0`` to ``t1``.

    Returns
    -------
    LogScaledState
        Unit direction and accumulated log-magnitude at ``t1``.
    """
    if tol < 1e-12:
        raise ValueError("tol must be >= 1e-12")
    tr = ReferenceIntegrator(p, eps, tol, order).run(t0, state0, [t1])
    return LogScaledState.from_xy(tr.x[0], tr.y[0], t1, eps, tr.log[0])


def wronskian(s1: LogScaledState, s2: LogScaledState) -> tuple[float, float]:
    """``x1 y2 - x2 y1`` as ``(unit-direction value, log factor)``."""
    return s1.xhat * s2.yhat - s2.xhat * s1.yhat, s1.log + s2.log


def _series_slope(p, t: float, eps: float, N: int = 6, branch: int = 1) -> float:
    """Optimally truncated slow-manifold slope (falls back to ``h_0``)."""
    s = hyp_riccati_coeffs(p, t, N, branch=branch)
    terms = np.abs(s.coeffs) * eps ** np.arange(s.coeffs.size)
    k = 1
    while k < s.coeffs.size and terms[k] < terms[k - 1]:
        k += 1
    return float(s(eps, k - 1))


def _check_window(p: ProblemSpec, t_start: float, ts: np.ndarray) -> None:
    if np.any(ts < t_start) or np.any(ts >= 0):
        raise WindowError("points must lie in [t_start, 0)")
    mu = p.mu(ts)
    if np.any(mu >= 0):
        raise WindowError("mu must be negative on the hyperbolic window")


def riccati_reference(p: ProblemSpec, eps: float, t, *, t_start: float | None = None,
                      init: str = "critical", tol: float = DEFAULT_TOL):
    """Slope ``y/x`` of the unstable slow manifold at ``t < 0``.

    The Riccati equation ``eps u' = -mu - u^2`` is solved through its
    linearisation: the linear system is integrated forward from
    ``t_start = -nu0`` with ``(x, y) = (1, u0)`` and ``u = y/x``.  Forward
    flow is attracting toward the unstable slow manifold.

    Parameters
    ----------
    init : {"critical", "series"}
        ``u0 = sqrt(-mu(t_start))`` or the optimally truncated series slope.

    Raises
    ------
    WindowError
        If a point is outside ``[t_start, 0)`` or ``mu >= 0`` there.
    RiccatiBlowupError
        If ``x`` vanishes, i.e. ``u`` blew up.
    """
    scalar = np.ndim(t) == 0
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    t_start = -p.nu0 if t_start is None else float(t_start)
    _check_window(p, t_start, ts)
    if p.mu(t_start) >= 0:
        raise WindowError("mu(t_start) must be negative")
    order = np.argsort(ts)
    if init == "series":
        u0 = _series_slope(p, t_start, eps)
    elif init == "critical":
        u0 = math.sqrt(-p.mu(t_start))
    else:
        raise ValueError("init must be 'critical' or 'series'")
    tr = ReferenceIntegrator(p, eps, tol).run(t_start, (1.0, u0), ts[order])
    if tr.nzeros:
        raise RiccatiBlowupError("x changed sign: slope left the slow-manifold basin")
    out = np.empty_like(ts)
    out[order] = tr.y / tr.x
    return float(out[0]) if scalar else out


def wu_reference(p: ProblemSpec, eps: float, ts: Sequence[float], *,
                 t_start: float | None = None, tol: float = DEFAULT_TOL) -> Trajectory:
    """Sample the W^u solution on increasing times ``ts`` (``ts >= t_start``).

    The solution is started at ``t_start`` (default ``-nu0``) on the
    series-initialised unstable slope, then integrated forward.
    """
    ts = np.asarray(ts, dtype=float)
    t_start = -p.nu0 if t_start is None else float(t_start)
    if np.any(np.diff(ts) < 0) or ts[0] < t_start:
        raise ValueError("ts must be increasing and >= t_start")
    try:
        u0 = _series_slope(p, t_start, eps)
    except SeriesDomainError as exc:
        raise WindowError("mu(t_start) must be negative") from exc
    return ReferenceIntegrator(p, eps, tol).run(t_start, (1.0, u0), ts)


class RateFit(NamedTuple):
    slope: float
    half_width: float
    intercept: float


def rate_fit(pairs) -> RateFit:
    """Least-squares slope of ``log(error)`` against ``log(eps)``.

    Parameters
    ----------
    pairs : iterable of (eps, error)
        At least three pairs with positive errors.

    Returns
    -------
    RateFit
        Slope, 95% confidence half-width from the residuals, intercept.
    """
    arr = np.asarray(list(pairs), dtype=float)
    if arr.ndim != 2 or arr.shape[0] < 3 or arr.shape[1] != 2:
        raise ValueError("rate_fit needs at least three (eps, error) pairs")
    if np.any(arr <= 0):
        raise ValueError("eps and error values must be positive")
    x, y = np.log(arr[:, 0]), np.log(arr[:, 1])
    res = stats.linregress(x, y)
    n = x.size
    hw = float(stats.t.ppf(0.975, n - 2) * res.stderr) if n > 2 else math.inf
    return RateFit(float(res.slope), hw, float(res.intercept))


__all__ = [
    "LogScaledState",
    "Trajectory",
    "ReferenceIntegrator",
    "IntegrationError",
    "RiccatiBlowupError",
    "WindowError",
    "integrate",
    "wronskian",
    "riccati_reference",
    "wu_reference",
    "rate_fit",
    "RateFit",
]
