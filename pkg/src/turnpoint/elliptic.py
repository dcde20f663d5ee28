"""The oscillatory side ``t > 0``: quasi-diagonalisation and Liouville-Green.

With ``lam = i sqrt(mu)`` and ``f_N = sum_{n<=N} R_n eps^n`` the change of
basis ``(x, y) = T (u, v)``, ``T = [[f_N, conj f_N], [lam, -lam]]``, makes the
system diagonal up to ``O(eps^{N+1})``; ``u`` then evolves with
``eps u' = nu_N u`` where ``nu_N = lam f_N - eps lam^{-1} lam'``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_legendre

from .hyperbolic import TurningRegionError
from .problem import ProblemSpec, action
from .series import ell_riccati_coeffs, nu_series

_GL_NODES = 24


@dataclass(frozen=True)
class OscState:
    """Oscillatory state: complex amplitudes ``(u, v)`` and the real ``(x, y)``."""

    t: float
    eps: float
    u: complex
    v: complex
    x: float
    y: float


@dataclass(frozen=True)
class Diagonalization:
    T: np.ndarray
    Tinv: np.ndarray
    f: complex
    lam: complex


def diagonalize(p: ProblemSpec, t: float, eps: float, N: int = 1) -> Diagonalization:
    """Matrix ``[[f_N, conj f_N], [lam, -lam]]`` and its inverse at ``t``."""
    R = ell_riccati_coeffs(p, t, max(N, 1))
    f = complex(R(eps, N))
    lam = 1j * math.sqrt(p.mu(t))
    T = np.array([[f, f.conjugate()], [lam, -lam]], dtype=complex)
    det = -2.0 * lam * f.real
    if det == 0:
        raise ZeroDivisionError("singular diagonalisation (Re f = 0)")
    Tinv = np.array([[-lam, -f.conjugate()], [-lam, f]], dtype=complex) / det
    return Diagonalization(T, Tinv, f, lam)


def _nu_tail_integral(p: ProblemSpec, t0: float, t: float, eps: float, N: int) -> complex:
    """``sum_{n=2}^N eps^{n-1} int_{t0}^t nu_n`` by Gauss-Legendre quadrature."""
    if N < 2:
        return 0j
    x, w = roots_legendre(_GL_NODES)
    mid, half = 0.5 * (t + t0), 0.5 * (t - t0)
    tot = 0j
    for xi, wi in zip(x, w):
        nu = nu_series(p, mid + half * xi, N).coeffs
        tot += wi * sum(nu[n] * eps ** (n - 1) for n in range(2, N + 1))
    return tot * half


def lg_propagate(p: ProblemSpec, t0: float, state0, t: float, eps: float, N: int = 1) -> OscState:
    """Liouville-Green propagation of a real state from ``t0`` to ``t``.

    The ``u`` amplitude is multiplied by ``exp(eps^{-1} int nu_N)``:
    phase ``eps^{-1} int sqrt(mu)``, amplitude ``(mu(t0)/mu(t))^{1/4}`` and,
    for ``N >= 2``, the higher-order exponent by quadrature.  The
    ``O(eps^{N+1})`` coupling is dropped.

    Parameters
    ----------
    state0 : (x0, y0) or OscState

    Raises
    ------
    TurningRegionError
        If the interval touches ``t <= 0`` or ``mu`` vanishes on it.
    """
    if min(t0, t) <= 0:
        raise TurningRegionError("lg_propagate needs an interval inside t > 0")
    a, b = sorted((t0, t))
    grid = np.linspace(a, b, 33)
    if np.any(p.mu(grid) <= 0):
        raise TurningRegionError("mu must be positive on the propagation interval")
    if isinstance(state0, OscState):
        x0, y0 = state0.x, state0.y
    else:
        x0, y0 = (float(v) for v in state0)
    D0 = diagonalize(p, t0, eps, N)
    u0, v0 = D0.Tinv @ np.array([x0, y0], dtype=complex)
    if t == t0:
        return OscState(t, eps, complex(u0), complex(v0), float(x0), float(y0))
    phase = action(p, t0, t) / eps
    amp = (p.mu(t0) / p.mu(t)) ** 0.25
    extra = _nu_tail_integral(p, t0, t, eps, N)
    g = amp * np.exp(1j * phase + extra)
    gv = amp * np.exp(-1j * phase + np.conj(extra))
    u, v = u0 * g, v0 * gv
    D = diagonalize(p, t, eps, N)
    x, y = D.T @ np.array([u, v])
    return OscState(float(t), float(eps), complex(u), complex(v), float(x.real), float(y.real))


def adiabatic_invariant(p: ProblemSpec, t: float, x: float, y: float) -> float:
    """``sqrt(mu) x^2 + y^2/sqrt(mu)``."""
    s = math.sqrt(p.mu(t))
    return s * x * x + y * y / s


__all__ = ["OscState", "Diagonalization", "diagonalize", "lg_propagate", "adiabatic_invariant"]
