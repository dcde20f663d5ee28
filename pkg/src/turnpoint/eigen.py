"""Bohr-Sommerfeld energies of a potential well and a shooting reference.

The eigenvalue problem is ``eps^2 x'' = (V(t) - E) x`` with ``x`` decaying
at both ends, i.e. the turning-point equation with ``mu = E - V``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.optimize import brentq

from .problem import ProblemSpec, _well_minimum, action, turning_points
from .reference import ReferenceIntegrator, _series_slope

DEPTH = 18.0  # forbidden-region action/eps at the shooting start
E_MAX = 1e6


class EigenError(RuntimeError):
    """Eigenvalue missed or not bracketed."""


class EnergyList(list):
    """List of energies with a ``truncated`` flag set when the range was exceeded."""

    truncated: bool = False


@dataclass(frozen=True)
class EigenResult:
    n: int
    E_bs: float
    E_ref: float
    gap: float
    eps: float

    @property
    def gap_over_eps(self) -> float:
        return self.gap / self.eps


def _v(v_coeffs) -> np.ndarray:
    v = np.asarray(v_coeffs, dtype=float)
    if v.size < 3 or v[-1] <= 0 or (v.size - 1) % 2:
        raise ValueError("V must be a polynomial of even degree >= 2 with positive leading term")
    return v


def _mu_of(v: np.ndarray, E: float) -> np.ndarray:
    mu = -v.copy()
    mu[0] += E
    return mu


def well_action(v_coeffs, E: float) -> float:
    """``A(E) = int_{t-}^{t+} sqrt(E - V)``."""
    v = _v(v_coeffs)
    tm, tp = turning_points(v, E)
    return action(_mu_of(v, E), tm, tp)


def bs_energies(v_coeffs: Sequence[float], eps: float, n_max: int,
                e_max: float = E_MAX) -> EnergyList:
    """Solve ``A(E)/eps = pi (n + 1/2)`` for ``n = 0..n_max``.

    Returns
    -------
    EnergyList
        Energies in increasing order; ``truncated`` is True if a level lies
        above ``e_max`` (the list then stops early).
    """
    v = _v(v_coeffs)
    if not eps > 0:
        raise ValueError("eps must be positive")
    vmin = float(P.polyval(_well_minimum(v), v))
    out = EnergyList()
    lo = vmin
    for n in range(n_max + 1):
        target = eps * math.pi * (n + 0.5)
        f = lambda E: well_action(v, E) - target
        step = max(eps, 1e-3)
        a = lo if lo > vmin else vmin + 1e-12 * max(1.0, abs(vmin))
        b = a + step
        while f(b) < 0:
            a, b = b, b + step
            step *= 2
            if b > e_max:
                out.truncated = True
                return out
        fa = f(a)
        if fa > 0:
            raise EigenError("action is not increasing in E")
        E = brentq(f, a, b, xtol=1e-15, maxiter=300)
        out.append(E)
        lo = E
    return out


# ---------------------------------------------------------------------------
# shooting reference
# ---------------------------------------------------------------------------


def _start_point(mu: np.ndarray, turn: float, eps: float, direction: float) -> float:
    """Point beyond ``turn`` where the forbidden action reaches ``DEPTH * eps``."""
    need = DEPTH * eps
    d = max(0.05, eps ** (2.0 / 3.0))
    while abs(action(mu, turn, turn + direction * d)) < need:
        d *= 2.0
    g = lambda s: abs(action(mu, turn, turn + direction * s)) - need
    return turn + direction * brentq(g, 1e-6 * d, d, xtol=1e-12)


class _Shooter:
    """Left and right decaying solutions for one energy."""

    def __init__(self, v: np.ndarray, eps: float, tol: float):
        self.v, self.eps, self.tol = v, eps, tol
        self.tmin = _well_minimum(v)

    def _setup(self, E: float):
        v, eps = self.v, self.eps
        mu = _mu_of(v, E)
        tm, tp = turning_points(v, E)
        spec = ProblemSpec(tuple(mu), 1.0, strict=False)
        tl = _start_point(mu, tm, eps, -1.0)
        tr = _start_point(mu, tp, eps, 1.0)
        return mu, spec, tl, tr, tp

    def shoot(self, E: float):
        """Phase angles of the left and right solutions at the well minimum."""
        v, eps = self.v, self.eps
        mu, spec, tl, tr, _ = self._setup(E)
        left = ReferenceIntegrator(mu, eps, self.tol).run(
            tl, (1.0, _series_slope(spec, tl, eps, branch=1)), [self.tmin])
        right = ReferenceIntegrator(mu, eps, self.tol).run(
            tr, (1.0, _series_slope(spec, tr, eps, branch=-1)), [self.tmin])
        s = math.sqrt(max(E - P.polyval(self.tmin, v), 1e-300))
        a = math.atan2(left.y[0] / s, left.x[0])
        b = math.atan2(right.y[0] / s, right.x[0])
        return a, b

    def zero_count(self, E: float) -> int:
        """Zeros of the left solution between its start and the right turning point."""
        mu, spec, tl, _, tp = self._setup(E)
        tr = ReferenceIntegrator(mu, self.eps, self.tol, max_phase=1.0).run(
            tl, (1.0, _series_slope(spec, tl, self.eps, branch=1)), [tp])
        return tr.nzeros

    def mismatch(self, E: float) -> float:
        a, b = self.shoot(E)
        return math.sin(b - a)


def _one_level(v, eps, n, guess, tol):
    sh = _Shooter(v, eps, tol)
    vmin = float(P.polyval(sh.tmin, v))
    for widen in (1.0, 1.5, 2.0, 3.0):
        lo = max(guess - widen * eps, vmin + 1e-9 * max(1.0, eps))
        hi = guess + widen * eps
        flo, fhi = sh.mismatch(lo), sh.mismatch(hi)
        if flo * fhi > 0:
            continue
        E = brentq(sh.mismatch, lo, hi, xtol=tol * max(1.0, abs(guess)), maxiter=200)
        if sh.zero_count(E) == n:
            return E
    raise EigenError(f"level n={n} not found near {guess} (oscillation count mismatch)")


def _threads(threads: int | None) -> int:
    if threads is None:
        threads = int(os.environ.get("TURNPOINT_THREADS", "1") or 1)
    return max(1, int(threads))


def reference_energies(v_coeffs: Sequence[float], eps: float, n_max: int, tol: float = 1e-12,
                       threads: int | None = None, guesses: Sequence[float] | None = None
                       ) -> list[float]:
    """Eigenvalues by bidirectional shooting.

    Decaying solutions are started on the Riccati slow-manifold slopes deep
    in both forbidden regions and integrated to the well minimum; the
    direction mismatch ``sin(theta_R - theta_L)`` is driven to zero by
    Brent's method on ``[E_bs - eps, E_bs + eps]`` (widened on failure).
    Each root is accepted only if the solution has exactly ``n`` zeros.

    Raises
    ------
    EigenError
        If a level cannot be bracketed or its zero count is wrong.
    """
    v = _v(v_coeffs)
    if guesses is None:
        guesses = bs_energies(v, eps, n_max)
        if len(guesses) < n_max + 1:
            raise EigenError("Bohr-Sommerfeld seeds left the energy range")
    work = [(v, eps, n, float(guesses[n]), tol) for n in range(n_max + 1)]
    nthreads = _threads(threads)
    if nthreads == 1:
        return [_one_level(*w) for w in work]
    with ThreadPoolExecutor(nthreads) as ex:
        return list(ex.map(lambda w: _one_level(*w), work))


def eigen_table(v_coeffs: Sequence[float], eps: float, n_max: int, tol: float = 1e-12,
                threads: int | None = None) -> list[EigenResult]:
    """Bohr-Sommerfeld and shooting energies side by side."""
    bs = bs_energies(v_coeffs, eps, n_max)
    if bs.truncated:
        raise EigenError("Bohr-Sommerfeld energies left the configured range")
    ref = reference_energies(v_coeffs, eps, n_max, tol, threads, guesses=bs)
    return [EigenResult(n, a, b, abs(a - b), float(eps)) for n, (a, b) in enumerate(zip(bs, ref))]


__all__ = [
    "EigenError",
    "EigenResult",
    "EnergyList",
    "well_action",
    "bs_energies",
    "reference_energies",
    "eigen_table",
]
