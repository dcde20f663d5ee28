"""Coefficient functions, potential wells, turning points and action integrals.

The model problem is ``eps^2 x'' + mu(t) x = 0`` with a polynomial ``mu``
having a simple zero at ``t = 0`` (``mu(0) = 0``, ``mu'(0) > 0``), written as
the first-order system ``x' = y/eps``, ``y' = -mu(t) x/eps``.  A potential
well ``V`` at energy ``E`` is brought into this form by
``mu(t) = E - V(t + t_-(E))``.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.integrate import quad
from scipy.optimize import brentq

from .series import TaylorJet


class ProblemError(ValueError):
    """Invalid problem data."""


class ActionDomainError(ValueError):
    """``mu`` changes sign inside an action interval."""


class DegenerateWellError(ValueError):
    """No pair of simple turning points (e.g. ``E`` at the well bottom)."""


def _trim(c: Sequence[float]) -> tuple:
    c = [float(v) for v in c]
    while len(c) > 1 and c[-1] == 0.0:
        c.pop()
    return tuple(c) if c else (0.0,)


@dataclass(frozen=True)
class ProblemSpec:
    """Polynomial coefficient function ``mu`` with an explicit neighbourhood.

    Parameters
    ----------
    mu_coeffs : tuple of float
        Ascending coefficients of ``mu``.
    nu0 : float
        Radius of the neighbourhood on which ``mu`` has no zero besides 0.
    v_coeffs, energy, t_shift : optional
        Well data when the problem was built from ``(V, E)``; ``t_shift`` is
        the left turning point ``t_-(E)``.
    strict : bool
        When False the turning-point invariants are not enforced (used for
        surrogate problems such as ``mu = 1`` or unshifted wells).
    """

    mu_coeffs: tuple
    nu0: float = 0.5
    v_coeffs: tuple | None = None
    energy: float | None = None
    t_shift: float = 0.0
    strict: bool = True
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "mu_coeffs", _trim(self.mu_coeffs))
        if self.v_coeffs is not None:
            object.__setattr__(self, "v_coeffs", _trim(self.v_coeffs))
        if not (self.nu0 > 0 and math.isfinite(self.nu0)):
            raise ProblemError("nu0 must be a positive finite number")
        if self.strict:
            self.validate()

    # -- construction ----------------------------------------------------
    @classmethod
    def from_mu(cls, mu_coeffs: Sequence[float], nu0: float = 0.5, **kw) -> "ProblemSpec":
        return cls(tuple(mu_coeffs), nu0, **kw)

    @classmethod
    def from_well(cls, v_coeffs: Sequence[float], energy: float, nu0: float | None = None,
                  **kw) -> "ProblemSpec":
        """``mu(t) = E - V(t + t_-)`` with the left turning point moved to 0."""
        tm, tp = turning_points(v_coeffs, energy)
        shifted = _shift_poly(np.asarray(v_coeffs, dtype=float), tm)
        mu = -shifted
        mu[0] += energy
        mu[0] = 0.0  # exact zero at the shifted turning point
        if nu0 is None:
            nu0 = 0.5 * (tp - tm)
        return cls(tuple(mu), nu0, tuple(v_coeffs), float(energy), tm, **kw)

    # -- evaluation ------------------------------------------------------
    def mu(self, t):
        return P.polyval(t, np.asarray(self.mu_coeffs))

    def dmu(self, t):
        return P.polyval(t, P.polyder(np.asarray(self.mu_coeffs)))

    def mu_hat_coeffs(self) -> np.ndarray:
        c = np.asarray(self.mu_coeffs, dtype=float)
        return c[1:] if c.size > 1 else np.zeros(1)

    def validate(self) -> None:
        """Check ``mu(0) = 0``, ``mu'(0) > 0`` and no other zero in ``|t| <= nu0``."""
        c = np.asarray(self.mu_coeffs, dtype=float)
        scale = max(1.0, float(np.max(np.abs(c))))
        if abs(c[0]) > 1e-14 * scale:
            raise ProblemError("mu(0) must vanish")
        if not (c.size > 1 and c[1] > 0):
            raise ProblemError("mu'(0) must be positive")
        mh = c[1:]
        if mh.size > 1:
            for r in P.polyroots(mh):
                if abs(r.imag) <= 1e-12 * max(1.0, abs(r)) and abs(r.real) <= self.nu0:
                    raise ProblemError(
                        f"mu has a second zero at t={r.real:.6g} inside |t| <= nu0={self.nu0}")

    def to_json(self) -> dict:
        if self.v_coeffs is not None:
            return {"v_poly": list(self.v_coeffs), "energy": self.energy, "nu0": self.nu0}
        return {"mu_poly": list(self.mu_coeffs), "nu0": self.nu0}


@dataclass(frozen=True)
class NormalizationRecord:
    """Scalings relating a problem to its ``mu'(0) = 1`` normal form.

    With ``t = t_scale * tau`` and ``y = y_scale * y_tilde`` the equation
    keeps ``eps`` and ``mu(t) = t_scale**-2 * mu_tilde(t / t_scale)``.
    """

    t_scale: float
    y_scale: float
    original: ProblemSpec

    def denormalize(self, q: ProblemSpec) -> ProblemSpec:
        c = np.asarray(q.mu_coeffs, dtype=float)
        k = np.arange(c.size)
        back = c * self.t_scale ** (-2.0 - k)
        return ProblemSpec(tuple(back), q.nu0 * self.t_scale, strict=False)

    def mu_original(self, q: ProblemSpec, t):
        return self.t_scale ** -2 * q.mu(np.asarray(t) / self.t_scale)


def _shift_poly(c: np.ndarray, a: float) -> np.ndarray:
    """Coefficients of ``p(t + a)``."""
    return TaylorJet.from_poly(c, a, max(c.size - 1, 0)).coeffs.copy()


def mu_jet(p: ProblemSpec, t: float, k: int) -> TaylorJet:
    """Exact jet ``[mu(t), mu'(t), mu''(t)/2, ...]`` of order ``k``."""
    if k < 0:
        raise ValueError("order must be >= 0")
    return TaylorJet.from_poly(p.mu_coeffs, t, k)


def mu_hat(p: ProblemSpec, t):
    """``mu(t)/t``, continuously extended by ``mu'(0)`` at ``t = 0``."""
    return P.polyval(t, p.mu_hat_coeffs())


def normalize(p: ProblemSpec) -> tuple[ProblemSpec, NormalizationRecord]:
    """Rescale ``t`` so that ``mu'(0) = 1`` at fixed ``eps``."""
    c = np.asarray(p.mu_coeffs, dtype=float)
    a = c[1] if c.size > 1 else 0.0
    if not a > 0:
        raise ProblemError("normalize needs mu'(0) > 0")
    if a == 1.0:
        return p, NormalizationRecord(1.0, 1.0, p)
    ts = a ** (-1.0 / 3.0)
    k = np.arange(c.size)
    new = c * ts ** (2.0 + k)
    new[1] = 1.0
    q = ProblemSpec(tuple(new), p.nu0 / ts, strict=p.strict)
    return q, NormalizationRecord(ts, 1.0 / ts, p)


# ---------------------------------------------------------------------------
# action integrals
# ---------------------------------------------------------------------------

_QUAD_KW = dict(epsabs=1e-14, epsrel=1e-13, limit=200)


def _is_root(shifted: np.ndarray, scale: float) -> bool:
    return abs(shifted[0]) <= 1e-10 * scale


def _half_integral(c: np.ndarray, a: float, b: float) -> float:
    """Integral of sqrt|mu| from a to b (a < b) with a possible root at a or b."""
    scale = max(1.0, float(np.max(np.abs(c))))
    out = 0.0
    mid = 0.5 * (a + b)
    for end, lo, hi, sgn in ((a, a, mid, 1.0), (b, mid, b, -1.0)):
        sh = _shift_poly(c, end)
        if _is_root(sh, scale):
            q = sh[1:] if sh.size > 1 else np.zeros(1)
            # s = end + sgn*sigma^2 ; mu = sgn*sigma^2 q(sgn*sigma^2)
            w = math.sqrt(hi - lo)

            def integrand(sig, q=q, sgn=sgn):
                u = sgn * sig * sig
                return 2.0 * sig * sig * math.sqrt(abs(P.polyval(u, q)))

            val, _ = quad(integrand, 0.0, w, **_QUAD_KW)
        else:
            val, _ = quad(lambda s: math.sqrt(abs(P.polyval(s, c))), lo, hi, **_QUAD_KW)
        out += val
    return out


def action(p: ProblemSpec | Sequence[float], a: float, b: float) -> float:
    """``int_a^b sqrt|mu(s)| ds`` with square-root endpoint zeros removed.

    Parameters
    ----------
    p : ProblemSpec or coefficient sequence
    a, b : float
        Limits; ``b < a`` gives the negated integral.

    Raises
    ------
    ActionDomainError
        If ``mu`` changes sign strictly inside the interval.
    """
    c = np.asarray(p.mu_coeffs if isinstance(p, ProblemSpec) else p, dtype=float)
    a, b = float(a), float(b)
    if a == b:
        return 0.0
    if b < a:
        return -action(c, b, a)
    width = b - a
    if c.size > 1:
        for r in P.polyroots(c):
            if abs(r.imag) <= 1e-12 * max(1.0, abs(r)):
                x = r.real
                if a + 1e-9 * width < x < b - 1e-9 * width:
                    d = P.polyval(x, P.polyder(c))
                    mult_even = abs(d) <= 1e-10 * max(1.0, abs(x))
                    if not mult_even:
                        raise ActionDomainError(
                            f"mu changes sign at t={x:.12g} inside ({a}, {b})")
    return _half_integral(c, a, b)


# ---------------------------------------------------------------------------
# wells
# ---------------------------------------------------------------------------


def _well_minimum(v: np.ndarray) -> float:
    dv = P.polyder(v)
    crit = [r.real for r in P.polyroots(dv) if abs(r.imag) < 1e-9] if dv.size > 1 else []
    if not crit:
        crit = [0.0]
    vals = [P.polyval(x, v) for x in crit]
    return float(crit[int(np.argmin(vals))])


def turning_points(v_coeffs: Sequence[float], E: float) -> tuple[float, float]:
    """Simple roots ``t_- < t_+`` of ``V(t) = E`` around the well minimum.

    Raises
    ------
    DegenerateWellError
        If no bracket exists or ``E`` is at the well bottom.
    """
    v = np.asarray(v_coeffs, dtype=float)
    g = v.copy()
    g[0] -= E
    tmin = _well_minimum(v)
    gmin = P.polyval(tmin, g)
    scale = max(1.0, abs(E), float(np.max(np.abs(v))))
    if gmin >= -1e-14 * scale:
        raise DegenerateWellError(f"energy {E} is not above the well bottom {P.polyval(tmin, v)}")
    roots = [r.real for r in P.polyroots(g) if abs(r.imag) <= 1e-7 * max(1.0, abs(r))]
    left = [r for r in roots if r < tmin]
    right = [r for r in roots if r > tmin]
    if not left or not right:
        raise DegenerateWellError("no turning-point bracket around the well minimum")
    dg = P.polyder(g)

    def refine(r0: float, inner: float) -> float:
        d = 1e-6 * (1.0 + abs(r0))
        lo, hi = (r0 - d, min(r0 + d, inner)) if r0 < inner else (max(r0 - d, inner), r0 + d)
        f = lambda x: P.polyval(x, g)
        if f(lo) * f(hi) > 0:
            lo, hi = (min(r0 - 1.0, lo), inner) if r0 < inner else (inner, max(r0 + 1.0, hi))
        x = brentq(f, lo, hi, xtol=1e-15, maxiter=200)
        for _ in range(3):
            dd = P.polyval(x, dg)
            if dd == 0:
                break
            step = f(x) / dd
            x -= step
            if abs(step) < 1e-16 * (1 + abs(x)):
                break
        if abs(P.polyval(x, dg)) <= 1e-9 * scale:
            raise DegenerateWellError("double root: turning point is not simple")
        return float(x)

    return refine(max(left), tmin), refine(min(right), tmin)


# ---------------------------------------------------------------------------
# catalog and JSON
# ---------------------------------------------------------------------------

CATALOG = {
    "airy": {"mu_poly": [0.0, 1.0], "nu0": 0.5},
    "quad": {"mu_poly": [0.0, 1.0, 0.5], "nu0": 1.0},
    "harmonic": {"v_poly": [0.0, 0.0, 1.0], "energy": 1.0},
    "quartic": {"v_poly": [0.0, 0.0, 1.0, 0.0, 0.1], "energy": 1.0},
}


def problem_from_dict(d: dict) -> ProblemSpec:
    """Build a problem from ``{"mu_poly": [...]}`` or ``{"v_poly": [...], "energy": E}``."""
    if not isinstance(d, dict):
        raise ProblemError("problem document must be a JSON object")
    nu0 = d.get("nu0")
    if "mu_poly" in d:
        return ProblemSpec(tuple(float(x) for x in d["mu_poly"]),
                           float(nu0) if nu0 is not None else 0.5)
    if "v_poly" in d:
        if "energy" not in d:
            raise ProblemError("well form needs an energy")
        return ProblemSpec.from_well([float(x) for x in d["v_poly"]], float(d["energy"]),
                                     float(nu0) if nu0 is not None else None)
    raise ProblemError("problem document needs 'mu_poly' or 'v_poly'")


def load_problem(source) -> ProblemSpec:
    """Load a problem from a JSON path, JSON text, dict or catalog name."""
    if isinstance(source, dict):
        return problem_from_dict(source)
    if isinstance(source, str) and source in CATALOG:
        return problem_from_dict(CATALOG[source])
    if isinstance(source, (str, os.PathLike)) and os.path.exists(source):
        with open(source, encoding="utf-8") as fh:
            return problem_from_dict(json.load(fh))
    if isinstance(source, str):
        try:
            return problem_from_dict(json.loads(source))
        except json.JSONDecodeError as exc:
            raise ProblemError(f"cannot read problem {source!r}: {exc}") from exc
    raise ProblemError(f"unsupported problem source {source!r}")


def load_well(source) -> tuple[tuple, dict]:
    """Load well data ``(v_coeffs, extra)`` from a path, JSON text, dict or name."""
    if isinstance(source, str) and source in CATALOG:
        d = CATALOG[source]
    elif isinstance(source, dict):
        d = source
    elif isinstance(source, (str, os.PathLike)) and os.path.exists(source):
        with open(source, encoding="utf-8") as fh:
            d = json.load(fh)
    else:
        try:
            d = json.loads(source)
        except (TypeError, json.JSONDecodeError) as exc:
            raise ProblemError(f"cannot read well {source!r}") from exc
    if "v_poly" not in d:
        raise ProblemError("well document needs 'v_poly'")
    return tuple(float(x) for x in d["v_poly"]), d


__all__ = [
    "ProblemSpec",
    "NormalizationRecord",
    "ProblemError",
    "ActionDomainError",
    "DegenerateWellError",
    "mu_jet",
    "mu_hat",
    "action",
    "turning_points",
    "normalize",
    "CATALOG",
    "problem_from_dict",
    "load_problem",
    "load_well",
]
