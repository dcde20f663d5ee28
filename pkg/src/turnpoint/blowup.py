"""Blowup of the turning point and the per-chart solution formulas.

The blowup ``(y, t, eps) = (r ybar, r^2 tbar, r^3 epsbar)`` is covered by
three directional charts:

=========  ===============  =============================================
chart      coordinates      substitution
=========  ===============  =============================================
Tminus     (x, y1, r1, e1)  y = r1 y1,  t = -r1^2,  eps = r1^3 e1
Escale     (x, y2, t2, r2)  y = r2 y2,  t = r2^2 t2, eps = r2^3
Tplus      (x, y3, r3, e3)  y = r3 y3,  t = r3^2,   eps = r3^3 e3
=========  ===============  =============================================

After division by the common factor ``r`` the vector fields are smooth up to
``r = 0``: a linear saddle in ``Tminus``, the Airy system in ``Escale`` and a
rotation in ``Tplus``.  The module also evaluates the solution formulas of
each chart, the entry-chart quantities ``T_1``, ``A_1`` and the identity
``x_C = B_0 A_1 = sqrt(pi) (Ai - i Bi)(-eps3^{-2/3})``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad, solve_ivp

from .airy import airy_eval, airy_scaled
from .problem import ProblemSpec, action, mu_hat
from .series import b0_coeffs

CHARTS = ("Tminus", "Escale", "Tplus")
DELTA = 0.2
UPSILON = 0.5
_COORD_NAMES = {
    "Tminus": ("x", "y1", "r1", "eps1"),
    "Escale": ("x", "y2", "t2", "r2"),
    "Tplus": ("x", "y3", "r3", "eps3"),
}


class ChartError(ValueError):
    """Invalid chart point, transition outside the overlap, or window violation."""


@dataclass(frozen=True)
class ChartPoint:
    """A point in one of the three charts.

    ``coords`` follows the chart's coordinate order, see ``_COORD_NAMES``.
    """

    chart: str
    coords: tuple

    def __post_init__(self) -> None:
        if self.chart not in CHARTS:
            raise ChartError(f"unknown chart {self.chart!r}")
        c = tuple(float(v) for v in self.coords)
        if len(c) != 4:
            raise ChartError("a chart point has four coordinates")
        object.__setattr__(self, "coords", c)
        if self.chart == "Escale":
            if c[3] < 0:
                raise ChartError("r2 must be >= 0")
        elif c[2] < 0 or c[3] < 0:
            raise ChartError("r and epsbar must be >= 0")

    def __getattr__(self, name):
        names = _COORD_NAMES.get(object.__getattribute__(self, "chart"), ())
        if name in names:
            return self.coords[names.index(name)]
        raise AttributeError(name)

    @property
    def eps(self) -> float:
        """Blown-down ``eps = r^3 epsbar``."""
        c = self.coords
        if self.chart == "Escale":
            return c[3] ** 3
        return c[2] ** 3 * c[3]


def to_physical(cp: ChartPoint) -> tuple[float, float, float, float]:
    """Blow down to ``(x, y, t, eps)``."""
    x, a, b, c = cp.coords
    if cp.chart == "Tminus":
        return x, b * a, -b * b, b**3 * c
    if cp.chart == "Escale":
        return x, c * a, c * c * b, c**3
    return x, b * a, b * b, b**3 * c


def transition(cp: ChartPoint, target: str) -> ChartPoint:
    """Change chart; only ``Tminus <-> Escale`` and ``Escale <-> Tplus`` overlap.

    Raises
    ------
    ChartError
        If the point is not in the overlap of the two charts.
    """
    if target not in CHARTS:
        raise ChartError(f"unknown chart {target!r}")
    if target == cp.chart:
        return cp
    x, a, b, c = cp.coords
    if cp.chart == "Escale":
        y2, t2, r2 = a, b, c
        if target == "Tminus":
            if not t2 < 0:
                raise ChartError("Escale -> Tminus needs t2 < 0")
            s = math.sqrt(-t2)
        else:
            if not t2 > 0:
                raise ChartError("Escale -> Tplus needs t2 > 0")
            s = math.sqrt(t2)
        return ChartPoint(target, (x, y2 / s, r2 * s, s ** -3))
    if target != "Escale":
        raise ChartError(f"{cp.chart} and {target} do not overlap; go through Escale")
    ybar, r, ebar = a, b, c
    if not ebar > 0:
        raise ChartError(f"{cp.chart} -> Escale needs epsbar > 0")
    k = ebar ** (1.0 / 3.0)
    t2 = ebar ** (-2.0 / 3.0)
    if cp.chart == "Tminus":
        t2 = -t2
    return ChartPoint("Escale", (x, ybar / k, t2, r * k))


def desing_field(cp: ChartPoint, p: ProblemSpec) -> tuple[float, float, float, float]:
    """Desingularised vector field in chart coordinates.

    * Tminus: ``(y1, mu_hat(-r1^2) x + e1 y1/2, -r1 e1/2, 3 e1^2/2)``
    * Escale: ``(y2, -t2 mu_hat(r2^2 t2) x, 1, 0)``
    * Tplus:  ``(y3, -mu_hat(r3^2) x - e3 y3/2, r3 e3/2, -3 e3^2/2)``
    """
    x, a, b, c = cp.coords
    if cp.chart == "Tminus":
        y1, r1, e1 = a, b, c
        return (y1, mu_hat(p, -r1 * r1) * x + 0.5 * e1 * y1, -0.5 * r1 * e1, 1.5 * e1 * e1)
    if cp.chart == "Escale":
        y2, t2, r2 = a, b, c
        return (y2, -t2 * mu_hat(p, r2 * r2 * t2) * x, 1.0, 0.0)
    y3, r3, e3 = a, b, c
    return (y3, -mu_hat(p, r3 * r3) * x - 0.5 * e3 * y3, 0.5 * r3 * e3, -1.5 * e3 * e3)


def continue_chart(cp: ChartPoint, p: ProblemSpec, duration: float, rtol: float = 1e-12,
                   atol: float = 1e-14, n_out: int = 50):
    """Integrate the desingularised field for ``duration`` units of chart time.

    Returns
    -------
    list of ChartPoint
        Samples along the trajectory (last entry at the final time).
    """
    def rhs(_s, z):
        return desing_field(ChartPoint(cp.chart, tuple(z)), p)

    ts = np.linspace(0.0, duration, n_out)
    sol = solve_ivp(rhs, (0.0, duration), np.array(cp.coords), method="DOP853",
                    rtol=rtol, atol=atol, t_eval=ts)
    if not sol.success:
        raise ChartError(f"chart continuation failed: {sol.message}")
    return [ChartPoint(cp.chart, tuple(sol.y[:, k])) for k in range(sol.y.shape[1])]


# ---------------------------------------------------------------------------
# chart Tminus
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Chart1Slope:
    """Slope ``y1/x`` on ``W_1^u`` and its pieces.

    ``slope = U1(e1) + U2(r1^2) + e1 U3(r1^2)``; the dropped remainder is of
    size ``u4_scale = r1^2 e1^2`` (constant not modelled).
    """

    slope: float
    U1: float
    U2: float
    U3: float
    u4_scale: float


def chart1_U1(eps1: float) -> float:
    """``U1(e1) = -e1^{1/3} Ai'(z)/Ai(z)`` with ``z = e1^{-2/3}``; ``U1(0) = 1``."""
    if eps1 == 0:
        return 1.0
    z = eps1 ** (-2.0 / 3.0)
    q = airy_scaled(z)
    return -eps1 ** (1.0 / 3.0) * q.aip / q.ai


def chart1_hu(p: ProblemSpec, r1: float, eps1: float, upsilon: float = UPSILON) -> Chart1Slope:
    """Slope of ``W_1^u`` in chart Tminus for ``(r1, e1) in [0, upsilon]^2``."""
    if not (0 <= r1 <= upsilon and 0 <= eps1 <= upsilon):
        raise ChartError(f"(r1, eps1) must lie in [0, {upsilon}]^2")
    s = -r1 * r1
    mh = mu_hat(p, s)
    dmh = np.polyval(np.polyder(np.asarray(p.mu_hat_coeffs())[::-1]), s)
    U1 = chart1_U1(eps1)
    U2 = math.sqrt(mh) - 1.0
    U3 = -0.25 * r1 * r1 * dmh / mh
    return Chart1Slope(U1 + U2 + eps1 * U3, U1, U2, U3, r1 * r1 * eps1 * eps1)


def chart1_riccati(eps1_span: tuple[float, float], u0: float, rtol: float = 1e-11):
    """Integrate the ``r1 = 0`` projective equation ``du/de1 = (1 + e1 u/2 - u^2)/(3 e1^2/2)``."""
    sol = solve_ivp(lambda e, u: (1 + 0.5 * e * u - u * u) / (1.5 * e * e), eps1_span, [u0],
                    method="DOP853", rtol=rtol, atol=1e-13, dense_output=True)
    if not sol.success:
        raise ChartError(sol.message)
    return sol


def _boundary(eps: float, delta: float) -> float:
    return eps ** (2.0 / 3.0) * delta ** (-2.0 / 3.0)


def _j1_piece(p: ProblemSpec, t: float, eps: float) -> tuple[float, float, float]:
    """J1 formula at ``t < 0``: returns scaled ``(x, y)`` and log factor."""
    z = -t * eps ** (-2.0 / 3.0)
    q = airy_scaled(z)
    mh = mu_hat(p, t)
    log = -action(p, t, 0.0) / eps
    x = mh ** -0.25 * q.ai
    y = -eps ** (1.0 / 3.0) * mh ** 0.25 * q.aip
    return x, y, log


def chart1_solution(p: ProblemSpec, r1: float, eps: float, delta: float = DELTA):
    """Chart-Tminus solution ``(x, y1, log)`` with ``(x, r1 y1) e^{log}`` physical.

    ``x = mu_hat^{-1/4} Ai(eps^{-2/3} r1^2) exp(-eps^{-1} int (sqrt(-mu) - s) ds^2)``.
    """
    lo = eps ** (1.0 / 3.0) * delta ** (-1.0 / 3.0)
    if not (lo - 1e-15 <= r1 <= math.sqrt(p.nu0) + 1e-15):
        raise ChartError(f"r1 must lie in [{lo:.6g}, {math.sqrt(p.nu0):.6g}]")
    x, y, log = _j1_piece(p, -r1 * r1, eps)
    return x, y / r1, log


# ---------------------------------------------------------------------------
# chart Escale
# ---------------------------------------------------------------------------


def chart2_solution(p: ProblemSpec, t2: float, r2: float, delta: float = DELTA):
    """Leading-order ``(Ai(-t2), -Ai'(-t2))``; the ``O(r2^2)`` term is not modelled."""
    box = delta ** (-2.0 / 3.0)
    if abs(t2) > box + 1e-12:
        raise ChartError(f"|t2| must be <= {box:.6g}")
    q = airy_eval(-t2)
    return q.ai, -q.aip


# ---------------------------------------------------------------------------
# chart Tplus: B0, T1, A1 and x_C
# ---------------------------------------------------------------------------

_W0 = -0.75j  # late terms b_m ~ K Gamma(m) W0^m (Borel singularity at 4i/3)


@lru_cache(maxsize=8)
def _late_term_law(L: int) -> tuple[float, float]:
    """Fit ``b_m / (Gamma(m) W0^m) = K0 + K1/(m-1)`` on ``m in [L+10, 2L]``."""
    top = max(2 * L, 40)
    b = b0_coeffs(top).coeffs
    ms = np.arange(top // 2 + 10, top + 1)
    r = np.array([(b[m] / (math.gamma(m) * _W0**m)).real for m in ms])
    K1, K0 = np.polyfit(1.0 / (ms - 1), r, 1)
    return float(K0), float(K1)


def _gamma_tail(z: complex, j0: int) -> complex:
    """Borel sum of ``sum_{j >= j0} Gamma(j) z^j`` for purely imaginary ``z``."""
    if j0 < 1:
        raise ValueError("j0 must be >= 1")

    def f(s):
        zs = z * s
        return cmath.exp(-s) * zs**j0 / (s * (1 - zs))

    pts = [0.0, float(j0), np.inf]
    re = im = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        re += quad(lambda s: f(s).real, a, b, limit=200, epsabs=1e-16, epsrel=1e-12)[0]
        im += quad(lambda s: f(s).imag, a, b, limit=200, epsabs=1e-16, epsrel=1e-12)[0]
    return complex(re, im)


@lru_cache(maxsize=512)
def _b0_and_integral(eps3: float, L: int, tail: str) -> tuple[complex, complex]:
    """Optimally truncated ``B0`` and ``int_0^eps3 T12`` (plus Borel tails)."""
    bs = b0_coeffs(L)
    b = bs.coeffs
    mB = bs.optimal_index(eps3, L)
    B0 = complex(bs(eps3, mB - 1))
    it = [abs(b[m]) * eps3 ** (m - 1) / (m - 1) for m in range(2, L + 1)]
    mI = 2 + int(np.argmin(it)) if it else 2
    I = 1j * sum(b[m] * eps3 ** (m - 1) / (m - 1) for m in range(2, mI))
    if tail == "terminant":
        K0, K1 = _late_term_law(L)
        w = _W0 * eps3
        B0 += K0 * _gamma_tail(w, mB) + K1 * w * _gamma_tail(w, mB - 1)
        I += 1j / eps3 * (K0 * w * _gamma_tail(w, mI - 1) + K1 * w * w * _gamma_tail(w, mI - 2))
    elif tail != "none":
        raise ValueError("tail must be 'terminant' or 'none'")
    return B0, complex(I)


def _check_eps3(eps3: float) -> None:
    if not (0 < eps3 <= 0.5):
        raise ChartError("eps3 must lie in (0, 0.5]")


def b0_value(eps3: float, L: int = 20, tail: str = "terminant") -> complex:
    """Optimally truncated ``B0(eps3)`` (with the Borel tail estimate by default)."""
    _check_eps3(eps3)
    return _b0_and_integral(float(eps3), int(L), tail)[0]


def t1(eps3: float, L: int = 20, tail: str = "terminant") -> complex:
    """``T1 = i B0 - eps3/2 = i - eps3/4 + O(eps3^2)``."""
    return 1j * b0_value(eps3, L, tail) - 0.5 * eps3


def a1(eps3: float, L: int = 20, tail: str = "terminant") -> complex:
    """``A1 = eps3^{1/6} e^{i(2/(3 eps3) - pi/4)} exp(-(2/3) int_0^eps3 T12)``.

    ``T12 = (T1 - i + eps3/4)/eps3^2`` is summed from the ``b_m`` series,
    truncated at its smallest term (index capped at ``L``).  With
    ``tail="terminant"`` the remainder is estimated by Borel-summing the
    late-term law ``b_m ~ (K0 Gamma(m) + K1 Gamma(m-1)) (-3i/4)^m`` fitted
    from the coefficients themselves.
    """
    _check_eps3(eps3)
    _, I = _b0_and_integral(float(eps3), int(L), tail)
    return eps3 ** (1.0 / 6.0) * cmath.exp(1j * (2.0 / (3.0 * eps3) - math.pi / 4)) * cmath.exp(
        -2.0 / 3.0 * I)


def xc_yc(eps3: float, L: int = 20, tail: str = "terminant") -> tuple[complex, complex]:
    """``(x_C, y3_C) = (B0 A1, i A1)``.

    These equal ``sqrt(pi) (Ai - i Bi)(-eps3^{-2/3})`` and
    ``-sqrt(pi) eps3^{1/3} (Ai - i Bi)'(-eps3^{-2/3})``.
    """
    A = a1(eps3, L, tail)
    return b0_value(eps3, L, tail) * A, 1j * A


def xc_yc_airy(eps3: float) -> tuple[complex, complex]:
    """The right-hand sides of the ``x_C`` identity from direct Airy evaluation."""
    _check_eps3(eps3)
    q = airy_eval(-eps3 ** (-2.0 / 3.0))
    sp = math.sqrt(math.pi)
    return sp * complex(q.ai, -q.bi), -sp * eps3 ** (1.0 / 3.0) * complex(q.aip, -q.bip)


def _j3_piece(p: ProblemSpec, t: float, eps: float, airy_factor: str = "airy",
              L: int = 20) -> tuple[float, float]:
    """J3 formula at ``t > 0``: physical ``(x, y)``."""
    z = t * eps ** (-2.0 / 3.0)
    mh = mu_hat(p, t)
    theta = (action(p, 0.0, t) - 2.0 / 3.0 * t**1.5) / eps
    rot = cmath.exp(1j * theta)
    if airy_factor == "airy":
        q = airy_eval(-z)
        X = complex(q.ai, -q.bi)
        Xp = complex(q.aip, -q.bip)
        x = mh ** -0.25 * (X * rot).real
        y = -eps ** (1.0 / 3.0) * mh ** 0.25 * (Xp * rot).real
    elif airy_factor == "series":
        e3 = eps / t**1.5
        xc, yc = xc_yc(e3, L)
        sp = math.sqrt(math.pi)
        x = mh ** -0.25 * (xc * rot).real / sp
        y = math.sqrt(t) * mh ** 0.25 * (yc * rot).real / sp
    else:
        raise ValueError("airy_factor must be 'airy' or 'series'")
    return x, y


def chart3_solution(p: ProblemSpec, r3: float, eps: float, L: int = 20, M: int = 4,
                    delta: float = DELTA, airy_factor: str = "airy") -> tuple[float, float]:
    """Chart-Tplus solution ``(x, y3)`` with ``y = r3 y3``.

    ``x = mu_hat(r3^2)^{-1/4} Re[(Ai - i Bi)(-eps3^{-2/3}) e^{i Theta}]`` with
    ``Theta = eps^{-1} int_0^{r3^2} (sqrt(mu) - s) ds^2``.  ``airy_factor``
    selects direct Airy evaluation or the series ``x_C/sqrt(pi)`` (truncation
    cap ``L``); ``M`` is accepted for symmetry with ``chart3_f_series`` and
    is not used by the leading-order formula.
    """
    lo = eps ** (1.0 / 3.0) * delta ** (-1.0 / 3.0)
    if not (lo - 1e-15 <= r3 <= math.sqrt(p.nu0) + 1e-15):
        raise ChartError(f"r3 must lie in [{lo:.6g}, {math.sqrt(p.nu0):.6g}]")
    x, y = _j3_piece(p, r3 * r3, eps, airy_factor, L)
    return x, y / r3


__all__ = [
    "CHARTS",
    "ChartPoint",
    "ChartError",
    "Chart1Slope",
    "to_physical",
    "transition",
    "desing_field",
    "continue_chart",
    "chart1_U1",
    "chart1_hu",
    "chart1_riccati",
    "chart1_solution",
    "chart2_solution",
    "b0_value",
    "t1",
    "a1",
    "xc_yc",
    "xc_yc_airy",
    "chart3_solution",
]
