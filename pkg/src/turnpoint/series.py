"""Truncated jets and the formal-series recursions of the turning-point problem.

Two carriers are used throughout:

``TaylorJet``
    Truncated Taylor coefficients ``c_j = f^(j)(t*)/j!`` of a scalar function
    at a base point.  Ring operations, division, square roots and
    differentiation are exact for polynomials up to the truncation order, so
    recursions that need repeated t-derivatives are computed without finite
    differences.

``EpsSeries``
    Coefficients of a formal power series in the small parameter at a fixed
    evaluation point (slopes ``h_n``, elliptic ``R_n``, ``b_m``, ``nu_n``).

The recursions implemented here are

* the hyperbolic slow-manifold slope ``h = sum h_n eps^n`` of
  ``eps h' = -mu - h^2`` on ``mu < 0``;
* the elliptic quasi-diagonalisation ``f = sum R_n eps^n`` of
  ``eps f' = lam (1 - f^2) + eps lam^{-1} lam' f`` with ``lam = i sqrt(mu)``;
* the entry-chart family ``R_m(s)`` in ``s = r^2`` and the centre-manifold
  series ``B_0(eps3)`` together with the double series ``c_{l,m}`` of
  ``f_3(s, eps3) = sum_l B_l(eps3) s^l``;
* the even/odd identity between odd and even parts of ``nu``;
* a Gevrey-1 growth fit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numpy.polynomial import polynomial as P


class SeriesDomainError(ValueError):
    """Raised when a recursion is evaluated on the wrong side of the turning point."""


# ---------------------------------------------------------------------------
# TaylorJet
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TaylorJet:
    """Truncated Taylor expansion ``sum_j coeffs[j] (t - base)^j``.

    Parameters
    ----------
    base : float
        Expansion point ``t*``.
    coeffs : array_like
        ``coeffs[j] = f^(j)(t*)/j!``; real or complex.
    """

    base: float
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        c = np.atleast_1d(np.asarray(self.coeffs))
        if c.ndim != 1 or c.size == 0:
            raise ValueError("jet coefficients must be a non-empty 1-d array")
        if not np.iscomplexobj(c):
            c = c.astype(float)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "base", float(self.base))

    # constructors -------------------------------------------------------
    @classmethod
    def constant(cls, value, base: float, order: int) -> "TaylorJet":
        c = np.zeros(order + 1, dtype=np.result_type(value, float))
        c[0] = value
        return cls(base, c)

    @classmethod
    def variable(cls, base: float, order: int) -> "TaylorJet":
        """Jet of the identity function ``t`` at ``base``."""
        c = np.zeros(order + 1)
        c[0] = base
        if order >= 1:
            c[1] = 1.0
        return cls(base, c)

    @classmethod
    def from_poly(cls, poly: Sequence[float], base: float, order: int) -> "TaylorJet":
        """Exact jet of the polynomial ``sum poly[k] t^k`` at ``base``."""
        p = np.asarray(poly, dtype=float)
        c = np.zeros(order + 1)
        d = p
        fact = 1.0
        for j in range(order + 1):
            if d.size == 0:
                break
            c[j] = P.polyval(base, d) / fact
            d = P.polyder(d) if d.size > 1 else np.zeros(0)
            fact *= j + 1
        return cls(base, c)

    # basic properties ---------------------------------------------------
    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    @property
    def value(self):
        return self.coeffs[0]

    def derivative_values(self) -> np.ndarray:
        """Return ``f^(j)(t*)`` for ``j = 0..order``."""
        fact = np.array([math.factorial(j) for j in range(self.order + 1)], dtype=float)
        return self.coeffs * fact

    def truncate(self, order: int) -> "TaylorJet":
        return TaylorJet(self.base, self.coeffs[: order + 1].copy())

    def __call__(self, dt):
        """Evaluate the truncated polynomial at ``base + dt``."""
        return P.polyval(dt, self.coeffs)

    def __repr__(self) -> str:
        return f"TaylorJet(base={self.base!r}, coeffs={self.coeffs!r})"

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, TaylorJet):
            if other.base != self.base:
                raise ValueError("jets at different base points")
            n = min(self.order, other.order)
            return self.coeffs[: n + 1], other.coeffs[: n + 1]
        return self.coeffs, None

    def __add__(self, other):
        a, b = self._coerce(other)
        if b is None:
            c = a.astype(np.result_type(a, other), copy=True)
            c[0] += other
            return TaylorJet(self.base, c)
        return TaylorJet(self.base, a + b)

    __radd__ = __add__

    def __neg__(self):
        return TaylorJet(self.base, -self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._coerce(other)
        if b is None:
            return TaylorJet(self.base, a * other)
        n = a.size
        return TaylorJet(self.base, np.convolve(a, b)[:n])

    __rmul__ = __mul__

    def reciprocal(self) -> "TaylorJet":
        b = self.coeffs
        if b[0] == 0:
            raise ZeroDivisionError("jet with zero constant term is not invertible")
        q = np.zeros_like(b, dtype=np.result_type(b, float))
        q[0] = 1.0 / b[0]
        for k in range(1, b.size):
            q[k] = -np.dot(b[1 : k + 1], q[k - 1 :: -1][:k]) / b[0]
        return TaylorJet(self.base, q)

    def __truediv__(self, other):
        if isinstance(other, TaylorJet):
            return self * other.reciprocal()
        return TaylorJet(self.base, self.coeffs / other)

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def deriv(self) -> "TaylorJet":
        """Jet of ``f'`` (one order lower)."""
        if self.order == 0:
            return TaylorJet(self.base, np.zeros(1, dtype=self.coeffs.dtype))
        k = np.arange(1, self.order + 1)
        return TaylorJet(self.base, self.coeffs[1:] * k)

    def sqrt(self) -> "TaylorJet":
        return jet_sqrt(self)


def jet_sqrt(j: TaylorJet) -> TaylorJet:
    """Square root of a real jet with positive constant term.

    Examples
    --------
    >>> jet_sqrt(TaylorJet(0.0, [1.0, 1.0, 0.0])).coeffs
    array([ 1.   ,  0.5  , -0.125])
    """
    c = j.coeffs
    if np.iscomplexobj(c) or not c[0] > 0:
        raise SeriesDomainError("jet_sqrt needs a real jet with positive constant term")
    s = np.zeros_like(c)
    s[0] = math.sqrt(c[0])
    for k in range(1, c.size):
        acc = np.dot(s[1:k], s[k - 1 : 0 : -1]) if k > 1 else 0.0
        s[k] = (c[k] - acc) / (2.0 * s[0])
    return TaylorJet(j.base, s)


def _log1p_series(w: list) -> list:
    """Coefficients of ``log(1 + w(eps))`` for ``w = sum_{k>=1} w[k] eps^k``.

    Entries of ``w`` may be jets or scalars; ``w[0]`` is ignored.
    """
    n = len(w) - 1
    L = [0 * w[0]] * (n + 1)
    for k in range(1, n + 1):
        acc = k * w[k]
        for j in range(1, k):
            acc = acc - j * L[j] * w[k - j]
        L[k] = acc / k
    return L


# ---------------------------------------------------------------------------
# EpsSeries
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class EpsSeries:
    """Formal power series ``sum_m coeffs[m] eps^m`` at a fixed point.

    Attributes
    ----------
    coeffs : ndarray
        Coefficients (complex or real).
    point : float or None
        Evaluation point in ``t`` (or ``s = r^2``) the coefficients belong to.
    jets : list of TaylorJet or None
        Optional jets of each coefficient about ``point``.
    """

    coeffs: np.ndarray
    point: float | None = None
    jets: list | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", np.atleast_1d(np.asarray(self.coeffs)))

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    def __len__(self) -> int:
        return self.coeffs.size

    def __getitem__(self, m):
        return self.coeffs[m]

    def __call__(self, eps, order: int | None = None):
        """Horner evaluation of the truncation at ``order`` (default: all)."""
        c = self.coeffs if order is None else self.coeffs[: order + 1]
        acc = 0 * c[-1]
        for cm in c[::-1]:
            acc = acc * eps + cm
        return acc

    def optimal_index(self, eps: float, cap: int | None = None) -> int:
        """Index ``m* >= 1`` of the smallest term ``|c_m| eps^m`` for ``m <= cap``.

        The optimally truncated sum keeps the terms ``m < m*``.
        """
        top = self.order if cap is None else min(cap, self.order)
        mags = [abs(self.coeffs[m]) * eps**m for m in range(top + 1)]
        return min(range(1, top + 1), key=lambda m: mags[m])


# ---------------------------------------------------------------------------
# hyperbolic side
# ---------------------------------------------------------------------------


def _mu_poly(p) -> np.ndarray:
    return np.asarray(p.mu_coeffs, dtype=float)


def _hyp_jets(mu: np.ndarray, t: float, N: int, extra: int = 0, branch: int = 1) -> list:
    order = N + extra
    mj = TaylorJet.from_poly(mu, t, order)
    if not mj.value < 0:
        raise SeriesDomainError(f"hyperbolic recursion needs mu(t) < 0, got mu({t})={mj.value}")
    h0 = jet_sqrt(-mj) * float(branch)
    h = [h0]
    two_h0 = 2.0 * h0
    for n in range(1, N + 1):
        acc = h[n - 1].deriv()
        for i in range(1, n):
            acc = acc + h[i] * h[n - i]
        h.append(-(acc / two_h0))
    return h


def hyp_riccati_coeffs(p, t: float, N: int, *, branch: int = 1) -> EpsSeries:
    """Coefficients ``h_0..h_N`` of the slow-manifold slope on ``mu < 0``.

    Solves ``eps h' = -mu - h^2`` order by order:
    ``h_0 = +-sqrt(-mu)``, ``h_n = -(h_{n-1}' + sum_{i+j=n} h_i h_j)/(2 h_0)``.

    Parameters
    ----------
    p : ProblemSpec
    t : float
        Point with ``mu(t) < 0``.
    N : int
        Truncation order (>= 1).
    branch : {1, -1}
        ``+1`` selects the unstable (forward-growing) slope, ``-1`` the
        stable one.

    Raises
    ------
    SeriesDomainError
        If ``mu(t) >= 0``.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    jets = _hyp_jets(_mu_poly(p), t, N, extra=1, branch=branch)
    return EpsSeries(np.array([j.value for j in jets]), t, jets)


def hyp_riccati_residual(p, t: float, eps: float, N: int) -> float:
    """Residual ``eps h_N' + mu + h_N^2`` of the truncated slope at ``t``."""
    s = hyp_riccati_coeffs(p, t, N)
    h = sum(j.coeffs[0] * eps**n for n, j in enumerate(s.jets))
    dh = sum(j.coeffs[1] * eps**n for n, j in enumerate(s.jets))
    mu = P.polyval(t, _mu_poly(p))
    return float(eps * dh + mu + h * h)


# ---------------------------------------------------------------------------
# elliptic side
# ---------------------------------------------------------------------------


def _lambda_jet(mu: np.ndarray, t: float, order: int) -> TaylorJet:
    mj = TaylorJet.from_poly(mu, t, order)
    if not mj.value > 0:
        raise SeriesDomainError(f"elliptic recursion needs mu(t) > 0, got mu({t})={mj.value}")
    return 1j * jet_sqrt(mj)


def _ell_jets(mu: np.ndarray, t: float, N: int, extra: int = 0):
    order = N + extra
    lam = _lambda_jet(mu, t, order)
    inv_lam = lam.reciprocal()
    dlam = lam.deriv()
    g = 0.5 * inv_lam * inv_lam * dlam
    R = [TaylorJet.constant(1.0 + 0j, t, order)]
    for n in range(1, N + 1):
        acc = g * R[n - 1] - 0.5 * inv_lam * R[n - 1].deriv()
        for l in range(1, n):
            acc = acc - 0.5 * R[l] * R[n - l]
        R.append(acc)
    return lam, R


def ell_riccati_coeffs(p, t: float, N: int) -> EpsSeries:
    """Coefficients ``R_0..R_N`` of the elliptic quasi-diagonalisation.

    ``f = sum R_n eps^n`` solves ``eps f' = lam (1 - f^2) + eps lam^{-1} lam' f``
    with ``lam = i sqrt(mu)``; ``R_0 = 1`` and

    ``R_n = -1/2 sum_{l=1}^{n-1} R_l R_{n-l} - 1/2 lam^{-1} R_{n-1}'
    + 1/2 lam^{-2} lam' R_{n-1}``.

    Raises
    ------
    SeriesDomainError
        If ``mu(t) <= 0``.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    _, R = _ell_jets(_mu_poly(p), t, N, extra=1)
    return EpsSeries(np.array([r.value for r in R], dtype=complex), t, R)


def ell_riccati_residual(p, t: float, eps: float, N: int) -> complex:
    """Residual of the truncated ``f_N`` in its defining Riccati equation."""
    lam, R = _ell_jets(_mu_poly(p), t, N, extra=1)
    f = sum(r.coeffs[0] * eps**n for n, r in enumerate(R))
    df = sum(r.coeffs[1] * eps**n for n, r in enumerate(R))
    l0, l1 = lam.coeffs[0], lam.coeffs[1]
    return complex(eps * df - l0 * (1 - f * f) - eps * (l1 / l0) * f)


def _nu_jets(mu: np.ndarray, t: float, N: int, extra: int = 0) -> list:
    lam, R = _ell_jets(mu, t, N, extra=extra)
    nu = [lam * R[n] for n in range(N + 1)]
    if N >= 1:
        nu[1] = nu[1] - lam.deriv() / lam.truncate(lam.order - 1)
    return nu


def nu_series(p, t: float, N: int) -> EpsSeries:
    """Coefficients of ``nu_N = lam f_N - eps lam^{-1} lam'``.

    ``nu_0 = lam``, ``nu_1 = -1/2 lam^{-1} lam'`` and ``nu_n = lam R_n`` for
    ``n >= 2``.
    """
    jets = _nu_jets(_mu_poly(p), t, N, extra=1)
    return EpsSeries(np.array([j.value for j in jets], dtype=complex), t, jets)


def even_odd_check(p, t: float, N: int) -> np.ndarray:
    """Per-order residuals of the even/odd identity for ``nu``.

    For odd ``k = 2n+1`` compares ``nu_k`` with ``-1/2 d/dt`` of the
    ``eps^{2n}`` coefficient of ``log(nu_even)``; even orders carry no odd
    content and report 0.

    Returns
    -------
    ndarray
        ``res[k]`` for ``k = 0..N``.
    """
    nu = _nu_jets(_mu_poly(p), t, N, extra=2)
    lam = nu[0]
    # w = nu_even/lam - 1 as a series in eps with jet coefficients
    w = [0 * lam] * (N + 1)
    for k in range(2, N + 1, 2):
        w[k] = nu[k] / lam
    L = _log1p_series(w)
    res = np.zeros(N + 1)
    for k in range(1, N + 1, 2):
        if k == 1:
            rhs = -0.5 * (lam.deriv() / lam.truncate(lam.order - 1)).value
        else:
            rhs = -0.5 * L[k - 1].deriv().value
        res[k] = abs(nu[k].value - rhs)
    return res


# ---------------------------------------------------------------------------
# entry-chart series
# ---------------------------------------------------------------------------


def b0_coeffs(L: int) -> EpsSeries:
    """Coefficients ``b_0..b_L`` of the formal centre-manifold series ``B_0``.

    ``B_0`` solves ``(3/2) eps^2 B_0' = i (B_0^2 - 1) - eps B_0 / 2`` with
    ``B_0(0) = 1``; matching powers of ``eps`` gives
    ``2 i b_m = (3/2)(m-1) b_{m-1} + b_{m-1}/2 - i sum_{l=1}^{m-1} b_l b_{m-l}``.
    """
    if L < 1:
        raise ValueError("L must be >= 1")
    b = np.zeros(L + 1, dtype=complex)
    b[0] = 1.0
    for m in range(1, L + 1):
        s = np.dot(b[1:m], b[m - 1 : 0 : -1]) if m > 1 else 0.0
        b[m] = (1.5 * (m - 1) * b[m - 1] + 0.5 * b[m - 1] - 1j * s) / 2j
    return EpsSeries(b, 0.0)


def b0_residual(coeffs: EpsSeries, eps: float) -> complex:
    """Residual of the truncated ``B_0`` series in its defining equation."""
    c = coeffs.coeffs
    B = coeffs(eps)
    dB = sum(m * c[m] * eps ** (m - 1) for m in range(1, c.size))
    return complex(1.5 * eps**2 * dB - 1j * (B * B - 1) + 0.5 * eps * B)


def _mu_hat_poly(p) -> np.ndarray:
    mu = _mu_poly(p)
    if abs(mu[0]) > 0:
        raise SeriesDomainError("mu(0) must vanish for the entry-chart series")
    return mu[1:] if mu.size > 1 else np.zeros(1)


def _chart3_R_jets(mh: np.ndarray, s0: float, M: int, order: int) -> tuple:
    """Family ``R_m(s)`` of the entry-chart recursion as jets at ``s0``."""
    mj = TaylorJet.from_poly(mh, s0, order)
    if not mj.value > 0:
        raise SeriesDomainError("mu_hat must be positive at s")
    lam3 = 1j * jet_sqrt(mj)
    inv = lam3.reciprocal()
    svar = TaylorJet.variable(s0, order)
    g = 0.5 * (1.0 + 2.0 * svar * inv * lam3.deriv())
    R = [TaylorJet.constant(1.0 + 0j, s0, order)]
    for m in range(1, M + 1):
        prev = R[m - 1]
        acc = 0.75 * (m - 1) * inv * prev - 0.5 * inv * svar * prev.deriv() + 0.5 * inv * g * prev
        for l in range(1, m):
            acc = acc - 0.5 * R[l] * R[m - l]
        R.append(acc)
    return lam3, g, R


def chart3_R_coeffs(p, s: float, M: int) -> EpsSeries:
    """Values ``R_0(s)..R_M(s)`` of the entry-chart ``eps3``-family."""
    _, _, R = _chart3_R_jets(_mu_hat_poly(p), s, M, M + 1)
    return EpsSeries(np.array([r.value for r in R]), s, R)


def chart3_double_series(p, L: int, K: int) -> np.ndarray:
    """Coefficients ``c[l, m]`` of ``f_3 = sum c[l,m] s^l eps3^m``.

    Obtained by matching the entry-chart equation order by order in ``s``;
    for each ``(l, m)`` the unknown enters linearly through ``2 lam_0 c[l,m]``.
    Row ``l = 0`` reproduces ``b0_coeffs``.
    """
    mh = _mu_hat_poly(p)
    mj = TaylorJet.from_poly(mh, 0.0, L)
    if not mj.value > 0:
        raise SeriesDomainError("mu_hat(0) must be positive")
    lam = (1j * jet_sqrt(mj)).coeffs
    # g(s) = 1/2 + s mu_hat'/(2 mu_hat)
    svar = TaylorJet.variable(0.0, L - 1)
    gj = 0.5 + svar * mj.deriv() / (2.0 * mj.truncate(L - 1))
    gc = np.zeros(L, dtype=complex)
    gc[: min(L, gj.coeffs.size)] = gj.coeffs[:L]
    lamc = np.zeros(L, dtype=complex)
    lamc[: min(L, lam.size)] = lam[:L]
    c = np.zeros((L, K + 1), dtype=complex)
    c[0, 0] = 1.0

    def prod(a: int, m: int) -> complex:
        # coefficient of s^a eps3^m in f^2, using current table
        tot = 0j
        for a1 in range(a + 1):
            tot += np.dot(c[a1, : m + 1], c[a - a1, m::-1])
        return tot

    for m in range(1, K + 1):
        for l in range(L):
            lhs = (l - 1.5 * (m - 1)) * c[l, m - 1]
            rhs = 0j
            for k in range(l + 1):
                rhs -= lamc[k] * prod(l - k, m)
                rhs += gc[k] * c[l - k, m - 1]
            # c[l, m] is still zero, so prod omitted the 2 c[l,m] term
            c[l, m] = (rhs - lhs) / (2.0 * lamc[0])
    return c


class Chart3Series:
    """Quasi-solution ``f_N(s, eps3)`` of the entry-chart diagonalisation.

    ``f_N = sum_{l<L} B_l(eps3) s^l + sum_{m<M} (R_m(s) - T_{L-1}[R_m](s)) eps3^m``
    where ``B_l`` are summed from the double series (optimal truncation,
    capped at ``K``) and ``T_{L-1}`` is the Taylor polynomial in ``s``.
    """

    def __init__(self, p, r: float, L: int, M: int, K: int = 20):
        if L < 1 or M < 1:
            raise ValueError("L and M must be >= 1")
        self.r = float(r)
        self.s = self.r * self.r
        self.L, self.M, self.K = int(L), int(M), int(K)
        self.c = chart3_double_series(p, self.L, max(self.K, self.M))
        lam3, g, R = _chart3_R_jets(_mu_hat_poly(p), self.s, self.M, self.M + 1)
        self._lam = lam3.coeffs[0]
        self._g = g.coeffs[0]
        self._R = np.array([r_.coeffs[0] for r_ in R[: self.M]])
        self._dR = np.array([r_.coeffs[1] for r_ in R[: self.M]])
        self._b0 = EpsSeries(self.c[0])

    def _terms(self, eps3: float):
        s, L, M = self.s, self.L, self.M
        cut = self._b0.optimal_index(eps3, self.K) if eps3 > 0 else 1
        cut = max(cut, M)
        sp = s ** np.arange(L)
        dsp = np.concatenate([[0.0], np.arange(1, L) * s ** np.arange(L - 1)])
        ep = eps3 ** np.arange(cut)
        dep = np.concatenate([[0.0], np.arange(1, cut) * eps3 ** np.arange(cut - 1)])
        C = self.c[:, :cut]
        f = sp @ C @ ep
        fs = dsp @ C @ ep
        fe = sp @ C @ dep
        CM = self.c[:, :M]
        tay = sp @ CM
        dtay = dsp @ CM
        em = ep[:M] if cut >= M else eps3 ** np.arange(M)
        dem = dep[:M] if cut >= M else np.concatenate([[0.0], np.arange(1, M) * eps3 ** np.arange(M - 1)])
        f += np.dot(self._R - tay, em)
        fs += np.dot(self._dR - dtay, em)
        fe += np.dot(self._R - tay, dem)
        return f, fs, fe

    def __call__(self, eps3: float) -> complex:
        return complex(self._terms(eps3)[0])

    def d_eps3(self, eps3: float) -> complex:
        return complex(self._terms(eps3)[2])

    def residual(self, eps3: float) -> complex:
        """Residual of ``eps3 s f_s - 3/2 eps3^2 f_e = lam3 (1-f^2) + eps3 g f``."""
        f, fs, fe = self._terms(eps3)
        return complex(
            eps3 * self.s * fs - 1.5 * eps3**2 * fe - self._lam * (1 - f * f) - eps3 * self._g * f
        )


def chart3_f_series(p, r: float, L: int = 4, M: int = 4, K: int = 20) -> Chart3Series:
    """Build the entry-chart quasi-solution at ``r`` (see ``Chart3Series``)."""
    return Chart3Series(p, r, L, M, K)


# ---------------------------------------------------------------------------
# growth diagnostic
# ---------------------------------------------------------------------------


def gevrey_fit(coeffs, return_residual: bool = False):
    """Least-squares fit ``log(|c_m|/m!) ~ log a + m log b``.

    Zero coefficients are excluded.  A growth diagnostic only.

    Returns
    -------
    (a, b) or (a, b, rms_residual)
    """
    c = np.asarray(coeffs.coeffs if isinstance(coeffs, EpsSeries) else coeffs)
    if c.size < 8:
        raise ValueError("gevrey_fit needs at least 8 coefficients")
    m = np.arange(c.size)
    keep = np.abs(c) > 0
    if keep.sum() < 2:
        raise ValueError("not enough nonzero coefficients")
    logfact = np.array([math.lgamma(k + 1) for k in m])
    y = np.log(np.abs(c[keep])) - logfact[keep]
    A = np.vstack([np.ones(keep.sum()), m[keep]]).T
    sol, *_ = np.linalg.lstsq(A, y, rcond=None)
    a, b = math.exp(sol[0]), math.exp(sol[1])
    if return_residual:
        rms = float(np.sqrt(np.mean((A @ sol - y) ** 2)))
        return a, b, rms
    return a, b


__all__ = [
    "TaylorJet",
    "EpsSeries",
    "SeriesDomainError",
    "jet_sqrt",
    "hyp_riccati_coeffs",
    "hyp_riccati_residual",
    "ell_riccati_coeffs",
    "ell_riccati_residual",
    "nu_series",
    "even_odd_check",
    "b0_coeffs",
    "b0_residual",
    "chart3_R_coeffs",
    "chart3_double_series",
    "Chart3Series",
    "chart3_f_series",
    "gevrey_fit",
]
