"""Real-argument Airy functions and the oscillatory modulus/phase form.

Evaluation strategy
-------------------
* ``|x| <= 6.5`` (and positive ``x`` up to 8 for Ai, 12 for Bi): Maclaurin
  sums accumulated in double-double arithmetic, so the cancellation in
  ``Ai(x) = c1 f(x) - c2 g(x)`` costs no accuracy.
* Beyond: the standard asymptotic expansions with coefficients
  ``u_k = Gamma(3k+1/2) / (54^k k! Gamma(k+1/2))`` and
  ``v_k = -(6k+1)/(6k-1) u_k``, each truncated at its smallest term with half
  of the first omitted term added.

Errors for ``x < 0`` are quoted relative to the envelope
``pi^{-1/2} |x|^{-1/4}`` (``|x|^{1/4}`` for derivatives), which is the
natural scale of oscillatory functions near their zeros.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from ._backend import airy_maclaurin

X_SWITCH = 6.5
AI_POS_SWITCH = 8.0
BI_POS_SWITCH = 12.0
X_MAX = 200.0
_SQPI = math.sqrt(math.pi)
_NTERMS = 80


class AiryRangeError(OverflowError):
    """Bi overflows in double precision; use :func:`airy_scaled`."""


class AiryDomainError(ValueError):
    """Argument outside the supported domain."""


class AiryQuad(NamedTuple):
    """``Ai, Ai', Bi, Bi'`` at a common argument."""

    ai: float
    aip: float
    bi: float
    bip: float

    @property
    def wronskian(self) -> float:
        return self.ai * self.bip - self.aip * self.bi


def _uv_tables(n: int) -> tuple[np.ndarray, np.ndarray]:
    u = np.empty(n)
    v = np.empty(n)
    for k in range(n):
        u[k] = math.exp(math.lgamma(3 * k + 0.5) - k * math.log(54.0)
                        - math.lgamma(k + 1) - math.lgamma(k + 0.5))
        v[k] = -(6 * k + 1) / (6 * k - 1) * u[k]
    return u, v


_U, _V = _uv_tables(_NTERMS)


def _trunc_sum(terms: np.ndarray, start: int = 0) -> float:
    """Sum to the smallest term (from ``start``) plus half that term."""
    mags = np.abs(terms)
    k = start + int(np.argmin(mags[start:]))
    # stop at the first local minimum so that far tails are never used
    for j in range(start + 1, terms.size):
        if mags[j] > mags[j - 1]:
            k = j - 1
            break
    return float(np.sum(terms[:k]) + 0.5 * terms[k])


def _asym_neg(x: float) -> AiryQuad:
    """Asymptotic forms of Ai, Ai', Bi, Bi' at ``-x`` for large ``x > 0``."""
    z = 2.0 / 3.0 * x**1.5
    k = np.arange(_NTERMS // 2)
    sign = (-1.0) ** k
    ze = z ** (-2.0 * k)
    zo = z ** (-(2.0 * k + 1))
    Pu = _trunc_sum(sign * _U[0::2] * ze, 1)
    Qu = _trunc_sum(sign * _U[1::2] * zo)
    Rv = _trunc_sum(sign * _V[0::2] * ze, 1)
    Sv = _trunc_sum(sign * _V[1::2] * zo)
    c, s = math.cos(z - math.pi / 4), math.sin(z - math.pi / 4)
    a = 1.0 / (_SQPI * x**0.25)
    b = x**0.25 / _SQPI
    return AiryQuad(
        a * (c * Pu + s * Qu),
        b * (s * Rv - c * Sv),
        a * (-s * Pu + c * Qu),
        b * (c * Rv + s * Sv),
    )


def _asym_pos_ai(x: float) -> tuple[float, float]:
    """Scaled ``Ai e^z``, ``Ai' e^z`` for large positive ``x``."""
    z = 2.0 / 3.0 * x**1.5
    k = np.arange(_NTERMS)
    sign = (-1.0) ** k
    zk = z ** (-k.astype(float))
    su = _trunc_sum(sign * _U * zk, 1)
    sv = _trunc_sum(sign * _V * zk, 1)
    return su / (2 * _SQPI * x**0.25), -x**0.25 * sv / (2 * _SQPI)


def _asym_pos_bi(x: float) -> tuple[float, float]:
    """Scaled ``Bi e^{-z}``, ``Bi' e^{-z}`` for large positive ``x``."""
    z = 2.0 / 3.0 * x**1.5
    zk = z ** (-np.arange(_NTERMS, dtype=float))
    su = _trunc_sum(_U * zk, 1)
    sv = _trunc_sum(_V * zk, 1)
    return su / (_SQPI * x**0.25), x**0.25 * sv / _SQPI


def airy_series(x: float) -> AiryQuad:
    """Maclaurin evaluation (double-double accumulation) at any ``x``."""
    return AiryQuad(*airy_maclaurin(float(x)))


def airy_asymptotic(x: float) -> AiryQuad:
    """Asymptotic evaluation; intended for ``|x| >~ 5``."""
    x = float(x)
    if x < 0:
        return _asym_neg(-x)
    if x == 0:
        raise AiryDomainError("asymptotic expansions are not defined at 0")
    z = 2.0 / 3.0 * x**1.5
    ai, aip = _asym_pos_ai(x)
    bi, bip = _asym_pos_bi(x)
    e = math.exp(-z)
    if z > 709.0:
        raise AiryRangeError("Bi overflows")
    return AiryQuad(ai * e, aip * e, bi / e, bip / e)


def airy_scaled(x: float) -> AiryQuad:
    """Exponentially scaled quadruple.

    For ``x > 0`` returns ``(Ai e^z, Ai' e^z, Bi e^{-z}, Bi' e^{-z})`` with
    ``z = (2/3) x^{3/2}``; for ``x <= 0`` the unscaled values.
    """
    x = float(x)
    if not math.isfinite(x):
        raise AiryDomainError("non-finite argument")
    if x <= 0:
        if -x > X_SWITCH:
            return _asym_neg(-x)
        return airy_series(x)
    z = 2.0 / 3.0 * x**1.5
    if x <= AI_POS_SWITCH:
        s = airy_series(x)
        ez = math.exp(z)
        ai, aip = s.ai * ez, s.aip * ez
        bi, bip = (s.bi / ez, s.bip / ez)
    else:
        ai, aip = _asym_pos_ai(x)
        if x <= BI_POS_SWITCH:
            s = airy_series(x)
            ez = math.exp(z)
            bi, bip = s.bi / ez, s.bip / ez
        else:
            bi, bip = _asym_pos_bi(x)
    return AiryQuad(ai, aip, bi, bip)


def airy_eval(x: float) -> AiryQuad:
    """``Ai, Ai', Bi, Bi'`` at real ``x`` with ``|x| <= 200``.

    Raises
    ------
    AiryRangeError
        When ``Bi(x)`` overflows (``x >~ 104``); :func:`airy_scaled` gives
        the log-scaled values.
    AiryDomainError
        For ``|x| > 200`` or non-finite input.
    """
    x = float(x)
    if not math.isfinite(x) or abs(x) > X_MAX:
        raise AiryDomainError(f"|x| must be <= {X_MAX}")
    if x <= 0:
        return airy_scaled(x)
    z = 2.0 / 3.0 * x**1.5
    if z > 700.0:
        raise AiryRangeError(f"Bi({x}) overflows; use airy_scaled")
    s = airy_scaled(x)
    e = math.exp(z)
    return AiryQuad(s.ai / e, s.aip / e, s.bi * e, s.bip * e)


def airy_osc(x: float) -> tuple[float, float]:
    """Modulus and phase of ``(Ai - i Bi)(-x)`` for ``x >= 1``.

    The phase is the continuous branch closest to ``(2/3) x^{3/2} - pi/4``.
    """
    x = float(x)
    if x < 1:
        raise AiryDomainError("airy_osc needs x >= 1; use airy_eval")
    q = airy_eval(-x)
    mod = math.hypot(q.ai, q.bi)
    raw = math.atan2(-q.bi, q.ai)
    ref = 2.0 / 3.0 * x**1.5 - math.pi / 4
    d = math.remainder(raw - ref, 2 * math.pi)
    return mod, ref + d


def ai_log(x: float) -> tuple[float, float, float]:
    """``(Ai_s, Ai'_s, log_scale)`` with ``Ai = Ai_s e^{log_scale}``."""
    s = airy_scaled(x)
    lg = -2.0 / 3.0 * x**1.5 if x > 0 else 0.0
    return s.ai, s.aip, lg


__all__ = [
    "AiryQuad",
    "AiryRangeError",
    "AiryDomainError",
    "airy_eval",
    "airy_scaled",
    "airy_series",
    "airy_asymptotic",
    "airy_osc",
    "ai_log",
    "X_SWITCH",
]
