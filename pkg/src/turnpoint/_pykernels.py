"""Pure-Python implementations of the numerical hot loops.

These mirror the compiled kernels in ``_kernels.pyx`` line for line and are
used when the extension is unavailable or when ``TURNPOINT_PURE_PYTHON=1``.
"""

from __future__ import annotations

import math

import numpy as np

# Double-double constants: Ai(0), -Ai'(0), sqrt(3).
AI0_HI, AI0_LO = 0.3550280538878172, 2.05233632436212e-17
MAIP0_HI, MAIP0_LO = 0.2588194037928068, -2.522243111610832e-17
SQRT3_HI, SQRT3_LO = 1.7320508075688772, 1.0035084221806903e-16

_SPLIT = 134217729.0  # 2**27 + 1


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _two_prod(a, b):
    p = a * b
    t = _SPLIT * a
    ah = t - (t - a)
    al = a - ah
    t = _SPLIT * b
    bh = t - (t - b)
    bl = b - bh
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _dd_add(ah, al, bh, bl):
    s, e = _two_sum(ah, bh)
    e += al + bl
    return _two_sum(s, e)


def _dd_mul(ah, al, bh, bl):
    p, e = _two_prod(ah, bh)
    e += ah * bl + al * bh
    return _two_sum(p, e)


def _dd_mul_d(ah, al, b):
    p, e = _two_prod(ah, b)
    e += al * b
    return _two_sum(p, e)


def _dd_div_d(ah, al, b):
    q1 = ah / b
    p, e = _two_prod(q1, b)
    s, f = _two_sum(ah, -p)
    f = f - e + al
    q2 = (s + f) / b
    return _two_sum(q1, q2)


def airy_maclaurin(double_x):
    """Ai, Ai', Bi, Bi' at ``x`` from Maclaurin sums in double-double."""
    x = float(double_x)
    x2h, x2l = _two_prod(x, x)
    x3h, x3l = _dd_mul_d(x2h, x2l, x)
    # f = sum a_{3k} x^{3k}, g = sum a_{3k+1} x^{3k+1} and their derivatives
    fh, fl = 1.0, 0.0
    gh, gl = x, 0.0
    fph, fpl = 0.0, 0.0
    gph, gpl = 1.0, 0.0
    tf = (1.0, 0.0)
    tg = (x, 0.0)
    tfp = _dd_div_d(x2h, x2l, 2.0)
    tgp = (1.0, 0.0)
    fph, fpl = tfp
    k = 1
    while k < 400:
        tf = _dd_div_d(*_dd_mul(tf[0], tf[1], x3h, x3l), (3.0 * k - 1.0) * (3.0 * k))
        tg = _dd_div_d(*_dd_mul(tg[0], tg[1], x3h, x3l), (3.0 * k) * (3.0 * k + 1.0))
        tgp = _dd_div_d(*_dd_mul(tgp[0], tgp[1], x3h, x3l), (3.0 * k - 2.0) * (3.0 * k))
        fh, fl = _dd_add(fh, fl, tf[0], tf[1])
        gh, gl = _dd_add(gh, gl, tg[0], tg[1])
        gph, gpl = _dd_add(gph, gpl, tgp[0], tgp[1])
        if k >= 2:
            tfp = _dd_div_d(*_dd_mul(tfp[0], tfp[1], x3h, x3l),
                            (3.0 * k - 3.0) * (3.0 * k - 1.0))
            fph, fpl = _dd_add(fph, fpl, tfp[0], tfp[1])
        big = abs(fh) + abs(gh) + abs(fph) + abs(gph)
        small = abs(tf[0]) + abs(tg[0]) + abs(tfp[0]) + abs(tgp[0])
        if k > 3 and small <= 1e-34 * big:
            break
        k += 1
    c1f = _dd_mul(AI0_HI, AI0_LO, fh, fl)
    c2g = _dd_mul(MAIP0_HI, MAIP0_LO, gh, gl)
    c1fp = _dd_mul(AI0_HI, AI0_LO, fph, fpl)
    c2gp = _dd_mul(MAIP0_HI, MAIP0_LO, gph, gpl)
    ai = _dd_add(c1f[0], c1f[1], -c2g[0], -c2g[1])
    aip = _dd_add(c1fp[0], c1fp[1], -c2gp[0], -c2gp[1])
    bi = _dd_mul(SQRT3_HI, SQRT3_LO, *_dd_add(c1f[0], c1f[1], c2g[0], c2g[1]))
    bip = _dd_mul(SQRT3_HI, SQRT3_LO, *_dd_add(c1fp[0], c1fp[1], c2gp[0], c2gp[1]))
    return ai[0] + ai[1], aip[0] + aip[1], bi[0] + bi[1], bip[0] + bip[1]


def taylor_integrate(mu, eps, t0, x0, y0, t_out, tol, order, max_phase):
    """Integrate x' = y/eps, y' = -mu(t) x/eps with a Taylor method.

    Parameters
    ----------
    mu : sequence of float
        Polynomial coefficients of mu in ascending powers of t.
    eps : float
    t0, x0, y0 : float
        Initial time and state.
    t_out : sequence of float
        Output times, monotone in the direction of integration.
    tol : float
        Local relative tolerance.
    order : int
        Taylor order K.
    max_phase : float
        Upper bound on ``h*sqrt|mu|/eps`` per step (<= 0 disables it).

    Returns
    -------
    xs, ys, logs : ndarray
        Scaled state and accumulated log-magnitude at each output time.
    nsteps : int
    nzeros : int
        Number of sign changes of x observed at step endpoints.
    """
    mu = [float(c) for c in mu]
    deg = len(mu) - 1
    n_out = len(t_out)
    xs = np.empty(n_out)
    ys = np.empty(n_out)
    logs = np.empty(n_out)
    K = int(order)
    t = float(t0)
    x = float(x0)
    y = float(y0)
    logm = 0.0
    nrm = math.hypot(x, y)
    if nrm == 0.0:
        raise ZeroDivisionError("zero initial state")
    x /= nrm
    y /= nrm
    logm = math.log(nrm)
    nsteps = 0
    nzeros = 0
    last_sign = 0 if x == 0.0 else (1 if x > 0.0 else -1)
    inv_eps = 1.0 / eps
    X = [0.0] * (K + 1)
    Y = [0.0] * (K + 1)
    m = [0.0] * (deg + 1)
    for io in range(n_out):
        target = float(t_out[io])
        while t != target:
            direction = 1.0 if target > t else -1.0
            # shifted coefficients of mu about t (Horner shift)
            for j in range(deg + 1):
                m[j] = mu[j]
            for i in range(deg):
                for j in range(deg - 1, i - 1, -1):
                    m[j] += t * m[j + 1]
            X[0] = x
            Y[0] = y
            for k in range(K):
                s = 0.0
                jm = k if k < deg else deg
                for j in range(jm + 1):
                    s += m[j] * X[k - j]
                X[k + 1] = Y[k] * inv_eps / (k + 1)
                Y[k + 1] = -s * inv_eps / (k + 1)
            nrm = math.hypot(x, y)
            cK = abs(X[K]) + abs(Y[K])
            cK1 = abs(X[K - 1]) + abs(Y[K - 1])
            h = math.inf
            if cK > 0.0:
                h = (tol * nrm / cK) ** (1.0 / K)
            if cK1 > 0.0:
                h = min(h, (tol * nrm / cK1) ** (1.0 / (K - 1)))
            h *= 0.9
            if max_phase > 0.0:
                om = math.sqrt(abs(m[0])) + 1e-300
                h = min(h, max_phase * eps / om)
            if h < 1e-15 * (abs(t) + eps):
                raise ArithmeticError(f"step underflow at t={t!r} (h={h!r})")
            rem = abs(target - t)
            last = h >= rem
            if last:
                h = rem
            hs = direction * h
            xn = X[K]
            yn = Y[K]
            for k in range(K - 1, -1, -1):
                xn = xn * hs + X[k]
                yn = yn * hs + Y[k]
            x = xn
            y = yn
            t = target if last else t + hs
            nsteps += 1
            sgn = 0 if x == 0.0 else (1 if x > 0.0 else -1)
            if sgn != 0:
                if last_sign != 0 and sgn != last_sign:
                    nzeros += 1
                last_sign = sgn
            nrm = math.hypot(x, y)
            if nrm > 1e3 or nrm < 1e-3:
                x /= nrm
                y /= nrm
                logm += math.log(nrm)
        xs[io] = x
        ys[io] = y
        logs[io] = logm
    return xs, ys, logs, nsteps, nzeros
