# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: double-double Airy Maclaurin sums and the Taylor-series
integrator for the linear system. Semantics match ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fma, fabs, sqrt, log, pow, hypot, INFINITY

cnp.import_array()

cdef double AI0_HI = 0.3550280538878172
cdef double AI0_LO = 2.05233632436212e-17
cdef double MAIP0_HI = 0.2588194037928068
cdef double MAIP0_LO = -2.522243111610832e-17
cdef double SQRT3_HI = 1.7320508075688772
cdef double SQRT3_LO = 1.0035084221806903e-16

cdef struct dd:
    double h
    double l

cdef inline dd two_sum(double a, double b) nogil:
    cdef dd r
    cdef double s = a + b
    cdef double bb = s - a
    r.h = s
    r.l = (a - (s - bb)) + (b - bb)
    return r

cdef inline dd dd_add(dd a, dd b) nogil:
    cdef dd s = two_sum(a.h, b.h)
    return two_sum(s.h, s.l + a.l + b.l)

cdef inline dd dd_neg(dd a) nogil:
    a.h = -a.h
    a.l = -a.l
    return a

cdef inline dd dd_mul(dd a, dd b) nogil:
    cdef double p = a.h * b.h
    cdef double e = fma(a.h, b.h, -p)
    e += a.h * b.l + a.l * b.h
    return two_sum(p, e)

cdef inline dd dd_mul_d(dd a, double b) nogil:
    cdef double p = a.h * b
    cdef double e = fma(a.h, b, -p)
    e += a.l * b
    return two_sum(p, e)

cdef inline dd dd_div_d(dd a, double b) nogil:
    cdef double q1 = a.h / b
    cdef double p = q1 * b
    cdef double e = fma(q1, b, -p)
    cdef dd s = two_sum(a.h, -p)
    cdef double f = s.l - e + a.l
    return two_sum(q1, (s.h + f) / b)

cdef inline dd mk(double h, double l) nogil:
    cdef dd r
    r.h = h
    r.l = l
    return r


def airy_maclaurin(double x):
    """Ai, Ai', Bi, Bi' at ``x`` from Maclaurin sums in double-double."""
    cdef dd x2 = dd_mul_d(mk(x, 0.0), x)
    cdef dd x3 = dd_mul_d(x2, x)
    cdef dd f = mk(1.0, 0.0), g = mk(x, 0.0)
    cdef dd tf = mk(1.0, 0.0), tg = mk(x, 0.0)
    cdef dd tfp = dd_div_d(x2, 2.0), tgp = mk(1.0, 0.0)
    cdef dd fp = tfp, gp = mk(1.0, 0.0)
    cdef int k = 1
    cdef double big, small, dk
    while k < 400:
        dk = <double>k
        tf = dd_div_d(dd_mul(tf, x3), (3.0 * dk - 1.0) * (3.0 * dk))
        tg = dd_div_d(dd_mul(tg, x3), (3.0 * dk) * (3.0 * dk + 1.0))
        tgp = dd_div_d(dd_mul(tgp, x3), (3.0 * dk - 2.0) * (3.0 * dk))
        f = dd_add(f, tf)
        g = dd_add(g, tg)
        gp = dd_add(gp, tgp)
        if k >= 2:
            tfp = dd_div_d(dd_mul(tfp, x3), (3.0 * dk - 3.0) * (3.0 * dk - 1.0))
            fp = dd_add(fp, tfp)
        big = fabs(f.h) + fabs(g.h) + fabs(fp.h) + fabs(gp.h)
        small = fabs(tf.h) + fabs(tg.h) + fabs(tfp.h) + fabs(tgp.h)
        if k > 3 and small <= 1e-34 * big:
            break
        k += 1
    cdef dd c1 = mk(AI0_HI, AI0_LO), c2 = mk(MAIP0_HI, MAIP0_LO), s3 = mk(SQRT3_HI, SQRT3_LO)
    cdef dd c1f = dd_mul(c1, f), c2g = dd_mul(c2, g)
    cdef dd c1fp = dd_mul(c1, fp), c2gp = dd_mul(c2, gp)
    cdef dd ai = dd_add(c1f, dd_neg(c2g))
    cdef dd aip = dd_add(c1fp, dd_neg(c2gp))
    cdef dd bi = dd_mul(s3, dd_add(c1f, c2g))
    cdef dd bip = dd_mul(s3, dd_add(c1fp, c2gp))
    return ai.h + ai.l, aip.h + aip.l, bi.h + bi.l, bip.h + bip.l


def taylor_integrate(mu, double eps, double t0, double x0, double y0, t_out,
                     double tol, int order, double max_phase):
    """Compiled twin of ``_pykernels.taylor_integrate``."""
    cdef double[::1] muv = np.ascontiguousarray(mu, dtype=np.float64)
    cdef double[::1] tov = np.ascontiguousarray(t_out, dtype=np.float64)
    cdef Py_ssize_t deg = muv.shape[0] - 1
    cdef Py_ssize_t n_out = tov.shape[0]
    cdef int K = order
    if K < 4 or K > 60:
        raise ValueError("order must lie in [4, 60]")
    if deg > 60:
        raise ValueError("polynomial degree too large")
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xs = np.empty(n_out)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ys = np.empty(n_out)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] logs = np.empty(n_out)
    cdef double X[61]
    cdef double Y[61]
    cdef double m[61]
    cdef double t = t0, x = x0, y = y0, logm, nrm, target, direction
    cdef double s, cK, cK1, h, om, rem, hs, xn, yn
    cdef double inv_eps = 1.0 / eps
    cdef Py_ssize_t io, i, j, k, jm
    cdef long nsteps = 0, nzeros = 0
    cdef int last_sign, sgn, last
    nrm = hypot(x, y)
    if nrm == 0.0:
        raise ZeroDivisionError("zero initial state")
    x /= nrm
    y /= nrm
    logm = log(nrm)
    last_sign = 0 if x == 0.0 else (1 if x > 0.0 else -1)
    for io in range(n_out):
        target = tov[io]
        while t != target:
            direction = 1.0 if target > t else -1.0
            for j in range(deg + 1):
                m[j] = muv[j]
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
            nrm = hypot(x, y)
            cK = fabs(X[K]) + fabs(Y[K])
            cK1 = fabs(X[K - 1]) + fabs(Y[K - 1])
            h = INFINITY
            if cK > 0.0:
                h = pow(tol * nrm / cK, 1.0 / K)
            if cK1 > 0.0:
                h = min(h, pow(tol * nrm / cK1, 1.0 / (K - 1)))
            h *= 0.9
            if max_phase > 0.0:
                om = sqrt(fabs(m[0])) + 1e-300
                h = min(h, max_phase * eps / om)
            if h < 1e-15 * (fabs(t) + eps):
                raise ArithmeticError(f"step underflow at t={t!r} (h={h!r})")
            rem = fabs(target - t)
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
            nrm = hypot(x, y)
            if nrm > 1e3 or nrm < 1e-3:
                x /= nrm
                y /= nrm
                logm += log(nrm)
        xs[io] = x
        ys[io] = y
        logs[io] = logm
    return xs, ys, logs, nsteps, nzeros
