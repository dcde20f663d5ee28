import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import solve_ivp

from turnpoint import _backend, _pykernels
from turnpoint.problem import ProblemSpec
from turnpoint.reference import (IntegrationError, LogScaledState, ReferenceIntegrator,
                                 WindowError, integrate, rate_fit, riccati_reference,
                                 wronskian, wu_reference)
from turnpoint.series import hyp_riccati_coeffs


def _angle_diff(a, b):
    return abs(math.remainder(a - b, math.pi))


def test_rotation_conserves_norm():
    rot = ProblemSpec((1.0,), nu0=1.0, strict=False)
    tr = ReferenceIntegrator(rot, 1e-3, 1e-12).run(0.0, (1.0, 0.0), np.linspace(0.1, 1.0, 10))
    # 10^3 radians of phase
    assert np.max(np.abs(tr.lognorm())) <= 1e-12
    assert tr.x[-1] * math.exp(tr.log[-1]) == pytest.approx(math.cos(1000.0), abs=1e-10)


def test_linearity_doubling_is_exact(quad_problem):
    s = LogScaledState.from_xy(0.5, 0.25, -1.0, 0.02)
    doubled = LogScaledState(s.xhat, s.yhat, s.log + math.log(2.0), s.t, s.eps)
    a = ReferenceIntegrator(quad_problem, 0.02).run(-1.0, s, [0.7])
    b = ReferenceIntegrator(quad_problem, 0.02).run(-1.0, doubled, [0.7])
    assert b.x[0] == a.x[0] and b.y[0] == a.y[0]
    # exact up to rounding of the accumulated log
    assert b.log[0] - a.log[0] == pytest.approx(math.log(2.0), abs=4 * np.spacing(a.log[0]))
    # doubling the raw state agrees to rounding
    c = ReferenceIntegrator(quad_problem, 0.02).run(-1.0, (1.0, 0.5), [0.7])
    d = ReferenceIntegrator(quad_problem, 0.02).run(-1.0, (0.5, 0.25), [0.7])
    assert c.log[0] - d.log[0] == pytest.approx(math.log(2.0), abs=1e-12)


def test_log_scaled_state_invariants():
    s = LogScaledState.from_xy(3.0, -4.0, 0.0, 0.1)
    assert math.hypot(s.xhat, s.yhat) == pytest.approx(1.0, abs=1e-15)
    assert s.xy() == pytest.approx((3.0, -4.0), rel=1e-15)
    w, lw = wronskian(LogScaledState.from_xy(1, 0, 0, 1), LogScaledState.from_xy(0, 2, 0, 1))
    assert w * math.exp(lw) == pytest.approx(2.0)


def test_wronskian_conserved(quad_problem):
    ts = np.linspace(-0.2, 1.0, 13)
    a = ReferenceIntegrator(quad_problem, 0.02).run(-0.3, (1.0, 0.0), ts)
    b = ReferenceIntegrator(quad_problem, 0.02).run(-0.3, (0.0, 1.0), ts)
    w = (a.x * b.y - b.x * a.y) * np.exp(a.log + b.log)
    assert np.max(np.abs(w - 1)) <= 1e-9


def test_against_solve_ivp(quad_problem):
    eps = 0.1

    def rhs(t, z):
        return [z[1] / eps, -quad_problem.mu(t) * z[0] / eps]

    sol = solve_ivp(rhs, (-1.0, 1.0), [1.0, 0.3], method="DOP853", rtol=1e-13, atol=1e-14)
    s = integrate(quad_problem, eps, -1.0, (1.0, 0.3), 1.0)
    x, y = s.xy()
    assert x == pytest.approx(sol.y[0, -1], rel=1e-9)
    assert y == pytest.approx(sol.y[1, -1], rel=1e-9)


def test_time_reversal_oscillatory(quad_problem):
    tol = 1e-12
    s0 = (0.3, -1.1)
    f = ReferenceIntegrator(quad_problem, 0.02, tol).run(0.1, s0, [1.0])
    b = ReferenceIntegrator(quad_problem, 0.02, tol).run(1.0, (f.x[0], f.y[0]), [0.1])
    assert _angle_diff(math.atan2(b.y[0], b.x[0]), math.atan2(s0[1], s0[0])) <= 10 * tol


def test_tolerance_convergence(quad_problem):
    ref = ReferenceIntegrator(quad_problem, 0.02, 1e-15, order=30).run(-1.0, (1.0, 0.5), [1.0])
    errs = []
    for tol in (1e-8, 1e-9, 1e-10):
        r = ReferenceIntegrator(quad_problem, 0.02, tol).run(-1.0, (1.0, 0.5), [1.0])
        ln = r.log[0] + math.log(math.hypot(r.x[0], r.y[0]))
        lr = ref.log[0] + math.log(math.hypot(ref.x[0], ref.y[0]))
        errs.append(abs(ln - lr))
        assert errs[-1] <= tol
    assert errs[0] >= 5 * errs[1] and errs[1] >= 5 * errs[2]


def test_large_growth_does_not_overflow():
    p = ProblemSpec((0.0, 1.0), nu0=0.5)
    tr = wu_reference(p, 1e-3, [0.0])
    assert tr.log[0] > 200  # growth of order exp(236)
    assert np.isfinite(tr.x[0])


def test_backends_agree(quad_problem):
    mu = np.asarray(quad_problem.mu_coeffs)
    args = (mu, 0.02, -1.0, 1.0, 0.5, np.array([0.0, 1.0]), 1e-12, 24, 1.0)
    a = _pykernels.taylor_integrate(*args)
    b = _backend.kernels.taylor_integrate(*args)
    for u, v in zip(a[:3], b[:3]):
        assert np.allclose(u, v, rtol=1e-12, atol=1e-14)
    assert a[3:] == b[3:]


def test_zero_count_rotation():
    rot = ProblemSpec((1.0,), nu0=1.0, strict=False)
    tr = ReferenceIntegrator(rot, 0.01, max_phase=1.0).run(0.0, (1.0, 0.0), [1.0])
    assert tr.nzeros == int((100 + math.pi / 2) // math.pi)


def test_integrator_errors(quad_problem):
    with pytest.raises(ValueError):
        ReferenceIntegrator(quad_problem, 0.0)
    with pytest.raises(ValueError):
        ReferenceIntegrator(quad_problem, 0.1, tol=1e-16)
    with pytest.raises(ValueError):
        integrate(quad_problem, 0.1, 0.0, (1, 0), 1.0, tol=1e-13)
    with pytest.raises(ValueError):
        ReferenceIntegrator(quad_problem, 0.1).run(0.0, (1, 0), [0.5, 0.2])
    assert issubclass(IntegrationError, ArithmeticError)


# -- Riccati reference -------------------------------------------------------


def test_riccati_series_oracle():
    p = ProblemSpec((0.0, 1.0), nu0=2.0)
    d = [(e, abs(riccati_reference(p, e, -1.0) - (1 + e / 4 - 5 / 32 * e * e)))
         for e in (1e-2, 5e-3, 2.5e-3)]
    assert rate_fit(d).slope == pytest.approx(3.0, abs=0.2)


def test_riccati_critical_limit():
    p = ProblemSpec((0.0, 1.0), nu0=2.0)
    d = [(e, abs(riccati_reference(p, e, -1.0) - 1.0)) for e in (1e-2, 5e-3, 2.5e-3, 1.25e-3)]
    assert rate_fit(d).slope >= 0.9


def test_riccati_matches_series_n3(quad_problem):
    d = []
    for e in (2e-2, 1e-2, 5e-3):
        s = hyp_riccati_coeffs(quad_problem, -0.5, 3)(e)
        d.append((e, abs(riccati_reference(quad_problem, e, -0.5, init="series") - s)))
    assert rate_fit(d).slope >= 3.5


def test_riccati_vector_and_window(quad_problem):
    ts = np.array([-0.6, -0.3, -0.8])
    v = riccati_reference(quad_problem, 0.01, ts)
    assert v.shape == (3,)
    assert v[1] == pytest.approx(riccati_reference(quad_problem, 0.01, -0.3), rel=1e-13)
    with pytest.raises(WindowError):
        riccati_reference(quad_problem, 0.01, 0.1)
    with pytest.raises(ValueError):
        riccati_reference(quad_problem, 0.01, -0.5, init="bogus")


# -- rate fit ----------------------------------------------------------------


def test_rate_fit_examples():
    e = np.geomspace(1e-1, 1e-3, 7)
    assert rate_fit(zip(e, e ** (2 / 3))).slope == pytest.approx(2 / 3, abs=1e-12)
    assert rate_fit(zip(e, 3 * e)).slope == pytest.approx(1.0, abs=1e-12)
    noisy = e ** (2 / 3) * (1 + 0.2 * np.sin(1 / e))
    assert 0.55 <= rate_fit(zip(e, noisy)).slope <= 0.80
    with pytest.raises(ValueError):
        rate_fit([(0.1, 1.0), (0.2, 0.0), (0.3, 1.0)])
    with pytest.raises(ValueError):
        rate_fit([(0.1, 1.0), (0.2, 2.0)])


@settings(max_examples=30, deadline=None)
@given(k=st.floats(-2, 3), c=st.floats(1e-3, 1e3))
def test_rate_fit_power_laws(k, c):
    e = np.geomspace(0.1, 0.001, 5)
    fit = rate_fit(zip(e, c * e**k))
    assert fit.slope == pytest.approx(k, abs=1e-9)
    assert fit.half_width < 1e-6
