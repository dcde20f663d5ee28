import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from turnpoint import blowup
from turnpoint.airy import airy_eval
from turnpoint.blowup import ChartError, ChartPoint
from turnpoint.problem import ProblemSpec
from turnpoint.reference import rate_fit, wu_reference


def test_to_physical_examples():
    assert blowup.to_physical(ChartPoint("Tplus", (1, 0, 0.3, 1))) == pytest.approx(
        (1, 0, 0.09, 0.027), rel=1e-15)
    assert blowup.to_physical(ChartPoint("Escale", (1, 2, -1, 0.1))) == pytest.approx(
        (1, 0.2, -0.01, 0.001), rel=1e-15)
    for chart, c in (("Tminus", (2, 5, 0, 3)), ("Escale", (2, 5, 7, 0)), ("Tplus", (2, 5, 0, 3))):
        x, y, t, e = blowup.to_physical(ChartPoint(chart, c))
        assert (x, y, t, e) == (2, 0, 0, 0)


def test_transition_examples():
    cp = blowup.transition(ChartPoint("Escale", (0.0, 1.0, -1.0, 0.1)), "Tminus")
    assert cp.coords == pytest.approx((0.0, 1.0, 0.1, 1.0))
    cp = blowup.transition(ChartPoint("Escale", (0.0, 1.0, 4.0, 0.1)), "Tplus")
    assert cp.coords == pytest.approx((0.0, 0.5, 0.2, 0.125))
    assert cp.r3 == pytest.approx(0.2) and cp.eps3 == pytest.approx(0.125)


def test_transition_domain():
    with pytest.raises(ChartError):
        blowup.transition(ChartPoint("Escale", (0, 1, 1.0, 0.1)), "Tminus")
    with pytest.raises(ChartError):
        blowup.transition(ChartPoint("Escale", (0, 1, -1.0, 0.1)), "Tplus")
    with pytest.raises(ChartError):
        blowup.transition(ChartPoint("Tminus", (0, 1, 0.1, 1.0)), "Tplus")
    with pytest.raises(ChartError):
        blowup.transition(ChartPoint("Tplus", (0, 1, 0.1, 0.0)), "Escale")
    with pytest.raises(ChartError):
        ChartPoint("Tplus", (0, 1, -0.1, 1.0))
    with pytest.raises(ChartError):
        ChartPoint("Nowhere", (0, 1, 0.1, 1.0))


@settings(max_examples=200, deadline=None)
@given(x=st.floats(-5, 5), y=st.floats(-5, 5), t2=st.floats(0.01, 10), sgn=st.sampled_from([-1, 1]),
       r2=st.floats(0, 2))
def test_round_trip_property(x, y, t2, sgn, r2):
    cp = ChartPoint("Escale", (x, y, sgn * t2, r2))
    other = blowup.transition(cp, "Tminus" if sgn < 0 else "Tplus")
    back = blowup.transition(other, "Escale")
    assert np.allclose(back.coords, cp.coords, rtol=4e-15, atol=1e-15)
    assert other.eps == pytest.approx(cp.eps, rel=1e-14, abs=1e-300)
    assert np.allclose(blowup.to_physical(other), blowup.to_physical(cp), rtol=4e-15, atol=1e-15)


def test_desing_field_examples(quad_problem):
    f = blowup.desing_field(ChartPoint("Escale", (2.0, 3.0, -1.5, 0.0)), quad_problem)
    assert f == pytest.approx((3.0, 3.0, 1.0, 0.0))
    f = blowup.desing_field(ChartPoint("Tminus", (2.0, 3.0, 0.0, 0.0)), quad_problem)
    assert f == pytest.approx((3.0, 2.0, 0.0, 0.0))
    f = blowup.desing_field(ChartPoint("Tplus", (2.0, 3.0, 0.0, 0.0)), quad_problem)
    assert f == pytest.approx((3.0, -2.0, 0.0, 0.0))


def test_desing_field_matches_physical(quad_problem):
    """Chart field times r equals the blown-up physical field."""
    x, y1, r1, e1 = 0.7, 1.3, 0.4, 0.2
    cp = ChartPoint("Tminus", (x, y1, r1, e1))
    _, y, t, eps = blowup.to_physical(cp)
    dx, dy = y / eps, -quad_problem.mu(t) * x / eps
    # d/d(tau) with dt/dtau = eps * ... ; compare the x-equation: x' = r1 * y1 in t-time scaled
    f = blowup.desing_field(cp, quad_problem)
    # t = -r1^2 so dt/ds = -2 r1 r1' = r1^2 e1 ; dx/ds = dx/dt * dt/ds
    dtds = -2 * r1 * f[2]
    assert f[0] == pytest.approx(dx * dtds, rel=1e-13)
    # y = r1 y1
    dyds = f[2] * y1 + r1 * f[1]
    assert dyds == pytest.approx(dy * dtds, rel=1e-13)


def test_chart2_airy_propagation(quad_problem):
    q0, q1 = airy_eval(5.0), airy_eval(-5.0)
    start = ChartPoint("Escale", (q0.ai, -q0.aip, -5.0, 0.0))
    end = blowup.continue_chart(start, quad_problem, 10.0, n_out=2)[-1]
    assert end.coords[0] == pytest.approx(q1.ai, abs=1e-9)
    assert end.coords[1] == pytest.approx(-q1.aip, abs=1e-9)


def test_conservation_along_continuation(quad_problem):
    for cp in (ChartPoint("Tminus", (1.0, 1.0, 0.4, 0.1)), ChartPoint("Tplus", (1.0, 0.0, 0.3, 0.2))):
        e0 = cp.eps
        for q in blowup.continue_chart(cp, quad_problem, 2.0):
            assert q.eps == pytest.approx(e0, rel=1e-10)


# -- chart Tminus ------------------------------------------------------------


def test_chart1_hu_examples(quad_problem):
    s = blowup.chart1_hu(quad_problem, 0.0, 0.2)
    q = airy_eval(0.2 ** (-2 / 3))
    assert s.slope == pytest.approx(-0.2 ** (1 / 3) * q.aip / q.ai, rel=1e-13)
    s = blowup.chart1_hu(quad_problem, 0.3, 0.0)
    assert s.slope == pytest.approx(math.sqrt(1 - 0.09 / 2), rel=1e-15)
    d = [(e, abs(blowup.chart1_U1(e) - 1 - e / 4)) for e in (0.04, 0.02, 0.01)]
    assert rate_fit(d).slope == pytest.approx(2.0, abs=0.15)
    with pytest.raises(ChartError):
        blowup.chart1_hu(quad_problem, 0.6, 0.1)


def test_chart1_hu_matches_riccati_at_r0(quad_problem):
    """U1 solves the r1 = 0 projective equation."""
    sol = blowup.chart1_riccati((0.1, 0.4), blowup.chart1_U1(0.1), rtol=1e-12)
    assert sol.y[0, -1] == pytest.approx(blowup.chart1_U1(0.4), rel=1e-9)


def test_chart1_uniqueness_proxy():
    sol = blowup.chart1_riccati((0.05, 0.5), 1.1)
    gaps = [abs(sol.sol(e)[0] - blowup.chart1_U1(e)) for e in (0.05, 0.1, 0.2, 0.5)]
    assert gaps[-1] < 1e-3 * gaps[0]
    assert all(a > b for a, b in zip(gaps, gaps[1:]))


def test_chart1_solution_airy(airy_problem):
    eps = 1e-3
    for r1 in (0.2, 0.4, 0.6):
        x, y1, log = blowup.chart1_solution(airy_problem, r1, eps)
        z = r1 * r1 * eps ** (-2 / 3)
        q = airy_eval(z)
        assert x * math.exp(log) == pytest.approx(q.ai, rel=1e-12)
        assert y1 * r1 * math.exp(log) == pytest.approx(-eps ** (1 / 3) * q.aip, rel=1e-12)
    with pytest.raises(ChartError):
        blowup.chart1_solution(airy_problem, 0.01, eps)


def test_chart2_solution(quad_problem):
    x, y = blowup.chart2_solution(quad_problem, 0.0, 0.0)
    assert x == pytest.approx(0.3550280538878172, rel=1e-15)
    assert y == pytest.approx(0.2588194037928068, rel=1e-15)
    with pytest.raises(ChartError):
        blowup.chart2_solution(quad_problem, 4.0, 0.0)


# -- chart Tplus -------------------------------------------------------------


def test_t1_expansion():
    d = [(e, abs(blowup.t1(e) - (1j - e / 4))) for e in (0.04, 0.02, 0.01)]
    assert rate_fit(d).slope == pytest.approx(2.0, abs=0.15)


def test_a1_asymptotics():
    mods, args = [], []
    for e in (0.04, 0.02, 0.01):
        A = blowup.a1(e)
        mods.append((e, abs(abs(A) / e ** (1 / 6) - 1)))
        ph = math.remainder(cmath.phase(A) - (2 / (3 * e) - math.pi / 4), 2 * math.pi)
        args.append((e, abs(ph)))
    assert rate_fit(mods).slope >= 0.9
    assert max(v for _, v in args) < 0.05
    with pytest.raises(ChartError):
        blowup.a1(0.6)


@pytest.mark.parametrize("e3,tol", [(0.05, 1e-10), (0.1, 1e-3), (0.2, 1e-4), (0.3, 1e-2)])
def test_xc_identity(e3, tol):
    xc, yc = blowup.xc_yc(e3)
    xa, ya = blowup.xc_yc_airy(e3)
    assert abs(xc - xa) <= tol * abs(xc)
    assert abs(yc - ya) <= tol * abs(yc)


def test_xc_without_tail_is_optimally_truncated():
    xc, _ = blowup.xc_yc(0.3, tail="none")
    xa, _ = blowup.xc_yc_airy(0.3)
    assert abs(xc - xa) <= 1e-2 * abs(xc)
    with pytest.raises(ValueError):
        blowup.xc_yc(0.3, tail="bogus")


def test_yc_over_xc_small_eps():
    xc, yc = blowup.xc_yc(0.02)
    assert yc / xc == pytest.approx(1j / blowup.b0_value(0.02), rel=1e-14)
    assert abs(yc / xc - 1j) < 0.01


def test_chart3_solution_airy(airy_problem):
    eps = 1e-3
    for r3 in (0.25, 0.5, 0.7):
        for mode in ("airy", "series"):
            x, y3 = blowup.chart3_solution(airy_problem, r3, eps, airy_factor=mode)
            q = airy_eval(-r3 * r3 * eps ** (-2 / 3))
            env = math.hypot(q.ai, q.bi)
            assert abs(x - q.ai) <= 1e-9 * env
            denv = eps ** (1 / 3) * math.hypot(q.aip, q.bip)
            assert abs(y3 * r3 + eps ** (1 / 3) * q.aip) <= 1e-9 * denv


def test_chart3_boundary_consistency(quad_problem):
    """Tplus formula vs chart-2 Airy pair at eps3 = delta: jump O(eps^{2/3})."""
    d = []
    for eps in (1e-2, 5e-3, 2.5e-3, 1.25e-3):
        r3 = (eps / 0.2) ** (1 / 3)
        x3, y3 = blowup.chart3_solution(quad_problem, r3, eps)
        x2, y2 = blowup.chart2_solution(quad_problem, 0.2 ** (-2 / 3), eps ** (1 / 3))
        d.append((eps, abs(x3 - x2) / math.hypot(x2, y2)))
    assert rate_fit(d).slope >= 0.55


def test_chart3_against_reference(quad_problem):
    """mu = t + t^2/2 at r3 = 0.4: deviation from the reference is O(eps^{2/3})."""
    d = []
    for eps in (1e-2, 5e-3, 2.5e-3, 1.25e-3):
        x3, y3 = blowup.chart3_solution(quad_problem, 0.4, eps)
        tr = wu_reference(quad_problem, eps, [0.0, 0.16])
        ai0 = airy_eval(0.0)
        # scale the reference to coefficient 1 on Ai at t = 0
        k = (ai0.ai * tr.x[0] + (-eps ** (1 / 3) * ai0.aip) * tr.y[0]) / (tr.x[0] ** 2 + tr.y[0] ** 2)
        sc = k * math.exp(tr.log[1] - tr.log[0])
        rx, ry = sc * tr.x[1], sc * tr.y[1]
        w = math.sqrt(quad_problem.mu(0.16))
        err = math.hypot(x3 - rx, (0.4 * y3 - ry) / w) / math.hypot(rx, ry / w)
        d.append((eps, err))
    assert rate_fit(d).slope >= 0.55
