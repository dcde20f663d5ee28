import math

import numpy as np
import pytest

from turnpoint.hyperbolic import TurningRegionError, h_u, wu_state
from turnpoint.problem import ProblemSpec, action
from turnpoint.reference import WindowError, rate_fit, wu_reference


@pytest.fixture
def airy2():
    return ProblemSpec((0.0, 1.0), nu0=2.0)


def test_slope_examples(airy2):
    assert h_u(airy2, -1.0, 0.01, N=1).h == pytest.approx(1.0025, abs=1e-15)
    assert h_u(airy2, -1.0, 0.01, N=2).h == pytest.approx(1.0025 - 5 / 32 * 1e-4, abs=1e-15)
    v = h_u(airy2, -0.49, 0.0)
    assert v.h == pytest.approx(0.7) and v.method == "critical"
    assert h_u(airy2, -1.0, 0.01, N=3).method == "series(3)"


def test_series_and_riccati_agree(quad_problem):
    d = []
    for e in (2e-2, 1e-2, 5e-3):
        a = h_u(quad_problem, -0.5, e, N=2).h
        b = h_u(quad_problem, -0.5, e, method="riccati").h
        d.append((e, abs(a - b)))
    assert rate_fit(d).slope >= 2.8


def test_positive_unstable_branch(quad_problem):
    for t in np.linspace(-1, -0.2, 9):
        assert h_u(quad_problem, t, 0.01).h > 0


def test_turning_region_guard(quad_problem):
    eps = 1e-3
    with pytest.raises(TurningRegionError, match="blowup"):
        h_u(quad_problem, -2.9 * eps ** (2 / 3), eps)
    h_u(quad_problem, -3.1 * eps ** (2 / 3), eps)
    with pytest.raises(TurningRegionError):
        h_u(quad_problem, -1.5, eps)
    assert issubclass(TurningRegionError, WindowError)
    with pytest.raises(ValueError):
        h_u(quad_problem, -0.5, 0.01, method="nope")


def test_wu_state_examples(airy2):
    s = wu_state(airy2, -0.25, -0.25, 2.0, 0.01)
    assert s.x == 2.0 and s.log == 0.0
    assert s.y == pytest.approx(h_u(airy2, -0.25, 0.01, N=1).h * 2.0)
    # closer to the turning point than the default guard allows
    s = wu_state(airy2, -0.04, -0.25, 1.0, 0.01, c=0.5)
    assert s.x == pytest.approx((0.25 / 0.04) ** 0.25, rel=1e-14)
    assert s.x == pytest.approx(1.5811, abs=1e-4)
    assert s.log == pytest.approx(7.8, rel=1e-12)
    with pytest.raises(TurningRegionError):
        wu_state(airy2, -0.04, -0.25, 1.0, 0.01)
    with pytest.raises(ValueError):
        wu_state(airy2, -0.5, -0.25, 0.0, 0.01)


def test_wu_state_factor_against_reference(quad_problem):
    t0, t1 = -0.9, -0.4
    d = []
    for e in (2e-2, 1e-2, 5e-3, 2.5e-3):
        tr = wu_reference(quad_problem, e, [t0, t1])
        ref = tr.x[1] / tr.x[0] * math.exp(tr.log[1] - tr.log[0])
        s = wu_state(quad_problem, t1, t0, 1.0, e)
        approx = s.x * math.exp(s.log)
        d.append((e, abs(ref / approx - 1)))
    assert rate_fit(d).slope >= 0.8


def test_log_derivative_consistency(quad_problem):
    eps, t, h = 0.01, -0.5, 1e-5
    a = wu_state(quad_problem, t - h, -0.9, 1.0, eps)
    b = wu_state(quad_problem, t + h, -0.9, 1.0, eps)
    dlog = (b.log + math.log(b.x) - a.log - math.log(a.x)) / (2 * h)
    assert abs(dlog - h_u(quad_problem, t, eps).h / eps) <= 1.0
