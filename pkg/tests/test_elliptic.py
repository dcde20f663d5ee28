import math

import numpy as np
import pytest

from turnpoint.elliptic import adiabatic_invariant, diagonalize, lg_propagate
from turnpoint.hyperbolic import TurningRegionError
from turnpoint.problem import ProblemSpec
from turnpoint.reference import ReferenceIntegrator, rate_fit


@pytest.fixture
def airy5():
    return ProblemSpec((0.0, 1.0), nu0=5.0)


def test_diagonalize_examples(airy5):
    D = diagonalize(airy5, 1.0, 0.0)
    assert np.allclose(D.T, [[1, 1], [1j, -1j]])
    D = diagonalize(airy5, 1.0, 0.1, N=1)
    assert D.f == pytest.approx(1 - 0.1j / 4, abs=1e-15)
    assert np.allclose(D.Tinv @ D.T, np.eye(2), atol=1e-13)
    assert np.allclose(D.T @ D.Tinv, np.eye(2), atol=1e-13)


def test_identity_and_conjugacy(airy5):
    s = lg_propagate(airy5, 1.0, (0.3, -0.7), 1.0, 0.01)
    assert (s.x, s.y) == (0.3, -0.7)
    s = lg_propagate(airy5, 1.0, (0.3, -0.7), 2.5, 0.01, N=2)
    assert s.v == pytest.approx(s.u.conjugate(), abs=1e-15)


def test_rotation_surrogate():
    p = ProblemSpec((1.0,), nu0=5.0, strict=False)
    eps = 0.01
    s = lg_propagate(p, 0.5, (1.0, 0.0), 2.0, eps)
    th = 1.5 / eps
    assert s.x == pytest.approx(math.cos(th), abs=1e-12)
    assert s.y == pytest.approx(-math.sin(th), abs=1e-12)


def test_amplitude_and_phase_example(airy5):
    eps = 0.01
    s0 = lg_propagate(airy5, 1.0, (1.0, 0.0), 1.0, eps, N=1)
    s1 = lg_propagate(airy5, 1.0, (1.0, 0.0), 4.0, eps, N=1)
    assert abs(s1.u) / abs(s0.u) == pytest.approx(0.7071067811865476, rel=1e-12)
    dphi = math.remainder(np.angle(s1.u) - np.angle(s0.u) - 466.6666666666667, 2 * math.pi)
    assert abs(dphi) < 1e-9
    tr = ReferenceIntegrator(airy5, eps).run(1.0, (1.0, 0.0), [4.0])
    ref_x = tr.x[0] * math.exp(tr.log[0])
    assert s1.x == pytest.approx(ref_x, abs=0.01)


def _sup_error(p, eps, N):
    ts = np.linspace(0.1, p.nu0, 12)[1:]
    tr = ReferenceIntegrator(p, eps).run(0.1, (1.0, 0.0), ts)
    worst = 0.0
    for k, t in enumerate(ts):
        s = lg_propagate(p, 0.1, (1.0, 0.0), t, eps, N=N)
        w = math.sqrt(p.mu(t))
        rx, ry = tr.x[k] * math.exp(tr.log[k]), tr.y[k] * math.exp(tr.log[k])
        worst = max(worst, math.hypot(s.x - rx, (s.y - ry) / w) / math.hypot(rx, ry / w))
    return worst


def test_lg_rate_against_reference(quad_problem):
    d = [(e, _sup_error(quad_problem, e, 1)) for e in (2e-2, 1e-2, 5e-3, 2.5e-3)]
    assert rate_fit(d).slope >= 0.8


def test_higher_order_improves(quad_problem):
    assert _sup_error(quad_problem, 5e-3, 2) < _sup_error(quad_problem, 5e-3, 1)


def test_adiabatic_invariant(quad_problem):
    d = []
    for e in (2e-2, 1e-2, 5e-3):
        s = lg_propagate(quad_problem, 0.2, (1.0, 0.0), 1.0, e)
        i0 = adiabatic_invariant(quad_problem, 0.2, 1.0, 0.0)
        i1 = adiabatic_invariant(quad_problem, 1.0, s.x, s.y)
        d.append((e, abs(i1 / i0 - 1)))
    assert rate_fit(d).slope >= 0.8


def test_turning_region(quad_problem):
    with pytest.raises(TurningRegionError):
        lg_propagate(quad_problem, 0.0, (1.0, 0.0), 0.5, 0.01)
    with pytest.raises(TurningRegionError):
        lg_propagate(quad_problem, -0.2, (1.0, 0.0), 0.5, 0.01)
