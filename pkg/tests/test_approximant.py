import math

import numpy as np
import pytest

from turnpoint.airy import airy_eval
from turnpoint.approximant import (Direction2, GridTooCoarseError, UniformApproximant,
                                   approximant_error, direction_error, intervals, phase_fit,
                                   synthetic_angles, uniform_wu_grid, uniform_wu_solution,
                                   wu_direction)
from turnpoint.blowup import _j1_piece, _j3_piece
from turnpoint.problem import ProblemError, ProblemSpec, action
from turnpoint.reference import rate_fit


def _airy_pair(t, eps):
    q = airy_eval(-t * eps ** (-2 / 3))
    return q, math.hypot(q.ai, q.bi)


def test_intervals_tile(quad_problem):
    for eps in (1e-1, 1e-2, 1e-3, 1e-4):
        iv = intervals(quad_problem, eps, 0.2)
        assert -iv.nu0 <= -iv.b <= iv.b <= iv.nu0
        assert iv.tag(-iv.b) == "J2" and iv.tag(iv.b) == "J2"
        assert iv.tag(np.nextafter(-iv.b, -1)) == "J1"
        assert iv.tag(np.nextafter(iv.b, 1)) == "J3"
    with pytest.raises(ValueError):
        intervals(quad_problem, 1e-2, 0.2).tag(1.5)
    assert intervals(quad_problem, 0.4, 0.2).b == 1.0


def test_airy_problem_coincides_everywhere():
    p = ProblemSpec((0.0, 1.0), nu0=0.5)
    eps = 1e-3
    ts = np.linspace(-0.5, 0.5, 81)
    seen = set()
    for w in uniform_wu_grid(p, eps, 0.2, ts):
        seen.add(w.interval)
        q, env = _airy_pair(w.t, eps)
        scale = math.exp(w.log)
        if w.interval == "J2":
            assert w.x == q.ai and w.log == 0.0
        else:
            assert abs(w.x * scale - q.ai) <= 1e-12 * env
        denv = eps ** (1 / 3) * math.hypot(q.aip, q.bip)
        assert abs(w.y * scale + eps ** (1 / 3) * q.aip) <= 1e-12 * denv
    assert seen == {"J1", "J2", "J3"}


def test_airy_problem_error_is_reference_level():
    p = ProblemSpec((0.0, 1.0), nu0=0.5)
    r = approximant_error(p, 1e-2, 0.2, window=0.4, n=81)
    assert r.sup < 1e-8


def test_requires_normalized():
    p = ProblemSpec((0.0, 2.0), nu0=0.5)
    with pytest.raises(ProblemError):
        UniformApproximant(p, 1e-2)
    with pytest.raises(ValueError):
        uniform_wu_solution(ProblemSpec((0.0, 1.0), nu0=0.5), 1e-2, 0.2, 0.7)


def _jump(p, eps, side):
    iv = intervals(p, eps, 0.2)
    t = -iv.b if side < 0 else iv.b
    q, _ = _airy_pair(t, eps)
    if side < 0:
        x, _, log = _j1_piece(p, t, eps)
        return abs(x * math.exp(log) / q.ai - 1)
    x, y = _j3_piece(p, t, eps)
    return math.hypot(x - q.ai, y + eps ** (1 / 3) * q.aip) / math.hypot(q.ai, eps ** (1 / 3) * q.aip)


@pytest.mark.parametrize("side", [-1, 1])
def test_boundary_jumps(quad_problem, side):
    d = [(e, _jump(quad_problem, e, side)) for e in (4e-3, 2e-3, 1e-3, 5e-4, 2.5e-4)]
    assert rate_fit(d).slope >= 0.55


def test_error_decays_on_small_eps(quad_problem):
    d = [(e, approximant_error(quad_problem, e, 0.2, 0.2, n=201).sup)
         for e in (4e-3, 2e-3, 1e-3, 5e-4)]
    assert rate_fit(d).slope >= 0.55


# -- directions --------------------------------------------------------------


def test_direction_airy_formula():
    p = ProblemSpec((0.0, 1.0), nu0=1.0)
    eps = 1e-2
    phi = (2 / 3) / eps
    assert action(p, 0.0, 1.0) / eps == pytest.approx(phi, rel=1e-14)
    d = wu_direction(p, 1.0, eps)
    ref = Direction2(math.cos(phi - math.pi / 4), -math.sin(phi - math.pi / 4))
    assert d.angle_to(ref) < 1e-12
    d = wu_direction(p, 1.0, (2 / 3) / (math.pi / 4))
    assert d.x == pytest.approx(1.0, abs=1e-15) and d.y == pytest.approx(0.0, abs=1e-15)


def test_direction_projective():
    a = Direction2(0.3, -1.7)
    assert a.angle_to(Direction2(0.6, -3.4)) < 1e-15
    assert a.angle_to(Direction2(-0.3, 1.7)) < 1e-15
    assert math.hypot(a.x, a.y) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(ValueError):
        Direction2(0.0, 0.0)


def test_direction_error_rate(quad_problem):
    d = [(e, direction_error(quad_problem, 0.25, e)) for e in (1e-2, 5e-3, 2.5e-3, 1.25e-3)]
    assert rate_fit(d).slope >= 0.55


def test_direction_needs_oscillation(quad_problem):
    with pytest.raises(ValueError):
        wu_direction(quad_problem, -0.2, 1e-2)
    with pytest.raises(ValueError):
        wu_direction(quad_problem, 2.0, 1e-2)


# -- phase fit ---------------------------------------------------------------


def _grid(p, nu=0.25, n=12):
    return 1.0 / np.linspace(1 / 0.02, 1 / 0.005, n)


def test_phase_fit_recovers_synthetic(quad_problem):
    eps = _grid(quad_problem)
    rho, phi1, phi2 = (0.1, -0.3), (0.2, 0.5), (-0.4, 0.25)
    ang = synthetic_angles(quad_problem, 0.25, eps, rho, phi1, phi2)
    f = phase_fit(quad_problem, 0.25, eps, degree=1, angles=ang)
    assert np.allclose(f.rho, rho, atol=1e-6)
    assert np.allclose(f.phi1, phi1, atol=1e-6)
    assert np.allclose(f.phi2, phi2, atol=1e-6)
    assert f.residual < 1e-10


def test_phase_fit_airy_corrections_are_order_eps():
    """For mu = t the corrections are O(eps): the eps^{2/3} terms vanish and the
    eps^{1/3} slopes follow the large-argument Airy expansion."""
    p = ProblemSpec((0.0, 1.0), nu0=0.5)
    A = action(p, 0.0, 0.25)
    f = phase_fit(p, 0.25, _grid(p), degree=1)
    assert abs(f.rho[0]) < 0.1 and abs(f.phi1[0]) < 0.05 and abs(f.phi2[0]) < 0.05
    assert f.phi1[1] == pytest.approx(-5 / (72 * A), rel=0.2)
    assert f.phi2[1] == pytest.approx(7 / (72 * A), rel=0.2)


def test_phase_fit_residual_decreases(quad_problem):
    eps = _grid(quad_problem)
    res = [phase_fit(quad_problem, 0.25, eps, degree=d).residual for d in (0, 1, 2)]
    assert res[0] > res[1] > res[2]


def test_phase_fit_errors(quad_problem):
    with pytest.raises(GridTooCoarseError):
        phase_fit(quad_problem, 0.25, [0.02, 0.015, 0.01, 0.008, 0.006, 0.005])
    with pytest.raises(ValueError):
        phase_fit(quad_problem, 0.25, [0.02, 0.019, 0.018])
    with pytest.raises(ValueError):
        phase_fit(quad_problem, 0.25, _grid(quad_problem, n=8), degree=2)
