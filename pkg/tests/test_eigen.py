import math

import numpy as np
import pytest

from turnpoint.eigen import (EigenError, bs_energies, eigen_table, reference_energies,
                             well_action)

HARM = (0.0, 0.0, 1.0)
QUART = (0.0, 0.0, 1.0, 0.0, 0.1)


def test_harmonic_action_closed_form():
    for E in (0.1, 1.0, 7.0):
        assert well_action(HARM, E) == pytest.approx(math.pi * E / 2, rel=1e-13)


def test_bs_harmonic():
    E = bs_energies(HARM, 0.01, 10)
    assert np.allclose(E, 0.01 * (2 * np.arange(11) + 1), rtol=1e-10, atol=0)
    assert bs_energies(HARM, 0.5, 0)[0] == pytest.approx(0.5, rel=1e-12)
    assert not E.truncated


def test_bs_quartic_spacing():
    """Consecutive gaps against the implicit-function estimate pi eps / A'(E)."""
    eps = 0.02
    E = np.array(bs_energies(QUART, eps, 12))
    assert np.all(np.diff(E) > 0)
    mid = 0.5 * (E[1:] + E[:-1])
    h = 1e-6
    dA = np.array([(well_action(QUART, m + h) - well_action(QUART, m - h)) / (2 * h) for m in mid])
    pred = math.pi * eps / dA
    assert np.all(np.abs(np.diff(E) / pred - 1) < 0.3)
    assert np.all(np.diff(E) / eps < 2.5)


def test_bs_truncation_flag():
    E = bs_energies(HARM, 0.1, 50, e_max=3.0)
    assert E.truncated
    assert len(E) < 51 and max(E) <= 3.0


def test_invalid_potential():
    for v in ((0.0, 1.0), (0.0, 0.0, -1.0), (0.0, 0.0, 0.0, 1.0)):
        with pytest.raises(ValueError):
            bs_energies(v, 0.1, 2)
    with pytest.raises(ValueError):
        bs_energies(HARM, 0.0, 2)


def test_reference_harmonic():
    assert reference_energies(HARM, 0.05, 3)[3] == pytest.approx(0.35, abs=1e-8)
    E = reference_energies(HARM, 0.01, 6)
    assert np.allclose(E, 0.01 * (2 * np.arange(7) + 1), rtol=0, atol=1e-8)


def test_reference_interlaces_and_tracks_bs():
    eps = 0.04
    ref = reference_energies(QUART, eps, 5)
    bs = bs_energies(QUART, eps, 5)
    assert np.all(np.diff(ref) > 0)
    # each reference level lies between its BS neighbours' midpoints
    for n in range(1, 5):
        assert 0.5 * (bs[n - 1] + bs[n]) < ref[n] < 0.5 * (bs[n] + bs[n + 1])


def test_quartic_gap_is_little_o_eps():
    coarse = eigen_table(QUART, 4e-2, 2)
    fine = eigen_table(QUART, 1e-2, 2)
    for c, f in zip(coarse, fine):
        assert f.gap_over_eps <= 0.5 * c.gap_over_eps
        assert f.gap == pytest.approx(abs(f.E_bs - f.E_ref))


def test_thread_parity():
    a = reference_energies(QUART, 0.05, 4, threads=1)
    b = reference_energies(QUART, 0.05, 4, threads=3)
    assert a == b


def test_bad_seed_raises():
    with pytest.raises(EigenError):
        reference_energies(HARM, 0.05, 1, guesses=[0.05, 0.05])
