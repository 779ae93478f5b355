import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geoamp.errors import RegimeError
from geoamp.params import (ParameterPoint, energy, make_preset_loop, min_discriminant,
                           omega, reverse_loop, shift_loop, validate_loop, warp_loop,
                           is_closed, constant_loop)


@pytest.mark.parametrize("xyz, w", [((3, 2, 1), 1.0), ((0, 1, 1), 1.0), ((0, 2, 1), 2.0)])
def test_omega_values(xyz, w):
    assert omega(ParameterPoint(*xyz)) == w


@pytest.mark.parametrize("xyz", [(1, 1, 1), (4, 2, 1), (0, 1, 0), (-1, 1, -1)])
def test_point_rejects_outside_regime(xyz):
    with pytest.raises(RegimeError):
        ParameterPoint(*xyz)


@pytest.mark.parametrize("xyz, n, rate", [((3, 2, 1), 0, 0.5), ((3, 2, 1), 1, 1.5),
                                          ((0, 2, 1), 0, 1.0)])
def test_energy_growth_rate(xyz, n, rate):
    sd = energy(ParameterPoint(*xyz), n)
    assert sd.growth_rate == rate
    assert sd.n == n


def test_energy_rejects_negative_level():
    with pytest.raises(ValueError):
        energy(ParameterPoint(3, 2, 1), -1)


def test_ellipse_min_discriminant_matches_dense_scan(ellipse):
    # brute-force scan on 2e6 points as the oracle
    s = np.linspace(0.0, 1.0, 2_000_001)
    X = 1 + 0.5 * np.sin(2 * np.pi * s)
    Y = 2 + 0.5 * np.cos(2 * np.pi * s)
    oracle = float((Y * Y - X).min())
    assert math.isclose(validate_loop(ellipse), oracle, abs_tol=1e-11)
    assert math.isclose(min_discriminant(ellipse), 1.1694996282157, abs_tol=1e-11)


def test_wobble_is_valid(wobble):
    assert validate_loop(wobble) == pytest.approx(0.5, abs=1e-12)


def test_invalid_ellipse_reports_offending_s():
    with pytest.raises(RegimeError) as info:
        make_preset_loop("ellipse", {"y0": 1.0})
    s = info.value.s
    assert 0.0 <= s <= 1.0
    X = 1 + 0.5 * math.sin(2 * math.pi * s)
    Y = 1 + 0.5 * math.cos(2 * math.pi * s)
    assert Y * Y - X * 1.0 <= 1e-9


def test_unknown_preset():
    with pytest.raises(ValueError):
        make_preset_loop("triangle")


def test_period_must_be_positive():
    with pytest.raises(ValueError):
        make_preset_loop("ellipse", period=0.0)


@pytest.mark.parametrize("kind", ["ellipse", "constant-X-wobble"])
def test_derivative_matches_central_difference(kind):
    loop = make_preset_loop(kind)
    h = 1e-6
    for s in np.linspace(0.0, 1.0, 17):
        fd = (np.array(loop.sample(s + h)) - np.array(loop.sample(s - h))) / (2 * h)
        exact = np.array(loop.sample_derivative(s))
        scale = max(np.abs(exact).max(), 1.0)
        assert np.abs(fd - exact).max() <= 1e-6 * scale


def test_loops_are_closed(ellipse, wobble):
    assert is_closed(ellipse) and is_closed(wobble)


def test_reverse_is_involution(ellipse):
    twice = reverse_loop(reverse_loop(ellipse))
    for s in np.linspace(0, 1, 11):
        assert np.allclose(twice.sample(s), ellipse.sample(s), atol=1e-15)


def test_reverse_definition(ellipse):
    r = reverse_loop(ellipse)
    for s in np.linspace(0, 1, 11):
        assert np.allclose(r.sample(s), ellipse.sample(1 - s), atol=1e-14)
        assert np.allclose(r.sample_derivative(s), -np.array(ellipse.sample_derivative(1 - s)),
                           atol=1e-12)


def test_shift_identity_and_definition(ellipse):
    zero = shift_loop(ellipse, 0.0)
    quarter = shift_loop(ellipse, 0.25)
    for s in np.linspace(0, 1, 11):
        assert np.allclose(zero.sample(s), ellipse.sample(s), atol=1e-15)
    assert np.allclose(quarter.sample(0.0), ellipse.sample(0.25), atol=1e-15)


@pytest.mark.parametrize("make", [reverse_loop, lambda L: shift_loop(L, 0.37)])
def test_transforms_preserve_image(ellipse, make):
    other = make(ellipse)
    grid = np.arange(400) / 400
    a = np.array([ellipse.sample(s) for s in grid])
    b = np.array([other.sample(s) for s in grid])
    # shift by a non-grid offset: compare point sets by nearest-neighbour distance
    dist = np.min(np.linalg.norm(a[:, None, :] - b[None, :, :], axis=2), axis=1)
    assert dist.max() < 2 * np.pi * 0.5 / 400
    assert is_closed(other)


def test_warp_preserves_endpoints(ellipse):
    w = warp_loop(ellipse)
    assert np.allclose(w.sample(0.0), ellipse.sample(0.0))
    assert np.allclose(w.sample(0.5), ellipse.sample(0.5))
    assert is_closed(w)


def test_constant_loop_has_zero_derivative():
    c = constant_loop(ParameterPoint(3, 2, 1), period=2.0)
    assert c.period == 2.0
    assert np.allclose(c.sample_derivative(0.3), 0.0)
    assert c.point(0.7).as_tuple() == (3.0, 2.0, 1.0)


coef = st.floats(-0.3, 0.3)


@settings(max_examples=40, deadline=None)
@given(c1=coef, c2=coef, s1=coef, s2=coef, z1=st.floats(-0.2, 0.2))
def test_accepted_fourier_loops_have_positive_omega(c1, c2, s1, s2, z1):
    descriptor = {"X": {"const": 1.0, "cos": [c1], "sin": [s1]},
            "Y": {"const": 2.0, "cos": [c2], "sin": [s2]},
            "Z": {"const": 1.0, "cos": [z1]}}
    loop = make_preset_loop("custom-fourier", descriptor, grid=2000)
    s = np.linspace(0, 1, 257)
    assert np.all(loop.omega_at(s) > 0)
    assert is_closed(loop)
