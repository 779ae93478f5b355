import math

import numpy as np
import pytest
from numpy.polynomial import hermite as nph
from scipy.integrate import quad

from geoamp.hermite import hermite, hermite_coefficients, hermite_function, hermite_norm


def test_low_order_values():
    assert hermite(0, 0.7) == 1.0
    assert hermite(1, 0.7) == pytest.approx(1.4)
    assert hermite(2, 2.0) == 14.0


@pytest.mark.parametrize("n", range(9))
def test_recurrence_matches_numpy_series(n):
    x = np.linspace(-3, 3, 13) + 0.4j
    ref = nph.hermval(x, [0] * n + [1])
    assert np.allclose(hermite(n, x), ref, rtol=1e-13, atol=0)


@pytest.mark.parametrize("n", range(8))
def test_coefficients_match_numpy(n):
    ref = nph.herm2poly([0] * n + [1])
    assert np.array_equal(np.asarray(hermite_coefficients(n), dtype=float), ref)


def test_functions_orthonormal():
    for m in range(7):
        for n in range(m, 7):
            val, _ = quad(lambda x: hermite_function(m, x) * hermite_function(n, x),
                          -np.inf, np.inf, epsabs=1e-13)
            assert val == pytest.approx(float(m == n), abs=1e-10)


@pytest.mark.parametrize("n", range(6))
def test_second_moment(n):
    val, _ = quad(lambda x: x * x * hermite_function(n, x) ** 2, -np.inf, np.inf,
                  epsabs=1e-13)
    assert val == pytest.approx(n + 0.5, abs=1e-10)


def test_function_matches_prefactor_form():
    x = np.linspace(-4, 4, 21)
    for n in range(10):
        direct = hermite(n, x) * np.exp(-x * x / 2) / math.sqrt(hermite_norm(n))
        assert np.allclose(hermite_function(n, x), direct, rtol=1e-12, atol=1e-14)


def test_high_order_stays_finite():
    assert np.all(np.isfinite(hermite_function(300, np.linspace(-20, 20, 101))))


def test_negative_order():
    with pytest.raises(ValueError):
        hermite(-1, 0.0)
    with pytest.raises(ValueError):
        hermite_function(-1, 0.0)
