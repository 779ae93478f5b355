"""Physicists' Hermite polynomials and unit-normalized Hermite functions."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np


def hermite(n: int, x):
    """``H_n(x)`` by the three-term recurrence ``H_{k+1} = 2x H_k - 2k H_{k-1}``.

    Works for real or complex scalars and arrays.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    x = np.asarray(x)
    h_prev = np.ones_like(x)
    if n == 0:
        return h_prev
    h = 2 * x
    for k in range(1, n):
        h_prev, h = h, 2 * x * h - 2 * k * h_prev
    return h


def hermite_function(n: int, x):
    """``h_n(x) = (2**n n! sqrt(pi))**-1/2 H_n(x) exp(-x**2/2)``.

    Normalized by a stable recurrence on ``h_n`` itself, so large ``n`` does not
    overflow the prefactor.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    x = np.asarray(x)
    h_prev = math.pi ** -0.25 * np.exp(-x * x / 2)
    if n == 0:
        return h_prev
    h = math.sqrt(2.0) * x * h_prev
    for k in range(1, n):
        h_prev, h = h, math.sqrt(2.0 / (k + 1)) * x * h - math.sqrt(k / (k + 1)) * h_prev
    return h


@lru_cache(maxsize=None)
def hermite_coefficients(n: int) -> tuple[int, ...]:
    """Integer monomial coefficients ``(c_0, ..., c_n)`` of ``H_n``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    prev, cur = [1], [0, 2]
    if n == 0:
        return tuple(prev)
    for k in range(1, n):
        nxt = [0] + [2 * c for c in cur]
        for i, c in enumerate(prev):
            nxt[i] -= 2 * k * c
        prev, cur = cur, nxt
    return tuple(cur)


def hermite_norm(n: int) -> float:
    """``int H_n(x)**2 exp(-x**2) dx = 2**n n! sqrt(pi)``."""
    return 2.0 ** n * math.factorial(n) * math.sqrt(math.pi)
