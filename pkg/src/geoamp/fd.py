"""Finite-difference stencils of arbitrary order on uniform grids."""

from __future__ import annotations

import numpy as np


def fornberg_weights(z: float, x, m: int) -> np.ndarray:
    """Weights for derivatives ``0..m`` at ``z`` from nodes ``x`` (Fornberg 1988).

    Returns an array of shape ``(m + 1, len(x))``.
    """
    x = np.asarray(x, dtype=float)
    n = len(x)
    c = np.zeros((n, m + 1))
    c1 = 1.0
    c4 = x[0] - z
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, m)
        c2 = 1.0
        c5 = c4
        c4 = x[i] - z
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c.T


def derivative(f, h: float, order: int = 1, accuracy: int = 10) -> np.ndarray:
    """Derivative of uniformly sampled ``f`` with spacing ``h``.

    Central stencils in the interior and one-sided stencils of the same
    width near the ends.
    """
    f = np.asarray(f)
    width = accuracy + order + (1 - (accuracy + order) % 2)
    half = width // 2
    n = len(f)
    if n < width:
        raise ValueError(f"need at least {width} samples, got {n}")
    out = np.empty_like(f, dtype=np.result_type(f, float))
    nodes = np.arange(width) - half
    w = fornberg_weights(0.0, nodes, order)[order] / h ** order
    core = sum(w[j] * f[j: n - width + 1 + j] for j in range(width))
    out[half: n - half] = core
    for i in list(range(half)) + list(range(n - half, n)):
        start = min(max(i - half, 0), n - width)
        local = np.arange(start, start + width)
        wl = fornberg_weights(float(i), local, order)[order] / h ** order
        out[i] = wl @ f[local]
    return out
