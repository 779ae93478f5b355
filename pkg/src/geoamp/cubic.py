"""The Hermitian operator ``O = q**3 p + p q**3`` and its imaginary eigenvalue.

``chi(q) = |q|**-3/2 exp(-lam / (4 q**2))`` satisfies ``O chi = -i lam chi``
and is square integrable on each half line, ``int_0^inf chi**2 dq = 1/lam``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from . import fd


@dataclass(frozen=True)
class CubicCheckReport:
    lam: float
    residual: float
    half_line_norm: float
    norm_error: float
    norm_quad_error: float
    points: int


def cubic_eigenfunction(q, lam: float):
    q = np.asarray(q, dtype=float)
    return np.abs(q) ** -1.5 * np.exp(-lam / (4.0 * q * q))


def apply_cubic_operator(f, q, accuracy: int = 8):
    """``O f = -i (2 q**3 f' + 3 q**2 f)`` with ``f'`` from finite differences."""
    q = np.asarray(q, dtype=float)
    h = q[1] - q[0]
    if not np.allclose(np.diff(q), h, rtol=1e-9, atol=0):
        raise ValueError("grid must be uniform")
    df = fd.derivative(f, h, order=1, accuracy=accuracy)
    return -1j * (2.0 * q ** 3 * df + 3.0 * q ** 2 * np.asarray(f))


def cubic_operator_check(lam: float, q_min: float = 0.05, q_max: float = 10.0,
                         points: int = 4000, accuracy: int = 8) -> CubicCheckReport:
    """Residual of ``O chi = -i lam chi`` on a uniform grid and the half-line norm.

    The residual is relative to the max norm of ``lam chi`` on the grid.
    """
    if not lam > 0:
        raise ValueError("lam must be positive")
    if not q_min < q_max:
        raise ValueError("need q_min < q_max")
    if q_min <= 0.0 <= q_max:
        raise ValueError("grid must exclude the singular point q = 0")
    q = np.linspace(q_min, q_max, points)
    chi = cubic_eigenfunction(q, lam)
    res = apply_cubic_operator(chi, q, accuracy) + 1j * lam * chi
    residual = float(np.max(np.abs(res)) / np.max(np.abs(lam * chi)))
    norm, err = quad(lambda x: x ** -3 * math.exp(-lam / (2.0 * x * x)), 0.0, np.inf,
                     epsabs=1e-13, epsrel=1e-12, limit=200)
    return CubicCheckReport(lam, residual, norm, abs(norm - 1.0 / lam), err, points)
