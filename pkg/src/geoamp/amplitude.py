"""Quasi-static engines for the geometric amplitude of a closed loop.

``gamma_closed_form`` evaluates the contour integral
``-(n + 1/2) * oint (Z / omega) d(Y / Z)``.  ``gamma_connection`` integrates
the metric-weighted connection ``<n| eta d/ds |n>`` built from finite
differences of gauge-fixed snapshot states.  ``dynamical_integral`` is the
growth exponent ``int E_n dt`` of one traversal.

The two engines are related exactly by ``Re gamma_connection =
gamma_closed_form / 2``: with ``eta`` frozen, only the chirp of the Gaussian
width contributes a non-exact real part, and it carries half the weight of
the contour integrand.  The Schrodinger-evolved state picks up
``-Re gamma_connection`` (see :mod:`geoamp.dynamics`);
``evolved_gamma_closed_form`` is that value in closed form.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .errors import GaugeError, QuadratureError
from .params import ParameterLoop
from .spectral import inner_eta, snapshot_state

DEFAULT_CLOSED_TOL = 1e-10
DEFAULT_STEPS = 512
DEFAULT_FD_STEP = 1e-5
DEFAULT_STEPS_MIN = 8
_GL_ORDER = 4
# overlap of neighbouring snapshots farther than this from 1 is a gauge jump
_GAUGE_JUMP = 0.25


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float


@dataclass(frozen=True)
class ConnectionResult:
    value: complex
    error: float

    @property
    def real(self) -> float:
        return self.value.real

    @property
    def imag(self) -> float:
        return self.value.imag


@dataclass(frozen=True)
class AmplitudeReport:
    n: int
    loop: dict
    gamma_closed: float
    gamma_closed_error: float
    gamma_connection: float
    gamma_connection_imag: float
    gamma_connection_error: float
    dynamical_integral: float
    dynamical_error: float
    extra: dict = field(default_factory=dict)


def _check_level(n):
    if int(n) != n or n < 0:
        raise ValueError(f"level must be a nonnegative integer, got {n!r}")
    return int(n)


def _adaptive(f, tol, limit, what, rtol=0.0):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        value, err, info, *rest = quad(f, 0.0, 1.0, epsabs=tol, epsrel=rtol,
                                       limit=limit, full_output=1)
    if rest and err > max(tol, rtol * abs(value)):
        raise QuadratureError(f"{what}: {rest[0]}", value=value, error=err)
    return value, err


def contour_integral(loop: ParameterLoop, tol: float = DEFAULT_CLOSED_TOL,
                     limit: int = 400) -> QuadResult:
    """``oint (Z / omega) d(Y / Z)`` by adaptive Gauss-Kronrod quadrature."""
    if not tol > 0:
        raise ValueError("tol must be positive")

    def integrand(s):
        (X, Y, Z), (_, dY, dZ) = loop.sample(s), loop.sample_derivative(s)
        w = math.sqrt(Y * Y - X * Z)
        return (Z / w) * (dY * Z - Y * dZ) / (Z * Z)

    value, err = _adaptive(integrand, tol, limit, "contour integral")
    return QuadResult(value, err)


def gamma_closed_form(loop: ParameterLoop, n: int,
                      tol: float = DEFAULT_CLOSED_TOL) -> QuadResult:
    """``-(n + 1/2) oint (Z / omega) d(Y / Z)`` with absolute error below ``tol``.

    The level enters only as a prefactor, so ``gamma_n / gamma_0 = 2n + 1``
    holds to rounding.
    """
    n = _check_level(n)
    base = contour_integral(loop, tol / (n + 0.5))
    return QuadResult(-(n + 0.5) * base.value, (n + 0.5) * base.error)


def evolved_gamma_closed_form(loop: ParameterLoop, n: int,
                              tol: float = DEFAULT_CLOSED_TOL) -> QuadResult:
    """Closed form of the amplitude the evolved state acquires, ``-gamma_closed / 2``."""
    g = gamma_closed_form(loop, n, 2 * tol)
    return QuadResult(-0.5 * g.value, 0.5 * g.error)


def dynamical_integral(loop: ParameterLoop, n: int,
                       tol: float = DEFAULT_CLOSED_TOL) -> QuadResult:
    """``int_0^T (n + 1/2) omega dt`` over one traversal.

    The absolute tolerance has a floor of ``1e-13`` relative to the value,
    which can be of order hundreds for slow loops.
    """
    n = _check_level(n)
    scale = loop.period * (n + 0.5)
    value, err = _adaptive(lambda s: float(loop.omega_at(s)), tol / scale, 400,
                           "dynamical integral", rtol=1e-13)
    return QuadResult(scale * value, scale * err)


# -- connection engine -------------------------------------------------------

def _composite_gauss(panels: int, order: int = _GL_ORDER):
    x, w = np.polynomial.legendre.leggauss(order)
    left = np.arange(panels) / panels
    nodes = (left[:, None] + (x[None, :] + 1.0) / (2 * panels)).ravel()
    weights = np.tile(w / (2 * panels), panels)
    return nodes, weights


def connection_density(loop: ParameterLoop, s: float, n: int,
                       fd_step: float = DEFAULT_FD_STEP) -> complex:
    """``<n(s)| eta(s) |d n/ds>`` with one Richardson step on central differences."""
    p = loop.point(s)
    here = snapshot_state(p, n)

    def overlap(ds):
        other = snapshot_state(loop.point(s + ds), n)
        value = inner_eta(here, other, p)
        if abs(value - 1.0) > _GAUGE_JUMP:
            raise GaugeError(
                f"snapshot overlap {value:.6g} between s={s:.6g} and s={s + ds:.6g} "
                "is far from 1; the gauge is not smooth")
        return value

    def central(h):
        return (overlap(h) - overlap(-h)) / (2.0 * h)

    coarse = central(fd_step)
    fine = central(0.5 * fd_step)
    return (4.0 * fine - coarse) / 3.0


def _connection_sum(loop, n, panels, fd_step):
    nodes, weights = _composite_gauss(panels)
    vals = np.array([connection_density(loop, s, n, fd_step) for s in nodes])
    return complex(np.dot(weights, vals)), float(np.dot(weights, np.abs(vals)))


def gamma_connection(loop: ParameterLoop, n: int, steps: int = DEFAULT_STEPS,
                     fd_step: float = DEFAULT_FD_STEP) -> ConnectionResult:
    """``oint <n| eta d/ds |n> ds`` by composite 4-point Gauss-Legendre on ``steps`` panels.

    ``eta`` is frozen at each ``s`` and acts on the finite-difference
    derivative of the snapshot state.  The error estimate is the change
    against ``steps // 2`` panels plus a rounding floor for the differences.
    """
    n = _check_level(n)
    if steps < DEFAULT_STEPS_MIN:
        raise ValueError(f"steps must be at least {DEFAULT_STEPS_MIN}")
    if not fd_step > 0:
        raise ValueError("fd_step must be positive")
    value, mass = _connection_sum(loop, n, steps, fd_step)
    half, _ = _connection_sum(loop, n, steps // 2, fd_step)
    rounding = 8 * np.finfo(float).eps / fd_step * max(mass, 1.0)
    return ConnectionResult(value, abs(value - half) + rounding)


def amplitude_report(loop: ParameterLoop, n: int, tol: float = DEFAULT_CLOSED_TOL,
                     steps: int = DEFAULT_STEPS,
                     fd_step: float = DEFAULT_FD_STEP) -> AmplitudeReport:
    closed = gamma_closed_form(loop, n, tol)
    conn = gamma_connection(loop, n, steps, fd_step)
    dyn = dynamical_integral(loop, n, tol)
    return AmplitudeReport(
        n=int(n), loop=dict(loop.descriptor),
        gamma_closed=closed.value, gamma_closed_error=closed.error,
        gamma_connection=conn.real, gamma_connection_imag=conn.imag,
        gamma_connection_error=conn.error,
        dynamical_integral=dyn.value, dynamical_error=dyn.error,
    )
