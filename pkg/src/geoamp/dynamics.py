"""Exact Schrodinger evolution inside the Hermite-Gaussian family.

Substituting ``psi = exp(L) H_n(beta q) exp(-a q**2 / 2)`` into
``i d psi/dt = H psi`` and matching powers of ``q`` closes the dynamics on
three complex numbers (``b = beta**2``):

    da/dt = -i Z a**2 - 2 Y a + i X
    db/dt = -2 i b (Z a - i Y - Z b)
    dL/dt = -(i/2)(Z a - i Y) - i n Z b

The snapshot width ``a* = i (Y + omega)/Z`` is a fixed point of the Riccati
equation, but a repelling one: perturbations grow like ``exp(2 omega t)``
while those of ``b`` decay like ``exp(-2 omega t)``.  A plain initial-value
run from the snapshot therefore leaves it after a few ``1/omega``.  The
default ``initial="cyclic"`` follows the adiabatic (slow-manifold) solution
instead: ``a`` is integrated backwards in time, where it is stable, and ``b``
and ``L`` forwards, each started on its periodic orbit so the shape returns
to itself after one period.  Every recorded sample is still an exact solution
of the forward equation; the initial state then differs from the snapshot at
order ``1/T``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from . import fd
from .amplitude import dynamical_integral, evolved_gamma_closed_form, gamma_closed_form
from .errors import ExtractionError, IntegrationError, SingularPairingError
from .params import ParameterLoop, ParameterPoint
from .spectral import (PolyGaussianState, hermite_state, inner_eta, snapshot_scale2,
                       snapshot_width)

DEFAULT_ODE_TOL = 1e-10
DEFAULT_SAMPLES = 256
REALNESS_TOL = 1e-8
INITIAL_MODES = ("cyclic", "snapshot")


@dataclass(frozen=True)
class EvolutionState:
    a: complex
    beta2: complex
    logN: complex
    n: int
    t: float = 0.0

    def wavefunction(self, amplitude: bool = True) -> PolyGaussianState:
        beta = cmath.sqrt(self.beta2)
        return hermite_state(self.n, beta, self.a, self.logN if amplitude else 0.0)


def ode_rhs(st: EvolutionState, p: ParameterPoint):
    """``(da/dt, dbeta2/dt, dlogN/dt)`` of the ansatz under ``i psi_t = H psi``."""
    X, Y, Z = p.X, p.Y, p.Z
    a, b = st.a, st.beta2
    da = -1j * Z * a * a - 2.0 * Y * a + 1j * X
    db = -2j * b * (Z * a - 1j * Y - Z * b)
    dL = -0.5j * (Z * a - 1j * Y) - 1j * st.n * Z * b
    return da, db, dL


def time_derivative(st: EvolutionState, p: ParameterPoint) -> PolyGaussianState:
    """``d psi/dt`` from the ODE right-hand side, in closed form.

    ``H_n(beta q)`` changes as ``(beta'/beta) q d/dq``, so the polynomial
    picks up ``k c_k`` terms; the Gaussian contributes ``-(a'/2) q**2``.
    """
    da, db, dL = ode_rhs(st, p)
    psi = st.wavefunction()
    c = psi.coeffs
    k = np.arange(len(c))
    poly = dL * c + (db / (2.0 * st.beta2)) * k * c
    poly = np.polynomial.polynomial.polyadd(poly, np.concatenate([[0, 0], -0.5 * da * c]))
    return PolyGaussianState(poly, psi.a, psi.logN)


@dataclass(frozen=True, eq=False)
class Trajectory:
    t: np.ndarray
    a: np.ndarray
    beta2: np.ndarray
    logN: np.ndarray
    n: int
    period: float
    mode: str
    log_eta_norm: np.ndarray = field(repr=False)
    dynamical_running: np.ndarray = field(repr=False)
    gamma_running: np.ndarray = field(repr=False)
    pairing_errors: tuple = field(default=(), repr=False)

    def state(self, i: int) -> EvolutionState:
        return EvolutionState(complex(self.a[i]), complex(self.beta2[i]),
                              complex(self.logN[i]), self.n, float(self.t[i]))

    @property
    def initial(self) -> EvolutionState:
        return self.state(0)

    @property
    def final(self) -> EvolutionState:
        return self.state(len(self.t) - 1)


def _point_at(loop: ParameterLoop, t: float) -> tuple[float, float, float]:
    X, Y, Z = loop.components(np.asarray(t / loop.period))
    return float(X), float(Y), float(Z)


def _solve(fun, span, y0, tol, what, **kw):
    y0 = np.asarray(y0, dtype=complex)
    sol = solve_ivp(fun, span, y0, method="DOP853", rtol=tol, atol=tol * 1e-2, **kw)
    if sol.status != 0 or not np.all(np.isfinite(sol.y[:, -1])):
        last = float(sol.t[-1]) if sol.t.size else float(span[0])
        raise IntegrationError(f"{what} failed near t={last:.6g}: {sol.message}", t=last)
    return sol


def _riccati(loop):
    def fun(t, y):
        X, Y, Z = _point_at(loop, t)
        a = y[0]
        return [-1j * Z * a * a - 2.0 * Y * a + 1j * X]
    return fun


def _normalized_logN(n, a, beta2, p):
    """``logN`` giving metric norm of modulus 1 and a real positive leading coefficient."""
    beta = cmath.sqrt(beta2)
    phase = -1j * n * cmath.phase(beta)
    raw = inner_eta(hermite_state(n, beta, a), hermite_state(n, beta, a), p, log=True)
    return phase - 0.5 * raw.real


def evolve(loop: ParameterLoop, n: int, ode_tol: float = DEFAULT_ODE_TOL,
           initial: str = "cyclic", samples: int = DEFAULT_SAMPLES) -> Trajectory:
    """Integrate the ansatz ODEs over one period ``[0, T]`` of ``loop``.

    ``initial="snapshot"`` starts exactly on the snapshot eigenstate at
    ``point(0)`` and integrates everything forwards; ``"cyclic"`` follows the
    adiabatic solution described in the module docstring.  Both start with
    unit metric norm.  Diagnostics are recorded at ``samples`` uniform times.
    """
    if int(n) != n or n < 0:
        raise ValueError("level must be a nonnegative integer")
    n = int(n)
    if initial not in INITIAL_MODES:
        raise ValueError(f"initial must be one of {INITIAL_MODES}")
    if samples < 2:
        raise ValueError("need at least two samples")
    T = loop.period
    p0 = loop.point(0.0)
    t_eval = np.linspace(0.0, T, samples)
    riccati = _riccati(loop)

    def rest(a_of_t):
        def fun(t, y):
            X, Y, Z = _point_at(loop, t)
            a, b = a_of_t(t, y), y[0]
            w = math.sqrt(Y * Y - X * Z)
            return [-2j * b * (Z * a - 1j * Y - Z * b),
                    -0.5j * (Z * a - 1j * Y) - 1j * n * Z * b,
                    (n + 0.5) * w]
        return fun

    if initial == "snapshot":
        a0, b0 = snapshot_width(p0), snapshot_scale2(p0)
        L0 = _normalized_logN(n, a0, b0, p0)

        def full(t, y):
            return [riccati(t, y[:1])[0]] + rest(lambda *_: y[0])(t, y[1:])

        sol = _solve(full, (0.0, T), [a0, b0, L0, 0.0], ode_tol, "evolution",
                     t_eval=t_eval)
        a, b, L, D = sol.y
    else:
        a_star = snapshot_width(p0)
        a_per = _solve(riccati, (T, 0.0), [a_star], ode_tol, "backward Riccati pass").y[0, -1]
        a_sol = _solve(riccati, (T, 0.0), [a_per], ode_tol, "backward Riccati pass",
                       dense_output=True).sol

        def a_of_t(t, y):
            return a_sol(t)[0]

        shape = rest(a_of_t)

        def shape_only(t, y):
            return shape(t, [y[0], 0.0, 0.0])[:1]

        b_per = snapshot_scale2(p0)
        if n > 0:
            b_per = _solve(shape_only, (0.0, T), [b_per], ode_tol,
                           "forward Hermite-scale pass").y[0, -1]
        a0 = a_sol(0.0)[0]
        L0 = _normalized_logN(n, a0, b_per, p0)
        sol = _solve(shape, (0.0, T), [b_per, L0, 0.0], ode_tol, "evolution",
                     t_eval=t_eval)
        b, L, D = sol.y
        a = a_sol(t_eval)[0]

    t = sol.t
    log_norm = np.full(t.shape, np.nan, dtype=complex)
    errors = []
    for i, ti in enumerate(t):
        X, Y, Z = _point_at(loop, ti)
        try:
            psi = EvolutionState(a[i], b[i], L[i], n, ti).wavefunction()
            log_norm[i] = inner_eta(psi, psi, ParameterPoint(X, Y, Z), log=True)
        except SingularPairingError as exc:
            errors.append((float(ti), str(exc)))
    D = D.real
    gamma_run = 0.5 * log_norm.real - D
    return Trajectory(t=t, a=np.asarray(a), beta2=np.asarray(b), logN=np.asarray(L),
                      n=n, period=T, mode=initial, log_eta_norm=log_norm,
                      dynamical_running=D, gamma_running=gamma_run,
                      pairing_errors=tuple(errors))


def _wrapped(phase: float) -> float:
    return (phase + math.pi) % (2 * math.pi) - math.pi


def final_log_norm(traj: Trajectory, loop: ParameterLoop) -> complex:
    """Principal log of ``<psi(T)| eta(point(1)) |psi(T)>``."""
    psi = traj.final.wavefunction()
    return inner_eta(psi, psi, loop.point(1.0), log=True)


def extract_gamma(traj: Trajectory, loop: ParameterLoop, n: int,
                  tol: float = 1e-12) -> float:
    """Metric-norm growth left after removing the dynamical exponent.

    ``(1/2) ln <psi(T)|eta|psi(T)> - int_0^T E_n dt``; the pairing must be
    real positive to ``REALNESS_TOL`` relative.
    """
    if not math.isclose(traj.t[-1], loop.period, rel_tol=1e-12):
        raise ExtractionError("trajectory does not cover one full period")
    try:
        lp = final_log_norm(traj, loop)
    except SingularPairingError as exc:
        raise ExtractionError(f"final metric pairing is singular: {exc}") from exc
    if not math.isfinite(lp.real) or abs(_wrapped(lp.imag)) > REALNESS_TOL:
        raise ExtractionError(
            f"final metric pairing is not real positive (arg = {_wrapped(lp.imag):.3g})")
    return 0.5 * lp.real - dynamical_integral(loop, n, tol).value


def biorthonormality_check(traj: Trajectory, loop: ParameterLoop, n: int,
                           gamma: float | None = None, tol: float = 1e-12) -> float:
    """``|<Psi(T)| eta~ |Psi(T)> - 1|`` with ``eta~ = eta exp(-2 int E dt) exp(-2 gamma)``."""
    if gamma is None:
        gamma = extract_gamma(traj, loop, n, tol)
    lp = final_log_norm(traj, loop)
    dyn = dynamical_integral(loop, n, tol).value
    return abs(cmath.exp(lp - 2.0 * dyn - 2.0 * gamma) - 1.0)


def tdse_residual(traj: Trajectory, loop: ParameterLoop, index: int, q=None,
                  accuracy: int = 10) -> float:
    """Grid check of ``i psi_t = H psi`` at one recorded sample.

    ``H psi`` uses finite differences of the sampled wavefunction; ``psi_t``
    comes from the ODE right-hand side.  Returns the max-norm relative error.
    """
    if q is None:
        q = np.linspace(-6.0, 6.0, 3001)
    st = traj.state(index)
    st = EvolutionState(st.a, st.beta2, 0.0, st.n, st.t)
    X, Y, Z = _point_at(loop, st.t)
    p = ParameterPoint(X, Y, Z)
    h = q[1] - q[0]
    # pad so every point of the window gets a central stencil
    pad = accuracy // 2 + 1
    qq = np.concatenate([q[0] - h * np.arange(pad, 0, -1), q, q[-1] + h * np.arange(1, pad + 1)])
    psi = st.wavefunction()(qq)
    inner = slice(pad, pad + len(q))
    d1 = fd.derivative(psi, h, 1, accuracy)[inner]
    d2 = fd.derivative(psi, h, 2, accuracy)[inner]
    psi = psi[inner]
    h_psi = -0.5 * Z * d2 - 1j * Y * q * d1 + 0.5 * (X * q * q - 1j * Y) * psi
    lhs = 1j * time_derivative(st, p)(q)
    return float(np.max(np.abs(h_psi - lhs)) / np.max(np.abs(lhs)))


# -- convergence -------------------------------------------------------------

def adiabatic_periods(loop: ParameterLoop, factors=(25, 50, 100, 200)) -> list[float]:
    """Periods ``factor / omega_min`` for the adiabatic ladder."""
    w = loop.omega_min()
    return [f / w for f in factors]


def fitted_slope(periods, errors) -> float:
    """Least-squares slope of ``log err`` against ``log T``."""
    x = np.log(np.asarray(periods, dtype=float))
    y = np.log(np.asarray(errors, dtype=float))
    return float(np.polyfit(x, y, 1)[0])


def _local_slopes(periods, errors):
    out = [None]
    for i in range(1, len(periods)):
        e0, e1 = errors[i - 1], errors[i]
        if e0 > 0 and e1 > 0:
            out.append(math.log(e1 / e0) / math.log(periods[i] / periods[i - 1]))
        else:
            out.append(None)
    return out


def convergence_study(loop: ParameterLoop, n: int, periods,
                      ode_tol: float = DEFAULT_ODE_TOL, initial: str = "cyclic",
                      tol: float = 1e-12) -> list[dict]:
    """Extracted amplitude over a ladder of periods, against both closed forms.

    ``abs_err`` and ``slope`` compare with ``gamma_closed_form``;
    ``abs_err_evolved`` and ``slope_evolved`` with ``evolved_gamma_closed_form``.
    """
    periods = [float(T) for T in periods]
    if len(periods) < 3 or any(b <= a for a, b in zip(periods, periods[1:])):
        raise ValueError("need at least three increasing periods")
    closed = gamma_closed_form(loop, n, tol).value
    evolved = evolved_gamma_closed_form(loop, n, tol).value
    rows = []
    for T in periods:
        lp = loop.with_period(T)
        traj = evolve(lp, n, ode_tol, initial)
        g = extract_gamma(traj, lp, n, tol)
        rows.append({"T": T, "gamma_dyn": g, "gamma_closed": closed,
                     "abs_err": abs(g - closed), "gamma_evolved_closed": evolved,
                     "abs_err_evolved": abs(g - evolved),
                     "biorthonormality": biorthonormality_check(traj, lp, n, g, tol)})
    for key, skey in (("abs_err", "slope"), ("abs_err_evolved", "slope_evolved")):
        for row, s in zip(rows, _local_slopes(periods, [r[key] for r in rows])):
            row[skey] = s
    return rows
