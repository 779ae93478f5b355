"""Snapshot eigenstates, the metric operator and metric-weighted pairings.

Every wavefunction handled here has the closed form

    psi(q) = (c_0 + c_1 q + ... + c_d q**d) * exp(-a q**2 / 2) * exp(logN)

with complex ``a`` and ``logN``.  The family is closed under multiplication
by chirps ``exp(i c q**2)`` and by polynomials, under differentiation, and
under the complex rotation ``q -> -i q``, which is everything the Hamiltonian
and the metric need.  Pairings reduce to complex Gaussian moments evaluated
in closed form on the principal branch; no oscillatory integral is ever
sampled on the real line.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import SingularPairingError
from .hermite import hermite_coefficients
from .params import ParameterPoint, omega

# Re(s) below -RE_TOL * |s| is treated as a growing Gaussian
RE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class PolyGaussianState:
    coeffs: np.ndarray
    a: complex
    logN: complex = 0.0
    n: int | None = None

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else c[:1]
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "logN", complex(self.logN))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> complex:
        return complex(self.coeffs[-1])

    def __call__(self, q, amplitude: bool = True):
        """Evaluate on real ``q``; ``amplitude=False`` drops ``exp(logN)``."""
        q = np.asarray(q, dtype=float)
        val = npoly.polyval(q, self.coeffs) * np.exp(-0.5 * self.a * q * q)
        return val * cmath.exp(self.logN) if amplitude else val

    def _replace(self, **kw) -> "PolyGaussianState":
        fields = dict(coeffs=self.coeffs, a=self.a, logN=self.logN, n=self.n)
        fields.update(kw)
        return PolyGaussianState(**fields)

    def scaled(self, log_factor: complex) -> "PolyGaussianState":
        return self._replace(logN=self.logN + log_factor)

    def times_poly(self, poly) -> "PolyGaussianState":
        return self._replace(coeffs=npoly.polymul(self.coeffs, poly), n=None)

    def times_chirp(self, c: float) -> "PolyGaussianState":
        """Multiply by ``exp(i c q**2)``."""
        return self._replace(a=self.a - 2j * c)

    def rotated(self) -> "PolyGaussianState":
        """The substitution ``q -> -i q``."""
        k = np.arange(len(self.coeffs))
        return self._replace(coeffs=self.coeffs * (-1j) ** k, a=-self.a)

    def derivative(self) -> "PolyGaussianState":
        """``d/dq``: the polynomial becomes ``P' - a q P``."""
        dp = npoly.polyder(self.coeffs) if self.degree else np.zeros(1)
        qp = npoly.polymulx(self.coeffs)
        return self._replace(coeffs=npoly.polysub(dp, self.a * qp), n=None)

    def combine(self, other: "PolyGaussianState", weight: complex = 1.0):
        """``self + weight * other`` for states sharing ``a`` and ``logN``."""
        if self.a != other.a or self.logN != other.logN:
            raise ValueError("states must share Gaussian width and amplitude")
        return self._replace(coeffs=npoly.polyadd(self.coeffs, weight * other.coeffs),
                             n=None)


# -- moments ----------------------------------------------------------------

def gaussian_moment(k: int, s: complex) -> complex:
    """``int q**(2k) exp(-s q**2) dq = Gamma(k + 1/2) s**-(k + 1/2)``.

    Principal branch; for ``Re s = 0`` this is the Abel-regularized (Fresnel)
    value, i.e. the limit of the convergent integrals as ``Re s -> 0+``.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    s = complex(s)
    if s == 0:
        raise SingularPairingError("Gaussian exponent vanishes; integral diverges")
    if s.real < -RE_TOL * abs(s):
        raise SingularPairingError(f"Gaussian exponent {s} has negative real part")
    return math.gamma(k + 0.5) * cmath.exp(-(k + 0.5) * cmath.log(s))


def gaussian_moment_any(j: int, s: complex) -> complex:
    """Moment of ``q**j``; odd moments vanish by symmetry."""
    if j % 2:
        return 0.0j
    return gaussian_moment(j // 2, s)


def polynomial_gaussian_integral(poly, s: complex) -> complex:
    """``int P(q) exp(-s q**2) dq`` for the coefficient list ``poly``."""
    total = 0.0j
    for k in range(0, len(poly), 2):
        total += poly[k] * gaussian_moment(k // 2, s)
    return total


def _pairing(s1: PolyGaussianState, s2: PolyGaussianState, log: bool):
    s = 0.5 * (s1.a.conjugate() + s2.a)
    if s == 0:
        raise SingularPairingError(
            "combined Gaussian exponent is zero (no decaying part); "
            "the pairing diverges")
    poly = npoly.polymul(np.conj(s1.coeffs), s2.coeffs)
    total = polynomial_gaussian_integral(poly, s)
    pref = s1.logN.conjugate() + s2.logN
    if log:
        if total == 0:
            return complex(-math.inf)
        return cmath.log(total) + pref
    return total * cmath.exp(pref)


def inner_plain(s1: PolyGaussianState, s2: PolyGaussianState) -> complex:
    """Naive ``int conj(s1) s2 dq``; raises for non-square-integrable states."""
    return _pairing(s1, s2, log=False)


# -- metric ----------------------------------------------------------------

@dataclass(frozen=True)
class MetricOperator:
    """``eta = exp(-i r q**2/2) exp(pi/4 (qp + pq)) exp(i r q**2/2)``, ``r = Y/Z``.

    The central dilation acts as ``f(q) -> exp(-i pi/4) f(-i q)``.
    """

    y_over_z: float

    @classmethod
    def at(cls, p: ParameterPoint) -> "MetricOperator":
        return cls(p.Y / p.Z)

    def __call__(self, state: PolyGaussianState) -> PolyGaussianState:
        r = self.y_over_z
        out = state.times_chirp(0.5 * r).rotated().times_chirp(-0.5 * r)
        return out.scaled(-0.25j * math.pi)._replace(n=state.n)


def apply_metric(state: PolyGaussianState, p: ParameterPoint) -> PolyGaussianState:
    """``(eta psi)(q) = exp(-i pi/4) exp(-i (Y/Z) q**2) psi(-i q)``."""
    return MetricOperator.at(p)(state)


def inner_eta(s1: PolyGaussianState, s2: PolyGaussianState, p: ParameterPoint,
              log: bool = False) -> complex:
    """``<s1| eta(p) |s2>``; with ``log=True`` the principal log is returned."""
    return _pairing(s1, apply_metric(s2, p), log=log)


# -- Hamiltonian and snapshot eigenstates ------------------------------------

def apply_hamiltonian(state: PolyGaussianState, p: ParameterPoint) -> PolyGaussianState:
    """``H psi = -Z/2 psi'' - i Y q psi' + (X q**2 - i Y)/2 psi`` in closed form."""
    d1 = state.derivative()
    d2 = d1.derivative()
    out = d2._replace(coeffs=-0.5 * p.Z * d2.coeffs)
    out = out.combine(d1.times_poly([0, 1]), -1j * p.Y)
    out = out.combine(state.times_poly([-0.5j * p.Y, 0, 0.5 * p.X]))
    return out


def snapshot_width(p: ParameterPoint) -> complex:
    """Gaussian width ``a* = i (Y + omega)/Z`` of the growing branch."""
    return 1j * (p.Y + omega(p)) / p.Z


def snapshot_scale2(p: ParameterPoint) -> complex:
    """Square of the Hermite argument scale, ``beta**2 = i omega / Z``."""
    return 1j * omega(p) / p.Z


def hermite_state(n: int, beta: complex, a: complex, logN: complex = 0.0):
    """``H_n(beta q) exp(-a q**2/2) exp(logN)`` as a :class:`PolyGaussianState`."""
    h = np.asarray(hermite_coefficients(n), dtype=float)
    coeffs = h * beta ** np.arange(n + 1)
    return PolyGaussianState(coeffs, a, logN, n)


def snapshot_state(p: ParameterPoint, n: int) -> PolyGaussianState:
    """Instantaneous eigenstate ``psi_n`` with eigenvalue ``i (n + 1/2) omega``.

    Gauge: ``<psi_n|eta|psi_n> = 1`` and the leading polynomial coefficient
    is real positive.
    """
    if int(n) != n or n < 0:
        raise ValueError(f"level must be a nonnegative integer, got {n!r}")
    n = int(n)
    beta = cmath.sqrt(snapshot_scale2(p))
    raw = hermite_state(n, beta, snapshot_width(p), -1j * n * cmath.phase(beta))
    norm = inner_eta(raw, raw, p)
    if not (norm.real > 0 and abs(norm.imag) <= 1e-10 * norm.real):
        raise SingularPairingError(f"snapshot metric norm {norm} is not real positive")
    return raw.scaled(-0.5 * math.log(norm.real))


def gram_matrix(p: ParameterPoint, levels: int) -> np.ndarray:
    """``G[m, n] = <psi_m|eta|psi_n>`` for ``m, n < levels``."""
    if levels < 1:
        raise ValueError("levels must be at least 1")
    states = [snapshot_state(p, k) for k in range(levels)]
    return np.array([[inner_eta(sm, sn, p) for sn in states] for sm in states])


def eigen_residual(p: ParameterPoint, n: int, q=None) -> float:
    """Max-norm relative residual of ``H psi_n = i (n+1/2) omega psi_n`` on ``q``."""
    if q is None:
        q = np.linspace(-6.0, 6.0, 2401)
    state = snapshot_state(p, n)
    lam = 1j * (n + 0.5) * omega(p)
    lhs = apply_hamiltonian(state, p)(q)
    rhs = lam * state(q)
    return float(np.max(np.abs(lhs - rhs)) / np.max(np.abs(rhs)))
