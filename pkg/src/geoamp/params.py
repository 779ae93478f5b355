"""Driving parameters of the generalized oscillator and closed loops in them.

The Hamiltonian is ``H = (Z p**2 + Y (pq + qp) + X q**2) / 2``.  Only the
imaginary-frequency regime ``Y**2 > X Z`` with ``Z > 0`` is supported.

Loops are parametrized by a normalized coordinate ``s`` in ``[0, 1]``;
physical time is ``t = s * period``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import RegimeError

TWO_PI = 2.0 * math.pi
DEFAULT_GRID = 10_000

# components(s) -> (X, Y, Z) arrays broadcast against s
ComponentFn = Callable[[np.ndarray], tuple]


@dataclass(frozen=True)
class ParameterPoint:
    X: float
    Y: float
    Z: float

    def __post_init__(self):
        if not self.Z > 0:
            raise RegimeError(f"Z must be positive, got Z={self.Z!r}")
        disc = self.Y * self.Y - self.X * self.Z
        if not disc > 0:
            raise RegimeError(
                f"regime violation: Y**2 - X*Z = {disc!r} <= 0 at "
                f"(X, Y, Z) = ({self.X}, {self.Y}, {self.Z})"
            )

    @property
    def y_over_z(self) -> float:
        return self.Y / self.Z

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.X, self.Y, self.Z)


@dataclass(frozen=True)
class SpectralData:
    omega: float
    n: int
    growth_rate: float


def omega(p: ParameterPoint) -> float:
    """Return the inverted-oscillator frequency ``+sqrt(Y**2 - X Z)``."""
    return math.sqrt(p.Y * p.Y - p.X * p.Z)


def energy(p: ParameterPoint, n: int) -> SpectralData:
    """Level ``n`` has eigenvalue ``i * growth_rate``, ``growth_rate = (n + 1/2) omega``."""
    if int(n) != n or n < 0:
        raise ValueError(f"level must be a nonnegative integer, got {n!r}")
    w = omega(p)
    return SpectralData(omega=w, n=int(n), growth_rate=(n + 0.5) * w)


def _discriminant(X, Y, Z):
    return Y * Y - X * Z


@dataclass(frozen=True)
class ParameterLoop:
    """A closed C1 loop ``s -> (X, Y, Z)`` with period ``period``.

    ``components`` and ``derivatives`` are vectorized callables returning
    ``(X, Y, Z)`` and ``(dX/ds, dY/ds, dZ/ds)``.  Loops are built by
    :func:`make_preset_loop` or derived from one with :func:`reverse_loop`,
    :func:`shift_loop` and :func:`warp_loop`; they are validated on
    construction.
    """

    kind: str
    period: float
    components: ComponentFn = field(repr=False, compare=False)
    derivatives: ComponentFn = field(repr=False, compare=False)
    descriptor: Mapping = field(default_factory=dict, compare=False)
    grid: int = field(default=DEFAULT_GRID, repr=False, compare=False)

    def __post_init__(self):
        if not self.period > 0:
            raise ValueError(f"period must be positive, got {self.period!r}")
        validate_loop(self, self.grid)

    def point(self, s: float) -> ParameterPoint:
        X, Y, Z = self.components(np.asarray(float(s)))
        return ParameterPoint(float(X), float(Y), float(Z))

    def derivative(self, s: float) -> tuple[float, float, float]:
        dX, dY, dZ = self.derivatives(np.asarray(float(s)))
        return (float(dX), float(dY), float(dZ))

    def sample(self, s) -> np.ndarray:
        """Stack of ``(X, Y, Z)`` at the coordinates ``s``; shape ``(3, len(s))``."""
        s = np.asarray(s, dtype=float)
        return np.array(np.broadcast_arrays(*self.components(s)), dtype=float)

    def sample_derivative(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        return np.array(np.broadcast_arrays(*self.derivatives(s)), dtype=float)

    def omega_at(self, s):
        X, Y, Z = self.sample(s)
        return np.sqrt(_discriminant(X, Y, Z))

    def omega_min(self, grid: int = DEFAULT_GRID) -> float:
        return float(self.omega_at(np.linspace(0.0, 1.0, grid + 1)).min())

    def with_period(self, period: float) -> "ParameterLoop":
        return ParameterLoop(self.kind, period, self.components, self.derivatives,
                             self.descriptor, self.grid)


def validate_loop(loop: ParameterLoop, grid: int = DEFAULT_GRID) -> float:
    """Check the regime condition on a dense grid; return ``min(Y**2 - X Z)``.

    The grid minimum is refined by a bounded scalar minimization in the
    cell around it.  Raises :class:`RegimeError` carrying the offending ``s``.
    """
    s = np.linspace(0.0, 1.0, grid + 1)
    X, Y, Z = np.broadcast_arrays(*loop.components(s))
    bad = np.flatnonzero(Z <= 0)
    if bad.size:
        s_bad = float(s[bad[0]])
        raise RegimeError(f"Z <= 0 on loop at s={s_bad:.6g}", s=s_bad)
    disc = _discriminant(X, Y, Z)
    bad = np.flatnonzero(disc <= 0)
    if bad.size:
        s_bad = float(s[bad[0]])
        raise RegimeError(
            f"regime violation on loop at s={s_bad:.6g}: Y**2 - X*Z = {disc[bad[0]]:.6g}",
            s=s_bad,
        )
    k = int(np.argmin(disc))
    lo, hi = s[max(k - 1, 0)], s[min(k + 1, grid)]

    def f(x):
        Xs, Ys, Zs = loop.components(np.asarray(x))
        return float(_discriminant(Xs, Ys, Zs))

    res = minimize_scalar(f, bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12})
    best = min(float(res.fun), float(disc[k]))
    if best <= 0:
        raise RegimeError(
            f"regime violation on loop near s={float(res.x):.6g}", s=float(res.x))
    return best


def min_discriminant(loop: ParameterLoop, grid: int = DEFAULT_GRID) -> float:
    return validate_loop(loop, grid)


# -- presets ---------------------------------------------------------------

def _fourier(const, cos, sin):
    cos = np.asarray(cos, dtype=float)
    sin = np.asarray(sin, dtype=float)
    k = np.arange(1, max(len(cos), len(sin)) + 1)
    cos = np.pad(cos, (0, len(k) - len(cos)))
    sin = np.pad(sin, (0, len(k) - len(sin)))

    def value(s):
        th = TWO_PI * np.multiply.outer(np.asarray(s, dtype=float), k)
        return const + np.cos(th) @ cos + np.sin(th) @ sin

    def deriv(s):
        th = TWO_PI * np.multiply.outer(np.asarray(s, dtype=float), k)
        return np.sin(th) @ (-TWO_PI * k * cos) + np.cos(th) @ (TWO_PI * k * sin)

    return value, deriv


def _fourier_loop(kind, period, series, descriptor, grid):
    fns = [_fourier(*c) for c in series]

    def components(s):
        return tuple(f(s) for f, _ in fns)

    def derivatives(s):
        return tuple(d(s) for _, d in fns)

    return ParameterLoop(kind, float(period), components, derivatives, descriptor, grid)


PRESET_DEFAULTS = {
    "ellipse": {"y0": 2.0, "rY": 0.5, "x0": 1.0, "rX": 0.5},
    "constant-X-wobble": {"Y": 2.0, "Z": 1.0, "x0": 3.0, "rX": 0.5},
    "custom-fourier": {},
}


def make_preset_loop(kind: str, parameters: Mapping | None = None, *,
                     period: float = 1.0, grid: int = DEFAULT_GRID) -> ParameterLoop:
    """Build a validated loop from a preset name and its numeric parameters.

    ``ellipse`` takes ``y0, rY, x0, rX`` (``Z = 1``); ``constant-X-wobble`` takes
    ``Y, Z, x0, rX``; ``custom-fourier`` takes ``X``, ``Y`` and ``Z`` entries,
    each a mapping with ``const`` and optional ``cos`` and ``sin`` lists
    (coefficients of harmonics 1, 2, ...).
    """
    if kind not in PRESET_DEFAULTS:
        raise ValueError(f"unknown loop preset {kind!r}; "
                         f"expected one of {sorted(PRESET_DEFAULTS)}")
    params = dict(PRESET_DEFAULTS[kind])
    params.update(parameters or {})
    descriptor = {"kind": kind, **params}
    if kind == "ellipse":
        series = [
            (params["x0"], [], [params["rX"]]),
            (params["y0"], [params["rY"]], []),
            (1.0, [], []),
        ]
    elif kind == "constant-X-wobble":
        series = [
            (params["x0"], [], [params["rX"]]),
            (params["Y"], [], []),
            (params["Z"], [], []),
        ]
    else:
        series = []
        for name in ("X", "Y", "Z"):
            if name not in params:
                raise ValueError(f"custom-fourier loop needs a {name!r} entry")
            comp = params[name]
            series.append((float(comp["const"]), list(comp.get("cos", [])),
                           list(comp.get("sin", []))))
    return _fourier_loop(kind, period, series, descriptor, grid)


def constant_loop(p: ParameterPoint, period: float = 1.0) -> ParameterLoop:
    """A degenerate loop that stays at ``p``."""
    return make_preset_loop(
        "custom-fourier",
        {"X": {"const": p.X}, "Y": {"const": p.Y}, "Z": {"const": p.Z}},
        period=period,
    )


def loop_from_descriptor(descriptor: Mapping, period: float = 1.0) -> ParameterLoop:
    """Inverse of ``ParameterLoop.descriptor`` for the preset kinds."""
    descriptor = dict(descriptor)
    kind = descriptor.pop("kind")
    return make_preset_loop(kind, descriptor, period=period)


# -- derived loops ---------------------------------------------------------

def reverse_loop(loop: ParameterLoop) -> ParameterLoop:
    """Traverse ``loop`` backwards: ``point'(s) = point(1 - s)``."""
    def components(s):
        return loop.components(1.0 - np.asarray(s))

    def derivatives(s):
        return tuple(-np.asarray(d) for d in loop.derivatives(1.0 - np.asarray(s)))

    descriptor = {"kind": "reverse", "of": dict(loop.descriptor)}
    return ParameterLoop(loop.kind, loop.period, components, derivatives, descriptor,
                         loop.grid)


def shift_loop(loop: ParameterLoop, s0: float) -> ParameterLoop:
    """Move the start point: ``point'(s) = point((s + s0) mod 1)``."""
    def components(s):
        return loop.components(np.mod(np.asarray(s) + s0, 1.0))

    def derivatives(s):
        return loop.derivatives(np.mod(np.asarray(s) + s0, 1.0))

    descriptor = {"kind": "shift", "s0": s0, "of": dict(loop.descriptor)}
    return ParameterLoop(loop.kind, loop.period, components, derivatives, descriptor,
                         loop.grid)


def warp_loop(loop: ParameterLoop, warp=None, dwarp=None) -> ParameterLoop:
    """Reparametrize by a monotone map of ``[0, 1]`` onto itself.

    The default warp ``s -> (1 - cos(pi s)) / 2`` stalls at both ends, so the
    warped loop is still closed C1 (its derivative vanishes at ``s = 0, 1``).
    """
    if warp is None:
        def warp(s):
            return 0.5 * (1.0 - np.cos(math.pi * s))

        def dwarp(s):
            return 0.5 * math.pi * np.sin(math.pi * s)

    def components(s):
        return loop.components(warp(np.asarray(s, dtype=float)))

    def derivatives(s):
        s = np.asarray(s, dtype=float)
        w = dwarp(s)
        return tuple(np.asarray(d) * w for d in loop.derivatives(warp(s)))

    descriptor = {"kind": "warp", "of": dict(loop.descriptor)}
    return ParameterLoop(loop.kind, loop.period, components, derivatives, descriptor,
                         loop.grid)


def is_closed(loop: ParameterLoop, atol: float = 1e-12) -> bool:
    """``point(0) == point(1)`` and ``derivative(0) == derivative(1)``."""
    p = loop.sample(np.array([0.0, 1.0]))
    d = loop.sample_derivative(np.array([0.0, 1.0]))
    return bool(np.allclose(p[:, 0], p[:, 1], atol=atol, rtol=0)
                and np.allclose(d[:, 0], d[:, 1], atol=atol, rtol=0))


def sample_points(loop: ParameterLoop, s: Sequence[float]) -> list[ParameterPoint]:
    return [loop.point(x) for x in s]
