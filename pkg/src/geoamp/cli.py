"""Command-line entry point: ``geoamp <command> [options]``.

Commands: validate, snapshot, gram, gamma, converge, cubic-check.  Options
come from an optional JSON config (``--config``) and are overridden by
flags.  Periods are given in units of ``1/omega_min`` of the loop unless the
config sets ``"period_units": "absolute"``.

Exit codes: 0 success, 2 config error, 3 regime violation, 4 integration
failure, 5 extraction failure, 6 quadrature failure, 7 singular pairing or
gauge failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .amplitude import (DEFAULT_CLOSED_TOL, DEFAULT_FD_STEP, DEFAULT_STEPS,
                        dynamical_integral, evolved_gamma_closed_form,
                        gamma_closed_form, gamma_connection)
from .cubic import cubic_operator_check
from .dynamics import (DEFAULT_ODE_TOL, biorthonormality_check, convergence_study,
                       evolve, extract_gamma, fitted_slope)
from .errors import (ExtractionError, GaugeError, IntegrationError, QuadratureError,
                     RegimeError, SingularPairingError)
from .params import PRESET_DEFAULTS, ParameterPoint, energy, make_preset_loop, validate_loop
from .reporting import REPORT_KEYS, csv_matrix, csv_table, dumps
from .spectral import eigen_residual, gram_matrix, inner_eta, snapshot_state

COMMANDS = ("validate", "snapshot", "gram", "gamma", "converge", "cubic-check")
ENGINES = ("closed", "connection", "dynamics", "all")
CONVERGE_COLUMNS = ("T", "gamma_dyn", "gamma_closed", "abs_err", "slope")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_REGIME = 3
EXIT_INTEGRATION = 4
EXIT_EXTRACTION = 5
EXIT_QUADRATURE = 6
EXIT_NUMERICAL = 7

# agreement thresholds reported alongside gamma
CONNECTION_ABS_TOL = 1e-6
DYNAMICS_REL_TOL = 2e-2


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    command: str
    loop: dict = field(default_factory=lambda: {"kind": "ellipse"})
    n: int = 0
    engine: str = "all"
    point: list = field(default_factory=lambda: [3.0, 2.0, 1.0])
    levels: int = 6
    tol: float = DEFAULT_CLOSED_TOL
    ode_tol: float = DEFAULT_ODE_TOL
    steps: int = DEFAULT_STEPS
    fd_step: float = DEFAULT_FD_STEP
    period: float = 200.0
    periods: list = field(default_factory=lambda: [25.0, 50.0, 100.0, 200.0])
    period_units: str = "omega_min"
    initial: str = "cyclic"
    lam: float = 1.0
    grid: dict = field(default_factory=lambda: {"q_min": 0.05, "q_max": 10.0,
                                                "points": 4000})
    out: str | None = None
    format: str = "json"

    def validate(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if not isinstance(self.loop, dict) or self.loop.get("kind") not in PRESET_DEFAULTS:
            raise ConfigError(f"loop kind must be one of {sorted(PRESET_DEFAULTS)}")
        if self.engine not in ENGINES:
            raise ConfigError(f"engine must be one of {ENGINES}")
        if int(self.n) != self.n or self.n < 0:
            raise ConfigError("n must be a nonnegative integer")
        for name in ("tol", "ode_tol", "fd_step", "period", "lam"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        if self.levels < 1 or self.steps < 8:
            raise ConfigError("levels must be >= 1 and steps >= 8")
        if len(self.point) != 3:
            raise ConfigError("point must be [X, Y, Z]")
        if self.period_units not in ("omega_min", "absolute"):
            raise ConfigError("period_units must be 'omega_min' or 'absolute'")
        if self.initial not in ("cyclic", "snapshot"):
            raise ConfigError("initial must be 'cyclic' or 'snapshot'")
        if self.format not in ("json", "csv"):
            raise ConfigError("format must be json or csv")
        if self.format == "csv" and self.command not in ("gram", "converge"):
            raise ConfigError("csv output is available for gram and converge only")
        if self.command == "converge":
            p = [float(x) for x in self.periods]
            if len(p) < 3 or any(b <= a for a, b in zip(p, p[1:])):
                raise ConfigError("converge needs at least three increasing periods")
        return self


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="geoamp",
        description="Geometric amplitude of the generalized oscillator with "
                    "imaginary frequency.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", type=Path)
        p.add_argument("--loop", help="loop preset name")
        p.add_argument("--n", type=int)
        p.add_argument("--engine", choices=ENGINES)
        p.add_argument("--periods", help="comma separated list")
        p.add_argument("--tol", type=float)
        p.add_argument("--out")
        p.add_argument("--format", choices=("json", "csv"))
        p.add_argument("--levels", type=int)
        p.add_argument("--point", help="X,Y,Z")
        p.add_argument("--lam", type=float, help="eigenvalue parameter of cubic-check")
        p.add_argument("--ode-tol", type=float, dest="ode_tol")
        p.add_argument("--initial", choices=("cyclic", "snapshot"))
    return parser


def load_config(args) -> ExperimentConfig:
    data = {}
    if args.config is not None:
        try:
            data = json.loads(Path(args.config).read_text("utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
    data.pop("command", None)
    known = set(ExperimentConfig.__dataclass_fields__) - {"command"}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    cfg = ExperimentConfig(command=args.command, **data)
    if args.loop is not None:
        cfg.loop = {"kind": args.loop}
    for name in ("n", "engine", "tol", "out", "format", "levels", "lam", "ode_tol",
                 "initial"):
        value = getattr(args, name)
        if value is not None:
            setattr(cfg, name, value)
    try:
        if args.periods is not None:
            cfg.periods = [float(x) for x in args.periods.split(",") if x.strip()]
        if args.point is not None:
            cfg.point = [float(x) for x in args.point.split(",")]
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return cfg.validate()


# -- commands ------------------------------------------------------------------

def _loop(cfg, period=1.0):
    descriptor = dict(cfg.loop)
    kind = descriptor.pop("kind")
    return make_preset_loop(kind, descriptor, period=period)


def _scale(loop, cfg):
    return 1.0 if cfg.period_units == "absolute" else 1.0 / loop.omega_min()


def cmd_validate(cfg):
    loop = _loop(cfg)
    return {"valid": True, "min_discriminant": validate_loop(loop),
            "omega_min": loop.omega_min(), "loop": dict(loop.descriptor)}, None


def cmd_snapshot(cfg):
    p = ParameterPoint(*map(float, cfg.point))
    st = snapshot_state(p, cfg.n)
    sd = energy(p, cfg.n)
    return {"point": list(p.as_tuple()), "n": cfg.n, "omega": sd.omega,
            "growth_rate": sd.growth_rate, "width": st.a, "coeffs": list(st.coeffs),
            "logN": st.logN, "eta_norm": inner_eta(st, st, p),
            "eigen_residual": eigen_residual(p, cfg.n)}, None


def cmd_gram(cfg):
    p = ParameterPoint(*map(float, cfg.point))
    G = gram_matrix(p, cfg.levels)
    off = G - np.diag(np.diag(G))
    res = {"point": list(p.as_tuple()), "levels": cfg.levels,
           "max_off_diagonal": float(np.abs(off).max()),
           "max_deviation": float(np.abs(G - np.eye(cfg.levels)).max()),
           "matrix": [list(row) for row in G]}
    return res, csv_matrix(G)


def cmd_gamma(cfg):
    engines = ("closed", "connection", "dynamics") if cfg.engine == "all" else (cfg.engine,)
    base = _loop(cfg)
    T = cfg.period * _scale(base, cfg)
    loop = base.with_period(T)
    res = {"n": cfg.n, "loop": dict(loop.descriptor), "period": T}
    closed = gamma_closed_form(loop, cfg.n, cfg.tol)
    evolved = evolved_gamma_closed_form(loop, cfg.n, cfg.tol)
    res["gammaClosed"] = closed.value
    res["gammaClosedError"] = closed.error
    res["gammaEvolvedClosed"] = evolved.value
    res["dynamicalIntegral"] = dynamical_integral(loop, cfg.n, cfg.tol).value
    flags = {}
    if "connection" in engines:
        conn = gamma_connection(loop, cfg.n, cfg.steps, cfg.fd_step)
        res["gammaConnection"] = conn.real
        res["gammaConnectionImag"] = conn.imag
        res["gammaConnectionError"] = conn.error
        flags["closed_vs_connection"] = abs(conn.real - closed.value) <= CONNECTION_ABS_TOL
        flags["connection_is_half_closed"] = (
            abs(conn.real - 0.5 * closed.value) <= CONNECTION_ABS_TOL)
    if "dynamics" in engines:
        traj = evolve(loop, cfg.n, cfg.ode_tol, cfg.initial)
        g = extract_gamma(traj, loop, cfg.n)
        res["gammaDynamics"] = g
        res["biorthonormality"] = biorthonormality_check(traj, loop, cfg.n, g)
        flags["closed_vs_dynamics"] = abs(g - closed.value) <= DYNAMICS_REL_TOL * abs(closed.value)
        flags["evolved_closed_vs_dynamics"] = (
            abs(g - evolved.value) <= DYNAMICS_REL_TOL * abs(evolved.value))
    res["agreement"] = flags
    return res, None


def cmd_converge(cfg):
    base = _loop(cfg)
    periods = [float(x) * _scale(base, cfg) for x in cfg.periods]
    rows = convergence_study(base, cfg.n, periods, cfg.ode_tol, cfg.initial)
    res = {"n": cfg.n, "loop": dict(base.descriptor), "rows": rows,
           "fitted_slope": fitted_slope(periods, [r["abs_err"] for r in rows]),
           "fitted_slope_evolved": fitted_slope(periods,
                                                [r["abs_err_evolved"] for r in rows])}
    return res, csv_table(CONVERGE_COLUMNS, rows)


def cmd_cubic(cfg):
    g = cfg.grid
    rep = cubic_operator_check(cfg.lam, g.get("q_min", 0.05), g.get("q_max", 10.0),
                               int(g.get("points", 4000)))
    return asdict(rep), None


HANDLERS = {"validate": cmd_validate, "snapshot": cmd_snapshot, "gram": cmd_gram,
            "gamma": cmd_gamma, "converge": cmd_converge, "cubic-check": cmd_cubic}

ERROR_CODES = (
    (ConfigError, EXIT_CONFIG),
    (RegimeError, EXIT_REGIME),
    (IntegrationError, EXIT_INTEGRATION),
    (ExtractionError, EXIT_EXTRACTION),
    (QuadratureError, EXIT_QUADRATURE),
    (SingularPairingError, EXIT_NUMERICAL),
    (GaugeError, EXIT_NUMERICAL),
)


def _error_entry(exc):
    for cls, code in ERROR_CODES:
        if isinstance(exc, cls):
            break
    else:
        code = EXIT_CONFIG
    entry = {"type": type(exc).__name__, "message": str(exc), "exit_code": code}
    for attr in ("s", "t"):
        if getattr(exc, attr, None) is not None:
            entry[attr] = float(getattr(exc, attr))
    return entry


def run(cfg: ExperimentConfig, stdout=None, stderr=None) -> int:
    """Execute ``cfg``, write the report, return the exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    tolerances = {"tol": cfg.tol, "ode_tol": cfg.ode_tol, "steps": cfg.steps,
                  "fd_step": cfg.fd_step, "connection_abs_tol": CONNECTION_ABS_TOL,
                  "dynamics_rel_tol": DYNAMICS_REL_TOL}
    diagnostics = {"version": __version__,
                   "engines": {e: __version__ for e in ENGINES[:3]},
                   "tolerances": tolerances}
    report = dict.fromkeys(REPORT_KEYS)
    report.update(command=cfg.command, config=asdict(cfg), diagnostics=diagnostics,
                  errors=[])
    table = None
    status = EXIT_OK
    try:
        report["results"], table = HANDLERS[cfg.command](cfg)
    except (ConfigError, RegimeError, IntegrationError, ExtractionError,
            QuadratureError, SingularPairingError, GaugeError, ValueError) as exc:
        entry = _error_entry(exc)
        report["errors"].append(entry)
        status = entry["exit_code"]
        stderr.write(dumps({"error": entry}))
    text = table if (cfg.format == "csv" and status == EXIT_OK) else dumps(report)
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8")
        if cfg.format == "csv" and status == EXIT_OK:
            Path(cfg.out).with_suffix(".json").write_text(dumps(report), encoding="utf-8")
    else:
        stdout.write(text)
    return status


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args)
    except (ConfigError, TypeError) as exc:
        entry = {"type": "ConfigError", "message": str(exc), "exit_code": EXIT_CONFIG}
        sys.stderr.write(dumps({"error": entry}))
        return EXIT_CONFIG
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
