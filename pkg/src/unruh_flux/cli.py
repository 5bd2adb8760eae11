"""Command-line front end.

Subcommands: fdr-check, correlator, stress-grid, polarization, flux,
oracle-compare.  Settings come from an optional JSON config file; command
line flags override it.  Exit codes: 0 ok, 1 check failed, 2 invalid input,
3 I/O error, 4 convergence failure.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from . import kinematics as kin
from .correlator import coincidence_delta_phi_sq, delta_two_point
from .errors import ConvergenceFailure, DomainError, OnTrajectory, ParameterError, TooCloseToSingularSet
from .oscillator import ModelParams, fdr_residual
from .quadrature import QuadratureSpec
from .stress import GUARD_LAMBDA, GUARD_NULL, WorldTube, check_guard, stress_at, world_tube_flux

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_IO, EXIT_CONVERGENCE = 0, 1, 2, 3, 4
SCHEMA_VERSION = 1
T_TOL = 1e-6  # in units of a^2

GRID_COLUMNS = ["u", "v", "region", "side", "lambda", "delta_phi2", "delta_phi2_error",
                "t_uu", "t_vv", "t_error", "status"]
POL_COLUMNS = ["level", "branch", "eta", "u", "v", "delta_phi2", "error", "staticity_dev"]

DEFAULT_PAIRS = [
    # both right of the trajectory
    [[-2, 2], [-3, 3]], [[-0.5, 1], [-3, 2]], [[-2, 2], [-2, 2]],
    # both left of the trajectory
    [[1, 2], [0.5, 3]], [[1, 2], [1, 2]], [[-0.3, 1], [0.5, 0.7]],
    # straddling the trajectory or a horizon
    [[-2, 2], [0.5, 0.7]], [[-2, 2], [1, -1]], [[1, 2], [-1, -2]],
]


class InputError(Exception):
    pass


@dataclass
class GridSpec:
    u_min: float = -3.0
    u_max: float = 3.0
    n_u: int = 10
    v_min: float = -3.0
    v_max: float = 3.0
    n_v: int = 10

    def validate(self):
        vals = [self.u_min, self.u_max, self.v_min, self.v_max]
        if not all(math.isfinite(x) for x in vals) or self.n_u < 1 or self.n_v < 1:
            raise InputError("grid bounds must be finite and n_u, n_v >= 1")


@dataclass
class RunConfig:
    a: float = 1.0
    omega0: float = 2.0
    coupling: float = 2.0 * math.sqrt(0.1)
    quadrature: dict = field(default_factory=dict)
    grid: GridSpec = field(default_factory=GridSpec)
    guard_null: float = GUARD_NULL
    guard_lambda: float = GUARD_LAMBDA
    out: str | None = None
    format: str = "csv"

    def params(self) -> ModelParams:
        return ModelParams(self.a, self.omega0, self.coupling)

    def spec(self) -> QuadratureSpec:
        return QuadratureSpec(**self.quadrature)

    def guards(self) -> dict:
        return {"guard_null": self.guard_null, "guard_lambda": self.guard_lambda}


def load_config(path: str | None) -> RunConfig:
    cfg = RunConfig()
    if not path:
        return cfg
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"config {path} is not valid JSON: {exc}") from exc
    model = raw.get("model", {})
    for key in ("a", "omega0", "coupling"):
        if key in model:
            setattr(cfg, key, float(model[key]))
    if "gamma" in model:
        cfg.coupling = 2.0 * math.sqrt(float(model["gamma"]))
    cfg.quadrature = dict(raw.get("quadrature", {}))
    if "grid" in raw:
        cfg.grid = GridSpec(**raw["grid"])
    guard = raw.get("guard", {})
    cfg.guard_null = float(guard.get("null", cfg.guard_null))
    cfg.guard_lambda = float(guard.get("lambda", cfg.guard_lambda))
    output = raw.get("output", {})
    cfg.out = output.get("path", cfg.out)
    cfg.format = output.get("format", cfg.format)
    return cfg


def parse_grid(text: str) -> GridSpec:
    try:
        (u0, u1, nu), (v0, v1, nv) = [part.split(":") for part in text.split(",")]
        return GridSpec(float(u0), float(u1), int(nu), float(v0), float(v1), int(nv))
    except ValueError as exc:
        raise InputError(f"bad --grid {text!r}; expected u_min:u_max:n_u,v_min:v_max:n_v") from exc


def parse_point(text: str) -> kin.SpacetimePoint:
    try:
        u, v = (float(x) for x in text.split(","))
    except ValueError as exc:
        raise InputError(f"bad point {text!r}; expected u,v") from exc
    return kin.SpacetimePoint(u, v)


def resolve(args) -> RunConfig:
    cfg = load_config(args.config)
    for key in ("a", "omega0", "coupling"):
        val = getattr(args, key, None)
        if val is not None:
            setattr(cfg, key, val)
    if getattr(args, "gamma", None) is not None:
        cfg.coupling = 2.0 * math.sqrt(args.gamma)
    if getattr(args, "grid", None):
        cfg.grid = parse_grid(args.grid)
    if getattr(args, "out", None):
        cfg.out = args.out
    if getattr(args, "format", None):
        cfg.format = args.format
    if cfg.format not in ("csv", "json"):
        raise InputError(f"unknown format {cfg.format!r}")
    cfg.grid.validate()
    return cfg


# ------------------------------------------------------------- formatting
def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    return format(float(x), ".17g")


def render(records: list, columns: list, fmt_tag: str, name: str) -> str:
    buf = io.StringIO()
    if fmt_tag == "csv":
        buf.write(f"# {name} schema v{SCHEMA_VERSION}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in records:
            w.writerow([fmt(r.get(c)) for c in columns])
    else:
        for r in records:
            obj = {"schema": f"{name}/v{SCHEMA_VERSION}"}
            obj.update({c: r.get(c) for c in columns})
            buf.write(json.dumps(obj, sort_keys=False, allow_nan=True) + "\n")
    return buf.getvalue()


def emit(text: str, path: str | None):
    if not path:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def _print_json(obj):
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


# --------------------------------------------------------------- commands
def cmd_fdr_check(cfg: RunConfig, n: int = 100_000) -> int:
    params = cfg.params()
    omega = params.a * np.logspace(-6, 6, n)
    res = np.abs(fdr_residual(omega, params))
    worst = float(res.max())
    _print_json({"command": "fdr-check", "n_omega": n, "max_abs_residual": worst,
                 "gamma": params.gamma, "pass": worst < 1e-12})
    return EXIT_OK if worst < 1e-12 else EXIT_FAIL


def cmd_correlator(cfg: RunConfig, p: kin.SpacetimePoint, q: kin.SpacetimePoint) -> int:
    r = delta_two_point(p, q, cfg.params(), cfg.spec())
    _print_json({"command": "correlator", "p": [p.u, p.v], "q": [q.u, q.v],
                 "value_re": r.value.real, "value_im": r.value.imag, "error": r.error,
                 "terms_active": list(r.terms), "n_evals": r.n_evals})
    return EXIT_OK


def grid_cell(job) -> dict:
    u, v, cfg = job
    params, spec = cfg.params(), cfg.spec()
    rec = {"u": u, "v": v}
    p = kin.SpacetimePoint(u, v)
    try:
        lam = check_guard(p, params.a, **cfg.guards())
    except OnTrajectory:
        rec["status"] = "skipped_trajectory"
        return rec
    except TooCloseToSingularSet as exc:
        near_traj = "trajectory" in str(exc)
        rec["status"] = "skipped_trajectory" if near_traj else "skipped_boundary"
        return rec
    except DomainError:
        rec["status"] = "skipped_boundary"
        return rec
    try:
        c = coincidence_delta_phi_sq(p, params, spec)
        s = stress_at(p, params, spec, **cfg.guards())
    except ConvergenceFailure:
        rec["status"] = "convergence_failure"
        return rec
    rec.update(region=kin.classify_region(p).value,
               side=kin.side_of_trajectory(p, params.a).tag.value, **{"lambda": lam},
               delta_phi2=c.value, delta_phi2_error=c.error,
               t_uu=s.t_uu, t_vv=s.t_vv, t_error=s.error_estimate, status="ok")
    return rec


def run_map(fn, jobs, workers: int):
    if workers and workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, jobs))  # map keeps submission order
    return [fn(j) for j in jobs]


def cmd_stress_grid(cfg: RunConfig, workers: int = 0) -> int:
    cfg.params()  # validate before any work
    g = cfg.grid
    us = np.linspace(g.u_min, g.u_max, g.n_u) if g.n_u > 1 else np.array([g.u_min])
    vs = np.linspace(g.v_min, g.v_max, g.n_v) if g.n_v > 1 else np.array([g.v_min])
    jobs = [(float(u), float(v), cfg) for u in us for v in vs]
    records = run_map(grid_cell, jobs, workers)
    emit(render(records, GRID_COLUMNS, cfg.format, "stress-grid"), cfg.out)
    if any(r["status"] == "convergence_failure" for r in records):
        return EXIT_CONVERGENCE
    bound = T_TOL * cfg.a**2
    bad = [r for r in records if r["status"] == "ok" and max(abs(r["t_uu"]), abs(r["t_vv"])) > bound]
    return EXIT_FAIL if bad else EXIT_OK


def hyperbola_points(level: float, a: float, etas) -> list:
    """Points with a^2 u v = level, one branch per region the level reaches."""
    r = math.sqrt(abs(level)) / a
    e = np.asarray(etas, dtype=float)
    if level < 0:
        branches = {"R": (-r * np.exp(-e), r * np.exp(e)), "L": (r * np.exp(-e), -r * np.exp(e))}
    else:
        branches = {"F": (r * np.exp(-e), r * np.exp(e)), "P": (-r * np.exp(-e), -r * np.exp(e))}
    return [(name, float(eta), float(u), float(v))
            for name, (uu, vv) in branches.items() for eta, u, v in zip(e, uu, vv)]


def cmd_polarization(cfg: RunConfig, levels, n_points: int = 21, eta_span: float = 2.0) -> int:
    params, spec = cfg.params(), cfg.spec()
    etas = np.linspace(-eta_span, eta_span, n_points)
    records = []
    for level in levels:
        if level == 0 or level == -1:
            raise InputError("levels must avoid the horizons (0) and the trajectory (-1)")
        rows = hyperbola_points(level, params.a, etas)
        first = {}
        for branch, eta, u, v in rows:
            c = coincidence_delta_phi_sq(kin.SpacetimePoint(u, v), params, spec)
            ref = first.setdefault(branch, c.value)
            dev = 0.0 if ref == c.value else abs(c.value - ref) / max(abs(ref), 1e-300)
            records.append({"level": level, "branch": branch, "eta": eta, "u": u, "v": v,
                            "delta_phi2": c.value, "error": c.error, "staticity_dev": dev})
    emit(render(records, POL_COLUMNS, cfg.format, "polarization"), cfg.out)
    worst = max((r["staticity_dev"] for r in records), default=0.0)
    return EXIT_OK if worst <= 1e-6 else EXIT_FAIL


def cmd_flux(cfg: RunConfig, tube: WorldTube, n_samples: int = 16) -> int:
    params = cfg.params()
    r = world_tube_flux(tube, params, cfg.spec(), n_samples, **cfg.guards())
    bound = r.error + T_TOL * params.a**2
    ok = abs(r.value) <= bound
    _print_json({"command": "flux", "tube": asdict(tube), "flux": r.value, "error": r.error,
                 "convention": "outward positive", "pass": ok})
    return EXIT_OK if ok else EXIT_FAIL


def cmd_oracle_compare(cfg: RunConfig, pairs, refine: bool = False) -> int:
    from .oracle import ModeSet, oracle_two_point

    params, spec = cfg.params(), cfg.spec()
    modes = ModeSet.default(params.a)
    if refine:
        modes = modes.refined()
    rows, worst = [], 0.0
    for (pu, pv), (qu, qv) in pairs:
        p, q = kin.SpacetimePoint(pu, pv), kin.SpacetimePoint(qu, qv)
        d = delta_two_point(p, q, params, spec).value
        o = oracle_two_point(p, q, params, modes)
        dev = abs(o - d) / abs(d) if d != 0 else abs(o)
        worst = max(worst, dev)
        rows.append({"p": [pu, pv], "q": [qu, qv], "analytic": [d.real, d.imag],
                     "oracle": [o.real, o.imag], "rel_dev": dev})
    ok = worst <= 0.05
    _print_json({"command": "oracle-compare", "pairs": rows, "max_rel_dev": worst, "pass": ok})
    return EXIT_OK if ok else EXIT_FAIL


# ------------------------------------------------------------------ parser
def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="unruh-flux", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON configuration file")
    common.add_argument("--a", type=float, help="proper acceleration")
    common.add_argument("--omega0", type=float, help="bare oscillator frequency")
    common.add_argument("--coupling", type=float, help="coupling e (gamma = e^2/4)")
    common.add_argument("--gamma", type=float, help="damping rate, alternative to --coupling")
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--format", choices=["csv", "json"])
    sub = ap.add_subparsers(dest="command", required=True)

    sub.add_parser("fdr-check", parents=[common], help="check chi + chi* = 4 gamma |chi|^2")

    c = sub.add_parser("correlator", parents=[common], help="evaluate G - G_f for one pair")
    c.add_argument("--p", required=True, help="first point as u,v")
    c.add_argument("--q", required=True, help="second point as u,v")

    s = sub.add_parser("stress-grid", parents=[common], help="stress and polarization on a grid")
    s.add_argument("--grid", help="u_min:u_max:n_u,v_min:v_max:n_v")
    s.add_argument("--workers", type=int, default=0)

    p = sub.add_parser("polarization", parents=[common], help="<phi^2> along a^2 uv = const")
    p.add_argument("--levels", default="-4,-0.25,1", help="comma-separated a^2 uv values")
    p.add_argument("--n-points", type=int, default=21)

    f = sub.add_parser("flux", parents=[common], help="net flux through a world tube")
    f.add_argument("--lambda-left", type=float, default=0.5)
    f.add_argument("--lambda-right", type=float, default=-0.5)
    f.add_argument("--tau-min", type=float, default=-1.0)
    f.add_argument("--tau-max", type=float, default=1.0)
    f.add_argument("--n-samples", type=int, default=16)

    o = sub.add_parser("oracle-compare", parents=[common], help="analytic vs mode-sum correlator")
    o.add_argument("--points", help="JSON file with a list of [[u,v],[u',v']] pairs")
    o.add_argument("--refine", action="store_true", help="use the refined mode set")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve(args)
        if args.command == "fdr-check":
            return cmd_fdr_check(cfg)
        if args.command == "correlator":
            return cmd_correlator(cfg, parse_point(args.p), parse_point(args.q))
        if args.command == "stress-grid":
            return cmd_stress_grid(cfg, args.workers)
        if args.command == "polarization":
            try:
                levels = [float(x) for x in args.levels.split(",")]
            except ValueError as exc:
                raise InputError(f"bad --levels {args.levels!r}") from exc
            return cmd_polarization(cfg, levels, args.n_points)
        if args.command == "flux":
            tube = WorldTube(args.lambda_left, args.lambda_right, args.tau_min, args.tau_max)
            return cmd_flux(cfg, tube, args.n_samples)
        if args.command == "oracle-compare":
            pairs = DEFAULT_PAIRS
            if args.points:
                try:
                    with open(args.points, encoding="utf-8") as fh:
                        pairs = json.load(fh)
                except OSError as exc:
                    raise InputError(f"cannot read {args.points}: {exc}") from exc
            return cmd_oracle_compare(cfg, pairs, args.refine)
    except (InputError, ParameterError, DomainError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConvergenceFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
