"""Command-line entry point.

Subcommands: groundstate, minimize, saddle, sweep, verify.  Configuration
comes from a JSON file (--config) and/or flags; flags win.  Exit codes:
0 success, 2 configuration error, 3 solver non-convergence, 4 escape or
nonexistence outcome (informative), 5 resolution guard tripped.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .asymptotics import multiplier_limit_check, sweep, write_sweep_csv, write_sweep_summary
from .errors import ConfigurationError, ConvergenceError, FgpeError, ResolutionError
from .functionals import (
    Potential,
    ProblemParams,
    boundary_gap,
    gn_constant,
    gn_quotient,
    kinetic_ball_radius,
    nonexistence_gap,
    TS_UNDEFINED_AT_S1,
)
from .grid import make_grid, save_field
from .groundstate import n_star_curve, solve_ground_state, write_n_star_csv
from .solvers import dilation_path_profile, solve_local_min, solve_mountain_pass
from .verify import run_verification

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NO_CONVERGENCE = 3
EXIT_OUTCOME = 4
EXIT_RESOLUTION = 5

DEFAULTS = {
    "L": 16.0,
    "n": 256,
    "s": 0.95,
    "s_list": None,
    "N": "0.5x",
    "tol": None,
    "dt": 1e-2,
    "out": "runs/out",
    "seed": 1234,
    "potential": "harmonic",
    "potential_file": None,
    "saddle_n": 1024,
    "p_tol": None,
}


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fgpe", description=__doc__)
    ap.add_argument("--version", action="version", version=f"fgpe {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("groundstate", "minimize", "saddle", "sweep", "verify"):
        sp = sub.add_parser(name)
        sp.add_argument("--config", type=str, default=None, help="JSON config file")
        sp.add_argument("--s", type=float, default=None)
        sp.add_argument("--s-list", type=str, default=None,
                        help="comma-separated orders, e.g. 0.9,0.95,0.98")
        sp.add_argument("--N", type=str, default=None,
                        help="mass, absolute ('5.85') or critical-relative ('0.5x')")
        sp.add_argument("--L", type=float, default=None)
        sp.add_argument("--n", type=int, default=None)
        sp.add_argument("--tol", type=float, default=None)
        sp.add_argument("--dt", type=float, default=None)
        sp.add_argument("--out", type=str, default=None)
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--potential", type=str, default=None,
                        choices=("harmonic", "file"))
        sp.add_argument("--potential-file", type=str, default=None,
                        help="CSV of (r, V, rVprime) samples")
        sp.add_argument("--saddle-n", type=int, default=None,
                        help="grid points per axis for saddle boxes")
        sp.add_argument("--p-tol", type=float, default=None,
                        help="virial-residual threshold relative to the kinetic "
                             "energy; certification-grade values (1e-6) need "
                             "boxes large enough for the tail images")
    return ap


def _resolve_config(args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    if args.config:
        path = Path(args.config)
        if not path.exists():
            raise ConfigurationError(f"config file not found: {path}")
        try:
            cfg.update(json.loads(path.read_text()))
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"config file is not valid JSON: {exc}") from exc
    overrides = {
        "s": args.s, "s_list": args.s_list, "N": args.N, "L": args.L, "n": args.n,
        "tol": args.tol, "dt": args.dt, "out": args.out, "seed": args.seed,
        "potential": args.potential, "potential_file": args.potential_file,
        "saddle_n": args.saddle_n, "p_tol": args.p_tol,
    }
    cfg.update({k: v for k, v in overrides.items() if v is not None})
    cfg["command"] = args.command
    if isinstance(cfg.get("s_list"), str):
        try:
            cfg["s_list"] = [float(x) for x in cfg["s_list"].split(",") if x.strip()]
        except ValueError as exc:
            raise ConfigurationError(f"bad --s-list: {exc}") from exc
    if not isinstance(cfg.get("seed"), int):
        raise ConfigurationError(f"seed must be an integer, got {cfg.get('seed')!r}")
    return cfg


def _load_potential(cfg: dict) -> Potential:
    if cfg["potential"] == "harmonic":
        return Potential.harmonic()
    path = cfg.get("potential_file")
    if not path:
        raise ConfigurationError("--potential file requires --potential-file")
    rows = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].lstrip().startswith("#"):
                continue
            if len(row) < 3:
                raise ConfigurationError("potential file rows must be r,V,rVprime")
            rows.append([float(x) for x in row[:3]])
    if not rows:
        raise ConfigurationError("potential file is empty")
    arr = np.asarray(rows)
    return Potential.from_table(arr[:, 0], arr[:, 1], arr[:, 2])


def _resolve_mass(cfg: dict, grid) -> tuple[float, float]:
    """Mass from the config; '1.5x' syntax is relative to the computed
    s = 1 critical mass on the run grid."""
    spec = cfg["N"]
    if isinstance(spec, str) and spec.endswith("x"):
        factor = float(spec[:-1])
        N1 = solve_ground_state(1.0, grid, tol=1e-10).Ns_star
        return factor * N1, N1
    val = float(spec)
    if val <= 0:
        raise ConfigurationError(f"mass must be positive, got {val}")
    return val, float("nan")


def _echo_config(cfg: dict, outdir: Path, extra: dict | None = None) -> None:
    outdir.mkdir(parents=True, exist_ok=True)
    payload = dict(cfg)
    if extra:
        payload.update(extra)
    (outdir / "resolved_config.json").write_text(json.dumps(payload, indent=1) + "\n")


def _cmd_groundstate(cfg: dict) -> int:
    grid = make_grid(cfg["L"], cfg["n"])
    outdir = Path(cfg["out"])
    tol = cfg["tol"] or 1e-10
    s_list = cfg["s_list"] or [cfg["s"]]
    entries = n_star_curve(s_list, grid, tol=tol)
    _echo_config(cfg, outdir)
    write_n_star_csv(entries, outdir / "n_star_curve.csv")
    status = EXIT_OK
    for e in entries:
        if e.status != "ok":
            print(f"s={e.s}: FAILED {e.error}")
            status = EXIT_NO_CONVERGENCE
            continue
        r = e.result
        save_field(r.Q, outdir / f"groundstate_s{e.s:g}", s=e.s, N=r.Ns_star)
        report = {
            "s": e.s, "Ns_star": r.Ns_star, "kinetic": r.kinetic,
            "quartic": r.quartic, "iterations": r.iterations,
            "residual": r.residual, "asymmetry": r.asymmetry,
            "trap_moment": r.trap_moment, "annulus_fraction": r.annulus_fraction,
            "box_ok": r.box_ok,
            "identity_kin_vs_quartic": abs(r.kinetic - r.quartic / (2 * e.s)) / r.kinetic,
            "identity_kin_vs_mass": abs(r.kinetic - r.Ns_star / (2 * e.s - 1)) / r.kinetic,
            "gn_quotient": gn_quotient(r.Q, e.s),
            "gn_constant": gn_constant(e.s, r.Ns_star),
        }
        (outdir / f"groundstate_s{e.s:g}.report.json").write_text(
            json.dumps(report, indent=1) + "\n")
        print(f"s={e.s}: Ns_star={r.Ns_star:.8f} residual={r.residual:.2e} "
              f"iters={r.iterations} box_ok={r.box_ok}")
    return status


def _cmd_minimize(cfg: dict) -> int:
    grid = make_grid(cfg["L"], cfg["n"])
    outdir = Path(cfg["out"])
    N, N1 = _resolve_mass(cfg, grid)
    s = float(cfg["s"])
    pot = _load_potential(cfg)
    p = ProblemParams(s=s, N=N, potential=pot)
    ground = solve_ground_state(s, grid, tol=1e-10)
    _echo_config(cfg, outdir, {"resolved_N": N, "N1_star": N1})
    tol = cfg["tol"] or 1e-8
    p_tol = cfg["p_tol"] or 1e-3  # trend grade; tighten on adequate boxes
    rep = solve_local_min(p, ground.Ns_star, grid=grid, dt=cfg["dt"], tol=tol,
                          p_tol=p_tol)
    rep.save(outdir / "minimizer")
    ts = kinetic_ball_radius(p, ground.Ns_star)
    if ts is not TS_UNDEFINED_AT_S1 and p.s < 1.0:
        gap = boundary_gap(p, ground.Ns_star)
        with (outdir / "gap_curve.csv").open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "f"])
            for t, f in zip(gap.t, gap.f):
                w.writerow([repr(float(t)), repr(float(f))])
        lhs, rhs = nonexistence_gap(p, ground.Ns_star)
        (outdir / "nonexistence.json").write_text(json.dumps(
            {"lhs": lhs, "rhs": rhs, "certified": bool(lhs < rhs)}, indent=1) + "\n")
    print(f"classification={rep.classification} E={rep.breakdown.total:.8f} "
          f"el={rep.el_residual:.2e} kinetic={rep.breakdown.kinetic:.6f}")
    if rep.classification == "local_min":
        return EXIT_OK
    if rep.classification == "escaped":
        return EXIT_OUTCOME
    return EXIT_NO_CONVERGENCE


def _cmd_saddle(cfg: dict) -> int:
    grid = make_grid(cfg["L"], cfg["n"])
    outdir = Path(cfg["out"])
    N, N1 = _resolve_mass(cfg, grid)
    s = float(cfg["s"])
    pot = _load_potential(cfg)
    p = ProblemParams(s=s, N=N, potential=pot)
    ground = solve_ground_state(s, grid, tol=1e-10)
    _echo_config(cfg, outdir, {"resolved_N": N, "N1_star": N1})
    tol = cfg["tol"] or 1e-5
    p_tol = cfg["p_tol"] or 1e-4  # trend grade; tighten on finer saddle boxes
    rep = solve_mountain_pass(p, ground, n_points=cfg["saddle_n"], tol=tol,
                              p_tol=p_tol)
    rep.save(outdir / "saddle")
    t_grid = np.logspace(-0.5, 0.9, 29)
    rows = dilation_path_profile(ground, p, t_grid)
    with (outdir / "dilation_path.csv").open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "energy_discrete", "energy_closed", "kinetic_closed", "status"])
        for row in rows:
            w.writerow([repr(row["t"]),
                        "" if row["energy_discrete"] is None else repr(row["energy_discrete"]),
                        repr(row["energy_closed"]), repr(row["kinetic_closed"]),
                        row["status"]])
    print(f"classification={rep.classification} E={rep.breakdown.total:.8g} "
          f"el={rep.el_residual:.2e} kinetic={rep.breakdown.kinetic:.6g}")
    if rep.classification == "saddle":
        return EXIT_OK
    if rep.classification == "fell_to_min":
        return EXIT_OUTCOME
    if rep.extras.get("under_resolved"):
        return EXIT_RESOLUTION
    return EXIT_NO_CONVERGENCE


def _cmd_sweep(cfg: dict) -> int:
    grid = make_grid(cfg["L"], cfg["n"])
    outdir = Path(cfg["out"])
    N, N1 = _resolve_mass(cfg, grid)
    pot = _load_potential(cfg)
    s_list = cfg["s_list"] or [0.90, 0.93, 0.95, 0.97, 0.98]
    p = ProblemParams(s=s_list[0], N=N, potential=pot)
    _echo_config(cfg, outdir, {"resolved_N": N, "N1_star": N1})
    res = sweep(p, s_list, grid, saddle_points=cfg["saddle_n"])
    write_sweep_csv(res, outdir / "sweep.csv")
    write_sweep_summary(res, outdir / "sweep_summary.json")
    save_field(res.reference_ground.Q, outdir / "townes_reference",
               s=1.0, N=res.reference_ground.Ns_star)
    for s, vt in res.rescaled_profiles.items():
        save_field(vt, outdir / f"rescaled_s{s:g}", s=s, N=N)
    ok = [r for r in res.records if r.status == "ok"]
    try:
        mlc = multiplier_limit_check(res.records, N)
        (outdir / "multiplier_limit.json").write_text(json.dumps(mlc, indent=1) + "\n")
    except ConfigurationError:
        pass
    for r in res.records:
        print(f"s={r.s}: {r.status}")
    print("trends:", json.dumps(res.trends))
    if len(ok) == len(res.records):
        return EXIT_OK
    if any(r.status == "under_resolved" for r in res.records):
        return EXIT_RESOLUTION
    return EXIT_NO_CONVERGENCE


def _cmd_verify(cfg: dict) -> int:
    outdir = Path(cfg["out"])
    _echo_config(cfg, outdir)
    checks = run_verification(L=cfg["L"], n=cfg["n"], seed=cfg["seed"])
    (outdir / "verify.json").write_text(json.dumps(checks, indent=1) + "\n")
    failed = 0
    for name, entry in checks.items():
        flag = "PASS" if entry["pass"] else "FAIL"
        print(f"[{flag}] {name}: {entry['detail']}")
        failed += 0 if entry["pass"] else 1
    return EXIT_OK if failed == 0 else EXIT_NO_CONVERGENCE


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _resolve_config(args)
        np.random.seed(cfg["seed"] % (2**32))  # legacy global state, unused by solvers
        handler = {
            "groundstate": _cmd_groundstate,
            "minimize": _cmd_minimize,
            "saddle": _cmd_saddle,
            "sweep": _cmd_sweep,
            "verify": _cmd_verify,
        }[cfg["command"]]
        return handler(cfg)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ResolutionError as exc:
        print(f"resolution guard: {exc}", file=sys.stderr)
        return EXIT_RESOLUTION
    except ConvergenceError as exc:
        print(f"no convergence: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except FgpeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
