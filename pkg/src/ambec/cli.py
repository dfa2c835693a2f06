"""Command-line front end: solve, sample, analyze, evolve, transform.

Every command writes deterministic data files plus a manifest JSON; reruns
with identical flags produce byte-identical data.  Exit codes: 0 success,
2 no root found, 3 invalid configuration, 4 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import math
import pathlib
import sys
import time

import numpy as np

from . import ansatz, consistency, dynamics, potentials, wigner
from .core import CouplingParams, Grid, SolutionRecord
from .errors import AmbecError, ConfigurationError
from .manifest import RunManifest, format_float, write_csv


def _manifest_path(out: str) -> str:
    return str(pathlib.Path(out).with_suffix("")) + ".manifest.json"


def _load_record(path: str) -> SolutionRecord:
    try:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise ConfigurationError(f"cannot read solution file: {e}") from e
    try:
        return SolutionRecord.from_json(text)
    except (KeyError, ValueError) as e:
        raise ConfigurationError(f"{path} is not a solution JSON: {e}") from e


def _grid_for(record: SolutionRecord, args, power_of_two: bool) -> Grid:
    L = args.grid_l if args.grid_l is not None else max(20.0, 40.0 / record.beta)
    if power_of_two:
        return dynamics.make_grid(L, args.grid_n)
    return Grid(-L, L, args.grid_n)


def _round15(v):
    return float(format_float(v)) if isinstance(v, float) else v


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump({k: _round15(v) for k, v in payload.items()},
                  f, indent=2, sort_keys=True)
        f.write("\n")


def cmd_solve(args) -> RunManifest:
    tol = args.tol
    if args.family == "I":
        if args.g_m is not None:
            raise ConfigurationError(
                "family I derives g_m = (g_a - g_am)/2; do not pass --g-m")
        if args.beta is None:
            raise ConfigurationError("family I needs --beta")
        record = consistency.solve_family_I(args.g_a, args.g_am, args.alpha,
                                            args.beta, tol=tol)
    else:
        if args.g_m is None:
            raise ConfigurationError(f"family {args.family} needs --g-m")
        params = CouplingParams(g_a=args.g_a, g_m=args.g_m, g_am=args.g_am,
                                alpha=args.alpha)
        if args.scan:
            mu_range = tuple(args.mu_range) if args.mu_range else None
            eps_range = tuple(args.eps_range) if args.eps_range else None
            record = consistency.solve_from_scan(
                args.family, params, mu_range=mu_range, eps_range=eps_range,
                n=args.scan_n, tol=tol)
        else:
            if args.seed_mu is None or args.seed_epsilon is None:
                raise ConfigurationError(
                    f"family {args.family} needs --seed-mu and "
                    "--seed-epsilon, or --scan")
            solver = (consistency.solve_family_II if args.family == "II"
                      else consistency.solve_family_III)
            record = solver(params, (args.seed_mu, args.seed_epsilon), tol=tol)
    with open(args.out, "w", encoding="utf-8") as f:
        f.write(record.to_json())
        f.write("\n")
    print(f"family {record.family}: mu={format_float(record.mu)} "
          f"epsilon={format_float(record.epsilon)} B={format_float(record.B)} "
          f"residual_max={record.residual_max:.3e} -> {args.out}")
    return RunManifest("solve", _params_of(args), outputs=[args.out])


def cmd_profile(args) -> RunManifest:
    record = _load_record(args.solution)
    grid = _grid_for(record, args, power_of_two=False)
    fields = ansatz.sample_fields(record, grid, t=args.t)
    na = np.abs(fields.psi_a) ** 2
    nm = np.abs(fields.psi_m) ** 2
    rows = zip(grid.x(), fields.psi_a.real, fields.psi_a.imag,
               fields.psi_m.real, fields.psi_m.imag, na, nm)
    write_csv(args.out,
              ["x", "psi_a_re", "psi_a_im", "psi_m_re", "psi_m_im",
               "n_a", "n_m"],
              rows, _manifest_path(args.out))
    return RunManifest("profile", _params_of(args), inputs=[args.solution],
                       outputs=[args.out])


def cmd_potential(args) -> RunManifest:
    record = _load_record(args.solution)
    grid = _grid_for(record, args, power_of_two=False)
    pair = potentials.self_consistent_potentials(record, grid)
    rows = zip(grid.x(), pair.V_a, pair.V_m, pair.phi_a, pair.phi_m)
    record_line = "record: " + json.dumps(record.to_dict())
    write_csv(args.out, ["x", "V_a", "V_m", "phi_a", "phi_m"], rows,
              _manifest_path(args.out), comments=[record_line])
    return RunManifest("potential", _params_of(args), inputs=[args.solution],
                       outputs=[args.out])


def cmd_residual(args) -> RunManifest:
    record = _load_record(args.solution)
    grid = _grid_for(record, args, power_of_two=False)
    r_a, r_m = potentials.eigen_residuals(record, grid)
    write_csv(args.out, ["r_a", "r_m"], [(r_a, r_m)], _manifest_path(args.out))
    print(f"r_a={format_float(r_a)} r_m={format_float(r_m)} -> {args.out}")
    params = _params_of(args)
    params["norm"] = ("relative inf-norm; outer 2.5% of grid points per "
                      "side excluded")
    return RunManifest("residual", params, inputs=[args.solution],
                       outputs=[args.out])


def cmd_evolve(args) -> RunManifest:
    record = _load_record(args.solution)
    grid = _grid_for(record, args, power_of_two=True)
    fields = ansatz.sample_fields(record, grid)
    cfg = dynamics.PropagatorConfig(dt=args.dt, T=args.t,
                                    record_every=args.record_every,
                                    tol_drift=args.tol_drift)
    diags = dynamics.evolve(fields, record.params, cfg)
    rows = ((d.t, d.N, d.N_a, d.N_m, d.E, d.drift_a, d.drift_m)
            for d in diags)
    write_csv(args.out, ["t", "N", "N_a", "N_m", "E", "drift_a", "drift_m"],
              rows, _manifest_path(args.out))
    last = diags[-1]
    print(f"evolved to t={format_float(last.t)}: drift_a={last.drift_a:.3e} "
          f"drift_m={last.drift_m:.3e} -> {args.out}")
    return RunManifest("evolve", _params_of(args), inputs=[args.solution],
                       outputs=[args.out])


def cmd_wigner(args) -> RunManifest:
    inputs = []
    if args.solution is not None:
        if args.kind is not None or args.beta is not None or args.delta is not None:
            raise ConfigurationError(
                "--solution and inline --beta/--delta/--kind are exclusive")
        record = _load_record(args.solution)
        inputs.append(args.solution)
        beta, B = record.beta, record.B
        if args.component == "atomic":
            fam, amp = record.family, record.A
        else:
            fam, amp = "I", record.D

        def profile(x):
            return ansatz.rational_profile(fam, amp, B, beta, x)

        default_l = max(20.0, 40.0 / beta)
    else:
        if args.kind is None or args.beta is None or args.delta is None:
            raise ConfigurationError(
                "need --solution, or all of --beta, --delta, --kind")
        kind, beta, delta = args.kind, args.beta, args.delta

        def profile(x):
            return ansatz.superposed_profile(kind, beta, delta, x)

        default_l = delta / beta + 32.0 / beta
    L = args.grid_l if args.grid_l is not None else default_l
    grid = dynamics.make_grid(L, args.grid_n)
    w = wigner.wigner_transform(profile, grid, p_count=args.p_count)
    metrics = wigner.phase_space_metrics(w)

    x_col = np.repeat(w.x, len(w.p))
    p_col = np.tile(w.p, len(w.x))
    rows = zip(x_col, p_col, w.W.ravel())
    write_csv(args.out, ["x", "p", "W"], rows, _manifest_path(args.out),
              comments=[f"convention: {w.convention}"])

    try:
        fringe = wigner.fringe_spacing(w)
    except ConfigurationError:
        fringe = None
    payload = metrics.to_dict()
    payload["fringe_spacing"] = fringe
    payload["norm"] = w.norm
    metrics_path = str(pathlib.Path(args.out).with_suffix("")) + ".metrics.json"
    _write_json(metrics_path, payload)
    print(f"W(0,0)={format_float(metrics.w00)} ratio={format_float(metrics.ratio)} "
          f"negative_volume={format_float(metrics.negative_volume)} "
          f"-> {args.out}, {metrics_path}")
    return RunManifest("wigner", _params_of(args), inputs=inputs,
                       outputs=[args.out, metrics_path])


def cmd_scan(args) -> RunManifest:
    if args.mu is not None:
        mus = [args.mu]
    else:
        if args.mu_min is None or args.mu_max is None:
            raise ConfigurationError("need --mu, or --mu-min and --mu-max")
        if not args.mu_min < args.mu_max:
            raise ConfigurationError("--mu-min must be below --mu-max")
        if args.count < 1:
            raise ConfigurationError("--count must be >= 1")
        mus = list(np.linspace(args.mu_min, args.mu_max, args.count))
    mu0 = ansatz.mu_critical(CouplingParams(args.g_a, None, args.g_am,
                                            args.alpha))
    rows = []
    nan = float("nan")
    for mu in mus:
        if not mu0 < mu < 0.0:
            rows.append((mu, nan, nan, nan, nan, nan, "unattainable"))
            continue
        beta = math.sqrt(-mu / 2.0)
        record = consistency.solve_family_I(args.g_a, args.g_am, args.alpha,
                                            beta, tol=args.tol)
        grid = dynamics.make_grid(max(20.0, 40.0 / beta), args.grid_n)
        peak = (record.A / (record.B + 1.0)) ** 2
        rows.append((mu, peak, ansatz.half_width_99(record),
                     potentials.flatness_metric(record, grid),
                     record.B, record.A, "ok"))
    write_csv(args.out,
              ["mu", "peak_density", "half_width_99", "flatness", "B", "A",
               "status"],
              rows, _manifest_path(args.out))
    ok = sum(1 for r in rows if r[-1] == "ok")
    print(f"scan: {ok}/{len(rows)} attainable rows -> {args.out}")
    return RunManifest("scan", _params_of(args), outputs=[args.out])


def _params_of(args) -> dict:
    return {k: v for k, v in vars(args).items() if k != "func"}


def _add_grid_flags(p, n_default=2048):
    p.add_argument("--grid-l", type=float, default=None,
                   help="grid half-width (default: wide enough for the record)")
    p.add_argument("--grid-n", type=int, default=n_default,
                   help=f"grid points (default {n_default})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ambec",
        description="Exact droplet and cat solutions of coupled "
                    "atomic-molecular condensate mean-field equations")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="find a solution record")
    p.add_argument("--family", required=True, choices=["I", "II", "III"])
    p.add_argument("--g-a", type=float, required=True)
    p.add_argument("--g-m", type=float, default=None)
    p.add_argument("--g-am", type=float, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, default=None,
                   help="inverse width (family I only)")
    p.add_argument("--seed-mu", type=float, default=None)
    p.add_argument("--seed-epsilon", type=float, default=None)
    p.add_argument("--scan", action="store_true",
                   help="seed by scanning a (mu, epsilon) box")
    p.add_argument("--mu-range", type=float, nargs=2, default=None,
                   metavar=("LO", "HI"))
    p.add_argument("--eps-range", type=float, nargs=2, default=None,
                   metavar=("LO", "HI"))
    p.add_argument("--scan-n", type=int, default=200)
    p.add_argument("--tol", type=float, default=None,
                   help="consistency tolerance (overrides AMBEC_TOL)")
    p.add_argument("--out", default="solution.json")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("profile", help="sample fields to CSV")
    p.add_argument("--solution", required=True)
    _add_grid_flags(p)
    p.add_argument("--t", type=float, default=0.0, help="sample time")
    p.add_argument("--out", default="profile.csv")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("potential", help="self-consistent potentials to CSV")
    p.add_argument("--solution", required=True)
    _add_grid_flags(p)
    p.add_argument("--out", default="potential.csv")
    p.set_defaults(func=cmd_potential)

    p = sub.add_parser("residual", help="eigen-equation residual norms")
    p.add_argument("--solution", required=True)
    _add_grid_flags(p)
    p.add_argument("--out", default="residual.csv")
    p.set_defaults(func=cmd_residual)

    p = sub.add_parser("evolve", help="propagate and record diagnostics")
    p.add_argument("--solution", required=True)
    _add_grid_flags(p)
    p.add_argument("--t", type=float, default=10.0, help="total time")
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--record-every", type=int, default=100)
    p.add_argument("--tol-drift", type=float, default=1e-6)
    p.add_argument("--out", default="evolve.csv")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("wigner", help="Wigner distribution and metrics")
    p.add_argument("--solution", default=None)
    p.add_argument("--component", choices=["atomic", "molecular"],
                   default="atomic")
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--kind", choices=list(ansatz.SUPERPOSED_KINDS),
                   default=None)
    _add_grid_flags(p, n_default=512)
    p.add_argument("--p-count", type=int, default=None,
                   help="momentum points (default: grid size)")
    p.add_argument("--out", default="wigner.csv")
    p.set_defaults(func=cmd_wigner)

    p = sub.add_parser("scan", help="family-I sweep over mu")
    p.add_argument("--g-a", type=float, required=True)
    p.add_argument("--g-am", type=float, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--mu", type=float, default=None, help="single mu value")
    p.add_argument("--mu-min", type=float, default=None)
    p.add_argument("--mu-max", type=float, default=None)
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--grid-n", type=int, default=2048)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--out", default="scan.csv")
    p.set_defaults(func=cmd_scan)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        manifest = args.func(args)
    except AmbecError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    manifest.duration_s = time.perf_counter() - start
    manifest.write(_manifest_path(args.out))
    return 0


if __name__ == "__main__":
    sys.exit(main())
