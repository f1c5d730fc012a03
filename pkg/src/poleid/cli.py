"""Command-line entry point: ``poleid <group> <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import bounds
from .errors import PoleIdError
from .experiments import builtin_system, export, load_config, run_sweep
from .ho_kalman import ho_kalman
from .lti import markov_matrix
from .markov_ls import estimate_multi, estimate_single
from .simulate import TrajectoryBatch, read_trajectories_csv


def _poles_json(poles):
    return [[float(z.real), float(z.imag)] for z in poles]


def cmd_experiment_run(args):
    config = load_config(args.config)
    result = run_sweep(config, threads=args.threads)
    paths = export(result.records, result.curves, args.out, result.true_poles, config)
    for c in result.curves:
        print(f"{config.setting} {c.sample_size:>6d}  median={c.median:.4g}  "
              f"q10={c.q10:.4g}  q90={c.q90:.4g}  failed={c.n_failed}")
    for p in paths:
        print(f"wrote {p}")


def cmd_bounds_report(args):
    config = load_config(args.config)
    ss = config.state_space()
    top = max(config.sweep)
    if config.setting == "multi":
        N = args.n_traj or top
        Tbar = args.tbar or config.K * N - config.K + 1
    else:
        Tbar = args.tbar or top - config.K + 1
        N = args.n_traj or max(1, top // config.K)
    inputs = bounds.BoundInputs(ss, config.K, config.K1, config.K2, config.noise.sigma_u,
                                config.noise.sigma_w, config.noise.sigma_v, config.delta,
                                Tbar=Tbar, N=N, calibration_C=config.calibration_C)
    json.dump(bounds.bound_report(inputs).to_dict(), sys.stdout, indent=2)
    print()


def cmd_system_show(args):
    ss = builtin_system(args.name)
    out = ss.to_dict()
    out["poles"] = _poles_json(ss.poles())
    out["spectral_radius"] = ss.spectral_radius
    out["stability"] = ss.stability
    json.dump(out, sys.stdout, indent=2)
    print()


def cmd_identify(args):
    trajs = read_trajectories_csv(args.data)
    if not trajs:
        raise PoleIdError(f"{args.data}: no samples")
    K = args.k1 + args.k2 + 1
    if args.setting == "single":
        if len(trajs) != 1:
            raise PoleIdError(f"single setting expects one trajectory, found {len(trajs)}")
        g_hat = estimate_single(trajs[0], K)
    else:
        short = [t.T for t in trajs if t.T < K]
        if short:
            raise PoleIdError(f"multi setting needs trajectories of length >= K={K}")
        batch = TrajectoryBatch(np.stack([t.u[:K] for t in trajs]), np.stack([t.y[:K] for t in trajs]))
        g_hat = estimate_multi(batch)
    r = ho_kalman(g_hat, args.n, args.k1, args.k2)
    out = r.to_dict()
    out["poles"] = _poles_json(r.poles())
    out["singular_values"] = r.sigma.tolist()
    out["sigma_n_plus_1"] = r.sigma_np1
    out["near_singular"] = r.near_singular
    if args.truth:
        ss = builtin_system(args.truth)
        out["markov_error"] = float(np.linalg.norm(g_hat.G - markov_matrix(ss, K).G, 2))
    json.dump(out, sys.stdout, indent=2)
    print()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="poleid", description=__doc__)
    groups = parser.add_subparsers(dest="group", required=True)

    exp = groups.add_parser("experiment", help="Monte Carlo sweeps").add_subparsers(dest="command", required=True)
    run = exp.add_parser("run", help="run a sweep and write CSV/JSON results")
    run.add_argument("--config", required=True)
    run.add_argument("--out", required=True)
    run.add_argument("--threads", type=int, default=1)
    run.set_defaults(func=cmd_experiment_run)

    bnd = groups.add_parser("bounds", help="theoretical bounds").add_subparsers(dest="command", required=True)
    rep = bnd.add_parser("report", help="evaluate every bound for a config")
    rep.add_argument("--config", required=True)
    rep.add_argument("--tbar", type=int, default=None, help="single-trajectory sample parameter")
    rep.add_argument("--n-traj", type=int, default=None, help="number of trajectories")
    rep.set_defaults(func=cmd_bounds_report)

    sysp = groups.add_parser("system", help="built-in systems").add_subparsers(dest="command", required=True)
    show = sysp.add_parser("show", help="print a built-in system")
    show.add_argument("--name", required=True, choices=["stable", "marginal", "unstable"])
    show.set_defaults(func=cmd_system_show)

    ident = groups.add_parser("identify", help="identify a system from trajectory CSV")
    ident.add_argument("--data", required=True)
    ident.add_argument("--setting", required=True, choices=["single", "multi"])
    ident.add_argument("--n", type=int, required=True)
    ident.add_argument("--k1", type=int, required=True)
    ident.add_argument("--k2", type=int, required=True)
    ident.add_argument("--truth", choices=["stable", "marginal", "unstable"], default=None,
                       help="report the Markov-parameter error against a built-in system")
    ident.set_defaults(func=cmd_identify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (PoleIdError, OSError) as exc:
        print(f"poleid: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
