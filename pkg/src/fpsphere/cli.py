"""Command-line entry point: ``fpsphere {sphere,matrix,curve,separation,verify}``.

Exit codes: 0 success, 1 property failure, 2 usage/validation, 3 oracle mismatch.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import bounds, experiment, ffield, verify, walk
from .config import ConfigError, RunConfig, load_config
from .errors import ConsistencyError, FpSphereError, GuardExceededError
from .io import curve_csv, curve_svg, fmt, to_json

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_MISMATCH = 0, 1, 2, 3


class UsageError(Exception):
    pass


class ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _prime(value: str) -> int:
    try:
        p = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{value!r} is not an integer") from None
    if not ffield.is_prime(p):
        raise argparse.ArgumentTypeError(f"{p} is not prime")
    return p


def _positive_int(value: str) -> int:
    try:
        v = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{value!r} is not an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"{v} must be >= 1")
    return v


def build_parser() -> ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--out", help="write output to PATH instead of stdout")
    common.add_argument("--config", help="flat 'key = value' config file")
    common.add_argument("--threads", type=_positive_int)
    common.add_argument("--seed", type=int)
    common.add_argument("--enum-guard", type=_positive_int, dest="enum_guard")
    common.add_argument("--walk-log-base", dest="walk_log_base")
    common.add_argument("--bound-log-base", dest="bound_log_base")

    parser = ArgumentParser(prog="fpsphere", description="Sphere-center finding over F_p^n")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)

    sp = sub.add_parser("sphere", parents=[common], help="sphere sizes: formula vs enumeration")
    sp.add_argument("-p", type=_prime, required=True)
    sp.add_argument("-n", type=_positive_int, required=True)
    sp.add_argument("-r", type=int)
    sp.add_argument("--enumerate", action="store_true", help="also list the points of S_r")

    mp = sub.add_parser("matrix", parents=[common], help="reduced walk operator as JSON")
    mp.add_argument("-p", type=_prime, required=True)
    mp.add_argument("-n", type=_positive_int, required=True)
    mp.add_argument("-r", type=int, required=True)
    mp.add_argument("--deflate", action="store_true")
    mp.add_argument("--check-full", action="store_true", help="run the full-space oracle")

    cp = sub.add_parser("curve", parents=[common], help="success probability curve as CSV")
    cp.add_argument("-p", type=_prime, required=True)
    cp.add_argument("-n", type=_positive_int, required=True)
    cp.add_argument("-r", type=int, required=True)
    cp.add_argument("--tmin", type=float, default=0.0)
    cp.add_argument("--tmax", type=float, default=10.0)
    cp.add_argument("--step", type=float, default=0.01)
    cp.add_argument("--hamiltonian", choices=walk.HAMILTONIANS, default="plain")
    cp.add_argument("--svg", help="also write an SVG plot to this path")

    sep = sub.add_parser("separation", parents=[common], help="quantum vs classical bounds")
    sep.add_argument("-p", type=_prime, required=True)
    sep.add_argument("-n", type=_positive_int, required=True)
    sep.add_argument("-r", type=int, required=True)
    sep.add_argument("--pt", type=float, required=True, help="center probability floor P_t")
    sep.add_argument("--reps", type=int, required=True, help="repetitions T (> 2)")
    sep.add_argument("--mc", type=_positive_int, help="attach a Monte-Carlo run with this many trials")
    sep.add_argument("--hamiltonian", choices=walk.HAMILTONIANS, default="plain")

    vp = sub.add_parser("verify", parents=[common], help="run invariant sweeps")
    vp.add_argument("--suite", choices=verify.SUITES + ("all",), default="all")
    vp.add_argument("--inject-fault", choices=("walk",), help="perturb one M_A entry (harness self-test)")
    return parser


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _config(args) -> RunConfig:
    flags = {k: getattr(args, k, None) for k in
             ("threads", "seed", "enum_guard", "walk_log_base", "bound_log_base")}
    return load_config(args.config, flags)


def _radius(args) -> int:
    if args.r is None:
        return None
    if not 0 <= args.r < args.p:
        raise UsageError(f"radius {args.r} is not a residue mod {args.p}")
    return args.r


def cmd_sphere(args, cfg: RunConfig) -> int:
    p, n = args.p, args.n
    if p == 2:
        raise UsageError("sphere size formula needs an odd prime")
    r = _radius(args)
    radii = [r] if r is not None else list(range(p))
    enumerable = p**n <= cfg.enum_guard
    if args.enumerate and not enumerable:
        raise GuardExceededError("enumeration guard", cfg.enum_guard, p**n)
    rows = []
    for rr in radii:
        formula = ffield.sphere_size_formula(p, n, rr)
        counted = len(ffield.sphere_array(p, n, rr, cfg.enum_guard)) if enumerable else None
        row = {"r": rr, "formula": formula, "enumerated": counted,
               "agree": None if counted is None else counted == formula}
        if args.enumerate:
            row["points"] = [list(x) for x in ffield.enumerate_sphere(p, n, rr, guard=cfg.enum_guard)]
        rows.append(row)
    agree = all(row["agree"] is not False for row in rows)
    if args.json:
        _emit(args, to_json({"p": p, "n": n, "spheres": rows, "agree": agree}))
    else:
        lines = [f"{'r':>4} {'formula':>12} {'enumerated':>12} {'agree':>6}"]
        for row in rows:
            lines.append(f"{row['r']:>4} {row['formula']:>12} {str(row['enumerated']):>12} "
                         f"{str(row['agree']).lower():>6}")
            if args.enumerate:
                lines.extend("      " + ",".join(map(str, pt)) for pt in row["points"])
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if agree else EXIT_MISMATCH


def cmd_matrix(args, cfg: RunConfig) -> int:
    r = _radius(args)
    op = walk.build_reduced_adjacency(args.p, args.n, r, cfg.enum_guard)
    payload = op.to_dict()
    if args.deflate:
        op = walk.deflate(op)
        payload = op.to_dict()
        payload["annihilation_residual"] = float(np.abs(op.entries @ op.uniform_vector).max())
    status = EXIT_OK
    if args.check_full:
        res = walk.full_space_column_check(args.p, args.n, r, cfg.full_space_guard)
        payload["full_space_check"] = {"passed": res.passed, "max_deviation": res.max_deviation,
                                       "residual": res.residual}
        if not res.passed:
            status = EXIT_MISMATCH
    # the operator dump is JSON with or without --json
    _emit(args, to_json(payload))
    return status


def cmd_curve(args, cfg: RunConfig) -> int:
    if args.step <= 0 or args.tmin < 0 or args.tmax < args.tmin:
        raise UsageError("need 0 <= tmin <= tmax and step > 0")
    r = _radius(args)
    grid = walk.uniform_grid(args.tmin, args.tmax, args.step)
    curve = walk.success_curve(args.p, args.n, r, args.hamiltonian, grid,
                               log_base=cfg.log_base("walk"), guard=cfg.enum_guard)
    if args.json:
        t_best, p_best = curve.argmax()
        _emit(args, to_json({"p": args.p, "n": args.n, "r": r, "hamiltonian": args.hamiltonian,
                             "t0": curve.t0, "T1": curve.t1.tolist(),
                             "probability": curve.probability.tolist(),
                             "argmax": {"T1": t_best, "probability": p_best}}))
    else:
        _emit(args, curve_csv(curve.schedule))
    if args.svg:
        title = f"p={args.p} n={args.n} r={r} ({args.hamiltonian})"
        Path(args.svg).write_text(curve_svg(curve.t1.tolist(), curve.probability.tolist(), title))
    return EXIT_OK


def cmd_separation(args, cfg: RunConfig) -> int:
    if args.reps <= 2:
        raise UsageError("--reps must be an integer greater than 2")
    if not 0 < args.pt < 1:
        raise UsageError("--pt must lie in (0, 1)")
    r = _radius(args)
    mc = None
    if args.mc:
        summary = experiment.run_quantum_trials(
            args.p, args.n, r, reps=args.reps, hamiltonian=args.hamiltonian,
            trials=args.mc, seed=cfg.seed, log_base=cfg.log_base("walk"), guard=cfg.enum_guard)
        mc = summary.to_dict()
    rep = bounds.separation_report(args.p, args.n, r, args.pt, args.reps, mc)
    data = rep.to_dict()
    if args.json:
        _emit(args, to_json(data))
    else:
        keys = ["p", "n", "r", "P_t", "P_x", "T", "c", "ps_lower", "pc_upper", "ratio"]
        lines = [f"{k:<10} {fmt(data[k]):>22}" for k in keys]
        if mc:
            lines.append(f"{'mc_est':<10} {fmt(mc['estimate']):>22}")
            lines.append(f"{'mc_hw':<10} {fmt(mc['half_width']):>22}")
            lines.append(f"{'mc_trials':<10} {mc['trials']:>22}")
            lines.append(f"{'mc_seed':<10} {mc['seed']:>22}")
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_verify(args, cfg: RunConfig) -> int:
    checks = verify.run_suites([args.suite], fault=args.inject_fault, threads=cfg.threads)
    ok = all(c.passed for c in checks)
    if args.json:
        _emit(args, to_json({"passed": ok, "checks": [
            {"suite": c.suite, "name": c.name, "passed": c.passed, "detail": c.detail} for c in checks]}))
    else:
        lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.suite:<9} {c.name}"
                 + (f"  [{c.detail}]" if c.detail and not c.passed else "") for c in checks]
        failed = sorted({c.suite for c in checks if not c.passed})
        lines.append("all checks passed" if ok else f"failed suites: {', '.join(failed)}")
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "sphere": cmd_sphere,
    "matrix": cmd_matrix,
    "curve": cmd_curve,
    "separation": cmd_separation,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = _config(args)
        return COMMANDS[args.command](args, cfg)
    except ConsistencyError as exc:
        print(f"fpsphere: invariant violated: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (UsageError, ConfigError, GuardExceededError, ValueError, FpSphereError) as exc:
        print(f"fpsphere: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
