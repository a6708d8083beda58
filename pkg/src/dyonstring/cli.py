"""Command-line front end: ``dyonstring run | sweep | validate``.

Exit status: 0 success, 1 usage or configuration error, 2 numerical
failure, 3 validation failure. Errors are reported as a single JSON line on
stderr.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from . import svgplot
from .config import ConfigError, RunConfig, describe_keys, load_config
from .diagnostics import classify, count_nodes, energy_density_profile
from .integrator import IntegrationError, IntegrationTimeout, integrate
from .model import DomainError, STATE_FIELDS, residual, rhs_vector
from .seed import SeedError, eval_paper_c_constant, initial_state
from .sweep import SweepSpec, lambda_grid, rh_curve, run_sweep
from .validate import run_battery

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_VALIDATION = 0, 1, 2, 3

TRAJECTORY_HEADER = ("r", *STATE_FIELDS, "T_tt")
SWEEP_HEADER = ("lambda", "r_h", "node_count", "terminal_reason", "classification",
                "wall_time_ms")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def num(x) -> str:
    """Shortest round-trip text for a float; locale independent."""
    return repr(float(x))


def _fail(kind: str, message: str, code: int) -> int:
    print(json.dumps({"error": kind, "message": message}), file=sys.stderr)
    return code


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _paper_c(cfg: RunConfig):
    try:
        return eval_paper_c_constant(cfg.params.a, cfg.params.b)
    except ValueError:
        return None


def cmd_run(cfg: RunConfig, out: Path, plot: bool = False, as_json: bool = False) -> int:
    params = cfg.params
    traj = integrate(initial_state(params, cfg.seed), params, cfg.integ)
    nodes = count_nodes(traj)
    label = classify(traj, nodes)
    t_tt = energy_density_profile(traj, params)
    r_grid, y_grid = traj.grid()
    try:
        res = residual(traj, params) if len(r_grid) >= 3 else None
    except (ValueError, DomainError):
        res = None

    out.mkdir(parents=True, exist_ok=True)
    _write_csv(out / "trajectory.csv", TRAJECTORY_HEADER,
               ([num(r), *map(num, y), num(t)] for r, y, t in zip(traj.r, traj.y, t_tt)))
    term = traj.terminal
    summary = {
        "terminal": {"reason": term.reason.value, "r_end": term.r_end, "r_h": term.r_h},
        "nodes": {"count": nodes.count, "radii": list(nodes.radii)},
        "classification": label.value,
        "residual": res,
        "paper_c_constant": _paper_c(cfg),
        "samples": len(traj),
        "config": cfg.as_dict(),
    }
    (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    if plot:
        svgplot.write_panels(out / "profile.svg", [
            ("B(r)", traj.r, traj.column("B")),
            ("C(r)", traj.r, traj.column("C")),
            ("W(r)", traj.r, traj.column("W")),
            ("Phi(r)", traj.r, traj.column("Phi")),
        ])
    if as_json:
        print(json.dumps(summary))
    else:
        rh = "" if term.r_h is None else f" r_h={term.r_h:.10g}"
        print(f"{term.reason.value} r_end={term.r_end:.10g}{rh} nodes={nodes.count} "
              f"class={label.value}")
    return EXIT_OK


def _lambda_values(args) -> list[float]:
    if args.lambda_list is not None:
        items = [s for s in args.lambda_list.replace(",", " ").split() if s]
        try:
            return [float(s) for s in items]
        except ValueError as exc:
            raise ConfigError(f"bad --lambda-list: {exc}") from None
    lo = 0.0 if args.lambda_min is None else args.lambda_min
    hi = 0.02 if args.lambda_max is None else args.lambda_max
    step = 2.5e-4 if args.lambda_step is None else args.lambda_step
    if step <= 0 or hi < lo:
        raise ConfigError("need lambda-step > 0 and lambda-max >= lambda-min")
    return lambda_grid(lo, hi, step)


def cmd_sweep(cfg: RunConfig, lambdas, out: Path, plot: bool = False,
              as_json: bool = False, timing: bool = True) -> int:
    try:
        spec = SweepSpec(lambdas, cfg.params, cfg.seed, cfg.integ, cfg.workers, allow_empty=True)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    rows = run_sweep(spec)
    out.mkdir(parents=True, exist_ok=True)
    _write_csv(out / "sweep.csv", SWEEP_HEADER, (
        [num(row.lam), "" if row.r_h is None else num(row.r_h), str(row.node_count),
         row.terminal_reason, row.classification.value,
         num(round(row.wall_time * 1e3, 3)) if timing else ""]
        for row in rows))
    curve = rh_curve(rows)
    if plot:
        svgplot.write_panels(out / "rh_curve.svg",
                             [("horizon radius r_h", [c[0] for c in curve], [c[1] for c in curve])],
                             columns=1, xlabel="lambda")
    if as_json:
        print(json.dumps([{"lambda": r.lam, "r_h": r.r_h, "node_count": r.node_count,
                           "terminal_reason": r.terminal_reason,
                           "classification": r.classification.value, "error": r.error}
                          for r in rows]))
    else:
        print(f"{len(rows)} rows, {len(curve)} with a horizon")
    return EXIT_OK


def _corrupted_rhs(r, y, params):
    d = list(rhs_vector(r, y, params))
    d[3] *= 1.01
    return d


def cmd_validate(as_json: bool = False, corrupt: bool = False) -> int:
    results = run_battery(rhs=_corrupted_rhs if corrupt else None)
    if as_json:
        print(json.dumps([r.as_dict() for r in results], indent=2))
    else:
        for r in results:
            print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="key = value configuration file")
    common.add_argument("--out", metavar="DIR", default=".", help="output directory (default .)")
    common.add_argument("--plot", action="store_true", help="also write SVG plots")
    common.add_argument("--json", action="store_true", help="machine-readable stdout")
    common.add_argument("--set", metavar="KEY=VALUE", action="append", default=[],
                        help="override a configuration key (repeatable)")

    epilog = "configuration keys (default, meaning):\n" + describe_keys()
    parser = _Parser(prog="dyonstring", description=__doc__.splitlines()[0], epilog=epilog,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("run", parents=[common], epilog=epilog,
                   formatter_class=argparse.RawDescriptionHelpFormatter,
                   help="integrate one configuration; writes trajectory.csv, summary.json")
    sw = sub.add_parser("sweep", parents=[common], epilog=epilog,
                        formatter_class=argparse.RawDescriptionHelpFormatter,
                        help="scan lambda; writes sweep.csv")
    sw.add_argument("--lambda-min", type=float, help="default 0")
    sw.add_argument("--lambda-max", type=float, help="default 0.02")
    sw.add_argument("--lambda-step", type=float, help="default 2.5e-4")
    sw.add_argument("--lambda-list", help="explicit comma or space separated values")
    sw.add_argument("--no-timing", action="store_true",
                    help="leave wall_time_ms empty so reruns are byte-identical")
    va = sub.add_parser("validate", parents=[common], help="run the validation battery")
    va.add_argument("--corrupt-rhs", action="store_true", help=argparse.SUPPRESS)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return _fail("usage", str(exc), EXIT_CONFIG)
    try:
        if args.command == "validate":
            return cmd_validate(args.json, args.corrupt_rhs)
        cfg = load_config(args.config, args.set)
        out = Path(args.out)
        if args.command == "run":
            return cmd_run(cfg, out, args.plot, args.json)
        lams = _lambda_values(args)
        return cmd_sweep(cfg, lams, out, args.plot, args.json, timing=not args.no_timing)
    except ConfigError as exc:
        return _fail("config", str(exc), EXIT_CONFIG)
    except (IntegrationError, IntegrationTimeout, SeedError, DomainError) as exc:
        return _fail("numerical", str(exc), EXIT_NUMERICAL)


if __name__ == "__main__":
    sys.exit(main())
