"""Command-line front end.

Subcommands: solve, profile, surface, verify, sweep.  Exit codes: 0 when
every verification passed, 1 on a verification failure, 2 on usage or
configuration errors, 3 on numerical failures.  An optional JSON config
file supplies defaults; explicit flags win.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import GeometryError, UsageError
from .pipeline import (
    PipelineConfig,
    cmd_profile,
    cmd_solve,
    cmd_surface,
    cmd_sweep,
)

EXIT_PASS = 0
EXIT_VERIFICATION_FAIL = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=str, default=None, help="JSON file of defaults")
    p.add_argument("--model", choices=["r3", "s3", "h3"], default=None)
    p.add_argument("--branch", choices=["auto", "elliptic", "parabolic"], default=None)
    p.add_argument("--k0", type=float, default=None)
    p.add_argument("--dk0", type=float, default=None, help="initial k'(0)")
    p.add_argument("--C", type=float, default=None, help="r3 profile constant")
    p.add_argument("--span", type=float, nargs=2, default=None, metavar=("U0", "U1"))
    p.add_argument("--rho-range", type=float, nargs=2, default=None, metavar=("R0", "R1"))
    p.add_argument("--nu", type=int, default=None)
    p.add_argument("--nv", type=int, default=None)
    p.add_argument("--v-range", type=float, nargs=2, default=None, metavar=("V0", "V1"))
    p.add_argument("--fd-step", type=float, default=None)
    p.add_argument("--tol-profile", type=str, default=None,
                   help="named tolerance profile (defaults to the case's own)")
    p.add_argument("--projection", type=str, default=None,
                   choices=["auto", "identity", "stereographic", "poincare"])
    p.add_argument("--out", type=str, default=None, help="output file or directory")
    p.add_argument("--report", type=str, default=None, help="report JSON path")


def _config_from_args(args) -> PipelineConfig:
    file_values = {}
    if args.config:
        try:
            file_values = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config file: {exc}")
        if not isinstance(file_values, dict):
            raise UsageError("config file must contain a JSON object")

    def pick(flag, key, default):
        if flag is not None:
            return flag
        if key in file_values:
            return file_values[key]
        return default

    cfg = PipelineConfig(
        model=pick(args.model, "model", "s3"),
        branch=pick(args.branch, "branch", "auto"),
        k0=float(pick(args.k0, "k0", 1.0)),
        kp0=float(pick(args.dk0, "dk0", 1.0)),
        C=float(pick(args.C, "C", 1.0)),
        rho_range=tuple(pick(args.rho_range, "rho_range", PipelineConfig.rho_range)),
        span=tuple(pick(args.span, "span", PipelineConfig.span)),
        nu=int(pick(args.nu, "nu", PipelineConfig.nu)),
        nv=int(pick(args.nv, "nv", PipelineConfig.nv)),
        v_range=pick(args.v_range, "v_range", None),
        fd_step=pick(args.fd_step, "fd_step", None),
        projection=pick(args.projection, "projection", "auto"),
        tol_profile=pick(args.tol_profile, "tol_profile", None),
    )
    return cfg.validate()


def _out_path(args, default_name: str) -> str:
    return args.out if args.out else default_name


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="biconsurf",
        description="Construct and verify biconservative surfaces in the "
        "three 3-dimensional space forms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, desc in [
        ("solve", "integrate the curvature ODE to CSV"),
        ("profile", "emit the profile curve CSV"),
        ("surface", "build, verify and export one surface"),
        ("verify", "build and verify (report only, no meshes)"),
        ("sweep", "run a family of pipelines and summarize"),
    ]:
        p = sub.add_parser(name, help=desc)
        _add_common(p)
        if name == "sweep":
            p.add_argument("--values", type=float, nargs="+", required=True,
                           help="swept parameter values (C for r3, k0 otherwise)")

    args = parser.parse_args(argv)

    try:
        cfg = _config_from_args(args)
        if args.command == "solve":
            result = cmd_solve(cfg, _out_path(args, "solve.csv"))
            print(f"C={result['C']!r} max_drift={result['max_drift']:.3e} "
                  f"csv={result['csv']}")
            return EXIT_PASS if result["ok"] else EXIT_VERIFICATION_FAIL
        if args.command == "profile":
            result = cmd_profile(cfg, _out_path(args, "profile.csv"))
            print(f"csv={result['csv']}")
            return EXIT_PASS if result["ok"] else EXIT_VERIFICATION_FAIL
        if args.command in ("surface", "verify"):
            out_dir = _out_path(args, ".")
            result = cmd_surface(
                cfg, out_dir,
                write_meshes=args.command == "surface",
                report_path=args.report,
            )
            status = "PASS" if result["pass"] else "FAIL"
            print(f"{status} case={result['case']} report={result['report']}")
            for name, entry in sorted(result["residuals"].items()):
                if entry["max"] is not None:
                    print(f"  {name}: max={entry['max']:.3e}")
            return EXIT_PASS if result["pass"] else EXIT_VERIFICATION_FAIL
        if args.command == "sweep":
            result = cmd_sweep(cfg, args.values, _out_path(args, "sweep_out"))
            for run in result["runs"]:
                mark = "ok" if run.get("pass") else "FAILED"
                extra = run.get("error", "")
                print(f"  value={run['value']}: {mark} {extra}".rstrip())
            print(f"summary={result['summary']}")
            return EXIT_PASS if result["pass"] else EXIT_VERIFICATION_FAIL
        raise UsageError(f"unknown command {args.command}")
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GeometryError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
