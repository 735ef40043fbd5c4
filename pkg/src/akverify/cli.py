"""Command-line interface.

Exit codes: 0 all requested residuals within tolerance, 1 a residual
exceeded its tolerance, 2 configuration error, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .checks import GROUPS, list_checks
from .report import Report
from .runner import ConfigError, RunConfig, run


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="akverify",
        description=(
            "Pointwise verification of curvature identities for "
            "four-dimensional almost Kahler structures."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a check suite over sample points")
    v.add_argument(
        "--instance",
        required=True,
        help="preset name or path to a JSON instance/run config",
    )
    v.add_argument(
        "--checks",
        default="gray",
        help=f"comma-separated groups from {','.join(GROUPS)}",
    )
    v.add_argument("--points", type=int, default=None, help="sample count")
    v.add_argument("--seed", type=int, default=None, help="sampling seed")
    v.add_argument("--out", default=None, help="report file path")
    v.add_argument("--format", choices=("json", "csv"), default=None)
    v.add_argument(
        "--tol-scale", type=float, default=None, help="multiply all tolerances"
    )

    sub.add_parser("list-checks", help="print the identity catalogue")
    return parser


def _load_config(args) -> RunConfig:
    spec = args.instance
    if spec.endswith(".json"):
        try:
            with open(spec) as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read {spec}: {exc}") from None
        if "instance" in cfg:  # full run config
            config = RunConfig.from_dict(cfg)
        else:  # bare instance spec
            config = RunConfig(instance=cfg)
    else:
        config = RunConfig(instance=spec)

    if args.checks is not None:
        config.checks = [c for c in args.checks.split(",") if c]
    if args.points is not None:
        config.samples["count"] = args.points
    if args.seed is not None:
        config.samples["seed"] = args.seed
    if args.out is not None:
        config.output["path"] = args.out
    if args.format is not None:
        config.output["format"] = args.format
    if args.tol_scale is not None:
        config.tolerances["scale"] = args.tol_scale
    return RunConfig.from_dict(
        {
            "instance": config.instance,
            "checks": config.checks,
            "samples": config.samples,
            "tolerances": config.tolerances,
            "output": config.output,
        }
    )


def _print_summary(report: Report) -> None:
    summary = report.summary()
    print(f"instance: {report.meta['instance']}")
    print(f"points:   {len(report.points)}  (seed {report.meta['samples']['seed']})")
    failures = set(report.failures())
    for name in sorted(k for k in summary if k != "pass"):
        stats = summary[name]
        tol = report.tolerances.get(name)
        tag = "FAIL" if name in failures else ("info" if tol is None else "ok")
        print(f"  {name:24} max {stats['max']:.3e}  mean {stats['mean']:.3e}  [{tag}]")
    errors = [r for r in report.points if r.error]
    for r in errors:
        print(f"  point {r.p}: {r.error}")
    print("PASS" if summary["pass"] else "FAIL")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "list-checks":
        print(list_checks())
        return 0

    try:
        config = _load_config(args)
        report = run(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    path = config.output.get("path")
    fmt = config.output.get("format", "json")
    if path:
        try:
            report.emit(path, fmt)
        except OSError as exc:
            print(f"cannot write report: {exc}", file=sys.stderr)
            return 3

    _print_summary(report)
    return 0 if report.summary()["pass"] else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
