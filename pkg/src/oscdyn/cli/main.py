"""Command line entry point: ``oscdyn run | preset | compare-oracle``."""
from __future__ import annotations

import argparse
import dataclasses
import sys
from importlib import resources

from .config import ConfigError, Scenario, load_config, parse_config
from .scenarios import ScenarioError, run_scenario

PRESETS = ("fig2", "fig3", "fig4", "fig6")

EXIT_OK, EXIT_BREACH, EXIT_CONFIG, EXIT_FAILURE = 0, 1, 2, 3


def load_preset(name: str) -> Scenario:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r} (one of {', '.join(PRESETS)})")
    text = (resources.files("oscdyn.cli") / "presets" / f"{name}.ini").read_text(encoding="utf-8")
    return parse_config(text, f"preset:{name}")


def _as_oracle_compare(sc: Scenario) -> Scenario:
    if sc.kind == "oracle-compare":
        return sc
    if sc.kind in ("husimi-grid", "husimi-reduced"):
        raise ConfigError(f"{sc.source}: kind {sc.kind} has no mode-ODE counterpart")
    return dataclasses.replace(sc, kind="oracle-compare", name=f"{sc.name}_oracle")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None,
                        help="quadrature tolerance for run/preset; pass/fail threshold for compare-oracle")
    common.add_argument("--grid", type=int, default=None,
                        help="time samples for time series, points per axis for phase-space grids")
    common.add_argument("--threads", type=int, default=1, help="series evaluated concurrently")
    common.add_argument("--out", default=None, help="output directory (overrides the config)")

    parser = argparse.ArgumentParser(prog="oscdyn", description="Driven, damped, coupled oscillator scenarios.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("run", parents=[common], help="run a scenario config")
    p.add_argument("config")
    p = sub.add_parser("preset", parents=[common], help="reproduce a shipped figure preset")
    p.add_argument("name", choices=PRESETS)
    p = sub.add_parser("compare-oracle", parents=[common],
                       help="compare closed forms with the mode-ODE oracle; exit 1 on breach")
    p.add_argument("config", help="config path or preset name")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "preset":
            if args.out is None:
                raise ConfigError("preset needs --out <dir>")
            res = run_scenario(load_preset(args.name), args.out, args.threads, args.grid, args.tol)
        elif args.command == "run":
            res = run_scenario(args.config, args.out, args.threads, args.grid, args.tol)
        else:
            sc = load_preset(args.config) if args.config in PRESETS else load_config(args.config)
            res = run_scenario(_as_oracle_compare(sc), args.out, args.threads, args.grid, oracle_tol=args.tol)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ScenarioError, ArithmeticError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    for path in res.files:
        print(path)
    if res.max_deviation is not None:
        verdict = "PASS" if res.passed else "FAIL"
        print(f"{verdict}: max |closed - oracle| = {res.max_deviation:.3e} (tolerance {res.tolerance:.1e})")
        if not res.passed:
            return EXIT_BREACH
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
