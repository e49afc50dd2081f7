"""Command line entry point: ``simulate`` one scenario or ``sweep`` a parameter."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .experiments import METHODS, PARAMETERS, ScenarioError, SweepSpec, emit_csv, emit_plot, run_scenario, run_sweep
from .scenario import ConfigError, load_config


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # one-line diagnostic instead of argparse's usage block
        raise CliError(message)


def _read_config(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    return load_config(text)


def _parse_values(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise CliError(f"--values must be a comma-separated list of numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="uavnoma", description="Drone-assisted NOMA vehicular downlink simulator.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sim = sub.add_parser("simulate", help="run one scenario and print its summary as JSON")
    sim.add_argument("--config", required=True)
    sim.add_argument("--seed", type=int, required=True)
    sim.add_argument("--method", choices=METHODS, default="proposed")

    sw = sub.add_parser("sweep", help="sweep one clustering parameter over many seeds")
    sw.add_argument("--config", required=True)
    sw.add_argument("--param", required=True, choices=sorted(PARAMETERS))
    sw.add_argument("--values", required=True, help="comma-separated list, e.g. 5,6,7")
    sw.add_argument("--seeds", type=int, required=True)
    sw.add_argument("--baseline", choices=METHODS, default="proposed")
    sw.add_argument("--out-csv", required=True)
    sw.add_argument("--out-plot")
    return p


def _simulate(args) -> None:
    cfg = _read_config(args.config)
    r = run_scenario(cfg, args.seed, args.method)
    summary = {
        "seed": r.seed,
        "method": args.method,
        "total_se": r.total_se,
        "num_clusters": r.num_clusters,
        "num_mbs_users": r.num_mbs_users,
    }
    print(json.dumps(summary, sort_keys=True))


def _sweep(args) -> None:
    cfg = _read_config(args.config)
    spec = SweepSpec(args.param, _parse_values(args.values), args.seeds, cfg, args.baseline)
    result = run_sweep(spec)
    emit_csv(result, args.out_csv)
    if args.out_plot:
        emit_plot([result], args.out_plot)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command == "simulate":
            _simulate(args)
        else:
            _sweep(args)
    except (CliError, ConfigError, ScenarioError, ValueError, OSError) as exc:
        msg = " ".join(str(exc).split())
        print(f"uavnoma: error: {msg}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
