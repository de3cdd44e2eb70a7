"""Command-line interface.

Subcommands: ``run`` (one scenario), ``batch`` (weather x rig x seed
grid), ``rescore`` (recompute scores from a log), ``compare`` (tabulate
reports), ``print-config`` (show all defaults). The run exit code encodes
the termination cause: 0 goal reached, 2 collision, 3 timeout, 4 agent
failure.
"""

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

import yaml

from drivebench.agents.protocol import TransportError
from drivebench.harness.batch import run_batch
from drivebench.harness.compare import compare_reports
from drivebench.harness.config import (
    ConfigError,
    default_run_dict,
    load_batch_spec,
    run_config_from_dict,
)
from drivebench.harness.logio import LogFormatError
from drivebench.harness.rescore import rescore_log
from drivebench.harness.runner import EXIT_CODES, TERM_AGENT_FAILURE, run_scenario

__all__ = ["main"]

log = logging.getLogger(__name__)

_BATCH_EXAMPLE = """\
# Example batch spec:
#   presets: [good, heavy_rain, storm, fog, wetness]
#   rigs: [3cam, 6cam, 3cam+lidar, 6cam+lidar]
#   seeds: [1, 2, 3]
#   workers: 4
#   output_dir: out/grid
#   base:          # any run-config fields; weather/rig/seed come from the grid
#     agent: builtin:baseline
"""


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="drivebench",
        description="Closed-loop driving evaluation harness.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one scenario")
    run_p.add_argument("--config", help="YAML run config; defaults apply if omitted")
    run_p.add_argument("--agent", help="builtin:<name> | proc:<command> | tcp:<host>:<port>")
    run_p.add_argument("--seed", type=int, help="override the scenario seed")
    run_p.add_argument("--weather", help="override the weather preset")
    run_p.add_argument("--rig", help="override the sensor rig")
    run_p.add_argument("--output-dir", help="write log, report, memory, and CDFs here")
    run_p.add_argument("--log-level", help="debug|info|warning|error")

    batch_p = sub.add_parser("batch", help="run a weather x rig x seed grid")
    batch_p.add_argument("--spec", required=True, help="YAML batch spec")
    batch_p.add_argument("--workers", type=int, help="override worker count")

    rescore_p = sub.add_parser("rescore", help="recompute scores from a trajectory log")
    rescore_p.add_argument("--log", required=True, help="trajectory.jsonl path")
    rescore_p.add_argument("--tau-th", type=float, help="override the TTC threshold")
    rescore_p.add_argument("--style", help="override the comfort style")
    rescore_p.add_argument("--v-limit", type=float, help="override the speed limit")
    rescore_p.add_argument("--out", help="write the report here instead of stdout")

    compare_p = sub.add_parser("compare", help="tabulate two or more reports")
    compare_p.add_argument("reports", nargs="+", help="report.json paths")

    sub.add_parser("print-config", help="print the default run config")
    return parser


def _setup_logging(level_name: str) -> None:
    level = getattr(logging, level_name.upper(), None)
    if not isinstance(level, int):
        raise ConfigError(f"unknown log level {level_name!r}")
    logging.basicConfig(
        level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr
    )


def _cmd_run(args: argparse.Namespace) -> int:
    if args.config:
        data = yaml.safe_load(Path(args.config).read_text(encoding="utf-8")) or {}
        if not isinstance(data, dict):
            raise ConfigError(f"{args.config}: run config must be a mapping")
    else:
        data = {}
    if args.agent:
        data["agent"] = args.agent
    if args.seed is not None:
        data.setdefault("scenario", {})["seed"] = args.seed
    if args.weather:
        data["weather"] = args.weather
    if args.rig:
        data["rig"] = args.rig
    if args.output_dir:
        data["output_dir"] = args.output_dir
    if args.log_level:
        data["log_level"] = args.log_level
    cfg = run_config_from_dict(data)
    _setup_logging(cfg.log_level)
    try:
        result = run_scenario(cfg)
    except TransportError as e:
        print(f"error: agent channel unusable: {e}", file=sys.stderr)
        return EXIT_CODES[TERM_AGENT_FAILURE]
    scores = result.report["scores"]
    print(f"termination: {result.termination}")
    print(
        f"safety {scores['safety']:.4f}  comfort {scores['comfort']:.4f}  "
        f"efficiency {scores['efficiency']:.4f}  speed {scores['speed']:.4f}  "
        f"aggregate {scores['aggregate']:.4f}"
    )
    print(
        "frames {n_frames}  decisions {n_decisions}  fallbacks {n_fallbacks}  "
        "collisions {n_collisions}".format(**result.counters)
    )
    if cfg.output_dir is not None:
        print(f"outputs: {cfg.output_dir}")
    return EXIT_CODES[result.termination]


def _cmd_batch(args: argparse.Namespace) -> int:
    spec = load_batch_spec(args.spec)
    if args.workers is not None:
        spec = replace(spec, workers=args.workers)
    _setup_logging("warning")
    index = run_batch(spec)
    failures = 0
    for cell in index["cells"]:
        status = cell["termination"] if cell["error"] is None else f"ERROR {cell['error']}"
        agg = "" if cell["aggregate"] is None else f"  aggregate {cell['aggregate']:.4f}"
        print(f"{cell['dir']:<40} {status}{agg}")
        if cell["error"] is not None:
            failures += 1
    print(f"index: {spec.output_dir / 'index.json'}")
    return 1 if failures else 0


def _cmd_rescore(args: argparse.Namespace) -> int:
    overrides = {}
    if args.tau_th is not None:
        overrides["ttc_threshold"] = args.tau_th
    if args.style is not None:
        overrides["style"] = args.style
    if args.v_limit is not None:
        overrides["speed_limit"] = args.v_limit
    report = rescore_log(args.log, overrides or None)
    text = json.dumps(report, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"report: {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_compare(args: argparse.Namespace) -> int:
    result = compare_reports(args.reports)
    print(result.format_text())
    return 0


def _cmd_print_config() -> int:
    sys.stdout.write(yaml.safe_dump(default_run_dict(), sort_keys=False))
    sys.stdout.write(_BATCH_EXAMPLE)
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "batch":
            return _cmd_batch(args)
        if args.command == "rescore":
            return _cmd_rescore(args)
        if args.command == "compare":
            return _cmd_compare(args)
        return _cmd_print_config()
    except (ConfigError, LogFormatError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
