"""Batch execution over the weather x rig x seed grid.

Every cell reuses identical seeds so weather and rig are the only varying
factors. Cells are independent processes; a failing cell is recorded in
the index and the batch continues.
"""

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from drivebench.harness.compare import compare_reports
from drivebench.harness.config import BatchSpec, run_config_from_dict
from drivebench.harness.runner import REPORT_NAME, run_scenario

__all__ = ["cell_dir_name", "run_batch"]

log = logging.getLogger(__name__)

INDEX_NAME = "index.json"
COMPARISON_NAME = "comparison.csv"


def cell_dir_name(preset: str, rig: str, seed: int) -> str:
    return f"{preset}__{rig}__s{seed}"


def _cell_overrides(preset: str, rig: str, seed: int, out_dir: str) -> dict:
    return {
        "weather": preset,
        "rig": rig,
        "scenario": {"seed": seed},
        "output_dir": out_dir,
    }


def _merge(base: dict, override: dict) -> dict:
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def _run_cell(args: tuple) -> dict:
    """One grid cell; module-level so process pools can pickle it."""
    base, preset, rig, seed, out_dir = args
    entry = {
        "preset": preset,
        "rig": rig,
        "seed": seed,
        "dir": cell_dir_name(preset, rig, seed),
        "report": None,
        "termination": None,
        "aggregate": None,
        "error": None,
    }
    try:
        cfg = run_config_from_dict(_merge(base, _cell_overrides(preset, rig, seed, out_dir)))
        result = run_scenario(cfg)
    except Exception as e:  # cell isolation: record, keep the batch alive
        entry["error"] = f"{type(e).__name__}: {e}"
        return entry
    entry["report"] = f"{entry['dir']}/{REPORT_NAME}"
    entry["termination"] = result.termination
    entry["aggregate"] = result.report["scores"]["aggregate"]
    return entry


def run_batch(spec: BatchSpec) -> dict:
    """Run every cell, then write the index and the comparison table.

    Returns the index mapping: one entry per cell in grid order, each
    naming its output directory and report or the recorded error.
    """
    spec.output_dir.mkdir(parents=True, exist_ok=True)
    cells = spec.cells()
    args = [
        (
            spec.base,
            preset,
            rig,
            seed,
            str(spec.output_dir / cell_dir_name(preset, rig, seed)),
        )
        for preset, rig, seed in cells
    ]
    if spec.workers > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            entries = list(pool.map(_run_cell, args))
    else:
        entries = [_run_cell(a) for a in args]

    index = {
        "grid": {
            "presets": list(spec.presets),
            "rigs": list(spec.rigs),
            "seeds": list(spec.seeds),
        },
        "cells": entries,
    }
    (spec.output_dir / INDEX_NAME).write_text(
        json.dumps(index, indent=2) + "\n", encoding="utf-8"
    )

    report_paths = [
        spec.output_dir / e["report"] for e in entries if e["report"] is not None
    ]
    if len(report_paths) >= 2:
        comparison = compare_reports(report_paths)
        (spec.output_dir / COMPARISON_NAME).write_text(
            comparison.summary_csv(), encoding="utf-8"
        )
    for entry in entries:
        if entry["error"] is not None:
            log.error(
                "cell %s failed: %s", entry["dir"], entry["error"]
            )
    return index
