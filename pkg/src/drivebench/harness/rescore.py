"""Recompute scores from a persisted trajectory log.

Scoring is a pure function of the log: the same rows and params always
produce the identical report. The runner funnels its in-memory rows
through the same frame builder, so rescoring a fresh log is idempotent
by construction.
"""

from dataclasses import replace
from typing import Sequence

from drivebench.harness.logio import read_log, row_ttc
from drivebench.scoring.derivatives import kinematic_derivatives
from drivebench.scoring.report import build_report, score_frames
from drivebench.scoring.scores import ComfortRefs, FrameRecord, ScoringParams
from drivebench.traffic.road import RoadNetwork, build_road

__all__ = ["frames_from_rows", "params_from_dict", "rescore_log"]


def params_from_dict(data: dict) -> ScoringParams:
    """Inverse of the report's params block."""
    refs = data["comfort_refs"]
    alpha = data["alpha"]
    return ScoringParams(
        ttc_threshold=data["ttc_threshold"],
        speed_limit=data["speed_limit"],
        comfort_refs=ComfortRefs(
            accel=refs["accel"],
            jerk=refs["jerk"],
            lat_accel=refs["lat_accel"],
            lat_jerk=refs["lat_jerk"],
        ),
        alpha_comfort=alpha[0],
        alpha_efficiency=alpha[1],
        alpha_safety=alpha[2],
        speeding_base=data["speeding_base"],
        speeding_gain=data["speeding_gain"],
    )


def frames_from_rows(
    rows: Sequence[dict], road: RoadNetwork, dt: float, params: ScoringParams
) -> list[FrameRecord]:
    """Build scoreable frames from tick records.

    Derivatives are differentiated over the whole series; with fewer than
    three rows they are taken as zero, which scores comfort as neutral.
    The speeding flag is recomputed against the params in force so limit
    overrides behave consistently.
    """
    if not rows:
        raise ValueError("no rows to score")
    speeds = [row["ego"]["speed"] for row in rows]
    if len(rows) >= 3:
        lateral = [row["ego"]["lane"] * road.lane_width for row in rows]
        curvatures = [road.curvature_at(row["ego"]["s"]) for row in rows]
        ks = kinematic_derivatives(speeds, lateral, curvatures, dt)
        accel, jerk = ks.accel, ks.jerk
        lat_accel, lat_jerk = ks.lat_accel, ks.lat_jerk
    else:
        zeros = (0.0,) * len(rows)
        accel = jerk = lat_accel = lat_jerk = zeros
    return [
        FrameRecord(
            tick=row["tick"],
            speed=speeds[i],
            ttc=row_ttc(row),
            avg_npc_speed=row["avg_npc_speed"],
            sparse=row["sparse"],
            speeding=speeds[i] > params.speed_limit,
            accel=accel[i],
            jerk=jerk[i],
            lat_accel=lat_accel[i],
            lat_jerk=lat_jerk[i],
        )
        for i, row in enumerate(rows)
    ]


def rescore_log(path, overrides: dict | None = None) -> dict:
    """Score a trajectory log; optional overrides replace scoring params.

    Recognised override keys: ``style``, ``ttc_threshold``,
    ``speed_limit``. With no overrides the result is byte-identical to
    the report written by the original run.
    """
    meta, rows, end = read_log(path)
    params = params_from_dict(meta["params"])
    if overrides:
        unknown = overrides.keys() - {"style", "ttc_threshold", "speed_limit"}
        if unknown:
            raise ValueError(f"unknown rescore overrides: {sorted(unknown)}")
        if "style" in overrides:
            params = params.with_style(overrides["style"])
        if "ttc_threshold" in overrides:
            params = replace(params, ttc_threshold=float(overrides["ttc_threshold"]))
        if "speed_limit" in overrides:
            params = replace(params, speed_limit=float(overrides["speed_limit"]))
    config = meta["config"]
    road = build_road(config["scenario"]["road"])
    dt = config["scenario"]["dt"]
    frames = frames_from_rows(rows, road, dt, params)
    scores = score_frames(frames, params)
    return build_report(
        scores, params, end["termination"], end["counters"], config
    )
