"""Aggregation of frame scores into a run report.

The report is a plain dict with a fixed key order and no timestamps or
filesystem paths, so identical runs serialise to identical bytes.
"""

from dataclasses import dataclass
from typing import Mapping, Sequence

from drivebench.scoring.cdf import build_cdf
from drivebench.scoring.scores import (
    FrameRecord,
    ScoringParams,
    aggregate_score,
    frame_scores,
    speed_score,
)

__all__ = ["RunScores", "build_report", "score_frames"]

REPORT_SCHEMA = "drivebench-report-v1"


@dataclass(frozen=True)
class RunScores:
    """Per-frame score series plus the run-level aggregates."""

    safety: tuple[float, ...]
    comfort: tuple[float, ...]
    efficiency: tuple[float, ...]
    safety_mean: float
    comfort_mean: float
    efficiency_mean: float
    speed: float
    aggregate: float
    n_frames: int
    n_speeding: int


def _mean(values: Sequence[float]) -> float:
    return sum(values) / len(values)


def score_frames(frames: Sequence[FrameRecord], params: ScoringParams) -> RunScores:
    """Score every frame and fold the series into run-level numbers."""
    if not frames:
        raise ValueError("cannot score an empty run")
    safety: list[float] = []
    comfort: list[float] = []
    efficiency: list[float] = []
    n_speeding = 0
    for frame in frames:
        s, c, e = frame_scores(frame, params)
        safety.append(s)
        comfort.append(c)
        efficiency.append(e)
        if frame.speeding:
            n_speeding += 1
    speed = speed_score(
        n_speeding, len(frames), params.speeding_base, params.speeding_gain
    )
    safety_mean = _mean(safety)
    comfort_mean = _mean(comfort)
    efficiency_mean = _mean(efficiency)
    return RunScores(
        safety=tuple(safety),
        comfort=tuple(comfort),
        efficiency=tuple(efficiency),
        safety_mean=safety_mean,
        comfort_mean=comfort_mean,
        efficiency_mean=efficiency_mean,
        speed=speed,
        aggregate=aggregate_score(
            comfort_mean, efficiency_mean, safety_mean, speed, params
        ),
        n_frames=len(frames),
        n_speeding=n_speeding,
    )


def params_to_dict(params: ScoringParams) -> dict:
    return {
        "ttc_threshold": params.ttc_threshold,
        "speed_limit": params.speed_limit,
        "comfort_refs": {
            "accel": params.comfort_refs.accel,
            "jerk": params.comfort_refs.jerk,
            "lat_accel": params.comfort_refs.lat_accel,
            "lat_jerk": params.comfort_refs.lat_jerk,
        },
        "alpha": [
            params.alpha_comfort,
            params.alpha_efficiency,
            params.alpha_safety,
        ],
        "speeding_base": params.speeding_base,
        "speeding_gain": params.speeding_gain,
    }


def build_report(
    scores: RunScores,
    params: ScoringParams,
    termination: str,
    counters: Mapping[str, int],
    config: Mapping,
) -> dict:
    """Assemble the report dict in its canonical key order."""
    return {
        "schema": REPORT_SCHEMA,
        "termination": termination,
        "scores": {
            "safety": scores.safety_mean,
            "comfort": scores.comfort_mean,
            "efficiency": scores.efficiency_mean,
            "speed": scores.speed,
            "aggregate": scores.aggregate,
        },
        "counters": dict(counters),
        "cdf": {
            "safety": [[v, f] for v, f in build_cdf(scores.safety)],
            "comfort": [[v, f] for v, f in build_cdf(scores.comfort)],
            "efficiency": [[v, f] for v, f in build_cdf(scores.efficiency)],
        },
        "params": params_to_dict(params),
        "config": dict(config),
    }
