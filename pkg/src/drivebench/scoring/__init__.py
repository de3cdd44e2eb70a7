"""Run evaluation: kinematic derivatives, the four metric families,
distribution summaries, and report assembly."""

from drivebench.scoring.cdf import build_cdf, cdf_csv
from drivebench.scoring.derivatives import KinematicSeries, kinematic_derivatives
from drivebench.scoring.report import RunScores, build_report, score_frames
from drivebench.scoring.scores import (
    STYLE_REFS,
    ComfortRefs,
    FrameRecord,
    ScoringParams,
    aggregate_score,
    comfort_score,
    efficiency_score,
    safety_score,
    speed_score,
    target_speed,
)

__all__ = [
    "ComfortRefs",
    "FrameRecord",
    "KinematicSeries",
    "RunScores",
    "STYLE_REFS",
    "ScoringParams",
    "aggregate_score",
    "build_cdf",
    "build_report",
    "cdf_csv",
    "comfort_score",
    "efficiency_score",
    "kinematic_derivatives",
    "safety_score",
    "score_frames",
    "speed_score",
    "target_speed",
]
