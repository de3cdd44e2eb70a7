"""Aggregated run scores and the canonical report document."""

import math

import pytest

from drivebench.harness.rescore import params_from_dict
from drivebench.scoring.report import (
    REPORT_SCHEMA,
    build_report,
    params_to_dict,
    score_frames,
)
from drivebench.scoring.scores import ComfortRefs, FrameRecord, ScoringParams


def frame(tick, speed, ttc, speeding=False, accel=0.0):
    return FrameRecord(
        tick=tick,
        speed=speed,
        ttc=ttc,
        avg_npc_speed=None,
        sparse=True,
        speeding=speeding,
        accel=accel,
        jerk=0.0,
        lat_accel=0.0,
        lat_jerk=0.0,
    )


def test_score_frames_matches_hand_computed_means():
    frames = [
        frame(0, 13.89, math.inf),
        frame(1, 13.89 / 2.0, 2.0, speeding=True, accel=4.0),
    ]
    scores = score_frames(frames, ScoringParams())
    assert scores.safety == (1.0, 0.5)
    # Second frame: accel component 0.5, the other three saturate at 1.
    assert scores.comfort == (1.0, 0.875)
    assert scores.efficiency == (1.0, 0.5)
    assert scores.safety_mean == pytest.approx(0.75, abs=1e-12)
    assert scores.comfort_mean == pytest.approx(0.9375, abs=1e-12)
    assert scores.efficiency_mean == pytest.approx(0.75, abs=1e-12)
    assert scores.n_frames == 2
    assert scores.n_speeding == 1
    assert scores.speed == pytest.approx(0.9 ** 5, abs=1e-12)
    expected = (0.25 * 0.9375 + 0.25 * 0.75 + 0.5 * 0.75) * 0.9 ** 5
    assert scores.aggregate == pytest.approx(expected, abs=1e-12)


def test_score_frames_rejects_an_empty_run():
    with pytest.raises(ValueError, match="empty"):
        score_frames([], ScoringParams())


def test_aggregate_uses_configured_weights():
    params = ScoringParams(
        alpha_comfort=0.5, alpha_efficiency=0.25, alpha_safety=0.25
    )
    scores = score_frames([frame(0, 13.89, math.inf)], params)
    assert scores.aggregate == pytest.approx(1.0, abs=1e-12)
    # Stationary frame: comfort stays 1, safety and efficiency drop to 0.
    scores = score_frames([frame(0, 0.0, 0.0)], params)
    assert scores.aggregate == pytest.approx(0.5, abs=1e-12)


def test_params_round_trip_through_their_dict_form():
    params = ScoringParams(
        ttc_threshold=3.0,
        speed_limit=12.0,
        comfort_refs=ComfortRefs(accel=4.0, jerk=4.0, lat_accel=3.0, lat_jerk=3.0),
        alpha_comfort=0.2,
        alpha_efficiency=0.2,
        alpha_safety=0.6,
        speeding_base=0.8,
        speeding_gain=5.0,
    )
    data = params_to_dict(params)
    assert list(data) == [
        "ttc_threshold",
        "speed_limit",
        "comfort_refs",
        "alpha",
        "speeding_base",
        "speeding_gain",
    ]
    assert data["alpha"] == [0.2, 0.2, 0.6]
    assert params_from_dict(data) == params


def test_build_report_orders_keys_canonically():
    params = ScoringParams()
    scores = score_frames([frame(0, 13.89, math.inf)], params)
    report = build_report(
        scores=scores,
        params=params,
        termination="goal_reached",
        counters={"ticks": 10},
        config={"weather": {"name": "good"}},
    )
    assert list(report) == [
        "schema",
        "termination",
        "scores",
        "counters",
        "cdf",
        "params",
        "config",
    ]
    assert report["schema"] == REPORT_SCHEMA
    assert list(report["scores"]) == [
        "safety",
        "comfort",
        "efficiency",
        "speed",
        "aggregate",
    ]
    assert list(report["cdf"]) == ["safety", "comfort", "efficiency"]
    assert report["cdf"]["safety"] == [[1.0, 1.0]]
    assert report["counters"] == {"ticks": 10}
    assert report["config"] == {"weather": {"name": "good"}}
