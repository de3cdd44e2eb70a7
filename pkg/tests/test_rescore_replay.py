"""Offline rescoring purity and log replay verification."""

import json

import pytest

from drivebench.harness.config import run_config_from_dict
from drivebench.harness.logio import read_log, write_log
from drivebench.harness.replay import ReplayMismatch, replay_log
from drivebench.harness.rescore import frames_from_rows, params_from_dict, rescore_log
from drivebench.harness.runner import run_scenario, write_outputs
from drivebench.scoring.scores import ScoringParams
from drivebench.traffic.road import build_road


@pytest.fixture(scope="module")
def run_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("run")
    cfg = run_config_from_dict(
        {
            "scenario": {
                "seed": 7,
                "route": [0.0, 120.0],
                "max_ticks": 300,
                "traffic": {"n_vehicles": 6},
            }
        }
    )
    result = run_scenario(cfg)
    write_outputs(out, cfg, result)
    return out


def test_rescore_reproduces_the_original_report_bytes(run_dir):
    report = rescore_log(run_dir / "trajectory.jsonl")
    rendered = json.dumps(report, indent=2) + "\n"
    assert rendered == (run_dir / "report.json").read_text()


def test_rescore_echoes_logged_termination_and_counters(run_dir):
    original = json.loads((run_dir / "report.json").read_text())
    report = rescore_log(run_dir / "trajectory.jsonl", {"ttc_threshold": 8.0})
    assert report["termination"] == original["termination"]
    assert report["counters"] == original["counters"]


def test_tighter_ttc_threshold_cannot_raise_safety(run_dir):
    base = rescore_log(run_dir / "trajectory.jsonl")
    strict = rescore_log(run_dir / "trajectory.jsonl", {"ttc_threshold": 8.0})
    assert strict["params"]["ttc_threshold"] == 8.0
    assert strict["scores"]["safety"] <= base["scores"]["safety"]
    assert strict["scores"]["comfort"] == base["scores"]["comfort"]
    assert strict["scores"]["efficiency"] == base["scores"]["efficiency"]


def test_style_override_swaps_the_comfort_refs(run_dir):
    cautious = rescore_log(run_dir / "trajectory.jsonl", {"style": "cautious"})
    aggressive = rescore_log(run_dir / "trajectory.jsonl", {"style": "aggressive"})
    assert cautious["params"]["comfort_refs"]["accel"] == 1.0
    assert aggressive["params"]["comfort_refs"]["accel"] == 4.0
    assert cautious["scores"]["comfort"] <= aggressive["scores"]["comfort"]


def test_lower_speed_limit_recomputes_speeding(run_dir):
    slow = rescore_log(run_dir / "trajectory.jsonl", {"speed_limit": 1.0})
    base = rescore_log(run_dir / "trajectory.jsonl")
    assert slow["scores"]["speed"] < base["scores"]["speed"]


def test_unknown_override_is_rejected(run_dir):
    with pytest.raises(ValueError, match="unknown rescore overrides.*tau"):
        rescore_log(run_dir / "trajectory.jsonl", {"tau": 2.0})


def test_short_logs_score_comfort_as_neutral():
    road = build_road({"segments": [{"kind": "straight", "length": 100.0}]})
    rows = [
        {
            "tick": t,
            "time": t * 0.1,
            "ego": {"lane": 2.0, "s": 5.0 * t, "speed": 13.89, "accel": 0.0},
            "ttc": None,
            "npc_count": 0,
            "avg_npc_speed": None,
            "sparse": True,
            "speeding": False,
        }
        for t in range(2)
    ]
    frames = frames_from_rows(rows, road, 0.1, ScoringParams())
    assert [f.accel for f in frames] == [0.0, 0.0]
    assert [f.jerk for f in frames] == [0.0, 0.0]


def test_frames_require_at_least_one_row():
    road = build_road({"segments": [{"kind": "straight", "length": 100.0}]})
    with pytest.raises(ValueError, match="no rows"):
        frames_from_rows([], road, 0.1, ScoringParams())


def test_params_from_dict_round_trips_defaults():
    meta_params = {
        "ttc_threshold": 4.0,
        "speed_limit": 13.89,
        "comfort_refs": {"accel": 2.0, "jerk": 2.0, "lat_accel": 1.5, "lat_jerk": 1.5},
        "alpha": [0.25, 0.25, 0.5],
        "speeding_base": 0.9,
        "speeding_gain": 10.0,
    }
    assert params_from_dict(meta_params) == ScoringParams()


def test_replay_rebuilds_the_identical_run(run_dir):
    result = replay_log(run_dir / "trajectory.jsonl")
    _, rows, end = read_log(run_dir / "trajectory.jsonl")
    assert result.rows == rows
    assert result.termination == end["termination"]
    assert result.counters == end["counters"]


def test_replay_rebuilds_the_memory_store(run_dir):
    result = replay_log(run_dir / "trajectory.jsonl")
    assert result.memory.to_jsonl() == (run_dir / "memory.jsonl").read_text()


def test_replay_detects_a_tampered_row(run_dir, tmp_path):
    meta, rows, end = read_log(run_dir / "trajectory.jsonl")
    rows[5]["ego"]["speed"] += 0.25
    tampered = tmp_path / "tampered.jsonl"
    with tampered.open("w") as fh:
        write_log(
            fh,
            meta["config"],
            meta["params"],
            rows,
            end["termination"],
            end["counters"],
        )
    with pytest.raises(ReplayMismatch, match="row 5"):
        replay_log(tampered)
    # Without verification the replay still runs from the embedded config.
    result = replay_log(tampered, verify=False)
    assert result.termination == end["termination"]
