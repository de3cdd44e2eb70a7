"""Builtin rule policies and their text-agent wrappers."""

from drivebench.agents.baseline import (
    BUILTIN_AGENTS,
    BaselineParams,
    baseline_agent,
    fast_aggressive_agent,
    slow_cautious_agent,
)
from drivebench.agents.decisions import Decision
from worldkit import detection, ego, observation


def obs(speed=10.0, lane=1, detected=()):
    return observation(ego(speed=speed, lane=lane), detected=tuple(detected))


def test_accelerates_on_a_clear_road_below_target():
    assert baseline_agent(obs(speed=8.0)) is Decision.ACCELERATE


def test_brakes_on_low_perceived_ttc():
    # 10 m gap closing at 5 m/s: two seconds to impact.
    lead = detection(gap=10.0, rel_speed=-5.0, lane=1)
    assert baseline_agent(obs(speed=10.0, detected=[lead])) is Decision.DECELERATE


def test_brakes_above_the_target_band():
    assert baseline_agent(obs(speed=14.2)) is Decision.DECELERATE


def test_idles_inside_the_target_band():
    assert baseline_agent(obs(speed=13.89)) is Decision.IDLE
    assert baseline_agent(obs(speed=13.85)) is Decision.IDLE


def test_blocked_ahead_prefers_left_then_right():
    blocked = detection(gap=20.0, rel_speed=0.0, lane=1)
    assert baseline_agent(obs(speed=13.89, lane=1, detected=[blocked])) is Decision.TURN_LEFT
    left_busy = detection(2, gap=30.0, rel_speed=0.0, lane=0)
    assert (
        baseline_agent(obs(speed=13.89, lane=1, detected=[blocked, left_busy]))
        is Decision.TURN_RIGHT
    )


def test_blocked_everywhere_holds():
    detections = [
        detection(1, gap=20.0, rel_speed=0.0, lane=1),
        detection(2, gap=30.0, rel_speed=0.0, lane=0),
        detection(3, "rear", gap=5.0, rel_speed=0.0, lane=2),
    ]
    assert baseline_agent(obs(speed=13.89, lane=1, detected=detections)) is Decision.IDLE


def test_leftmost_lane_never_turns_off_the_road():
    blocked = detection(gap=20.0, rel_speed=0.0, lane=0)
    assert baseline_agent(obs(speed=13.89, lane=0, detected=[blocked])) is Decision.TURN_RIGHT


def test_rear_traffic_blocks_a_lane_change():
    blocked = detection(1, gap=20.0, rel_speed=0.0, lane=1)
    tailgater = detection(2, "rear", gap=3.0, rel_speed=2.0, lane=0)
    decision = baseline_agent(obs(speed=13.89, lane=1, detected=[blocked, tailgater]))
    assert decision is Decision.TURN_RIGHT


def test_params_thresholds_are_respected():
    params = BaselineParams(clear_gap=15.0)
    nearby = detection(gap=18.0, rel_speed=0.0, lane=1)
    # An 18 m lead clears a 15 m bar, so below target the policy accelerates.
    assert baseline_agent(obs(speed=10.0, detected=[nearby]), params) is Decision.ACCELERATE


def test_slow_cautious_policy():
    closing = detection(gap=25.0, rel_speed=-5.0, lane=1)  # 5 s out
    assert slow_cautious_agent(obs(speed=7.0, detected=[closing])) is Decision.DECELERATE
    assert slow_cautious_agent(obs(speed=10.5)) is Decision.DECELERATE
    assert slow_cautious_agent(obs(speed=4.0)) is Decision.ACCELERATE
    # Wide idle band: the spawn speed sits inside it, so an undisturbed
    # run never commands at all.
    assert slow_cautious_agent(obs(speed=8.0)) is Decision.IDLE


def test_fast_aggressive_policy():
    assert fast_aggressive_agent(obs(speed=10.0)) is Decision.ACCELERATE
    assert fast_aggressive_agent(obs(speed=16.5)) is Decision.IDLE
    close = detection(gap=8.0, rel_speed=0.0, lane=1)
    assert fast_aggressive_agent(obs(speed=10.0, detected=[close])) is Decision.DECELERATE


def test_builtin_registry_replies_with_marker_text():
    assert set(BUILTIN_AGENTS) == {"baseline", "slow_cautious", "fast_aggressive"}
    assert BUILTIN_AGENTS["baseline"](obs(speed=8.0)) == "DECISION: accelerate"
    assert BUILTIN_AGENTS["slow_cautious"](obs(speed=12.0)) == "DECISION: decelerate"
