"""Built-in deterministic agents that act on an Observation.

``baseline_agent`` is the reference policy; the two scripted styles exist
to exercise the scoring trade-off between cautious and aggressive driving.
All builtin agents answer with marker-line text like a wire agent would.
"""

from dataclasses import dataclass
from math import inf
from typing import Callable

from drivebench.agents.decisions import Decision, render_decision
from drivebench.perception import Detection, Observation

__all__ = [
    "BUILTIN_AGENTS",
    "BaselineParams",
    "baseline_agent",
    "fast_aggressive_agent",
    "slow_cautious_agent",
]


@dataclass(frozen=True)
class BaselineParams:
    """Thresholds for the rule baseline."""

    ttc_threshold: float = 4.0  # s, brake below this
    clear_gap: float = 40.0  # m, front gap considered unobstructed
    target_speed: float = 13.89  # m/s
    rear_clear_gap: float = 10.0  # m, room required behind in a target lane
    speed_deadband: float = 0.1  # m/s, hysteresis around the target


def _front_lead(obs: Observation) -> Detection | None:
    """Nearest detection ahead in the ego lane."""
    lead = None
    for d in obs.detected:
        if d.sector != "front" or d.lane_index != obs.ego.lane_index:
            continue
        if lead is None or d.gap < lead.gap:
            lead = d
    return lead


def _ttc_estimate(det: Detection) -> float:
    """Perceived time to collision; infinite when not closing."""
    closing = -det.rel_speed
    if closing <= 0.0:
        return inf
    return det.gap / closing


def _lane_clear(obs: Observation, lane: int, params: BaselineParams) -> bool:
    for d in obs.detected:
        if d.lane_index != lane:
            continue
        if d.sector == "front" and d.gap < params.clear_gap:
            return False
        if d.sector == "rear" and d.gap < params.rear_clear_gap:
            return False
    return True


def baseline_agent(
    obs: Observation, params: BaselineParams = BaselineParams()
) -> Decision:
    """Rule policy: brake on low TTC, track the target speed when clear,
    change lane when blocked, otherwise hold.

    The above-target branch exists because idle holds the previous
    acceleration command: without it one accelerate would persist forever
    on a clear road.
    """
    lead = _front_lead(obs)
    if lead is not None and _ttc_estimate(lead) < params.ttc_threshold:
        return Decision.DECELERATE
    if obs.ego.speed > params.target_speed + params.speed_deadband:
        return Decision.DECELERATE
    front_clear = lead is None or lead.gap >= params.clear_gap
    if front_clear and obs.ego.speed < params.target_speed - params.speed_deadband:
        return Decision.ACCELERATE
    if lead is not None and lead.gap < params.clear_gap:
        for candidate, turn in (
            (obs.ego.lane_index - 1, Decision.TURN_LEFT),
            (obs.ego.lane_index + 1, Decision.TURN_RIGHT),
        ):
            if candidate >= 0 and _lane_clear(obs, candidate, params):
                return turn
    return Decision.IDLE


def slow_cautious_agent(obs: Observation) -> Decision:
    """Keeps large margins and a low cruise speed.

    The idle band is wide so the held command stays at zero: commanding
    only under real threat is what makes this style gentle as well as
    slow.
    """
    lead = _front_lead(obs)
    if lead is not None and _ttc_estimate(lead) < 6.0:
        return Decision.DECELERATE
    if obs.ego.speed > 10.0:
        return Decision.DECELERATE
    if obs.ego.speed < 6.0:
        return Decision.ACCELERATE
    return Decision.IDLE


def fast_aggressive_agent(obs: Observation) -> Decision:
    """Chases a speed above the limit and brakes late."""
    lead = _front_lead(obs)
    if lead is not None and (_ttc_estimate(lead) < 3.0 or lead.gap < 10.0):
        return Decision.DECELERATE
    if obs.ego.speed < 16.0:
        return Decision.ACCELERATE
    return Decision.IDLE


def _as_text(policy: Callable[[Observation], Decision]) -> Callable[[Observation], str]:
    def reply(obs: Observation) -> str:
        return render_decision(policy(obs))

    return reply


# Registry used by `--agent builtin:<name>`.
BUILTIN_AGENTS: dict[str, Callable[[Observation], str]] = {
    "baseline": _as_text(baseline_agent),
    "slow_cautious": _as_text(slow_cautious_agent),
    "fast_aggressive": _as_text(fast_aggressive_agent),
}
