"""The closed-loop run driver: observe, prompt, decide, act, score.

Every tick is logged; the agent is queried every decision_period ticks.
The loop never dies on bad agent output (fallback decisions keep it
closed) and stops on goal, collision, timeout, or a dead agent channel,
in which case the partial log is still scored.
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path

from drivebench.agents.decisions import Decision
from drivebench.agents.memory import MemoryStore
from drivebench.agents.protocol import (
    MAX_HISTORY,
    AgentChannel,
    AgentRequest,
    TransportError,
    make_channel,
    request_decision,
)
from drivebench.harness.config import RunConfig, embed_config
from drivebench.harness.logio import make_row, write_log
from drivebench.harness.rescore import frames_from_rows
from drivebench.perception import observe, render_prompt
from drivebench.scoring.cdf import cdf_csv
from drivebench.scoring.report import (
    RunScores,
    build_report,
    params_to_dict,
    score_frames,
)
from drivebench.traffic.sim import (
    next_control,
    spawn_traffic,
    step,
    surrounding_stats,
    ttc,
)
from drivebench.traffic.state import EgoControl, continuous_lane
from drivebench.weather import effects

__all__ = ["EXIT_CODES", "RunResult", "run_loop", "run_scenario", "write_outputs"]

log = logging.getLogger(__name__)

TERM_GOAL = "goal_reached"
TERM_COLLISION = "collision"
TERM_TIMEOUT = "timeout"
TERM_AGENT_FAILURE = "agent_failure"

EXIT_CODES = {
    TERM_GOAL: 0,
    TERM_COLLISION: 2,
    TERM_TIMEOUT: 3,
    TERM_AGENT_FAILURE: 4,
}

LOG_NAME = "trajectory.jsonl"
REPORT_NAME = "report.json"
MEMORY_NAME = "memory.jsonl"


@dataclass
class RunResult:
    termination: str
    rows: list[dict]
    scores: RunScores
    report: dict
    memory: MemoryStore
    counters: dict


def _outcome_summary(outcome: RunScores) -> str:
    return (
        f"safety {outcome.safety_mean:.3f}, comfort {outcome.comfort_mean:.3f}, "
        f"efficiency {outcome.efficiency_mean:.3f}, speed {outcome.speed:.3f}"
    )


def run_loop(cfg: RunConfig, channel: AgentChannel) -> RunResult:
    """Drive one scenario against an open agent channel."""
    scenario = cfg.scenario
    road = scenario.road
    eff = effects(cfg.weather)
    params = cfg.params
    goal = scenario.route[1]

    world = spawn_traffic(scenario)
    control = EgoControl.cruise(0.0, scenario.ego_lane)
    store = MemoryStore()
    rows: list[dict] = []
    # A decision whose outcome window is still open: (frame, scene, decision).
    pending: tuple[int, str, Decision] | None = None
    n_decisions = 0
    n_fallbacks = 0
    termination = TERM_TIMEOUT

    while True:
        tick = world.tick
        ego = world.ego
        crashed = any(0 in pair for pair in world.collisions)
        reached = ego.s >= goal
        terminal = crashed or reached or tick >= scenario.max_ticks
        npc_count, avg_npc_speed, sparse = surrounding_stats(world)
        row = make_row(
            tick=tick,
            time=world.time,
            lane=continuous_lane(ego, road),
            s=ego.s,
            speed=ego.speed,
            accel=ego.accel,
            ttc=ttc(world),
            npc_count=npc_count,
            avg_npc_speed=avg_npc_speed,
            sparse=sparse,
            speeding=ego.speed > params.speed_limit,
        )
        rows.append(row)

        failed = False
        if not terminal and tick % scenario.decision_period == 0:
            if pending is not None:
                frame, scene_text, decision = pending
                window = rows[frame + 1 : tick + 1]
                outcome = score_frames(
                    frames_from_rows(window, road, scenario.dt, params), params
                )
                store.add(
                    frame, scene_text, decision, outcome.aggregate, _outcome_summary(outcome)
                )
                pending = None
            obs = observe(world, cfg.rig, eff, scenario.seed, cfg.weather_name)
            prompt = render_prompt(obs, road)
            req = AgentRequest(
                frame=tick,
                prompt=prompt,
                lidar=obs.lidar,
                history=tuple(store.history(MAX_HISTORY)),
            )
            try:
                resp = request_decision(channel, req, obs, cfg.timeout_ms, cfg.retries)
            except TransportError as e:
                log.error("tick %d: agent channel failed permanently: %s", tick, e)
                failed = True
            else:
                n_decisions += 1
                if resp.rationale == "fallback":
                    n_fallbacks += 1
                row["decision"] = resp.decision.value
                pending = (tick, prompt.scene_text, resp.decision)
                control = next_control(control, resp.decision, ego, road, scenario.dt)

        if terminal or failed:
            if reached:
                termination = TERM_GOAL
            elif crashed:
                termination = TERM_COLLISION
            elif failed:
                termination = TERM_AGENT_FAILURE
            else:
                termination = TERM_TIMEOUT
            break

        world = step(world, control, eff.friction, scenario.dt, road.speed_limit)

    frames = frames_from_rows(rows, road, scenario.dt, params)
    scores = score_frames(frames, params)
    counters = {
        "ticks": rows[-1]["tick"],
        "n_frames": scores.n_frames,
        "n_decisions": n_decisions,
        "n_fallbacks": n_fallbacks,
        "n_speeding": scores.n_speeding,
        "n_collisions": len(world.collisions),
    }
    report = build_report(scores, params, termination, counters, embed_config(cfg))
    return RunResult(termination, rows, scores, report, store, counters)


def write_outputs(out_dir: Path, cfg: RunConfig, result: RunResult) -> None:
    """Persist the trajectory log, report, memory, and CDF tables."""
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / LOG_NAME, "w", encoding="utf-8") as fh:
        write_log(
            fh,
            embed_config(cfg),
            params_to_dict(cfg.params),
            result.rows,
            result.termination,
            result.counters,
        )
    (out_dir / REPORT_NAME).write_text(
        json.dumps(result.report, indent=2) + "\n", encoding="utf-8"
    )
    (out_dir / MEMORY_NAME).write_text(result.memory.to_jsonl(), encoding="utf-8")
    for metric in ("safety", "comfort", "efficiency"):
        pairs = result.report["cdf"][metric]
        (out_dir / f"cdf_{metric}.csv").write_text(cdf_csv(pairs), encoding="utf-8")


def run_scenario(cfg: RunConfig) -> RunResult:
    """Run one configured scenario end to end, writing outputs if asked."""
    channel = make_channel(cfg.agent)
    try:
        result = run_loop(cfg, channel)
    finally:
        channel.close()
    if cfg.output_dir is not None:
        write_outputs(cfg.output_dir, cfg, result)
    return result
