"""Sensor model: ground truth world + weather + rig -> agent-facing text.

Cameras are abstracted to front/rear half-plane coverage with
weather-limited range, seeded dropout, and seeded Gaussian gap noise.
Semantic LiDAR is exact within its range, covers both sectors, and is
summarised as a point count with min/mean/max distances. The scene prompt
renders all of it as deterministic text with 0.1 precision.
"""

import random
from dataclasses import dataclass
from typing import Union

from drivebench.traffic.road import RoadNetwork
from drivebench.traffic.state import VehicleState, WorldState
from drivebench.weather import WeatherEffects

__all__ = [
    "Detection",
    "LidarSummary",
    "Observation",
    "RIGS",
    "ScenePrompt",
    "SensorRig",
    "lidar_summary",
    "observe",
    "render_prompt",
    "resolve_rig",
]


@dataclass(frozen=True)
class SensorRig:
    """Enabled perception set: camera counts per sector plus a LiDAR flag."""

    front_cameras: int = 3
    rear_cameras: int = 3
    lidar: bool = False

    def __post_init__(self):
        if self.front_cameras < 0 or self.rear_cameras < 0:
            raise ValueError("camera counts must be non-negative")
        if self.front_cameras == 0 and self.rear_cameras == 0 and not self.lidar:
            raise ValueError("rig must enable at least one sensor")


# The four rig configurations exercised by the batch grid.
RIGS: dict[str, SensorRig] = {
    "3cam": SensorRig(front_cameras=3, rear_cameras=0, lidar=False),
    "6cam": SensorRig(front_cameras=3, rear_cameras=3, lidar=False),
    "3cam+lidar": SensorRig(front_cameras=3, rear_cameras=0, lidar=True),
    "6cam+lidar": SensorRig(front_cameras=3, rear_cameras=3, lidar=True),
}


def resolve_rig(spec: Union[str, "SensorRig", dict, None]) -> tuple[str, SensorRig]:
    """Accept a rig name, a SensorRig, or a field dict; return (label, rig)."""
    if spec is None:
        return "6cam", RIGS["6cam"]
    if isinstance(spec, SensorRig):
        return "custom", spec
    if isinstance(spec, str):
        try:
            return spec, RIGS[spec]
        except KeyError:
            known = ", ".join(sorted(RIGS))
            raise ValueError(f"unknown rig {spec!r}; known rigs: {known}") from None
    if isinstance(spec, dict):
        return "custom", SensorRig(**spec)
    raise TypeError(f"cannot resolve rig from {type(spec).__name__}")


@dataclass(frozen=True)
class Detection:
    """One perceived vehicle. ``gap`` is the measured bumper distance."""

    npc_id: int
    sector: str  # "front" or "rear"
    lane_index: int
    gap: float
    rel_speed: float  # positive when the other vehicle is faster
    source: str  # "camera" or "lidar"


@dataclass(frozen=True)
class LidarSummary:
    """Range statistics over LiDAR returns, one return per visible object."""

    num_points: int
    min_distance: float
    mean_distance: float
    max_distance: float

    def __post_init__(self):
        if self.num_points > 0 and not (
            self.min_distance <= self.mean_distance <= self.max_distance
        ):
            raise ValueError("LiDAR distances must satisfy min <= mean <= max")

    def to_dict(self) -> dict:
        return {
            "num_points": self.num_points,
            "min_distance": self.min_distance,
            "mean_distance": self.mean_distance,
            "max_distance": self.max_distance,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LidarSummary":
        return cls(
            num_points=data["num_points"],
            min_distance=data["min_distance"],
            mean_distance=data["mean_distance"],
            max_distance=data["max_distance"],
        )


@dataclass(frozen=True)
class Observation:
    """What the agent is allowed to know at one decision point."""

    tick: int
    ego: VehicleState
    detected: tuple[Detection, ...]
    visibility_used: float
    lidar: LidarSummary | None
    weather_name: str


@dataclass(frozen=True)
class ScenePrompt:
    """The three text blocks sent to an agent."""

    system_text: str
    scene_text: str
    task_text: str


def _true_gap(ego: VehicleState, npc: VehicleState) -> float:
    gap = abs(npc.s - ego.s) - 0.5 * (ego.length + npc.length)
    return gap if gap > 0.0 else 0.0


def observe(
    world: WorldState,
    rig: SensorRig,
    effects: WeatherEffects,
    seed: int,
    weather_name: str = "custom",
) -> Observation:
    """Perceive the world through the rig under the given weather effects.

    Each NPC consumes its own seeded random stream (derived from the run
    seed, the tick, and the NPC id), so detection sets are reproducible
    and changing the rig never perturbs another vehicle's draws.
    """
    ego = world.ego
    obs_seed = seed * 1_000_003 + world.tick
    detections: list[Detection] = []
    for npc in world.npcs:
        ds = npc.s - ego.s
        sector = "front" if ds >= 0.0 else "rear"
        gap = _true_gap(ego, npc)
        rng = random.Random(obs_seed * 1_000_003 + npc.id)
        # Both draws always happen so streams stay aligned across rigs
        # and weather settings.
        u_drop = rng.random()
        noise = rng.gauss(0.0, 1.0) * effects.position_noise_sigma
        covered = (
            rig.front_cameras > 0 if sector == "front" else rig.rear_cameras > 0
        )
        camera_hit = (
            covered
            and gap <= effects.camera_visibility
            and u_drop >= effects.detection_dropout
        )
        lidar_hit = rig.lidar and gap <= effects.lidar_visibility
        if lidar_hit:
            measured = gap
            source = "lidar"
        elif camera_hit:
            measured = gap + noise
            if measured < 0.0:
                measured = 0.0
            elif measured > effects.camera_visibility:
                measured = effects.camera_visibility
            source = "camera"
        else:
            continue
        detections.append(
            Detection(
                npc_id=npc.id,
                sector=sector,
                lane_index=npc.lane_index,
                gap=measured,
                rel_speed=npc.speed - ego.speed,
                source=source,
            )
        )
    visibility = 0.0
    if rig.front_cameras > 0 or rig.rear_cameras > 0:
        visibility = effects.camera_visibility
    if rig.lidar and effects.lidar_visibility > visibility:
        visibility = effects.lidar_visibility
    summary = lidar_summary(world, effects) if rig.lidar else None
    return Observation(
        tick=world.tick,
        ego=ego,
        detected=tuple(detections),
        visibility_used=visibility,
        lidar=summary,
        weather_name=weather_name,
    )


def lidar_summary(world: WorldState, effects: WeatherEffects) -> LidarSummary:
    """Synthesize one range return per NPC within LiDAR range."""
    ego = world.ego
    ranges = [
        gap
        for npc in world.npcs
        if (gap := _true_gap(ego, npc)) <= effects.lidar_visibility
    ]
    if not ranges:
        return LidarSummary(0, 0.0, 0.0, 0.0)
    return LidarSummary(
        num_points=len(ranges),
        min_distance=min(ranges),
        mean_distance=sum(ranges) / len(ranges),
        max_distance=max(ranges),
    )


def _fmt(x: float) -> str:
    # round() first so values like -0.04 render as 0.0, not -0.0
    return f"{round(x, 1) + 0.0:.1f}"


_SYSTEM_TEXT = """\
You are the decision module of an autonomous vehicle on a multilane road.
At each decision point you pick exactly one of five actions:
- idle (no change in current behavior)
- accelerate
- decelerate
- turn_left (move one lane to the left)
- turn_right (move one lane to the right)
Base your choice only on the scene description and the task."""

_TASK_TEXT = """\
Choose exactly one of the five actions for the ego vehicle now.
Reply with brief reasoning, then a final line of the form:
DECISION: <idle|accelerate|decelerate|turn_left|turn_right>"""


def _lane_phrase(delta: int) -> str:
    if delta == 0:
        return "same lane"
    side = "left" if delta < 0 else "right"
    return f"{abs(delta)} lane(s) to the {side}"


def render_prompt(obs: Observation, road: RoadNetwork) -> ScenePrompt:
    """Render the observation as the three deterministic prompt blocks.

    Gaps and speeds carry 0.1 precision; the LiDAR block appears iff the
    observation has a LiDAR summary.
    """
    ego = obs.ego
    lines = [
        f"Weather: {obs.weather_name}.",
        (
            f"Road: {road.lane_count} lanes, lane width {_fmt(road.lane_width)} m, "
            f"speed limit {_fmt(road.speed_limit)} m/s, "
            f"curvature at ego {road.curvature_at(ego.s):.3f} 1/m."
        ),
        (
            f"Ego: lane {ego.lane_index}, {_fmt(ego.s)} m along the route, "
            f"speed {_fmt(ego.speed)} m/s."
        ),
        f"Sensor visibility: {_fmt(obs.visibility_used)} m.",
        "Detected vehicles:",
    ]
    ordered = sorted(
        obs.detected, key=lambda d: (d.sector != "front", d.gap, d.npc_id)
    )
    if ordered:
        for d in ordered:
            lines.append(
                f"- {d.sector}, {_lane_phrase(d.lane_index - ego.lane_index)}: "
                f"gap {_fmt(d.gap)} m, relative speed {_fmt(d.rel_speed)} m/s "
                f"({d.source})"
            )
    else:
        lines.append("- none")
    if obs.lidar is not None:
        lines.append(
            f"Lidar data description: {obs.lidar.num_points} points from "
            f"surrounding objects; distances min {_fmt(obs.lidar.min_distance)} m, "
            f"mean {_fmt(obs.lidar.mean_distance)} m, "
            f"max {_fmt(obs.lidar.max_distance)} m."
        )
    return ScenePrompt(
        system_text=_SYSTEM_TEXT,
        scene_text="\n".join(lines),
        task_text=_TASK_TEXT,
    )
