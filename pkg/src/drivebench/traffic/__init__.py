from drivebench.traffic.road import RoadNetwork, Segment, build_road
from drivebench.traffic.sim import apply_decision, spawn_traffic, step, ttc
from drivebench.traffic.state import (
    EgoControl,
    Scenario,
    TrafficSpec,
    VehicleState,
    WorldState,
    continuous_lane,
)

__all__ = [
    "RoadNetwork",
    "Segment",
    "build_road",
    "spawn_traffic",
    "step",
    "ttc",
    "apply_decision",
    "VehicleState",
    "WorldState",
    "EgoControl",
    "Scenario",
    "TrafficSpec",
    "continuous_lane",
]
