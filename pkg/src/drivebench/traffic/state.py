"""Vehicle, world and control state for the stepped simulation."""

from __future__ import annotations

from dataclasses import dataclass

from drivebench.traffic.road import RoadNetwork

DEFAULT_VEHICLE_LENGTH = 4.5  # m


@dataclass(frozen=True)
class VehicleState:
    """Kinematic snapshot of one vehicle in the lane/arc-length frame.

    ``s`` is the centre's arc position, ``lateral_offset`` the signed offset
    from the centre of ``lane_index`` (positive toward higher lane indices),
    ``accel`` the acceleration applied during the step into this state.
    """

    id: int
    lane_index: int
    s: float
    speed: float
    lateral_offset: float = 0.0
    accel: float = 0.0
    length: float = DEFAULT_VEHICLE_LENGTH
    is_ego: bool = False

    def __post_init__(self):
        if self.speed < 0.0:
            raise ValueError(f"speed must be >= 0, got {self.speed}")
        if self.length <= 0.0:
            raise ValueError(f"length must be > 0, got {self.length}")


@dataclass(frozen=True)
class WorldState:
    """Immutable world snapshot at one tick.

    ``collisions`` is the cumulative, deduplicated set of same-lane overlap
    pairs recorded up to this tick, each stored as (low id, high id).
    """

    tick: int
    time: float
    vehicles: tuple[VehicleState, ...]
    collisions: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        egos = [v for v in self.vehicles if v.is_ego]
        if len(egos) != 1:
            raise ValueError(f"world must contain exactly one ego vehicle, got {len(egos)}")

    @property
    def ego(self) -> VehicleState:
        for v in self.vehicles:
            if v.is_ego:
                return v
        raise AssertionError("unreachable: validated in __post_init__")

    @property
    def npcs(self) -> tuple[VehicleState, ...]:
        return tuple(v for v in self.vehicles if not v.is_ego)


def continuous_lane(vehicle: VehicleState, road: RoadNetwork) -> float:
    """Lane coordinate as a float: equals the integer index between lane

    changes and sweeps smoothly across during one.
    """
    return vehicle.lane_index + vehicle.lateral_offset / road.lane_width


@dataclass(frozen=True)
class TrafficSpec:
    """Surrounding-traffic generation parameters."""

    n_vehicles: int = 8
    spacing: float = 25.0  # minimum same-lane bumper gap at spawn, m
    speed_mean: float = 9.0
    speed_std: float = 1.5

    def __post_init__(self):
        if self.n_vehicles < 0:
            raise ValueError(f"n_vehicles must be >= 0, got {self.n_vehicles}")
        if self.spacing <= 0.0:
            raise ValueError(f"spacing must be > 0, got {self.spacing}")
        if self.speed_std < 0.0:
            raise ValueError(f"speed_std must be >= 0, got {self.speed_std}")


@dataclass(frozen=True)
class Scenario:
    """Everything needed to reproduce one run, minus the agent."""

    road: RoadNetwork
    route: tuple[float, float]  # (start s, goal s)
    traffic: TrafficSpec
    seed: int
    max_ticks: int = 1200
    decision_period: int = 10
    dt: float = 0.1
    ego_start_speed: float = 8.0
    ego_start_lane: int | None = None  # defaults to the middle lane

    def __post_init__(self):
        start, goal = self.route
        if goal <= start:
            raise ValueError(f"route goal must exceed start, got {self.route}")
        if self.decision_period < 1:
            raise ValueError(f"decision_period must be >= 1, got {self.decision_period}")
        if self.max_ticks < 1:
            raise ValueError(f"max_ticks must be >= 1, got {self.max_ticks}")
        if self.dt <= 0.0:
            raise ValueError(f"dt must be > 0, got {self.dt}")
        if self.ego_start_speed < 0.0:
            raise ValueError(f"ego_start_speed must be >= 0, got {self.ego_start_speed}")

    @property
    def ego_lane(self) -> int:
        if self.ego_start_lane is not None:
            return self.ego_start_lane
        return self.road.lane_count // 2


@dataclass
class EgoControl:
    """Mutable actuator state owned by the run loop.

    ``lane_change_ticks``/``lane_change_total`` track an active lateral
    maneuver; progress is their ratio so it hits 1.0 exactly.
    """

    commanded_accel: float = 0.0
    target_lane: int = 0
    origin_lane: int = 0
    lane_change_ticks: int = 0
    lane_change_total: int = 0
    lane_width: float = 3.5

    @classmethod
    def cruise(cls, accel: float, lane: int) -> EgoControl:
        return cls(commanded_accel=accel, target_lane=lane, origin_lane=lane)

    @classmethod
    def lane_change(cls, origin: int, target: int, total_ticks: int) -> EgoControl:
        # Lateral maneuvers carry zero longitudinal command for their duration.
        return cls(
            commanded_accel=0.0,
            target_lane=target,
            origin_lane=origin,
            lane_change_ticks=0,
            lane_change_total=total_ticks,
        )

    @property
    def lane_change_progress(self) -> float:
        if self.lane_change_total <= 0:
            return 1.0
        return min(1.0, self.lane_change_ticks / self.lane_change_total)

    @property
    def changing_lane(self) -> bool:
        return self.lane_change_total > 0 and self.lane_change_ticks < self.lane_change_total
