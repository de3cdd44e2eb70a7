"""Deterministic stepped microsimulation on a multilane road.

The ego vehicle follows commanded controls; surrounding traffic follows a
leader-based car-following rule. All randomness is confined to
:func:`spawn_traffic` and fully determined by the scenario seed.
"""

import logging
import random
from array import array
from math import cos, inf, pi

from drivebench.agents.decisions import Decision
from drivebench.traffic.backend import step_longitudinal
from drivebench.traffic.road import RoadNetwork
from drivebench.traffic.state import (
    DEFAULT_VEHICLE_LENGTH,
    EgoControl,
    Scenario,
    VehicleState,
    WorldState,
)
from drivebench.weather import GRAVITY

log = logging.getLogger(__name__)

LANE_CHANGE_DURATION = 3.0  # s, fixed sinusoidal lateral maneuver
ACCELERATE_RATE = 2.0  # m/s^2 commanded by an accelerate decision
DECELERATE_RATE = -3.0  # m/s^2 commanded by a decelerate decision

# Car-following parameters for surrounding traffic: desired speed is the
# road limit; these four shape the gap-keeping response.
IDM_HEADWAY = 1.5  # s
IDM_MAX_ACCEL = 1.5  # m/s^2
IDM_COMFORT_DECEL = 2.0  # m/s^2
IDM_JAM_DISTANCE = 2.0  # m


def spawn_traffic(scenario: Scenario) -> WorldState:
    """Place the ego at the route start and seed surrounding traffic.

    NPCs are distributed round-robin across lanes with at least the spawn
    spacing between same-lane bumpers; speeds are drawn from the seeded
    normal distribution and clamped to [0, speed limit]. The same scenario
    and seed always produce the identical world.
    """
    road = scenario.road
    start = scenario.route[0]
    rng = random.Random(scenario.seed)
    ego = VehicleState(
        id=0,
        lane_index=scenario.ego_lane,
        s=start,
        speed=scenario.ego_start_speed,
        is_ego=True,
    )
    vehicles = [ego]
    frontier: dict[int, VehicleState] = {ego.lane_index: ego}
    for k in range(scenario.traffic.n_vehicles):
        lane = k % road.lane_count
        gap = scenario.traffic.spacing + rng.uniform(0.0, 0.5 * scenario.traffic.spacing)
        speed = rng.gauss(scenario.traffic.speed_mean, scenario.traffic.speed_std)
        speed = min(max(speed, 0.0), road.speed_limit)
        npc_length = DEFAULT_VEHICLE_LENGTH
        prev = frontier.get(lane)
        if prev is None:
            centre = start + gap + 0.5 * npc_length
        else:
            centre = prev.s + 0.5 * (prev.length + npc_length) + gap
        if centre + 0.5 * npc_length > road.total_length:
            raise ValueError(
                f"road too short: cannot place vehicle {k + 1} of "
                f"{scenario.traffic.n_vehicles} at spacing {scenario.traffic.spacing}"
            )
        npc = VehicleState(id=k + 1, lane_index=lane, s=centre, speed=speed)
        vehicles.append(npc)
        frontier[lane] = npc
    return WorldState(tick=0, time=0.0, vehicles=tuple(vehicles))


def _advance_lateral(ego: VehicleState, control: EgoControl) -> tuple[int, float]:
    """Advance an active lane change by one tick; returns (lane, offset).

    The lateral path is sinusoidal; the lane index flips to the target at
    the midpoint so the offset never exceeds half a lane width.
    """
    control.lane_change_ticks += 1
    p = control.lane_change_progress
    direction = control.target_lane - control.origin_lane
    profile = 0.5 * (1.0 - cos(pi * p))
    y = direction * control.lane_width * profile
    if p < 0.5:
        return control.origin_lane, y
    return control.target_lane, y - direction * control.lane_width


def step(
    world: WorldState,
    ego_control: EgoControl,
    friction: float,
    dt: float = 0.1,
    v_desired: float = 13.89,
) -> WorldState:
    """Advance the world one tick.

    The ego integrates its commanded acceleration clipped to the friction
    cap (friction * g); NPCs follow their lane leader toward ``v_desired``
    (normally the road speed limit); an active ego lane change progresses.
    New same-lane overlaps are appended to the cumulative collision set.
    ``ego_control`` is advanced in place.
    """
    vehicles = world.vehicles
    n = len(vehicles)
    ego_index = next(i for i, v in enumerate(vehicles) if v.is_ego)
    ego = vehicles[ego_index]

    new_lane = ego.lane_index
    new_offset = ego.lateral_offset
    if ego_control.changing_lane:
        new_lane, new_offset = _advance_lateral(ego, ego_control)

    lanes = array("i", (v.lane_index for v in vehicles))
    lanes[ego_index] = new_lane
    s = array("d", (v.s for v in vehicles))
    speed = array("d", (v.speed for v in vehicles))
    length = array("d", (v.length for v in vehicles))
    out_s = array("d", bytes(8 * n))
    out_speed = array("d", bytes(8 * n))
    out_accel = array("d", bytes(8 * n))

    pairs = step_longitudinal(
        lanes,
        s,
        speed,
        length,
        ego_index,
        ego_control.commanded_accel,
        friction * GRAVITY,
        v_desired,
        IDM_HEADWAY,
        IDM_MAX_ACCEL,
        IDM_COMFORT_DECEL,
        IDM_JAM_DISTANCE,
        dt,
        out_s,
        out_speed,
        out_accel,
    )

    collisions = set(world.collisions)
    for i, j in pairs:
        a, b = vehicles[i].id, vehicles[j].id
        collisions.add((min(a, b), max(a, b)))

    moved = []
    for i, v in enumerate(vehicles):
        moved.append(
            VehicleState(
                id=v.id,
                lane_index=new_lane if i == ego_index else v.lane_index,
                s=out_s[i],
                speed=out_speed[i],
                lateral_offset=new_offset if i == ego_index else v.lateral_offset,
                accel=out_accel[i],
                length=v.length,
                is_ego=v.is_ego,
            )
        )
    tick = world.tick + 1
    return WorldState(
        tick=tick,
        time=tick * dt,
        vehicles=tuple(moved),
        collisions=tuple(sorted(collisions)),
    )


SPARSE_RADIUS = 100.0  # m, no NPC this close in any lane means sparse traffic


def surrounding_stats(
    world: WorldState, radius: float = SPARSE_RADIUS
) -> tuple[int, float | None, bool]:
    """Ground-truth traffic context around the ego.

    Returns (count, average speed, sparse flag) over NPCs whose centre
    lies within ``radius`` of the ego in any lane; the average is None
    when no NPC is that close, which also raises the sparse flag.
    """
    ego = world.ego
    speeds = [v.speed for v in world.npcs if abs(v.s - ego.s) <= radius]
    if not speeds:
        return 0, None, True
    return len(speeds), sum(speeds) / len(speeds), False


def ttc(world: WorldState) -> float:
    """Bumper-to-bumper time to collision with the same-lane lead vehicle.

    Infinite when there is no lead vehicle or the gap is not closing; zero
    when the bumpers already overlap.
    """
    ego = world.ego
    lead = None
    lead_ds = inf
    for v in world.vehicles:
        if v.is_ego or v.lane_index != ego.lane_index:
            continue
        ds = v.s - ego.s
        if ds > 0.0 and ds < lead_ds:
            lead = v
            lead_ds = ds
    if lead is None:
        return inf
    gap = lead_ds - 0.5 * (ego.length + lead.length)
    if gap <= 0.0:
        return 0.0
    closing = ego.speed - lead.speed
    if closing <= 0.0:
        return inf
    return gap / closing


def apply_decision(
    decision: Decision,
    ego: VehicleState,
    road: RoadNetwork,
    current: EgoControl | None = None,
    dt: float = 0.1,
) -> EgoControl:
    """Map a decision to an ego control.

    Idle holds the current commanded acceleration; turns start a fixed
    duration lateral maneuver with zero longitudinal command. A turn off
    the edge of the road degrades to idle with a warning rather than
    failing the loop.
    """
    hold = current.commanded_accel if current is not None else ego.accel
    if decision is Decision.IDLE:
        return EgoControl.cruise(hold, ego.lane_index)
    if decision is Decision.ACCELERATE:
        return EgoControl.cruise(ACCELERATE_RATE, ego.lane_index)
    if decision is Decision.DECELERATE:
        return EgoControl.cruise(DECELERATE_RATE, ego.lane_index)
    delta = -1 if decision is Decision.TURN_LEFT else 1
    target = ego.lane_index + delta
    if target < 0 or target >= road.lane_count:
        log.warning(
            "lane change %s at edge lane %d ignored (road has %d lanes)",
            decision.value,
            ego.lane_index,
            road.lane_count,
        )
        return EgoControl.cruise(hold, ego.lane_index)
    total_ticks = max(1, round(LANE_CHANGE_DURATION / dt))
    control = EgoControl.lane_change(ego.lane_index, target, total_ticks)
    control.lane_width = road.lane_width
    return control


def next_control(
    control: EgoControl,
    decision: Decision,
    ego: VehicleState,
    road: RoadNetwork,
    dt: float = 0.1,
) -> EgoControl:
    """Run-loop policy for merging a fresh decision with the active control:

    decisions arriving mid lane-change degrade to continuing the maneuver.
    """
    if control.changing_lane:
        if decision is not Decision.IDLE:
            log.debug("decision %s during lane change degraded to continue", decision.value)
        return control
    return apply_decision(decision, ego, road, current=control, dt=dt)
