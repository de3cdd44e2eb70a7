"""Finite-difference kinematics over uniformly sampled trajectories.

Longitudinal acceleration and jerk come from the speed series; lateral
acceleration combines the second difference of lateral position with the
centripetal term v^2 * curvature, and lateral jerk is its derivative.
"""

from dataclasses import dataclass
from typing import Sequence

__all__ = ["KinematicSeries", "kinematic_derivatives"]


@dataclass(frozen=True)
class KinematicSeries:
    """Per-sample derivative magnitudes, same length as the input series."""

    accel: tuple[float, ...]
    jerk: tuple[float, ...]
    lat_accel: tuple[float, ...]
    lat_jerk: tuple[float, ...]


def _first_derivative(x: Sequence[float], dt: float) -> list[float]:
    """Central differences inside, one-sided at the ends."""
    n = len(x)
    out = [0.0] * n
    out[0] = (x[1] - x[0]) / dt
    out[n - 1] = (x[n - 1] - x[n - 2]) / dt
    for i in range(1, n - 1):
        out[i] = (x[i + 1] - x[i - 1]) / (2.0 * dt)
    return out


def _second_derivative(x: Sequence[float], dt: float) -> list[float]:
    """Three-point second differences; ends copy the nearest interior value."""
    n = len(x)
    out = [0.0] * n
    dt2 = dt * dt
    for i in range(1, n - 1):
        out[i] = (x[i + 1] - 2.0 * x[i] + x[i - 1]) / dt2
    out[0] = out[1]
    out[n - 1] = out[n - 2]
    return out


def kinematic_derivatives(
    speeds: Sequence[float],
    lateral: Sequence[float],
    curvatures: Sequence[float],
    dt: float,
) -> KinematicSeries:
    """Differentiate a sampled trajectory.

    ``lateral`` is the absolute lateral position in metres and
    ``curvatures`` the road curvature at each sample. At least three
    samples are required for the difference stencils.
    """
    n = len(speeds)
    if n < 3:
        raise ValueError(f"need at least 3 samples to differentiate, got {n}")
    if len(lateral) != n or len(curvatures) != n:
        raise ValueError("speed, lateral, and curvature series must align")
    if dt <= 0.0:
        raise ValueError("dt must be positive")

    accel = _first_derivative(speeds, dt)
    jerk = _first_derivative(accel, dt)
    lat_offset_accel = _second_derivative(lateral, dt)
    lat_accel = [
        lat_offset_accel[i] + speeds[i] * speeds[i] * curvatures[i] for i in range(n)
    ]
    lat_jerk = _first_derivative(lat_accel, dt)
    return KinematicSeries(
        accel=tuple(accel),
        jerk=tuple(jerk),
        lat_accel=tuple(lat_accel),
        lat_jerk=tuple(lat_jerk),
    )
