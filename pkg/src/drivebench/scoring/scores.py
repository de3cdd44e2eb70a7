"""The four metric families scored per frame and per run.

Safety rates the time-to-collision margin, comfort the kinematic
derivative magnitudes against style-dependent references, efficiency the
speed kept relative to a context target, and the speed score penalises
the fraction of frames spent above the limit. All scores live in [0, 1].
"""

from dataclasses import dataclass, replace
from math import isinf

__all__ = [
    "ComfortRefs",
    "FrameRecord",
    "STYLE_REFS",
    "ScoringParams",
    "aggregate_score",
    "comfort_score",
    "efficiency_score",
    "safety_score",
    "speed_score",
    "target_speed",
]


@dataclass(frozen=True)
class ComfortRefs:
    """Reference magnitudes below which motion is fully comfortable."""

    accel: float = 2.0  # m/s^2
    jerk: float = 2.0  # m/s^3
    lat_accel: float = 1.5  # m/s^2
    lat_jerk: float = 1.5  # m/s^3

    def scaled(self, factor: float) -> "ComfortRefs":
        return ComfortRefs(
            accel=self.accel * factor,
            jerk=self.jerk * factor,
            lat_accel=self.lat_accel * factor,
            lat_jerk=self.lat_jerk * factor,
        )


# Cautious halves the tolerated magnitudes, aggressive doubles them.
STYLE_REFS: dict[str, ComfortRefs] = {
    "cautious": ComfortRefs().scaled(0.5),
    "normal": ComfortRefs(),
    "aggressive": ComfortRefs().scaled(2.0),
}


@dataclass(frozen=True)
class ScoringParams:
    """Knobs for the whole evaluation; defaults match the reported setup."""

    ttc_threshold: float = 4.0  # s
    speed_limit: float = 13.89  # m/s
    comfort_refs: ComfortRefs = ComfortRefs()
    alpha_comfort: float = 0.25
    alpha_efficiency: float = 0.25
    alpha_safety: float = 0.5
    speeding_base: float = 0.9
    speeding_gain: float = 10.0

    def with_style(self, style: str) -> "ScoringParams":
        try:
            refs = STYLE_REFS[style]
        except KeyError:
            known = ", ".join(sorted(STYLE_REFS))
            raise ValueError(f"unknown driving style {style!r}; known: {known}") from None
        return replace(self, comfort_refs=refs)


@dataclass(frozen=True)
class FrameRecord:
    """Everything needed to score one sampled frame."""

    tick: int
    speed: float
    ttc: float
    avg_npc_speed: float | None
    sparse: bool
    speeding: bool
    accel: float
    jerk: float
    lat_accel: float
    lat_jerk: float


def safety_score(ttc: float, threshold: float = 4.0) -> float:
    """Full marks at or above the threshold, proportional below it."""
    if isinf(ttc) or ttc >= threshold:
        return 1.0
    if ttc <= 0.0:
        return 0.0
    return ttc / threshold


def _comfort_component(value: float, ref: float) -> float:
    magnitude = abs(value)
    if magnitude <= ref:
        return 1.0
    return ref / magnitude


def comfort_score(
    accel: float, jerk: float, lat_accel: float, lat_jerk: float, refs: ComfortRefs
) -> float:
    """Mean of the four per-derivative components, each capped at 1."""
    return (
        _comfort_component(accel, refs.accel)
        + _comfort_component(jerk, refs.jerk)
        + _comfort_component(lat_accel, refs.lat_accel)
        + _comfort_component(lat_jerk, refs.lat_jerk)
    ) / 4.0


def target_speed(
    sparse: bool, avg_npc_speed: float | None, speed_limit: float
) -> float:
    """Context target: the limit in sparse traffic, else the slower of the
    surrounding average and the limit."""
    if sparse or avg_npc_speed is None:
        return speed_limit
    return min(avg_npc_speed, speed_limit)


def efficiency_score(speed: float, v_target: float) -> float:
    """Full marks at or above the target, proportional below it."""
    if v_target <= 0.0 or speed >= v_target:
        return 1.0
    return speed / v_target


def speed_score(n_speeding: int, n_total: int, base: float = 0.9, gain: float = 10.0) -> float:
    """Exponential penalty on the fraction of frames over the limit."""
    if n_total <= 0:
        return 1.0
    return base ** (gain * n_speeding / n_total)


def aggregate_score(
    comfort_mean: float,
    efficiency_mean: float,
    safety_mean: float,
    speed: float,
    params: ScoringParams,
) -> float:
    """Weighted blend of the three frame means, scaled by the speed score."""
    blended = (
        params.alpha_comfort * comfort_mean
        + params.alpha_efficiency * efficiency_mean
        + params.alpha_safety * safety_mean
    )
    return blended * speed


def frame_scores(frame: FrameRecord, params: ScoringParams) -> tuple[float, float, float]:
    """(safety, comfort, efficiency) for one frame."""
    s = safety_score(frame.ttc, params.ttc_threshold)
    c = comfort_score(
        frame.accel, frame.jerk, frame.lat_accel, frame.lat_jerk, params.comfort_refs
    )
    v_star = target_speed(frame.sparse, frame.avg_npc_speed, params.speed_limit)
    e = efficiency_score(frame.speed, v_star)
    return s, c, e
