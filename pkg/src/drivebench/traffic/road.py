"""Road geometry: an ordered chain of straight and arc segments.

Positions along the road use an arc-length coordinate ``s`` measured from
the start of the first segment; lanes are indexed from 0 at the leftmost.
"""

from dataclasses import dataclass

DEFAULT_SPEED_LIMIT = 13.89  # m/s (50 km/h)


@dataclass(frozen=True)
class Segment:
    """One piece of road centreline: ``kind`` is "straight" or "arc"."""

    kind: str
    length: float
    curvature: float = 0.0  # 1/m, 0 for straight segments

    def __post_init__(self):
        if self.kind not in ("straight", "arc"):
            raise ValueError(f"segment kind must be 'straight' or 'arc', got {self.kind!r}")
        if self.length <= 0.0:
            raise ValueError(f"segment length must be > 0, got {self.length}")
        if self.kind == "straight" and self.curvature != 0.0:
            raise ValueError("straight segments must have zero curvature")
        if self.kind == "arc" and self.curvature == 0.0:
            raise ValueError("arc segments need a non-zero curvature")

    @property
    def heading_change(self) -> float:
        """Total heading change over the segment, radians."""
        return self.curvature * self.length


@dataclass(frozen=True)
class RoadNetwork:
    segments: tuple[Segment, ...]
    lane_count: int
    lane_width: float
    speed_limit: float

    def __post_init__(self):
        if self.lane_count < 2:
            raise ValueError(f"lane_count must be >= 2, got {self.lane_count}")
        if self.lane_width <= 0.0:
            raise ValueError(f"lane_width must be > 0, got {self.lane_width}")
        if self.speed_limit <= 0.0:
            raise ValueError(f"speed_limit must be > 0, got {self.speed_limit}")
        if not self.segments:
            raise ValueError("road needs at least one segment")
        if self.total_length <= 0.0:
            raise ValueError("total route length must be > 0")

    @property
    def total_length(self) -> float:
        return sum(seg.length for seg in self.segments)

    def curvature_at(self, s: float) -> float:
        """Centreline curvature at arc position ``s``; 0 beyond either end."""
        if s < 0.0:
            return 0.0
        offset = s
        for seg in self.segments:
            if offset <= seg.length:
                return seg.curvature
            offset -= seg.length
        return 0.0

    def heading_at(self, s: float) -> float:
        """Accumulated heading at ``s`` relative to the road start, radians."""
        heading = 0.0
        offset = s
        for seg in self.segments:
            if offset <= 0.0:
                break
            run = min(offset, seg.length)
            heading += seg.curvature * run
            offset -= run
        return heading


DEFAULT_ROAD_SPEC = {
    "lane_count": 4,
    "lane_width": 3.5,
    "speed_limit": DEFAULT_SPEED_LIMIT,
    "segments": [
        {"kind": "straight", "length": 380.0},
        {"kind": "arc", "length": 220.0, "curvature": 0.005},
    ],
}


def build_road(spec: dict | None = None) -> RoadNetwork:
    """Build a road network from a plain mapping; ``None`` gives the default

    4-lane highway (one straight, one curved segment) at the 13.89 m/s limit.
    """
    if spec is None:
        spec = DEFAULT_ROAD_SPEC
    segments = tuple(
        Segment(
            kind=seg.get("kind", "straight"),
            length=float(seg["length"]),
            curvature=float(seg.get("curvature", 0.0)),
        )
        for seg in spec["segments"]
    )
    return RoadNetwork(
        segments=segments,
        lane_count=int(spec.get("lane_count", 4)),
        lane_width=float(spec.get("lane_width", 3.5)),
        speed_limit=float(spec.get("speed_limit", DEFAULT_SPEED_LIMIT)),
    )


def road_to_dict(road: RoadNetwork) -> dict:
    return {
        "lane_count": road.lane_count,
        "lane_width": road.lane_width,
        "speed_limit": road.speed_limit,
        "segments": [
            {"kind": seg.kind, "length": seg.length, "curvature": seg.curvature}
            for seg in road.segments
        ],
    }
