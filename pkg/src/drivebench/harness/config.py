"""Run and batch configuration.

Config files are YAML mappings with nested blocks; every field has a
default, printable via the ``print-config`` command. The exact semantic
configuration is embedded in each report so results are self-describing;
output paths and verbosity are excluded from that embed because they do
not affect results.
"""

from dataclasses import dataclass, replace
from pathlib import Path

import yaml

from drivebench.perception import RIGS, SensorRig, resolve_rig
from drivebench.scoring.scores import ScoringParams
from drivebench.traffic.road import RoadNetwork, build_road, road_to_dict
from drivebench.traffic.state import Scenario, TrafficSpec
from drivebench.weather import WeatherConfig, resolve_weather

__all__ = [
    "BatchSpec",
    "ConfigError",
    "RunConfig",
    "default_run_dict",
    "load_batch_spec",
    "load_run_config",
    "run_config_from_dict",
    "run_config_from_embed",
    "embed_config",
]


class ConfigError(ValueError):
    """A config file is structurally or semantically invalid."""


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved configuration for one scenario run."""

    scenario: Scenario
    weather_name: str
    weather: WeatherConfig
    rig_name: str
    rig: SensorRig
    agent: str = "builtin:baseline"
    params: ScoringParams = ScoringParams()
    style: str = "normal"
    timeout_ms: float = 2000.0
    retries: int = 1
    output_dir: Path | None = None
    log_level: str = "warning"


def default_run_dict() -> dict:
    """The full default run configuration as a plain mapping."""
    return {
        "scenario": {
            "seed": 1,
            "route": [0.0, 550.0],
            "max_ticks": 1200,
            "decision_period": 10,
            "dt": 0.1,
            "ego_start_speed": 8.0,
            "ego_start_lane": None,
            "road": {
                "lane_count": 4,
                "lane_width": 3.5,
                "speed_limit": 13.89,
                "segments": [
                    {"kind": "straight", "length": 380.0},
                    {"kind": "arc", "length": 220.0, "curvature": 0.005},
                ],
            },
            "traffic": {
                "n_vehicles": 8,
                "spacing": 25.0,
                "speed_mean": 9.0,
                "speed_std": 1.5,
            },
        },
        "weather": "good",
        "rig": "6cam",
        "agent": "builtin:baseline",
        "scoring": {
            "ttc_threshold": 4.0,
            "style": "normal",
            "alpha": [0.25, 0.25, 0.5],
            "speed_limit": 13.89,
        },
        "timeout_ms": 2000.0,
        "retries": 1,
        "output_dir": None,
        "log_level": "warning",
    }


def _merge(base: dict, override: dict) -> dict:
    """Recursive dict merge; override wins, nested mappings merge."""
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def _scenario_from_dict(data: dict) -> Scenario:
    road = build_road(data.get("road"))
    route = data.get("route")
    if route is None:
        route = [0.0, road.total_length - 50.0]
    if not isinstance(route, (list, tuple)) or len(route) != 2:
        raise ConfigError(f"scenario.route must be [start, goal], got {route!r}")
    traffic = TrafficSpec(**(data.get("traffic") or {}))
    try:
        return Scenario(
            road=road,
            route=(float(route[0]), float(route[1])),
            traffic=traffic,
            seed=int(data.get("seed", 1)),
            max_ticks=int(data.get("max_ticks", 1200)),
            decision_period=int(data.get("decision_period", 10)),
            dt=float(data.get("dt", 0.1)),
            ego_start_speed=float(data.get("ego_start_speed", 8.0)),
            ego_start_lane=(
                None
                if data.get("ego_start_lane") is None
                else int(data["ego_start_lane"])
            ),
        )
    except ValueError as e:
        raise ConfigError(f"invalid scenario: {e}") from None


def _params_from_dict(data: dict) -> tuple[ScoringParams, str]:
    style = data.get("style", "normal")
    try:
        params = ScoringParams(
            ttc_threshold=float(data.get("ttc_threshold", 4.0)),
            speed_limit=float(data.get("speed_limit", 13.89)),
        ).with_style(style)
    except ValueError as e:
        raise ConfigError(f"invalid scoring block: {e}") from None
    alpha = data.get("alpha")
    if alpha is not None:
        if len(alpha) != 3:
            raise ConfigError(f"scoring.alpha needs 3 weights, got {alpha!r}")
        total = alpha[0] + alpha[1] + alpha[2]
        if abs(total - 1.0) > 1e-9:
            raise ConfigError(f"scoring.alpha must sum to 1, got {total}")
        params = replace(
            params,
            alpha_comfort=float(alpha[0]),
            alpha_efficiency=float(alpha[1]),
            alpha_safety=float(alpha[2]),
        )
    return params, style


def run_config_from_dict(data: dict) -> RunConfig:
    """Resolve a config mapping against the defaults."""
    if not isinstance(data, dict):
        raise ConfigError(f"run config must be a mapping, got {type(data).__name__}")
    merged = _merge(default_run_dict(), data)
    scenario = _scenario_from_dict(merged["scenario"] or {})
    try:
        weather_name, weather = resolve_weather(merged["weather"])
        rig_name, rig = resolve_rig(merged["rig"])
    except (ValueError, TypeError) as e:
        raise ConfigError(str(e)) from None
    params, style = _params_from_dict(merged.get("scoring") or {})
    output_dir = merged.get("output_dir")
    return RunConfig(
        scenario=scenario,
        weather_name=weather_name,
        weather=weather,
        rig_name=rig_name,
        rig=rig,
        agent=str(merged["agent"]),
        params=params,
        style=style,
        timeout_ms=float(merged["timeout_ms"]),
        retries=int(merged["retries"]),
        output_dir=None if output_dir is None else Path(output_dir),
        log_level=str(merged["log_level"]),
    )


def load_run_config(path: str | Path) -> RunConfig:
    try:
        data = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
    except yaml.YAMLError as e:
        raise ConfigError(f"{path}: {e}") from None
    return run_config_from_dict(data or {})


def embed_config(cfg: RunConfig) -> dict:
    """The semantic config block embedded in reports and log headers."""
    scenario = cfg.scenario
    return {
        "scenario": {
            "seed": scenario.seed,
            "route": [scenario.route[0], scenario.route[1]],
            "max_ticks": scenario.max_ticks,
            "decision_period": scenario.decision_period,
            "dt": scenario.dt,
            "ego_start_speed": scenario.ego_start_speed,
            "ego_start_lane": scenario.ego_start_lane,
            "road": road_to_dict(scenario.road),
            "traffic": {
                "n_vehicles": scenario.traffic.n_vehicles,
                "spacing": scenario.traffic.spacing,
                "speed_mean": scenario.traffic.speed_mean,
                "speed_std": scenario.traffic.speed_std,
            },
        },
        "weather": {"name": cfg.weather_name, "params": cfg.weather.to_dict()},
        "rig": {
            "name": cfg.rig_name,
            "front_cameras": cfg.rig.front_cameras,
            "rear_cameras": cfg.rig.rear_cameras,
            "lidar": cfg.rig.lidar,
        },
        "agent": cfg.agent,
        "style": cfg.style,
        "timeout_ms": cfg.timeout_ms,
        "retries": cfg.retries,
    }


def run_config_from_embed(embed: dict) -> RunConfig:
    """Rebuild a runnable config from a report/log embed block."""
    scenario = _scenario_from_dict(embed["scenario"])
    weather_name, weather = resolve_weather(embed["weather"]["params"])
    rig_block = embed["rig"]
    rig = SensorRig(
        front_cameras=rig_block["front_cameras"],
        rear_cameras=rig_block["rear_cameras"],
        lidar=rig_block["lidar"],
    )
    return RunConfig(
        scenario=scenario,
        weather_name=embed["weather"]["name"],
        weather=weather,
        rig_name=rig_block["name"],
        rig=rig,
        agent=embed["agent"],
        style=embed["style"],
        timeout_ms=embed["timeout_ms"],
        retries=embed["retries"],
    )


@dataclass(frozen=True)
class BatchSpec:
    """Cross-product grid sharing one base run configuration."""

    presets: tuple[str, ...]
    rigs: tuple[str, ...]
    seeds: tuple[int, ...]
    base: dict
    output_dir: Path
    workers: int = 1

    def __post_init__(self):
        if not self.presets or not self.rigs or not self.seeds:
            raise ConfigError("batch grid must have presets, rigs, and seeds")

    def cells(self) -> list[tuple[str, str, int]]:
        return [
            (preset, rig, seed)
            for preset in self.presets
            for rig in self.rigs
            for seed in self.seeds
        ]


def load_batch_spec(path: str | Path) -> BatchSpec:
    try:
        data = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
    except yaml.YAMLError as e:
        raise ConfigError(f"{path}: {e}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"batch spec must be a mapping, got {type(data).__name__}")
    if "output_dir" not in data:
        raise ConfigError("batch spec needs an output_dir")
    spec = BatchSpec(
        presets=tuple(data.get("presets") or ()),
        rigs=tuple(data.get("rigs") or ()),
        seeds=tuple(int(s) for s in (data.get("seeds") or ())),
        base=data.get("base") or {},
        output_dir=Path(data["output_dir"]),
        workers=int(data.get("workers", 1)),
    )
    for rig in spec.rigs:
        if rig not in RIGS:
            raise ConfigError(f"unknown rig {rig!r} in batch spec")
    for name in spec.presets:
        try:
            resolve_weather(name)
        except ValueError as e:
            raise ConfigError(str(e)) from None
    # Resolve the base once so errors surface before any cell runs.
    run_config_from_dict(spec.base)
    return spec
