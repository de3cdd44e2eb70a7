"""Weather conditions, named presets, and their operational consequences.

The eight-parameter condition vector mirrors a driving simulator's weather
call. Only a subset of the parameters has a defensible mapping onto sensing
and road physics at this level of abstraction: ``cloudiness``,
``wind_intensity`` and ``sun_altitude_angle`` are carried through configs
and logs but are inert in :func:`effects`.
"""

from dataclasses import asdict, dataclass

GRAVITY = 9.81

_PERCENT_FIELDS = (
    "cloudiness",
    "precipitation",
    "precipitation_deposits",
    "wind_intensity",
    "fog_density",
    "wetness",
)


@dataclass(frozen=True)
class WeatherConfig:
    """Eight-parameter weather condition.

    Percentage fields are in [0, 100], ``sun_altitude_angle`` in degrees
    within [-90, 90], ``fog_distance`` in metres (where fog starts to be
    noticeable, also the visibility floor).
    """

    cloudiness: float = 0.0
    precipitation: float = 0.0
    precipitation_deposits: float = 0.0
    wind_intensity: float = 0.0
    sun_altitude_angle: float = 60.0
    fog_density: float = 0.0
    fog_distance: float = 20.0
    wetness: float = 0.0

    def __post_init__(self):
        for name in _PERCENT_FIELDS:
            value = getattr(self, name)
            if not 0.0 <= value <= 100.0:
                raise ValueError(f"{name} must be in [0, 100], got {value}")
        if self.fog_distance < 0.0:
            raise ValueError(f"fog_distance must be >= 0, got {self.fog_distance}")
        if not -90.0 <= self.sun_altitude_angle <= 90.0:
            raise ValueError(
                f"sun_altitude_angle must be in [-90, 90], got {self.sun_altitude_angle}"
            )

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "WeatherConfig":
        return cls(**data)


PRESETS: dict[str, WeatherConfig] = {
    "heavy_rain": WeatherConfig(80.0, 70.0, 60.0, 30.0, 45.0, 10.0, 10.0, 80.0),
    "storm": WeatherConfig(80.0, 100.0, 100.0, 100.0, 20.0, 20.0, 10.0, 80.0),
    "fog": WeatherConfig(40.0, 5.0, 5.0, 10.0, 60.0, 70.0, 3.0, 10.0),
    "wetness": WeatherConfig(30.0, 0.0, 0.0, 0.0, 70.0, 0.0, 0.0, 100.0),
    "good": WeatherConfig(0.0, 0.0, 0.0, 0.0, 60.0, 0.0, 20.0, 0.0),
}


def preset(name: str) -> WeatherConfig:
    """Return the named preset condition."""
    try:
        return PRESETS[name]
    except KeyError:
        known = ", ".join(sorted(PRESETS))
        raise ValueError(f"unknown weather preset {name!r} (known: {known})") from None


@dataclass(frozen=True)
class DegradationModel:
    """Coefficients mapping a weather condition onto sensing and friction.

    The coefficients are placeholders calibrated only so the five presets
    produce clearly separated effect vectors; they all live here so an
    alternative calibration can be swapped in wholesale.
    """

    camera_base_range: float = 150.0
    camera_rain_loss: float = 0.3
    lidar_base_range: float = 100.0
    lidar_fog_loss: float = 0.3
    dropout_rain_gain: float = 0.2
    noise_gain: float = 0.5
    friction_wetness_loss: float = 0.4
    friction_deposit_loss: float = 0.1
    friction_floor: float = 0.3


DEFAULT_DEGRADATION = DegradationModel()


@dataclass(frozen=True)
class WeatherEffects:
    """Operational consequences of a weather condition.

    ``camera_visibility`` and ``lidar_visibility`` are detection ranges in
    metres, ``detection_dropout`` a per-object miss probability,
    ``position_noise_sigma`` the stddev of gap noise in metres, and
    ``friction`` the road friction coefficient in (0, 1].
    """

    camera_visibility: float
    lidar_visibility: float
    detection_dropout: float
    position_noise_sigma: float
    friction: float


def effects(cfg: WeatherConfig, model: DegradationModel = DEFAULT_DEGRADATION) -> WeatherEffects:
    """Derive sensing degradation and road friction from a condition."""
    camera = (
        model.camera_base_range
        * (1.0 - cfg.fog_density / 100.0)
        * (1.0 - model.camera_rain_loss * cfg.precipitation / 100.0)
    )
    if camera < cfg.fog_distance:
        camera = cfg.fog_distance
    lidar = model.lidar_base_range * (1.0 - model.lidar_fog_loss * cfg.fog_density / 100.0)
    dropout = model.dropout_rain_gain * cfg.precipitation / 100.0
    sigma = model.noise_gain * (cfg.precipitation + cfg.fog_density) / 200.0
    friction = (
        1.0
        - model.friction_wetness_loss * cfg.wetness / 100.0
        - model.friction_deposit_loss * cfg.precipitation_deposits / 100.0
    )
    if friction < model.friction_floor:
        friction = model.friction_floor
    return WeatherEffects(camera, lidar, dropout, sigma, friction)


def max_braking(eff: WeatherEffects) -> float:
    """Friction-limited acceleration magnitude cap, m/s^2."""
    return eff.friction * GRAVITY


def resolve_weather(spec) -> tuple[str, WeatherConfig]:
    """Accept a preset name or an explicit 8-field mapping; return (label, config)."""
    if isinstance(spec, str):
        return spec, preset(spec)
    if isinstance(spec, WeatherConfig):
        return "custom", spec
    if isinstance(spec, dict):
        return "custom", WeatherConfig.from_dict(spec)
    raise ValueError(f"weather must be a preset name or an 8-field mapping, got {spec!r}")
