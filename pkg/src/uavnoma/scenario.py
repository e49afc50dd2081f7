"""Scenario configuration, state container and seeded random streams."""

from __future__ import annotations

import dataclasses
import json
import zlib
from dataclasses import dataclass, field
from typing import Any

import numpy as np


class ConfigError(ValueError):
    """Raised when a configuration document is malformed or inconsistent."""


# Keys that may be omitted from a config document, with the value used instead.
DEFAULTS: dict[str, Any] = {
    "channel_bandwidth_hz": 180_000.0,
    "alpha_f": 0.8,
    "alpha_n": 0.2,
    "p_tol": 1.0,
    "dbs_altitude_m": 10.0,
    "theta_kmh": 10.0,
    "arena_side_m": 1000.0,
    "prediction_horizon_s": 5.0,
    "prediction_cell_m": 50.0,
    "mbs_height_m": 25.0,
    "hotspot_count": 4,
    "hotspot_streams": 1,
    "hotspot_fraction": 0.6,
    "hotspot_length_m": 0.0,
    "hotspot_spread_m": 3.0,
    "hotspot_speed_jitter_kmh": 4.0,
    "warmup_steps": 0,
    "step_dt_s": 1.0,
}

_INT_KEYS = {"num_vehicles", "num_channels", "min_points", "seed", "hotspot_count", "hotspot_streams", "warmup_steps"}


@dataclass(frozen=True)
class ScenarioConfig:
    """Every tunable of a scenario.

    Powers are in watts, distances in meters, speeds in km/h. ``seed`` is the
    default seed used when a run does not supply its own.
    """

    p_b_max: float
    p_k_max: float
    num_vehicles: int
    n0_dbm_hz: float
    r_b: float
    r_k: float
    fc_ghz: float
    num_channels: int
    epsilon_m: float
    min_points: int
    speed_min_kmh: float
    speed_max_kmh: float
    seed: int
    channel_bandwidth_hz: float = DEFAULTS["channel_bandwidth_hz"]
    alpha_f: float = DEFAULTS["alpha_f"]
    alpha_n: float = DEFAULTS["alpha_n"]
    p_tol: float = DEFAULTS["p_tol"]
    dbs_altitude_m: float = DEFAULTS["dbs_altitude_m"]
    theta_kmh: float = DEFAULTS["theta_kmh"]
    arena_side_m: float = DEFAULTS["arena_side_m"]
    prediction_horizon_s: float = DEFAULTS["prediction_horizon_s"]
    prediction_cell_m: float = DEFAULTS["prediction_cell_m"]
    mbs_height_m: float = DEFAULTS["mbs_height_m"]
    hotspot_count: int = DEFAULTS["hotspot_count"]
    hotspot_streams: int = DEFAULTS["hotspot_streams"]
    hotspot_fraction: float = DEFAULTS["hotspot_fraction"]
    hotspot_length_m: float = DEFAULTS["hotspot_length_m"]
    hotspot_spread_m: float = DEFAULTS["hotspot_spread_m"]
    hotspot_speed_jitter_kmh: float = DEFAULTS["hotspot_speed_jitter_kmh"]
    warmup_steps: int = DEFAULTS["warmup_steps"]
    step_dt_s: float = DEFAULTS["step_dt_s"]

    def __post_init__(self):
        for name in _INT_KEYS:
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise ConfigError(f"{name}={value!r}: must be an integer")
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if f.name not in _INT_KEYS and (isinstance(value, bool) or not isinstance(value, (int, float))):
                raise ConfigError(f"{f.name}={value!r}: must be a number")
            if not np.isfinite(value):
                raise ConfigError(f"{f.name}={value!r}: must be finite")

        positive = (
            "p_b_max", "p_k_max", "r_b", "r_k", "fc_ghz", "num_channels",
            "channel_bandwidth_hz", "epsilon_m", "min_points", "theta_kmh",
            "alpha_f", "alpha_n", "dbs_altitude_m", "speed_min_kmh",
            "speed_max_kmh", "arena_side_m", "prediction_cell_m",
            "mbs_height_m", "step_dt_s", "hotspot_streams",
        )
        for name in positive:
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name}={getattr(self, name)!r}: must be strictly positive")
        nonneg = (
            "num_vehicles", "p_tol", "prediction_horizon_s", "hotspot_count",
            "hotspot_length_m", "hotspot_spread_m", "hotspot_speed_jitter_kmh", "warmup_steps",
        )
        for name in nonneg:
            if getattr(self, name) < 0:
                raise ConfigError(f"{name}={getattr(self, name)!r}: must be non-negative")

        if not abs(self.alpha_f + self.alpha_n - 1.0) <= 1e-12:
            raise ConfigError(f"alpha_f + alpha_n = {self.alpha_f + self.alpha_n!r}: must equal 1")
        if not self.alpha_f > self.alpha_n:
            raise ConfigError(f"alpha_f={self.alpha_f!r}: alpha_f must exceed alpha_n ({self.alpha_n!r})")
        if self.speed_min_kmh > self.speed_max_kmh:
            raise ConfigError(
                f"speed_min_kmh={self.speed_min_kmh!r}: must not exceed speed_max_kmh={self.speed_max_kmh!r}"
            )
        if self.r_k > self.r_b:
            raise ConfigError(f"r_k={self.r_k!r}: must not exceed r_b={self.r_b!r}")
        if not 0.0 <= self.hotspot_fraction <= 1.0:
            raise ConfigError(f"hotspot_fraction={self.hotspot_fraction!r}: must lie in [0, 1]")
        if not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed={self.seed!r}: must be a 64-bit unsigned integer")

    def replace(self, **changes) -> "ScenarioConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)

    @property
    def sigma2_w(self) -> float:
        """Per-channel noise power in watts."""
        return 10 ** ((self.n0_dbm_hz - 30.0) / 10.0) * self.channel_bandwidth_hz

    @property
    def mbs_position(self) -> tuple[float, float, float]:
        half = self.arena_side_m / 2.0
        return (half, half, self.mbs_height_m)


REQUIRED_KEYS = tuple(f.name for f in dataclasses.fields(ScenarioConfig) if f.name not in DEFAULTS)
ALL_KEYS = tuple(f.name for f in dataclasses.fields(ScenarioConfig))


def config_from_mapping(doc: dict[str, Any]) -> ScenarioConfig:
    if not isinstance(doc, dict):
        raise ConfigError(f"config document must be an object, got {type(doc).__name__}")
    unknown = sorted(set(doc) - set(ALL_KEYS))
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    missing = [k for k in REQUIRED_KEYS if k not in doc]
    if missing:
        raise ConfigError(f"missing config keys: {', '.join(missing)}")
    for key, value in doc.items():
        if isinstance(value, (dict, list)) or value is None:
            raise ConfigError(f"{key}={value!r}: must be a scalar")
        # 3.0 is accepted for integer fields, 3.5 is not
        if key in _INT_KEYS and isinstance(value, float):
            if not value.is_integer():
                raise ConfigError(f"{key}={value!r}: must be an integer")
            doc = {**doc, key: int(value)}
    return ScenarioConfig(**doc)


def load_config(text: str) -> ScenarioConfig:
    """Parse a JSON object of scalars into a validated :class:`ScenarioConfig`."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config parse failure: {exc}") from exc
    return config_from_mapping(doc)


def dump_config(config: ScenarioConfig) -> str:
    return json.dumps(config.to_dict(), indent=2, sort_keys=True) + "\n"


def default_config(**overrides) -> ScenarioConfig:
    """Published simulation defaults (N set to 32) plus the gap-filling constants."""
    base = dict(
        p_b_max=20.0,
        p_k_max=2.0,
        num_vehicles=50,
        n0_dbm_hz=-80.0,
        r_b=500.0,
        r_k=10.0,
        fc_ghz=2.5,
        num_channels=32,
        epsilon_m=4.0,
        min_points=6,
        speed_min_kmh=20.0,
        speed_max_kmh=50.0,
        seed=0,
    )
    base.update(overrides)
    return ScenarioConfig(**base)


def make_rng(seed: int, stream_label: str) -> np.random.Generator:
    """Deterministic generator keyed by ``(seed, stream_label)``.

    The label is folded in through CRC-32 so streams are stable across
    interpreter runs (``hash()`` is salted).
    """
    label_key = zlib.crc32(stream_label.encode("utf-8"))
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), label_key])))


@dataclass(frozen=True)
class ScenarioState:
    vehicles: tuple = ()
    clusters: tuple = ()
    dbs_list: tuple = ()
    mbs_position: tuple[float, float, float] = (0.0, 0.0, 0.0)
    time_s: float = 0.0
    unclustered: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        seen: set[int] = set()
        for cluster in self.clusters:
            overlap = seen & set(cluster.members)
            if overlap:
                raise ValueError(f"vehicles {sorted(overlap)} appear in more than one cluster")
            seen |= set(cluster.members)
        if len(self.clusters) != len(self.dbs_list):
            raise ValueError(f"{len(self.clusters)} clusters but {len(self.dbs_list)} drone stations")

    @property
    def mbs_users(self) -> list[int]:
        return sorted(self.unclustered)
