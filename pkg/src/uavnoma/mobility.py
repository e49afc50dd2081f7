"""Vehicle generation, waypoint motion and the two similarity predicates
used by clustering (speed window and predicted grid cell)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .scenario import ScenarioConfig

KMH_TO_MS = 1.0 / 3.6


@dataclass(frozen=True)
class Vehicle:
    id: int
    position: tuple[float, float]
    destination: tuple[float, float]
    speed_kmh: float
    heading: tuple[float, float]

    @property
    def speed_ms(self) -> float:
        return self.speed_kmh * KMH_TO_MS


def heading_towards(origin, target) -> tuple[float, float]:
    dx, dy = target[0] - origin[0], target[1] - origin[1]
    norm = math.hypot(dx, dy)
    if norm == 0.0:
        return (1.0, 0.0)
    return (dx / norm, dy / norm)


def make_vehicle(vid, position, destination, speed_kmh) -> Vehicle:
    position = (float(position[0]), float(position[1]))
    destination = (float(destination[0]), float(destination[1]))
    return Vehicle(int(vid), position, destination, float(speed_kmh), heading_towards(position, destination))


def spawn_vehicles(config: ScenarioConfig, rng: np.random.Generator) -> list[Vehicle]:
    """Draw ``config.num_vehicles`` vehicles.

    Each vehicle independently joins one of ``hotspot_count`` congested spots
    with probability ``hotspot_fraction``; otherwise it is free. Free
    vehicles have position, destination and speed uniform over the arena and
    the speed interval. A spot has a uniform centre crossed by
    ``hotspot_streams`` traffic streams (a junction when there are several),
    each with a uniform destination and base speed; a member joins one
    stream at random. Members are spread
    uniformly over ``hotspot_length_m`` along the direction of travel, plus
    a normal scatter of std ``hotspot_spread_m`` per axis; they head for the shared
    destination (same lateral scatter) at the base speed plus a uniform
    jitter of ``hotspot_speed_jitter_kmh``, clipped to the speed interval.
    """
    n = config.num_vehicles
    side = config.arena_side_m
    lo, hi = config.speed_min_kmh, config.speed_max_kmh

    pos = rng.uniform(0.0, side, size=(n, 2))
    dest = rng.uniform(0.0, side, size=(n, 2))
    speed = rng.uniform(lo, hi, size=n)

    k = config.hotspot_count
    if k > 0 and n > 0:
        streams = config.hotspot_streams
        centres = rng.uniform(0.0, side, size=(k, 2))
        targets = rng.uniform(0.0, side, size=(k, streams, 2))
        base_speed = rng.uniform(lo, hi, size=(k, streams))
        is_hot = rng.random(n) < config.hotspot_fraction
        spot = rng.integers(0, k, size=n)
        along = rng.uniform(-0.5, 0.5, size=n) * config.hotspot_length_m
        scatter = rng.normal(0.0, config.hotspot_spread_m, size=(n, 2))
        dest_scatter = rng.normal(0.0, config.hotspot_spread_m, size=(n, 2))
        jitter = rng.uniform(-1.0, 1.0, size=n) * config.hotspot_speed_jitter_kmh
        lane = rng.integers(0, streams, size=n) if streams > 1 else np.zeros(n, dtype=int)

        road = targets - centres[:, None, :]
        road /= np.maximum(np.linalg.norm(road, axis=2, keepdims=True), 1e-12)

        hot = np.flatnonzero(is_hot)
        s, q = spot[hot], lane[hot]
        offset = along[hot, None] * road[s, q] + scatter[hot]
        pos[hot] = np.clip(centres[s] + offset, 0.0, side)
        dest[hot] = np.clip(targets[s, q] + dest_scatter[hot], 0.0, side)
        speed[hot] = np.clip(base_speed[s, q] + jitter[hot], lo, hi)

    return [make_vehicle(i, pos[i], dest[i], speed[i]) for i in range(n)]


def step(vehicle: Vehicle, dt_s: float, rng: np.random.Generator, config: ScenarioConfig) -> Vehicle:
    """Advance ``vehicle`` by ``dt_s`` seconds.

    On reaching its destination the vehicle draws a fresh destination and
    speed and covers the rest of the step's distance heading there.
    """
    if not dt_s > 0:
        raise ValueError(f"dt_s must be positive, got {dt_s!r}")
    v = vehicle
    remaining = v.speed_ms * dt_s
    while True:
        to_go = math.dist(v.position, v.destination)
        if remaining < to_go:
            x = v.position[0] + v.heading[0] * remaining
            y = v.position[1] + v.heading[1] * remaining
            return Vehicle(v.id, (x, y), v.destination, v.speed_kmh, v.heading)
        remaining -= to_go
        new_dest = rng.uniform(0.0, config.arena_side_m, size=2)
        new_speed = rng.uniform(config.speed_min_kmh, config.speed_max_kmh)
        # The leftover distance of this step is kept; the new speed applies from the next step.
        v = make_vehicle(v.id, v.destination, new_dest, new_speed)


def predict_location(vehicle: Vehicle, horizon_s: float) -> tuple[float, float]:
    """Dead-reckoned position after ``horizon_s`` seconds, stopping at the destination."""
    if horizon_s < 0:
        raise ValueError(f"horizon_s must be non-negative, got {horizon_s!r}")
    if horizon_s == 0:
        return vehicle.position
    travel = vehicle.speed_ms * horizon_s
    if travel >= math.dist(vehicle.position, vehicle.destination):
        return vehicle.destination
    return (
        vehicle.position[0] + vehicle.heading[0] * travel,
        vehicle.position[1] + vehicle.heading[1] * travel,
    )


def speed_similar(a: Vehicle, b: Vehicle, theta_kmh: float) -> bool:
    return abs(a.speed_kmh - b.speed_kmh) < theta_kmh


def grid_cell(point, cell_m: float) -> tuple[int, int]:
    return (math.floor(point[0] / cell_m), math.floor(point[1] / cell_m))


def same_predicted_region(a: Vehicle, b: Vehicle, config: ScenarioConfig) -> bool:
    h = config.prediction_horizon_s
    cell = config.prediction_cell_m
    return grid_cell(predict_location(a, h), cell) == grid_cell(predict_location(b, h), cell)
