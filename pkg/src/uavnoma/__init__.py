"""Drone-assisted NOMA downlink simulator for vehicular networks.

Vehicles are clustered with a mobility-aware DBSCAN, each cluster gets a
drone base station at its centroid, users are paired for power-domain NOMA,
channels are assigned with the Hungarian method and the total spectral
efficiency is evaluated.
"""

from .allocation import AllocationPlan, InsufficientChannelsError, NomaGroup, build_plan, station_gains
from .assignment import hungarian
from .clustering import Cluster, DbsStation, form_clusters, place_dbs
from .experiments import SweepResult, SweepSpec, run_baseline, run_scenario, run_sweep
from .mobility import Vehicle, spawn_vehicles
from .scenario import ConfigError, ScenarioConfig, ScenarioState, default_config, load_config, make_rng

__all__ = [
    "AllocationPlan", "Cluster", "ConfigError", "DbsStation", "InsufficientChannelsError",
    "NomaGroup", "ScenarioConfig", "ScenarioState", "SweepResult", "SweepSpec", "Vehicle",
    "build_plan", "default_config", "form_clusters", "hungarian", "load_config", "make_rng",
    "place_dbs", "run_baseline", "run_scenario", "run_sweep", "spawn_vehicles", "station_gains",
]
