"""Scenario runs, multi-seed parameter sweeps, baselines, CSV and plot output."""

from __future__ import annotations

import csv
import datetime as _dt
import io
import math
import subprocess
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .allocation import InsufficientChannelsError, build_plan, station_gains
from .clustering import form_clusters, place_dbs, restrict_to_coverage
from .mobility import spawn_vehicles, step
from .scenario import ScenarioConfig, ScenarioState, make_rng

PARAMETERS = {
    "dbs_radius": "r_k",
    "epsilon": "epsilon_m",
    "min_points": "min_points",
}
METHODS = ("proposed", "plain_dbscan", "mbs_only")


class ScenarioError(RuntimeError):
    pass


@dataclass(frozen=True)
class ScenarioResult:
    seed: int
    total_se: float
    per_user_se: dict
    num_clusters: int
    num_mbs_users: int


def build_state(config: ScenarioConfig, seed: int, method: str = "proposed") -> ScenarioState:
    rng = make_rng(seed, "mobility")
    vehicles = spawn_vehicles(config, rng)
    for _ in range(config.warmup_steps):
        vehicles = [step(v, config.step_dt_s, rng, config) for v in vehicles]
    if method == "mbs_only":
        clusters, rest = [], {v.id for v in vehicles}
    elif method in ("proposed", "plain_dbscan"):
        clusters, rest = form_clusters(vehicles, config, mobility_aware=(method == "proposed"))
        # A drone only reaches vehicles inside its coverage radius; the rest
        # fall back to the MBS. A no-op for the proposed method's clusters.
        clusters, uncovered = restrict_to_coverage(clusters, vehicles, config.r_k)
        rest = set(rest) | uncovered
    else:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    return ScenarioState(
        vehicles=tuple(vehicles),
        clusters=tuple(clusters),
        dbs_list=tuple(place_dbs(clusters, config)),
        mbs_position=config.mbs_position,
        time_s=config.warmup_steps * config.step_dt_s,
        unclustered=frozenset(rest),
    )


def run_scenario(config: ScenarioConfig, seed: int | None = None, method: str = "proposed") -> ScenarioResult:
    """Spawn, cluster, place drones, allocate and evaluate one snapshot."""
    seed = config.seed if seed is None else seed
    state = build_state(config, seed, method)
    gains = station_gains(state, config)
    try:
        plan = build_plan(state, gains, config)
    except InsufficientChannelsError as exc:
        raise ScenarioError(f"seed {seed}: {exc}") from exc
    return ScenarioResult(seed, plan.total_se, dict(plan.per_user_se), len(state.clusters), len(state.unclustered))


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    values: tuple
    seeds: int
    base_config: ScenarioConfig
    baseline: str = "proposed"

    def __post_init__(self):
        if self.parameter not in PARAMETERS:
            raise ValueError(f"unknown sweep parameter {self.parameter!r}; expected one of {sorted(PARAMETERS)}")
        if self.baseline not in METHODS:
            raise ValueError(f"unknown baseline {self.baseline!r}; expected one of {METHODS}")
        values = tuple(self.values)
        if not values:
            raise ValueError("sweep values must be nonempty")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError(f"sweep values must be strictly increasing: {values}")
        if self.seeds < 1:
            raise ValueError(f"seeds must be >= 1, got {self.seeds}")
        object.__setattr__(self, "values", values)

    def config_for(self, value) -> ScenarioConfig:
        key = PARAMETERS[self.parameter]
        if key == "min_points":
            if float(value) != int(value):
                raise ValueError(f"min_points must be an integer, got {value!r}")
            value = int(value)
        else:
            value = float(value)
        return self.base_config.replace(**{key: value})


@dataclass(frozen=True)
class SweepRow:
    value: float
    mean_se: float
    std_se: float
    seeds: int

    @property
    def stderr(self) -> float:
        return self.std_se / math.sqrt(self.seeds)


@dataclass(frozen=True)
class SweepResult:
    parameter: str
    baseline: str
    rows: tuple
    samples: tuple = ()  # per-row tuple of per-seed totals, seed order
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not self.rows:
            raise ValueError("a sweep result needs at least one row")
        for r in self.rows:
            if not (math.isfinite(r.mean_se) and r.mean_se >= 0):
                raise ValueError(f"invalid mean {r.mean_se!r} at {self.parameter}={r.value}")

    @property
    def values(self):
        return [r.value for r in self.rows]

    @property
    def means(self):
        return np.array([r.mean_se for r in self.rows])

    @property
    def stderrs(self):
        return np.array([r.stderr for r in self.rows])


def _revision() -> str:
    try:
        out = subprocess.run(
            ["git", "rev-parse", "--short", "HEAD"],
            capture_output=True, text=True, timeout=5, cwd=Path(__file__).parent,
        )
    except (OSError, subprocess.SubprocessError):
        return "unknown"
    return out.stdout.strip() or "unknown"


def summarize(values: Sequence[float]) -> tuple[float, float]:
    """Mean and sample standard deviation (0 for a single sample)."""
    arr = np.asarray(values, dtype=float)
    mean = math.fsum(arr) / len(arr)
    if len(arr) < 2:
        return mean, 0.0
    var = math.fsum((arr - mean) ** 2) / (len(arr) - 1)
    return mean, math.sqrt(var)


def run_sweep(spec: SweepSpec, seed_list: Sequence[int] | None = None) -> SweepResult:
    """Run ``spec.seeds`` scenarios (seeds 0..seeds-1) at every sweep value."""
    seed_list = list(range(spec.seeds)) if seed_list is None else list(seed_list)
    rows, samples = [], []
    for value in spec.values:
        cfg = spec.config_for(value)
        try:
            totals = [run_scenario(cfg, s, spec.baseline).total_se for s in seed_list]
        except ScenarioError as exc:
            raise ScenarioError(f"{spec.parameter}={value}, method {spec.baseline}: {exc}") from exc
        mean, std = summarize(totals)
        rows.append(SweepRow(value, mean, std, len(totals)))
        samples.append(tuple(totals))
    metadata = {
        "config": spec.base_config.to_dict(),
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        "revision": _revision(),
    }
    return SweepResult(spec.parameter, spec.baseline, tuple(rows), tuple(samples), metadata)


def run_baseline(spec: SweepSpec) -> SweepResult:
    if spec.baseline not in ("plain_dbscan", "mbs_only"):
        raise ValueError(f"baseline must be plain_dbscan or mbs_only, got {spec.baseline!r}")
    return run_sweep(spec)


def _fmt(x: float) -> str:
    return repr(float(x))


def csv_text(result: SweepResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["param", "value", "mean_se", "std_se", "seeds"])
    for r in result.rows:
        writer.writerow([result.parameter, _fmt(r.value), _fmt(r.mean_se), _fmt(r.std_se), r.seeds])
    return buf.getvalue()


def emit_csv(result: SweepResult, path) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(csv_text(result))
    return path


AXIS_LABELS = {
    "dbs_radius": "DBS coverage radius (m)",
    "epsilon": "Clustering distance ε (m)",
    "min_points": "MinPoints",
}


def emit_plot(results: Sequence[SweepResult], path) -> Path:
    """Line chart of mean total SE against the swept value, one line per result (SVG)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    if isinstance(results, SweepResult):
        results = [results]
    if not results:
        raise ValueError("nothing to plot")
    params = {r.parameter for r in results}
    if len(params) != 1:
        raise ValueError(f"results sweep different parameters: {sorted(params)}")
    path = Path(path)

    with matplotlib.rc_context({"svg.hashsalt": "uavnoma", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(6, 4))
        for r in results:
            ax.errorbar(r.values, r.means, yerr=r.stderrs, marker="o", capsize=3, label=r.baseline)
        ax.set_xlabel(AXIS_LABELS[results[0].parameter])
        ax.set_ylabel("Total spectral efficiency (bit/s/Hz)")
        ax.grid(True, alpha=0.3)
        ax.legend()
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
    return path
