"""Acceptance suite: one test per criterion, each recording a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py`` (the lines are printed in the
terminal summary) or directly with ``python3 tests/test_acceptance.py``.
"""

import functools
import itertools
import math
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest
from scipy.stats import spearmanr

from uavnoma import radio
from uavnoma.allocation import build_plan, plan_violations, station_gains
from uavnoma.assignment import hungarian
from uavnoma.experiments import SweepSpec, build_state, run_sweep
from uavnoma.mobility import grid_cell, predict_location
from uavnoma.scenario import default_config

ROOT = Path(__file__).resolve().parents[1]
SEEDS = 200
RADII = tuple(range(5, 15))
EPSILONS = tuple(range(1, 11))
MIN_POINTS = tuple(range(4, 14))

RESULTS: dict[int, str] = {}


def record(n, ok, detail):
    RESULTS[n] = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})"
    print(RESULTS[n])
    return ok


@functools.lru_cache(maxsize=None)
def sweep(parameter, values, method, **fixed):
    cfg = default_config(**fixed)
    start = time.perf_counter()
    res = run_sweep(SweepSpec(parameter, values, SEEDS, cfg, method))
    return res, time.perf_counter() - start


def radius_sweep(method):
    return sweep("dbs_radius", RADII, method, epsilon_m=4.0, min_points=6)


def test_c1_hungarian_oracle():
    rng = np.random.default_rng(20240601)
    start = time.perf_counter()
    bad = 0
    for t in range(1000):
        n = 2 + t % 5
        cost = rng.uniform(-1.0, 0.0, size=(n, n))
        _, total = hungarian(cost)
        brute = min(math.fsum(cost[r, p[r]] for r in range(n)) for p in itertools.permutations(range(n)))
        bad += total != brute
    elapsed = time.perf_counter() - start
    ok = bad == 0 and elapsed < 10.0
    assert record(1, ok, f"{bad} mismatches in 1000 matrices, {elapsed:.1f} s")


@functools.lru_cache(maxsize=None)
def scenario_states():
    cfg = default_config()
    return cfg, [build_state(cfg, seed, "proposed") for seed in range(1000)]


def test_c2_clustering_invariants():
    cfg, states = scenario_states()
    problems = []
    n_clusters = 0
    for seed, st in enumerate(states):
        by_id = {v.id: v for v in st.vehicles}
        seen = [m for c in st.clusters for m in c.members] + list(st.unclustered)
        if sorted(seen) != sorted(by_id):
            problems.append(f"seed {seed}: partition broken")
        for c in st.clusters:
            n_clusters += 1
            seed_v = by_id[c.seed]
            seed_cell = grid_cell(predict_location(seed_v, cfg.prediction_horizon_s), cfg.prediction_cell_m)
            if len(c.members) < cfg.min_points + 1:
                problems.append(f"seed {seed}: cluster of {len(c.members)}")
            for m in c.members:
                v = by_id[m]
                if math.dist(v.position, c.centroid) > cfg.r_k:
                    problems.append(f"seed {seed}: vehicle {m} outside coverage")
                if m != c.seed and not abs(v.speed_kmh - seed_v.speed_kmh) < cfg.theta_kmh:
                    problems.append(f"seed {seed}: vehicle {m} outside speed window")
                cell = grid_cell(predict_location(v, cfg.prediction_horizon_s), cfg.prediction_cell_m)
                if cell != seed_cell:
                    problems.append(f"seed {seed}: vehicle {m} predicted elsewhere")
    ok = not problems and n_clusters > 0
    assert record(2, ok, f"{len(problems)} violations over 1000 scenarios, {n_clusters} clusters checked"), problems[:5]


def test_c3_plan_constraints():
    cfg, states = scenario_states()
    problems = []
    pairs = 0
    for seed, st in enumerate(states):
        gains = station_gains(st, cfg)
        plan = build_plan(st, gains, cfg)
        pairs += sum(g.is_pair for g in plan.groups)
        problems += [f"seed {seed}: {p}" for p in plan_violations(plan, gains, cfg)]
    ok = not problems
    assert record(3, ok, f"{len(problems)} violations over 1000 plans, {pairs} surviving pairs"), problems[:5]


def test_c4_radius_sweep_peaks_inside():
    res, elapsed = radius_sweep("proposed")
    m, se = res.means, res.stderrs
    k = int(np.argmax(m))
    interior = 0 < k < len(m) - 1
    above_lo = (m[k] - m[0]) / se[k]
    above_hi = (m[k] - m[-1]) / se[k]
    ok = interior and above_lo > 1 and above_hi > 1 and elapsed < 300
    detail = (f"argmax at r_k={res.values[k]:g}, peak - first = {above_lo:.2f} SE, "
              f"peak - last = {above_hi:.2f} SE, {elapsed:.0f} s")
    assert record(4, ok, detail)


def test_c5_epsilon_sweep_rises_then_flattens():
    res, _ = sweep("epsilon", EPSILONS, "proposed", r_k=10.0, min_points=6)
    m = res.means
    rise = (m[-1] - m[0]) / res.stderrs[-1]
    tail = abs(m[-1] - m[-2]) / (m.max() - m.min()) if m.max() > m.min() else float("inf")
    ok = rise > 1 and tail < 0.05
    assert record(5, ok, f"last - first = {rise:.1f} SE, last step = {100 * tail:.1f}% of range")


def test_c6_min_points_sweep_decreases():
    res, _ = sweep("min_points", MIN_POINTS, "proposed", r_k=10.0, epsilon_m=4.0)
    rho = spearmanr(res.values, res.means)[0]
    assert record(6, rho <= -0.8, f"Spearman rho = {rho:.3f}")


def test_c7_beats_baselines():
    prop, _ = radius_sweep("proposed")
    plain, _ = radius_sweep("plain_dbscan")
    mbs, _ = radius_sweep("mbs_only")
    gap_mbs = (prop.means - mbs.means) / np.hypot(prop.stderrs, mbs.stderrs)
    k = int(np.argmax(prop.means))
    gap_plain = (prop.means[k] - plain.means[k]) / math.hypot(prop.stderrs[k], plain.stderrs[k])
    ok = bool(np.all(gap_mbs > 1)) and gap_plain > 1
    detail = f"min margin over mbs_only = {gap_mbs.min():.1f} SE, margin over plain_dbscan at peak = {gap_plain:.2f} SE"
    assert record(7, ok, detail)


def _sig4(a, b):
    return float(f"{a:.4g}") == float(f"{b:.4g}")


def test_c8_link_math():
    # Straight-line re-evaluation, independent of the package.
    sigma2 = 10 ** ((-80 - 30) / 10) * 180e3
    ref_pl = 28.1 + 37.6 * math.log10(100.0) + math.log10(2.5 / 2.5)
    ref_far = math.log2(1 + 0.8 * 1e-3 / (0.2 * 1e-3 + sigma2))
    ref_near = math.log2(1 + 0.2 * 1e-2 / sigma2)
    ref_margin = 0.8 * 1e-2 / (0.2 * 1e-2 + sigma2) - 0.8 * 1e-3 / (0.2 * 1e-3 + sigma2)
    got = {
        "path loss": (radio.path_loss_db(100.0, 2.5), ref_pl),
        "se_far": (radio.se_far(0.8, 1e-3, 0.2, radio.noise_power_w(-80, 180e3)), ref_far),
        "se_near": (radio.se_near(0.2, 1e-2, sigma2), ref_near),
        "sic margin": (radio.sic_margin(0.2, 1e-2, 0.8, 1e-3, sigma2), ref_margin),
    }
    bad = [k for k, (a, b) in got.items() if not _sig4(a, b)]
    pretty = ", ".join(f"{k} {a:.4g}" for k, (a, _) in got.items())
    assert record(8, not bad and _sig4(ref_pl, 103.3) and _sig4(ref_near, 10.12), f"{pretty}; mismatched: {bad or 'none'}")


def test_c9_cli_sweep_is_byte_identical(tmp_path):
    outs = []
    for name in ("a.csv", "b.csv"):
        out = tmp_path / name
        cmd = [sys.executable, "-m", "uavnoma", "sweep", "--config", str(ROOT / "configs" / "default.json"),
               "--param", "dbs_radius", "--values", "5,8,11,14", "--seeds", "20",
               "--baseline", "proposed", "--out-csv", str(out)]
        proc = subprocess.run(cmd, capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        outs.append(out.read_bytes())
    ok = outs[0] == outs[1] and outs[0].count(b"\n") == 5
    assert record(9, ok, f"{len(outs[0])} bytes, identical={outs[0] == outs[1]}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
