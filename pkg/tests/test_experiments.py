import math

import numpy as np
import pytest

from uavnoma.experiments import (
    ScenarioError,
    SweepSpec,
    build_state,
    csv_text,
    emit_csv,
    emit_plot,
    run_baseline,
    run_scenario,
    run_sweep,
    summarize,
)
from uavnoma.scenario import default_config

CFG = default_config()


def log2_1p(x):
    return math.log1p(x) / math.log(2)


def test_no_vehicles():
    r = run_scenario(CFG.replace(num_vehicles=0), seed=3)
    assert r.total_se == 0.0 and r.num_clusters == 0 and r.per_user_se == {}


def test_deterministic_per_seed():
    a = run_scenario(CFG, seed=11)
    b = run_scenario(CFG, seed=11)
    assert a == b
    assert run_scenario(CFG) == run_scenario(CFG, seed=CFG.seed)


def _gain(p, q):
    d = max(1.0, math.sqrt(sum((a - b) ** 2 for a, b in zip(p, q))))
    return 10 ** (-(28.1 + 37.6 * math.log10(d)) / 10)


@pytest.mark.parametrize("bandwidth", [180e3, 1.0])
@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_two_users_by_hand(seed, bandwidth):
    cfg = CFG.replace(num_vehicles=2, channel_bandwidth_hz=bandwidth)
    state = build_state(cfg, seed, "proposed")
    assert state.clusters == ()
    sigma2 = 10 ** (-11) * bandwidth
    h = sorted((_gain((*v.position, 0.0), cfg.mbs_position) for v in state.vehicles), reverse=True)
    near, far = h
    margin = 16 * near / (4 * near + sigma2) - 16 * far / (4 * far + sigma2)
    if margin >= 1.0:
        expected = log2_1p(16 * far / (4 * far + sigma2)) + log2_1p(4 * near / sigma2)
    else:
        expected = log2_1p(10 * near / sigma2) + log2_1p(10 * far / sigma2)
    assert run_scenario(cfg, seed).total_se == pytest.approx(expected, rel=1e-12)


def test_noma_pair_survives_when_far_user_is_far():
    # Searching the first seeds for one with a real near/far spread at 1 Hz.
    cfg = CFG.replace(num_vehicles=2, channel_bandwidth_hz=1.0)
    for seed in range(50):
        st = build_state(cfg, seed, "proposed")
        d = sorted(math.dist(v.position, cfg.mbs_position[:2]) for v in st.vehicles)
        if d[0] < 100 and d[1] > 300:
            r = run_scenario(cfg, seed)
            assert sum(1 for u in r.per_user_se.values() if u > 0) == 2
            return
    pytest.skip("no suitable seed")


def test_unknown_method():
    with pytest.raises(ValueError, match="unknown method"):
        run_scenario(CFG, 0, "kmeans")


def test_insufficient_channels_names_seed():
    with pytest.raises(ScenarioError, match="seed 4"):
        run_scenario(CFG.replace(num_channels=3), 4, "mbs_only")


def test_sweep_spec_validation():
    with pytest.raises(ValueError, match="unknown sweep parameter"):
        SweepSpec("alpha", (1,), 1, CFG)
    with pytest.raises(ValueError, match="strictly increasing"):
        SweepSpec("epsilon", (2, 2), 1, CFG)
    with pytest.raises(ValueError, match="seeds"):
        SweepSpec("epsilon", (2,), 0, CFG)
    with pytest.raises(ValueError, match="unknown baseline"):
        SweepSpec("epsilon", (2,), 1, CFG, "oracle")
    with pytest.raises(ValueError, match="integer"):
        SweepSpec("min_points", (2.5,), 1, CFG).config_for(2.5)
    assert SweepSpec("min_points", (4,), 1, CFG).config_for(4.0).min_points == 4


def test_sweep_shape_and_single_seed():
    spec = SweepSpec("dbs_radius", (5, 8, 11), 1, CFG)
    res = run_sweep(spec)
    assert len(res.rows) == 3
    for value, row in zip((5, 8, 11), res.rows):
        assert row.seeds == 1 and row.std_se == 0.0
        assert row.mean_se == run_scenario(CFG.replace(r_k=float(value)), 0).total_se
    assert set(res.metadata) == {"config", "timestamp", "revision"}


def test_seed_order_does_not_matter():
    spec = SweepSpec("epsilon", (3, 5), 6, CFG)
    a = run_sweep(spec)
    b = run_sweep(spec, seed_list=[5, 3, 1, 0, 2, 4])
    for ra, rb in zip(a.rows, b.rows):
        assert ra.mean_se == pytest.approx(rb.mean_se, rel=1e-12)
        assert ra.std_se == pytest.approx(rb.std_se, rel=1e-9)


@pytest.mark.parametrize("param,values", [("dbs_radius", (5, 10, 14)), ("epsilon", (2, 6)), ("min_points", (4, 9))])
def test_mbs_only_ignores_clustering_parameters(param, values):
    res = run_baseline(SweepSpec(param, values, 4, CFG, "mbs_only"))
    assert len(set(res.means.tolist())) == 1


def test_run_baseline_rejects_proposed():
    with pytest.raises(ValueError):
        run_baseline(SweepSpec("epsilon", (4,), 1, CFG))


def test_summarize():
    assert summarize([2.0]) == (2.0, 0.0)
    mean, std = summarize([1.0, 2.0, 3.0, 4.0])
    assert mean == 2.5
    assert std == pytest.approx(np.std([1, 2, 3, 4], ddof=1))


def test_csv(tmp_path):
    res = run_sweep(SweepSpec("min_points", (4, 6), 3, CFG))
    text = csv_text(res)
    lines = text.split("\n")
    assert lines[0] == "param,value,mean_se,std_se,seeds"
    assert len(lines) == 4 and lines[-1] == ""
    assert lines[1].startswith("min_points,4.0,") and lines[1].endswith(",3")
    assert float(lines[2].split(",")[2]) == res.rows[1].mean_se
    p1 = emit_csv(res, tmp_path / "a.csv")
    p2 = emit_csv(run_sweep(SweepSpec("min_points", (4, 6), 3, CFG)), tmp_path / "b.csv")
    assert p1.read_bytes() == p2.read_bytes()


def test_plot_is_reproducible(tmp_path):
    results = [run_sweep(SweepSpec("dbs_radius", (6, 10), 2, CFG, m)) for m in ("proposed", "plain_dbscan", "mbs_only")]
    a = emit_plot(results, tmp_path / "a.svg").read_bytes()
    b = emit_plot(results, tmp_path / "b.svg").read_bytes()
    assert a == b
    assert a.count(b"<path") > 3
    for label in (b"proposed", b"plain_dbscan", b"mbs_only"):
        assert label in a


def test_plot_rejects_mixed_parameters(tmp_path):
    r1 = run_sweep(SweepSpec("dbs_radius", (6,), 1, CFG))
    r2 = run_sweep(SweepSpec("epsilon", (4,), 1, CFG))
    with pytest.raises(ValueError, match="different parameters"):
        emit_plot([r1, r2], tmp_path / "x.svg")
