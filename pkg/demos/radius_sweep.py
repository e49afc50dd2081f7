"""Sweep the drone coverage radius for the proposed clustering and both
baselines, then write a CSV per method and one combined chart.

    python3 demos/radius_sweep.py [seeds] [outdir]
"""

import sys
from pathlib import Path

from uavnoma.experiments import SweepSpec, emit_csv, emit_plot, run_sweep
from uavnoma.scenario import default_config

seeds = int(sys.argv[1]) if len(sys.argv) > 1 else 50
out = Path(sys.argv[2]) if len(sys.argv) > 2 else Path("sweep_out")
out.mkdir(parents=True, exist_ok=True)

cfg = default_config()
results = []
for method in ("proposed", "plain_dbscan", "mbs_only"):
    res = run_sweep(SweepSpec("dbs_radius", tuple(range(5, 15)), seeds, cfg, method))
    emit_csv(res, out / f"radius_{method}.csv")
    results.append(res)
    line = "  ".join(f"{v:g}:{m:.3f}" for v, m in zip(res.values, res.means))
    print(f"{method:13s} {line}")

emit_plot(results, out / "radius.svg")
print(f"wrote {out}/radius_*.csv and {out}/radius.svg")
