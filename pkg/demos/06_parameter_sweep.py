"""Sweeping the coupling strength through the weak/strong crossover.

Run: python demos/06_parameter_sweep.py [out_dir]
"""
import csv
import sys
import tempfile
from pathlib import Path

import numpy as np

from cavitherm.scenarios import scenario_from_dict, sweep

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp())
base = scenario_from_dict({"preset": "fig2", "grid": {"horizon_ns": 300.0}})
index = sweep(base, "Omega", ["1.72pi", "4pi", "8pi", "17.2pi"], out, workers=2)

for p in index["points"]:
    with open(out / p["dir"] / "coefficients.csv") as fh:
        rows = list(csv.DictReader(fh))
    g = np.array([float(r["gamma"]) for r in rows])
    g = g[np.isfinite(g)]
    flips = int(np.sum(np.sign(g[1:]) != np.sign(g[:-1])))
    print(f"Omega = {p['value']:>7}: {p['status']}, gamma sign changes {flips}, "
          f"balance residual {p['balance_relative_residual']:.1e}")
print("outputs in", out)
