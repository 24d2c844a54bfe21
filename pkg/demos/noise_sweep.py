"""A small noise robustness sweep from Python.

Runs all three tests on one periodic and one chaotic Lorenz parameter across
five noise colors and three SNR levels, writes the CSV and the per-color
SVG plots into ./sweep_out.  The same run is available from the shell as

    chaostda sweep --params 180.5,181.2 --snrs inf,30,20 --out-dir sweep_out
"""
import math

from chaostda.pipeline import SweepConfig, emit_outputs, run_sweep

cfg = SweepConfig(system="lorenz", params=(180.5, 181.2), snrs=(math.inf, 30.0, 20.0),
                  ps_ensemble=50, seed=1)
result = run_sweep(cfg)

for test in cfg.tests:
    rows = result.select(test=test, snr_db=30.0)
    print(test, [(r.param, r.alpha, round(r.score, 3), r.verdict) for r in rows])

print(emit_outputs(result, "sweep_out")["csv"])
