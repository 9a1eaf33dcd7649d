"""
Bell expressions and local hidden variables
===========================================

Stabilizer products give Bell expressions whose local-realistic maximum is
found by brute force over +-1 assignments.
"""
import numpy as np

from hypercluster.he6 import build_lc6_tilde
from hypercluster.nonlocality import (
    bell_expression, bell_value, ingest_stabilizer_table, lhv_optimum, stabilizer_report,
)
from hypercluster.tomo import CALIBRATED_NOISE, apply_noise

psi = build_lc6_tilde()
for name in ("B", "beta", "beta_prime"):
    e = bell_expression(name)
    best, _ = lhv_optimum(e)
    print(f"{name:10s} terms={len(e.terms):2d} quantum={bell_value(e, psi):5.1f} lhv={best}")

# a noisy state still violates the bound on B
rep = stabilizer_report(apply_noise(psi, CALIBRATED_NOISE))
print(f"noisy: F={rep.F:.3f} witness={rep.witness:+.3f} B={rep.B:.3f} D={rep.D:.3f}")

# aggregates recomputed from the bundled measured table
meas = ingest_stabilizer_table()
print(f"measured table: F={meas.F:.4f} B={meas.B:.4f} beta={meas.beta:.4f} beta'={meas.beta_prime:.4f}")
worst = min(meas.rows, key=lambda r: r["expectation"])
print("weakest correlation:", worst["subset"], np.round(worst["expectation"], 4))
