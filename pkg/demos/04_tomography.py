"""
Simulated tomography of one degree of freedom
=============================================

Fix the other two DOFs to a product branch, count coincidences on 16
analysis settings and reconstruct the pair by maximum likelihood.
"""
import numpy as np

from hypercluster.he6 import build_lc6_tilde
from hypercluster.tomo import (
    CALIBRATED_NOISE, apply_noise, exact_fidelities, reconstruct, reference_rows,
    simulate_counts, target_state,
)

rho6 = apply_noise(build_lc6_tilde(), CALIBRATED_NOISE)
row = reference_rows()[4]  # k pair conditioned on c = EE, pi = HH
counts = simulate_counts(rho6, row["output_dof"], row["selector"], np.random.default_rng(1))
print(" ".join(f"{c.setting}:{c.count}" for c in counts))

rec = reconstruct(counts)
t = target_state(row)
print("converged:", rec.converged, "iterations:", rec.iterations)
print("eigenvalues:", np.round(np.linalg.eigvalsh(rec.rho), 4))
print(f"fidelity with {row['target']}: {np.vdot(t, rec.rho @ t).real:.4f}")
print(f"linear inversion fidelity: {np.vdot(t, rec.linear_estimate @ t).real:.4f}")

# exact noisy values for all nine rows, next to the measured ones
for r, f in zip(reference_rows(), exact_fidelities(CALIBRATED_NOISE)):
    print(f"  {r['target']}_{r['output_dof']:2s} model {f:.3f}  measured {r['fidelity']:.3f}")
