"""
A one-way CNOT with single-qubit rotations
==========================================

Measuring qubits 3, 4, 6 and 1 of the cluster leaves qubits 5 and 2 in the
output of a small circuit. Byproduct corrections make every branch agree.
"""
import numpy as np

from hypercluster.mbqc import all_branches, cnot_io_matrix, pattern_bases, to_ab_order

pattern = pattern_bases("I", alpha=np.pi / 2, beta=np.pi / 4)
print("laboratory bases:", pattern.labels())
runs = all_branches(pattern)
print("branches:", len(runs), "probabilities:", {round(r.probability, 6) for r in runs})
print("worst fidelity after correction:", min(r.fidelity for r in runs))
print("output (A, B order):", np.round(to_ab_order(runs[0].corrected_output), 4))

# with no rotation, pattern II acts as a CNOT on product inputs
io = cnot_io_matrix("II")
for inp, out in zip(io.inputs, io.expected):
    print(f"  {inp} -> {out}")
print(np.round(io.matrix, 3))
