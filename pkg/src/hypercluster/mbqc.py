"""One-way CNOT patterns on the six-qubit linear cluster.

Qubits 3, 4, 6 and 1 are measured; the output lives on qubits 5 (control,
photon B) and 2 (target, photon A). Two-qubit output vectors are in
control-first ``(5, 2)`` order unless a function says otherwise; the
published input-output tables use ``AB`` order, i.e. ``(2, 5)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .graphs import LAB_FRAME, CLUSTER, LABORATORY, GraphState, build_cluster
from .he6 import build_lc6, build_lc6_tilde
from .statevec import (
    I2, KET0, KET1, KET_MINUS, KET_PLUS, SQRT2, X, Z, apply_matrix, measure_qubit, rx, rz,
    state_equal_up_to_global_phase,
)

MEASURED = (3, 4, 6, 1)
OUTCOME_ORDER = (1, 3, 4, 6)  # outcome tuples are (s1, s3, s4, s6)
PATTERNS = ("I", "II", "III", "IV", "II-variant")

CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
Z_CONTROL = np.kron(Z, I2)
CIRCUIT = Z_CONTROL @ CNOT  # Z_5 CNOT_52 in (5, 2) order


def alpha_ket(alpha: float, sign: int) -> np.ndarray:
    return np.array([np.exp(1j * alpha / 2), sign * np.exp(-1j * alpha / 2)]) / SQRT2


@dataclass(frozen=True)
class MeasurementBasis:
    """``kind`` is ``computational``, ``diagonal`` or ``B``.

    ``swapped`` reverses which vector counts as outcome 0, as in ``{|1>, |0>}``.
    ``socket`` names a free angle (``"alpha"``/``"beta"``) for display.
    """

    kind: str
    angle: float = 0.0
    swapped: bool = False
    socket: str | None = None

    def vectors(self) -> tuple[np.ndarray, np.ndarray]:
        if self.kind == "computational":
            v = (KET0, KET1)
        elif self.kind == "diagonal":
            v = (KET_PLUS, KET_MINUS)
        elif self.kind == "B":
            v = (alpha_ket(self.angle, 1), alpha_ket(self.angle, -1))
        else:
            raise ValueError(f"unknown basis kind {self.kind!r}")
        return (v[1], v[0]) if self.swapped else v

    def label(self) -> str:
        if self.kind == "B":
            return f"B({self.socket})" if self.socket else f"B({self.angle:g})"
        names = ("|0>", "|1>") if self.kind == "computational" else ("|+>", "|->")
        a, b = (names[1], names[0]) if self.swapped else names
        return "{" + f"{a}, {b}" + "}"


def _same_ray(a: np.ndarray, b: np.ndarray) -> bool:
    return abs(abs(np.vdot(a, b)) - 1) < 1e-10


def classify_basis(b0: np.ndarray, b1: np.ndarray) -> MeasurementBasis:
    """Name an orthonormal single-qubit basis (up to vector phases)."""
    for kind in ("computational", "diagonal"):
        for swapped in (False, True):
            cand = MeasurementBasis(kind, swapped=swapped).vectors()
            if _same_ray(cand[0], b0) and _same_ray(cand[1], b1):
                return MeasurementBasis(kind, swapped=swapped)
    # equatorial basis: |<0|b>| = |<1|b>|, relative phase e^{-i alpha}
    if abs(abs(b0[0]) - abs(b0[1])) < 1e-10:
        alpha = float(np.angle(b0[0] / b0[1]))
        cand = MeasurementBasis("B", alpha % (2 * np.pi))
        if _same_ray(cand.vectors()[0], b0) and _same_ray(cand.vectors()[1], b1):
            return cand
    raise ValueError("basis is not one of the named families")


# Cluster-frame bases; "alpha"/"beta" mark the free angle sockets.
_CLUSTER_BASES = {
    "I": {3: ("computational",), 4: ("computational",), 6: ("B", "alpha"), 1: ("B", "beta")},
    "II": {3: ("computational",), 4: ("B", 0.0), 6: ("B", "alpha"), 1: ("B", 0.0)},
    "III": {3: ("B", 0.0), 4: ("computational",), 6: ("B", 0.0), 1: ("B", "beta")},
    "IV": {3: ("B", 0.0), 4: ("B", 0.0), 6: ("B", 0.0), 1: ("B", 0.0)},
}
_SOCKETS = {"I": ("alpha", "beta"), "II": ("alpha",), "III": ("beta",), "IV": ()}
VARIANT_ALPHA = 3 * np.pi / 2


@dataclass(frozen=True)
class MeasurementPattern:
    name: str
    frame: str
    bases: tuple  # of (qubit, MeasurementBasis) in measurement order
    alpha: float = 0.0
    beta: float = 0.0

    @property
    def family(self) -> str:
        return "II" if self.name == "II-variant" else self.name

    def basis(self, q: int) -> MeasurementBasis:
        return dict(self.bases)[q]

    def labels(self) -> dict:
        return {q: b.label() for q, b in self.bases}


def _resolve_angles(name: str, alpha, beta) -> tuple[str, float, float]:
    if name not in PATTERNS:
        raise ValueError(f"unknown pattern {name!r}")
    family = "II" if name == "II-variant" else name
    sockets = _SOCKETS[family]
    if name == "II-variant":
        if alpha is not None and not np.isclose(alpha, VARIANT_ALPHA):
            raise ValueError("the pattern II variant fixes alpha = 3pi/2")
        alpha = VARIANT_ALPHA
    if alpha is not None and "alpha" not in sockets:
        raise ValueError(f"pattern {name} has no alpha socket")
    if beta is not None and "beta" not in sockets:
        raise ValueError(f"pattern {name} has no beta socket")
    return family, float(alpha or 0.0), float(beta or 0.0)


def pattern_bases(name: str, frame: str = LABORATORY, alpha: float | None = None,
                  beta: float | None = None) -> MeasurementPattern:
    """Measurement bases of a pattern; laboratory bases are the frame-conjugated cluster bases."""
    family, a, b = _resolve_angles(name, alpha, beta)
    angles = {"alpha": a, "beta": b}
    out = []
    for q in MEASURED:
        entry = _CLUSTER_BASES[family][q]
        if entry[0] == "computational":
            cb = MeasurementBasis("computational")
        elif isinstance(entry[1], str):
            cb = MeasurementBasis("B", angles[entry[1]], socket=entry[1])
        else:
            cb = MeasurementBasis("B", entry[1])
        if frame == CLUSTER:
            out.append((q, cb))
            continue
        if frame != LABORATORY:
            raise ValueError(f"unknown frame {frame!r}")
        u = LAB_FRAME.local_unitary(q)
        if np.allclose(u, I2) and cb.socket:
            out.append((q, cb))
        else:
            v0, v1 = cb.vectors()
            out.append((q, classify_basis(u @ v0, u @ v1)))
    return MeasurementPattern(name, frame, tuple(out), a, b)


def _pow(m: np.ndarray, e: int) -> np.ndarray:
    return m if e % 2 else I2


@dataclass(frozen=True)
class ByproductRule:
    """Pauli errors as functions of the outcomes ``s = {1: s1, 3: s3, 4: s4, 6: s6}``.

    Each entry is ``(pauli, output qubit, outcome qubits)``; the exponent is the
    sum of the listed outcomes mod 2.
    """

    terms: tuple

    def operator(self, s: dict) -> np.ndarray:
        """Two-qubit correction in (5, 2) order."""
        m5, m2 = I2, I2
        for pauli, q, qs in self.terms:
            e = sum(s[k] for k in qs) % 2
            p = _pow(X if pauli == "X" else Z, e)
            if q == 5:
                m5 = p @ m5
            else:
                m2 = p @ m2
        return np.kron(m5, m2)

    def exponents(self, s: dict) -> dict:
        return {f"{p}{q}": sum(s[k] for k in qs) % 2 for p, q, qs in self.terms}


# Pauli errors on the circuit input (before the rotations and Z_5 CNOT_52).
INPUT_ERRORS = {
    "I": ByproductRule((("X", 5, (3, 6)), ("Z", 2, (1, 4)))),
    "II": ByproductRule((("X", 5, (3, 6)), ("X", 2, (4,)))),
    "III": ByproductRule((("Z", 5, (3,)), ("Z", 2, (1, 4)))),
    "IV": ByproductRule((("Z", 5, (3,)), ("X", 2, (4,)))),
}

# The same errors pushed through Z_5 CNOT_52 onto the output.
BYPRODUCTS = {
    "I": ByproductRule((("X", 5, (3, 6)), ("X", 2, (3, 6)), ("Z", 5, (1, 4)), ("Z", 2, (1, 4)))),
    "II": ByproductRule((("X", 5, (3, 6)), ("X", 2, (3, 4, 6)))),
    "III": ByproductRule((("Z", 5, (1, 3, 4)), ("Z", 2, (1, 4)))),
    "IV": ByproductRule((("Z", 5, (3,)), ("X", 2, (4,)))),
}

# Output prefactors exactly as printed next to the circuit formulas. Patterns I
# and III omit the Z_5^{s1+s4} that the target-qubit Z error picks up when it
# crosses the CNOT; see tests/test_mbqc.py.
PRINTED_BYPRODUCTS = {
    "I": ByproductRule((("X", 5, (3, 6)), ("X", 2, (3, 6)), ("Z", 2, (1, 4)))),
    "II": BYPRODUCTS["II"],
    "III": ByproductRule((("Z", 5, (3,)), ("Z", 2, (1, 4)))),
    "IV": BYPRODUCTS["IV"],
}

_INPUTS = {
    "I": np.kron(KET0, KET_PLUS),
    "II": np.kron(KET0, KET0),
    "III": np.kron(KET_PLUS, KET_PLUS),
    "IV": np.kron(KET_PLUS, KET0),
}


def circuit_input(name: str) -> np.ndarray:
    return _INPUTS["II" if name == "II-variant" else name].copy()


def _rotations(family: str, alpha: float, beta: float) -> np.ndarray:
    r5 = rx(alpha) if family in ("I", "II") else I2
    r2 = rz(beta) if family in ("I", "III") else I2
    return np.kron(r5, r2)


def _outcome_dict(outcomes) -> dict:
    if isinstance(outcomes, dict):
        return {q: int(outcomes[q]) for q in OUTCOME_ORDER}
    return dict(zip(OUTCOME_ORDER, (int(v) for v in outcomes)))


def expected_output(name: str, alpha: float | None = None, beta: float | None = None,
                    outcomes=(0, 0, 0, 0), byproducts: str = "derived") -> np.ndarray:
    """Byproduct * Z_5 CNOT_52 * rotations |psi_in>, in (5, 2) order.

    ``byproducts="printed"`` uses the prefactors as published instead of the
    ones derived by propagating the input errors through the circuit.
    """
    family, a, b = _resolve_angles(name, alpha, beta)
    table = {"derived": BYPRODUCTS, "printed": PRINTED_BYPRODUCTS}[byproducts]
    s = _outcome_dict(outcomes)
    return table[family].operator(s) @ CIRCUIT @ _rotations(family, a, b) @ _INPUTS[family]


def to_ab_order(psi52: np.ndarray) -> np.ndarray:
    """(5, 2) control-first vector -> (2, 5) photon-A-first vector."""
    return np.asarray(psi52).reshape(2, 2).T.reshape(4)


@dataclass
class ComputationResult:
    pattern: str
    outcomes: tuple  # (s1, s3, s4, s6)
    probability: float
    raw_output: np.ndarray  # (5, 2) order, laboratory frame
    corrected_output: np.ndarray
    target: np.ndarray

    @property
    def fidelity(self) -> float:
        return float(abs(np.vdot(self.target, self.corrected_output)) ** 2)


def _measure_all(psi: np.ndarray, pattern: MeasurementPattern, s: dict | None, rng):
    remaining = list(range(1, 7))
    prob = 1.0
    got = {}
    for q, basis in pattern.bases:
        pos = remaining.index(q) + 1
        forced = None if s is None else s[q]
        got[q], p, psi = measure_qubit(psi, pos, basis.vectors(), rng=rng, outcome=forced)
        prob *= p
        remaining.remove(q)
    if remaining != [2, 5]:
        raise RuntimeError(f"unexpected remaining qubits {remaining}")
    return got, prob, to_ab_order(psi)  # swapping (2, 5) -> (5, 2) is the same transpose


def run_pattern(psi: np.ndarray | None, pattern: MeasurementPattern, outcomes=None, rng=None,
                state_frame: str | None = None) -> ComputationResult:
    """Measure qubits 3, 4, 6, 1 and correct the byproducts on qubits 5 and 2.

    ``outcomes`` forces a branch ``(s1, s3, s4, s6)``; otherwise outcomes are
    drawn from ``rng``. ``psi=None`` picks the ideal state of the pattern's
    frame. Cluster-frame outputs are mapped to the laboratory frame (H on
    qubit 2, Z on qubit 5) before correction so both frames report the same
    states.
    """
    state_frame = state_frame or pattern.frame
    if state_frame != pattern.frame:
        raise ValueError(f"state in {state_frame} frame, pattern in {pattern.frame} frame")
    if psi is None:
        psi = build_lc6_tilde() if pattern.frame == LABORATORY else build_lc6()
    s = None if outcomes is None else _outcome_dict(outcomes)
    got, prob, raw = _measure_all(np.asarray(psi, dtype=complex), pattern, s, rng)
    if pattern.frame == CLUSTER:
        raw = np.kron(LAB_FRAME.local_unitary(5), LAB_FRAME.local_unitary(2)) @ raw
    fix = BYPRODUCTS[pattern.family].operator(got)
    corrected = fix.conj().T @ raw
    target = expected_output(pattern.name, pattern.alpha if "alpha" in _SOCKETS[pattern.family] else None,
                             pattern.beta if "beta" in _SOCKETS[pattern.family] else None)
    return ComputationResult(pattern.name, tuple(got[q] for q in OUTCOME_ORDER), prob, raw, corrected, target)


def all_branches(pattern: MeasurementPattern, psi: np.ndarray | None = None) -> list[ComputationResult]:
    return [run_pattern(psi, pattern, s) for s in product((0, 1), repeat=4)]


_POL = {"H": KET0, "V": KET1, "+": KET_PLUS, "-": KET_MINUS}


def ab_state(label: str) -> np.ndarray:
    """Two-photon polarization product state from an AB label such as ``"+H"``; (5, 2) order."""
    a, b = label
    return np.kron(_POL[b], _POL[a])


IO_INPUTS = {
    "I": ("+H", "-H", "-V", "+V"),
    "II": ("HH", "VH", "HV", "VV"),
    "III": ("++", "+-", "--", "-+"),
}


def _branch_for_input(family: str, label: str) -> tuple:
    want = ab_state(label)
    base = _INPUTS[family]
    for s in product((0, 1), repeat=4):
        err = INPUT_ERRORS[family].operator(_outcome_dict(s))
        if _same_ray(err @ base, want):
            return s
    raise ValueError(f"input {label} not reachable for pattern {family}")


@dataclass
class IOMatrix:
    pattern: str
    inputs: list  # AB labels
    outputs: list  # AB labels of the output basis (same product family)
    expected: list  # expected output label per input, from Z_5 CNOT_52
    matrix: np.ndarray  # matrix[i, j] = |<outputs[j]|out_i>|^2

    def diagonal_fidelities(self) -> list:
        return [float(self.matrix[i, self.outputs.index(e)]) for i, e in enumerate(self.expected)]

    def to_dict(self) -> dict:
        return {
            "pattern": self.pattern,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "expected": self.expected,
            "matrix": self.matrix.tolist(),
        }


def cnot_io_matrix(name: str, psi: np.ndarray | None = None) -> IOMatrix:
    """Input-output fidelity table of patterns I-III at alpha = beta = 0.

    Each input of the pattern's product family is realized by the outcome
    branch whose input error prepares it, and that branch's uncorrected output
    is projected onto every state of the family. An ideal run gives a
    permutation matrix.
    """
    if name == "IV":
        raise ValueError("pattern IV outputs are entangled; verify it by tomography instead")
    if name not in IO_INPUTS:
        raise ValueError(f"unknown pattern {name!r}")
    pattern = pattern_bases(name, LABORATORY)
    inputs = list(IO_INPUTS[name])
    expected = [_label_of(CIRCUIT @ ab_state(lab)) for lab in inputs]
    m = np.zeros((4, 4))
    for i, lab in enumerate(inputs):
        res = run_pattern(psi, pattern, _branch_for_input(name, lab))
        for j, out in enumerate(inputs):
            m[i, j] = abs(np.vdot(ab_state(out), res.raw_output)) ** 2
    return IOMatrix(name, inputs, list(inputs), expected, m)


def _label_of(psi52: np.ndarray) -> str:
    for a in _POL:
        for b in _POL:
            if _same_ray(ab_state(a + b), psi52):
                return a + b
    return "entangled"


def removal_rule_check(g: GraphState, i: int, s: int) -> bool:
    """Z-measuring vertex ``i`` leaves Z^s on its neighbours times the smaller cluster."""
    psi = build_cluster(g)
    _, _, post = measure_qubit(psi, i, (KET0, KET1), outcome=s)
    smaller, relabel = g.without(i)
    expect = build_cluster(smaller)
    if s:
        for k in g.neighbors(i):
            expect = apply_matrix(expect, Z, (relabel[k],))
    return state_equal_up_to_global_phase(post, expect)


def pattern_iv_bell_outputs(psi: np.ndarray | None = None) -> dict:
    """Uncorrected pattern IV outputs keyed by (s3, s4), in (5, 2) order."""
    pattern = pattern_bases("IV", LABORATORY)
    out = {}
    for s3, s4 in product((0, 1), repeat=2):
        out[(s3, s4)] = run_pattern(psi, pattern, (0, s3, s4, 0)).raw_output
    return out
