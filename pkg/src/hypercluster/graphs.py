"""Graph states, their stabilizer generators and local-unitary frames."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .pauli import PauliString, pauli_mul
from .statevec import GateSpec, apply_gates, apply_matrix, plus_state

CLUSTER = "cluster"
LABORATORY = "laboratory"

_PAULI_MATS = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class GraphState:
    n_vertices: int
    edges: frozenset

    def __init__(self, n_vertices: int, edges):
        norm = set()
        for a, b in edges:
            if a == b:
                raise ValueError(f"self-loop on vertex {a}")
            if not (1 <= a <= n_vertices and 1 <= b <= n_vertices):
                raise ValueError(f"edge ({a}, {b}) outside 1..{n_vertices}")
            norm.add((min(a, b), max(a, b)))
        object.__setattr__(self, "n_vertices", n_vertices)
        object.__setattr__(self, "edges", frozenset(norm))

    def neighbors(self, i: int) -> set[int]:
        return {b if a == i else a for a, b in self.edges if i in (a, b)}

    def without(self, i: int) -> tuple["GraphState", dict[int, int]]:
        """Delete vertex ``i``; returns the smaller graph and the old->new relabelling."""
        relabel = {v: k for k, v in enumerate((v for v in range(1, self.n_vertices + 1) if v != i), 1)}
        edges = [(relabel[a], relabel[b]) for a, b in self.edges if i not in (a, b)]
        return GraphState(self.n_vertices - 1, edges), relabel


def path_graph(n: int) -> GraphState:
    return GraphState(n, [(i, i + 1) for i in range(1, n)])


# three independent pairs, one per degree of freedom
HE6_GRAPH = GraphState(6, [(1, 4), (2, 5), (3, 6)])
# HE6 plus CZ_12 and CZ_56: the chain 4-1-2-5-6-3 ("horseshoe" with outputs 2 and 5)
LC6_GRAPH = GraphState(6, [(1, 4), (2, 5), (3, 6), (1, 2), (5, 6)])


def build_cluster(g: GraphState) -> np.ndarray:
    """(prod over edges CZ) |+>^n."""
    if g.n_vertices > 12:
        raise ValueError("build_cluster supports at most 12 vertices")
    cz = np.diag([1, 1, 1, -1]).astype(complex)
    psi = plus_state(g.n_vertices)
    for a, b in sorted(g.edges):
        psi = apply_matrix(psi, cz, (a, b))
    return psi


@dataclass(frozen=True)
class StabilizerSet:
    generators: tuple[PauliString, ...]
    frame: str = CLUSTER

    def __post_init__(self):
        gens = self.generators
        for a, b in combinations(gens, 2):
            if not a.commutes_with(b):
                raise ValueError(f"generators {a} and {b} do not commute")

    @property
    def n_qubits(self) -> int:
        return self.generators[0].n_qubits


def stabilizers_of(g: GraphState) -> StabilizerSet:
    """g_i = X_i prod_{j in N(i)} Z_j in vertex order."""
    gens = []
    for i in range(1, g.n_vertices + 1):
        factors = {j: "Z" for j in g.neighbors(i)}
        factors[i] = "X"
        gens.append(PauliString.from_factors(g.n_vertices, factors))
    return StabilizerSet(tuple(gens), CLUSTER)


@dataclass(frozen=True)
class FrameTransform:
    """Single-qubit gates listed in time order (first acts first)."""

    gates: tuple[GateSpec, ...]

    def __post_init__(self):
        for gate in self.gates:
            if len(gate.targets) != 1:
                raise ValueError("frame transforms hold single-qubit gates only")

    @classmethod
    def from_operator_product(cls, text: str) -> "FrameTransform":
        """Parse an operator product such as ``"H2 X3 H3 H4 Z5"`` (rightmost acts first)."""
        gates = [GateSpec(tok[0], (int(tok[1:]),)) for tok in text.split()]
        return cls(tuple(reversed(gates)))

    def dagger(self) -> "FrameTransform":
        return FrameTransform(tuple(g.dagger() for g in reversed(self.gates)))

    def local_unitary(self, q: int) -> np.ndarray:
        u = np.eye(2, dtype=complex)
        for g in self.gates:
            if g.targets[0] == q:
                u = g.unitary() @ u
        return u

    def qubits(self) -> set[int]:
        return {g.targets[0] for g in self.gates}

    def apply_to_state(self, psi: np.ndarray) -> np.ndarray:
        return apply_gates(psi, self.gates)


# Frame mapping the canonical linear cluster onto the state prepared in the laboratory
LAB_FRAME = FrameTransform.from_operator_product("H2 X3 H3 H4 Z5")


def conjugate_single(u: np.ndarray, pauli: str) -> tuple[int, str]:
    """Return ``(sign, P')`` with ``u P u^dagger = sign * P'``; raise if not Clifford."""
    img = u @ _PAULI_MATS[pauli] @ u.conj().T
    for name, m in _PAULI_MATS.items():
        for sign in (1, -1):
            if np.allclose(img, sign * m, atol=1e-10):
                return sign, name
    raise ValueError("single-qubit unitary is not Clifford")


def conjugate_pauli(p: PauliString, t: FrameTransform) -> PauliString:
    """``t p t^dagger`` as a signed Pauli string."""
    sign = -1 if p.phase_power == 2 else 1
    if not p.is_hermitian:
        raise ValueError("conjugate_pauli expects a Hermitian string")
    factors = {}
    for q in range(1, p.n_qubits + 1):
        c = p.factor(q)
        if c == "I":
            continue
        s, c2 = conjugate_single(t.local_unitary(q), c)
        sign *= s
        factors[q] = c2
    return PauliString.from_factors(p.n_qubits, factors, sign)


def apply_frame(s: StabilizerSet, t: FrameTransform) -> StabilizerSet:
    for q in t.qubits():
        u = t.local_unitary(q)
        conjugate_single(u, "X")
        conjugate_single(u, "Z")
    flipped = LABORATORY if s.frame == CLUSTER else CLUSTER
    return StabilizerSet(tuple(conjugate_pauli(g, t) for g in s.generators), flipped)


def subset_label(mask: int, n: int = 6, prefix: str = "g") -> str:
    """``0b001001 -> "g1*g4"``; bit ``i-1`` selects generator ``i``; 0 -> ``"1"``."""
    names = [f"{prefix}{i}" for i in range(1, n + 1) if (mask >> (i - 1)) & 1]
    return "*".join(names) if names else "1"


def parse_subset_label(label: str, n: int = 6) -> int:
    label = label.strip()
    if label in ("1", "I", ""):
        return 0
    mask = 0
    for tok in label.replace(" ", "").split("*"):
        if not tok.startswith("g") or not tok[1:].isdigit():
            raise ValueError(f"unknown subset label {label!r}")
        i = int(tok[1:])
        if not 1 <= i <= n or (mask >> (i - 1)) & 1:
            raise ValueError(f"unknown subset label {label!r}")
        mask |= 1 << (i - 1)
    return mask


def subset_product(s: StabilizerSet, mask: int) -> PauliString:
    out = PauliString.identity(s.n_qubits)
    for i, g in enumerate(s.generators):
        if (mask >> i) & 1:
            out = pauli_mul(out, g)
    return out


def stabilizer_group(s: StabilizerSet) -> list[tuple[int, PauliString]]:
    """All ``2**n`` subset products, indexed by subset mask, identity first."""
    n = len(s.generators)
    if n > 10:
        raise ValueError("stabilizer_group enumerates at most 10 generators")
    group = []
    for mask in range(1 << n):
        p = subset_product(s, mask)
        if mask and p.is_identity():
            raise ValueError(f"dependent generators: subset {subset_label(mask, n)} multiplies to identity")
        group.append((mask, p))
    return group
