"""The two-photon hyperentangled state and the laboratory linear cluster.

Photon A carries qubits 1 (E/I), 2 (H/V polarization) and 3 (r/l); photon B
carries 4, 5 and 6 in the same order. Degrees of freedom are keyed ``"c"``
(E/I cone modes), ``"pi"`` (polarization) and ``"k"`` (r/l momentum). The
first level of each pair (E, H, r) is computational ``|0>``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import HE6_GRAPH, LAB_FRAME, LC6_GRAPH, build_cluster
from .statevec import SQRT2, GateSpec, apply_gates, gate_unitary

DOFS = ("c", "pi", "k")
_DOF_ALIASES = {"π": "pi", "pol": "pi", "E/I": "c", "r/l": "k", "r/ℓ": "k"}


def _dof(name: str) -> str:
    name = _DOF_ALIASES.get(name, name)
    if name not in DOFS:
        raise ValueError(f"unknown degree of freedom {name!r}")
    return name


@dataclass(frozen=True)
class DofMapping:
    qubits: dict
    levels: dict

    def qubit(self, photon: str, dof: str) -> int:
        return self.qubits[_dof(dof)][{"A": 0, "B": 1}[photon]]

    def level(self, dof: str, label: str) -> int:
        label = label.replace("ℓ", "l")
        return self.levels[_dof(dof)].index(label)

    def photon_qubits(self, photon: str) -> tuple[int, ...]:
        return tuple(self.qubit(photon, d) for d in DOFS)


MAPPING = DofMapping(
    qubits={"c": (1, 4), "pi": (2, 5), "k": (3, 6)},
    levels={"c": ("E", "I"), "pi": ("H", "V"), "k": ("r", "l")},
)


def dof_ket(dof: str, label: str) -> np.ndarray:
    """Single-photon state of one degree of freedom.

    Accepts the two level names, ``+``/``-`` and the polarization-style analysis
    states ``D`` (= ``+``), ``R`` = (|0> - i|1>)/sqrt2 and ``L`` = (|0> + i|1>)/sqrt2.
    Polarization names H and V are accepted for every DOF as its first/second level.
    """
    dof = _dof(dof)
    label = label.replace("ℓ", "l")
    levels = MAPPING.levels[dof]
    if label in levels:
        v = np.zeros(2, dtype=complex)
        v[levels.index(label)] = 1
        return v
    table = {
        "H": [1, 0],
        "V": [0, 1],
        "+": [1 / SQRT2, 1 / SQRT2],
        "D": [1 / SQRT2, 1 / SQRT2],
        "-": [1 / SQRT2, -1 / SQRT2],
        "R": [1 / SQRT2, -1j / SQRT2],
        "L": [1 / SQRT2, 1j / SQRT2],
    }
    if label not in table:
        raise ValueError(f"unknown state label {label!r} for DOF {dof}")
    return np.array(table[label], dtype=complex)


def pair_ket(dof: str, labels) -> np.ndarray:
    """Two-photon product state ``|a>_A |b>_B`` of one DOF, e.g. ``pair_ket("k", "rl")``."""
    a, b = labels
    return np.kron(dof_ket(dof, a), dof_ket(dof, b))


_BELL = {
    "phi+": np.array([1, 0, 0, 1]) / SQRT2,
    "phi-": np.array([1, 0, 0, -1]) / SQRT2,
    "psi+": np.array([0, 1, 1, 0]) / SQRT2,
    "psi-": np.array([0, 1, -1, 0]) / SQRT2,
}


@dataclass(frozen=True)
class BellStateId:
    family: str
    dof: str

    def __post_init__(self):
        if self.family not in _BELL:
            raise ValueError(f"unknown Bell family {self.family!r}")
        object.__setattr__(self, "dof", _dof(self.dof))

    def state(self) -> np.ndarray:
        """Two-qubit vector in (photon A, photon B) order."""
        return _BELL[self.family].astype(complex)

    def __str__(self) -> str:
        return f"{self.family}_{self.dof}"

    @classmethod
    def parse(cls, text: str) -> "BellStateId":
        family, dof = text.split("_")
        return cls(family, dof)


def bell(family: str, dof: str = "pi") -> np.ndarray:
    return BellStateId(family, dof).state()


def embed(pairs: dict) -> np.ndarray:
    """Place one two-photon vector per DOF onto the six qubits.

    ``pairs`` maps each of ``c``, ``pi``, ``k`` to a length-4 (A, B) vector.
    """
    t = {d: np.asarray(pairs[d], dtype=complex).reshape(2, 2) for d in DOFS}
    # index order (c_A, pi_A, k_A, c_B, pi_B, k_B) = qubits 1..6
    psi = np.einsum("ad,be,cf->abcdef", t["c"], t["pi"], t["k"])
    return psi.reshape(-1)


def build_he6() -> np.ndarray:
    """Tensor product of the three Bell pairs emitted by the source."""
    return embed({
        "c": bell("phi+", "c"),
        "pi": bell("phi-", "pi"),
        "k": bell("psi+", "k"),
    })


def he6_mode_expansion() -> np.ndarray:
    """The same state written as the polarization pair times four mode pairs."""
    modes = [("Er", "El"), ("El", "Er"), ("Ir", "Il"), ("Il", "Ir")]
    psi = np.zeros(64, dtype=complex)
    for a, b in modes:
        psi += 0.5 * embed({
            "c": pair_ket("c", (a[0], b[0])),
            "pi": bell("phi-", "pi"),
            "k": pair_ket("k", (a[1], b[1])),
        })
    return psi


def he6_graph_form() -> np.ndarray:
    """Frame transform applied to the three-edge graph state."""
    return LAB_FRAME.apply_to_state(build_cluster(HE6_GRAPH))


# CX_12 then CZ_65: the two wave plates applied after the source
LC6_GATES = (GateSpec("CX", (1, 2)), GateSpec("CZ", (6, 5)))


def build_lc6_tilde() -> np.ndarray:
    return apply_gates(build_he6(), LC6_GATES)


def build_lc6() -> np.ndarray:
    """Canonical linear cluster in the cluster frame."""
    return build_cluster(LC6_GRAPH)


def lc6_tilde_via_frame() -> np.ndarray:
    return LAB_FRAME.apply_to_state(build_lc6())


def _term(c, pi, k) -> np.ndarray:
    return embed({"c": c, "pi": pi, "k": k})


def factorization(form: str) -> np.ndarray:
    """Four-term expansions of the laboratory cluster, one Bell pair per term.

    ``form`` names the DOF carrying the Bell pairs: ``"pi"``, ``"k"`` or ``"c"``.
    """
    form = _dof(form)
    c, p, k = (lambda lab: pair_ket("c", lab)), (lambda lab: pair_ket("pi", lab)), (lambda lab: pair_ket("k", lab))
    if form == "pi":
        terms = [
            _term(c("EE"), bell("phi+", "pi"), k("rl")),
            _term(c("EE"), bell("phi-", "pi"), k("lr")),
            _term(c("II"), bell("psi+", "pi"), k("rl")),
            -_term(c("II"), bell("psi-", "pi"), k("lr")),
        ]
    elif form == "k":
        terms = [
            _term(c("EE"), p("HH"), bell("psi+", "k")),
            _term(c("EE"), p("VV"), bell("psi-", "k")),
            _term(c("II"), p("VH"), bell("psi+", "k")),
            _term(c("II"), p("HV"), bell("psi-", "k")),
        ]
    elif form == "c":
        terms = [
            _term(bell("phi+", "c"), p("++"), k("rl")),
            _term(bell("phi-", "c"), p("--"), k("rl")),
            _term(bell("phi+", "c"), p("+-"), k("lr")),
            _term(bell("phi-", "c"), p("-+"), k("lr")),
        ]
    else:
        raise ValueError(f"unknown factorization form {form!r}")
    return 0.5 * sum(terms)


def _selector_projector(selector: dict) -> dict:
    out = {}
    for dof, labels in selector.items():
        out[_dof(dof)] = pair_ket(dof, labels)
    return out


def conditional_state(selector: dict, output_dof: str, psi: np.ndarray | None = None):
    """Project two DOFs onto a product branch; return ``(probability, state)``.

    ``selector`` names the (A, B) labels of the two conditioned DOFs, e.g.
    ``{"c": "EE", "k": "rl"}``. The returned two-qubit state of
    ``output_dof`` is normalized and in (A, B) order.
    """
    output_dof = _dof(output_dof)
    proj = _selector_projector(selector)
    if set(proj) | {output_dof} != set(DOFS) or output_dof in proj:
        raise ValueError("selector must fix exactly the two DOFs other than output_dof")
    psi = build_lc6_tilde() if psi is None else np.asarray(psi, dtype=complex)
    t = psi.reshape([2] * 6)
    # regroup to (c_A c_B, pi_A pi_B, k_A k_B)
    t = t.transpose(0, 3, 1, 4, 2, 5).reshape(4, 4, 4)
    vecs = {d: proj.get(d) for d in DOFS}
    for axis, d in reversed(list(enumerate(DOFS))):
        if vecs[d] is not None:
            t = np.tensordot(t, vecs[d].conj(), axes=([axis], [0]))
    amp = t.reshape(4)
    prob = float(np.vdot(amp, amp).real)
    if prob < 1e-12:
        return 0.0, amp
    return prob, amp / np.sqrt(prob)


class EmptyBranchError(ValueError):
    """Selected branch has zero amplitude."""


def conditional_bell(selector: dict, output_dof: str, psi: np.ndarray | None = None) -> BellStateId:
    prob, state = conditional_state(selector, output_dof, psi)
    if prob == 0.0:
        raise EmptyBranchError(f"branch {selector} has zero amplitude")
    for family, vec in _BELL.items():
        if abs(np.vdot(vec, state)) > 1 - 1e-10:
            return BellStateId(family, output_dof)
    raise ValueError(f"branch {selector} does not leave a Bell state on {output_dof}")


def basis_label(index: int) -> str:
    """Per-DOF (A, B) labels of a computational index, e.g. ``"EE,HH,rl"``."""
    bits = format(index, "06b")
    parts = []
    for d in DOFS:
        qa, qb = MAPPING.qubits[d]
        lv = MAPPING.levels[d]
        parts.append(lv[int(bits[qa - 1])] + lv[int(bits[qb - 1])])
    return ",".join(parts)


def cx_h_cz_identity_check(tol: float = 1e-12) -> bool:
    """CX_ij H_j == H_j CZ_ij as matrices, plus the full six-qubit equivalence chain."""
    lhs = gate_unitary([GateSpec("H", (2,)), GateSpec("CX", (1, 2))], 2)
    rhs = gate_unitary([GateSpec("CZ", (1, 2)), GateSpec("H", (2,))], 2)
    if not np.allclose(lhs, rhs, atol=tol):
        return False
    checks = identity_checks()
    return all(v >= 1 - 1e-10 for k, v in checks.items())


def identity_checks() -> dict:
    """Overlap magnitudes |<a|b>| for each state identity of the construction."""
    he6_graph = build_cluster(HE6_GRAPH)
    line2 = apply_gates(LAB_FRAME.apply_to_state(he6_graph), LC6_GATES)
    line3 = LAB_FRAME.apply_to_state(apply_gates(he6_graph, (GateSpec("CZ", (1, 2)), GateSpec("CZ", (6, 5)))))
    lc6t = build_lc6_tilde()
    pairs = {
        "he6_mode_expansion": (build_he6(), he6_mode_expansion()),
        "he6_graph_frame": (build_he6(), he6_graph_form()),
        "lc6_chain_line2_line3": (line2, line3),
        "lc6_tilde_frame": (lc6t, lc6_tilde_via_frame()),
        "factorization_pi": (lc6t, factorization("pi")),
        "factorization_k": (lc6t, factorization("k")),
        "factorization_c": (lc6t, factorization("c")),
    }
    return {name: float(abs(np.vdot(a, b))) for name, (a, b) in pairs.items()}

