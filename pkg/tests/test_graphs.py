import numpy as np
import pytest

from conftest import dense_pauli
from hypercluster.graphs import (
    CLUSTER,
    HE6_GRAPH,
    LAB_FRAME,
    LABORATORY,
    LC6_GRAPH,
    FrameTransform,
    GraphState,
    StabilizerSet,
    apply_frame,
    build_cluster,
    conjugate_single,
    parse_subset_label,
    path_graph,
    stabilizer_group,
    stabilizers_of,
    subset_label,
)
from hypercluster.he6 import build_he6, build_lc6_tilde
from hypercluster.pauli import PauliString, pauli_expectation, pauli_mul
from hypercluster.statevec import H, X, GateSpec, state_equal_up_to_global_phase

# frozen from conjugating each cluster generator by hand with the five local gates
LAB_GENERATORS = ["+XXIXII", "+ZZIIZI", "-IIZIIZ", "+ZIIZII", "-IXIIXZ", "+IIXIZX"]
CLUSTER_GENERATORS = ["+XZIZII", "+ZXIIZI", "+IIXIIZ", "+ZIIXII", "+IZIIXZ", "+IIZIZX"]


def substitute(label: str) -> str:
    """String-rewriting oracle for the per-qubit substitution rules of the frame."""
    rules = {2: {"X": (1, "Z"), "Z": (1, "X")}, 3: {"X": (-1, "Z"), "Z": (1, "X")},
             4: {"X": (1, "Z"), "Z": (1, "X")}, 5: {"X": (-1, "X"), "Z": (1, "Z")}}
    sign = -1 if label[0] == "-" else 1
    out = []
    for q, c in enumerate(label[1:], 1):
        if q in rules and c in rules[q]:
            s, c = rules[q][c]
            sign *= s
        out.append(c)
    return ("+" if sign > 0 else "-") + "".join(out)


def test_graph_validation():
    with pytest.raises(ValueError):
        GraphState(3, [(1, 1)])
    with pytest.raises(ValueError):
        GraphState(3, [(1, 4)])
    assert GraphState(3, [(2, 1)]).edges == frozenset({(1, 2)})


def test_two_vertex_cluster():
    assert np.allclose(build_cluster(path_graph(2)), np.array([1, 1, 1, -1]) / 2)
    with pytest.raises(ValueError):
        build_cluster(path_graph(13))


@pytest.mark.parametrize("g", [path_graph(6), LC6_GRAPH, HE6_GRAPH, GraphState(5, [(1, 2), (1, 3), (1, 4), (4, 5)])])
def test_cluster_is_stabilized(g):
    psi = build_cluster(g)
    for p in stabilizers_of(g).generators:
        assert abs(pauli_expectation(p, psi) - 1) < 1e-12
        assert np.allclose(dense_pauli(p.label) @ psi, psi, atol=1e-12)


def test_generator_examples():
    lc = stabilizers_of(path_graph(6)).generators
    assert lc[0].label == "+XZIIII"
    assert lc[2].label == "+IZXZII"
    assert stabilizers_of(HE6_GRAPH).generators[1].label == "+IXIIZI"
    assert [g.label for g in stabilizers_of(LC6_GRAPH).generators] == CLUSTER_GENERATORS


def test_he6_graph_frame_gives_source_state():
    assert state_equal_up_to_global_phase(LAB_FRAME.apply_to_state(build_cluster(HE6_GRAPH)), build_he6())


def test_lc6_graph_frame_gives_lab_state():
    assert state_equal_up_to_global_phase(LAB_FRAME.apply_to_state(build_cluster(LC6_GRAPH)), build_lc6_tilde())


def test_frame_reproduces_substitution_table():
    cl = stabilizers_of(LC6_GRAPH)
    lab = apply_frame(cl, LAB_FRAME)
    assert lab.frame == LABORATORY
    assert [g.label for g in lab.generators] == [substitute(g.label) for g in cl.generators]
    assert [g.label for g in lab.generators] == LAB_GENERATORS


def test_frame_single_rules():
    assert conjugate_single(LAB_FRAME.local_unitary(3), "X") == (-1, "Z")
    assert conjugate_single(LAB_FRAME.local_unitary(3), "Z") == (1, "X")
    assert conjugate_single(LAB_FRAME.local_unitary(5), "X") == (-1, "X")
    # X3 H3 conjugating X3, checked as explicit 2x2 matrices
    u = X @ H
    assert np.allclose(u @ X @ u.conj().T, -np.diag([1, -1]))


def test_identity_frame_and_round_trip():
    cl = stabilizers_of(LC6_GRAPH)
    same = apply_frame(cl, FrameTransform(()))
    assert same.generators == cl.generators
    back = apply_frame(apply_frame(cl, LAB_FRAME), LAB_FRAME.dagger())
    assert back.generators == cl.generators and back.frame == CLUSTER


def test_non_clifford_rejected():
    t = FrameTransform((GateSpec("RX", (1,), 0.3),))
    with pytest.raises(ValueError):
        apply_frame(stabilizers_of(path_graph(2)), t)
    with pytest.raises(ValueError):
        FrameTransform((GateSpec("CZ", (1, 2)),))


def test_commuting_generators_required():
    with pytest.raises(ValueError):
        StabilizerSet((PauliString.from_label("XI"), PauliString.from_label("ZI")))


@pytest.mark.parametrize("frame", [CLUSTER, LABORATORY])
def test_group_enumeration_and_closure(frame):
    s = stabilizers_of(LC6_GRAPH)
    if frame == LABORATORY:
        s = apply_frame(s, LAB_FRAME)
    group = stabilizer_group(s)
    assert len(group) == 64 and group[0][0] == 0 and group[0][1].is_identity()
    ops = {(p.x_bits, p.z_bits, p.phase_power) for _, p in group}
    assert len(ops) == 64
    for _, a in group:
        assert a.is_hermitian
        for _, b in group:
            c = pauli_mul(a, b)
            assert (c.x_bits, c.z_bits, c.phase_power) in ops
    psi = build_lc6_tilde() if frame == LABORATORY else build_cluster(LC6_GRAPH)
    assert all(abs(pauli_expectation(p, psi) - 1) < 1e-12 for _, p in group)


def test_dependent_generators_detected():
    a = PauliString.from_label("ZZ")
    with pytest.raises(ValueError):
        stabilizer_group(StabilizerSet((a, a)))


def test_subset_labels():
    assert subset_label(0b001001) == "g1*g4"
    assert subset_label(0) == "1"
    for m in range(64):
        assert parse_subset_label(subset_label(m)) == m
    with pytest.raises(ValueError):
        parse_subset_label("g7")
    with pytest.raises(ValueError):
        parse_subset_label("g1*g1")
