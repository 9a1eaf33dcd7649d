"""Dense state-vector and density-matrix kernel.

States are plain complex numpy arrays: a pure state on ``n`` qubits has shape
``(2**n,)``, a density matrix ``(2**n, 2**n)``. Qubit 1 is the most
significant bit of the computational-basis index.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .pauli import DimensionError, NormalizationError

SQRT2 = np.sqrt(2.0)

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / SQRT2

KET0 = np.array([1, 0], dtype=complex)
KET1 = np.array([0, 1], dtype=complex)
KET_PLUS = np.array([1, 1], dtype=complex) / SQRT2
KET_MINUS = np.array([1, -1], dtype=complex) / SQRT2


def rx(angle: float) -> np.ndarray:
    """exp(-i angle X / 2)."""
    return np.cos(angle / 2) * I2 - 1j * np.sin(angle / 2) * X


def rz(angle: float) -> np.ndarray:
    """exp(-i angle Z / 2)."""
    return np.cos(angle / 2) * I2 - 1j * np.sin(angle / 2) * Z


_FIXED = {"H": H, "X": X, "Y": Y, "Z": Z, "I": I2}


@dataclass(frozen=True)
class GateSpec:
    """A gate on 1-based qubit labels.

    ``kind`` is one of ``H X Y Z I CZ CX RX RZ U``. For ``CX`` the targets are
    ``(control, target)``; ``U`` carries an explicit 2x2 ``matrix``.
    """

    kind: str
    targets: tuple[int, ...]
    angle: float | None = None
    matrix: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        kind = self.kind.upper()
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        arity = 2 if kind in ("CZ", "CX") else 1
        if len(self.targets) != arity:
            raise ValueError(f"{kind} takes {arity} target(s), got {self.targets}")
        if arity == 2 and self.targets[0] == self.targets[1]:
            raise ValueError(f"{kind} control and target coincide")
        if kind in ("RX", "RZ") and self.angle is None:
            raise ValueError(f"{kind} needs an angle")
        if kind == "U":
            m = np.asarray(self.matrix, dtype=complex)
            if m.shape != (2, 2) or not np.allclose(m.conj().T @ m, I2, atol=1e-12):
                raise ValueError("U gate needs a 2x2 unitary matrix")
            object.__setattr__(self, "matrix", m)
        elif kind not in _FIXED and kind not in ("CZ", "CX", "RX", "RZ"):
            raise ValueError(f"unknown gate kind {kind!r}")

    def unitary(self) -> np.ndarray:
        """2x2 or 4x4 matrix; for two-qubit gates the first target is the high bit."""
        if self.kind in _FIXED:
            return _FIXED[self.kind]
        if self.kind == "RX":
            return rx(self.angle)
        if self.kind == "RZ":
            return rz(self.angle)
        if self.kind == "U":
            return self.matrix
        if self.kind == "CZ":
            return np.diag([1, 1, 1, -1]).astype(complex)
        return np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)

    def dagger(self) -> "GateSpec":
        if self.kind in ("RX", "RZ"):
            return GateSpec(self.kind, self.targets, -self.angle)
        if self.kind == "U":
            return GateSpec("U", self.targets, matrix=self.matrix.conj().T)
        return self  # the remaining fixed gates are Hermitian


def n_qubits_of(psi: np.ndarray) -> int:
    size = psi.shape[0]
    n = size.bit_length() - 1
    if size != 1 << n or n < 1:
        raise DimensionError(f"length {size} is not a power of two")
    return n


def ket(bits) -> np.ndarray:
    """Computational basis state, e.g. ``ket("0101")`` or ``ket([0, 1])``."""
    bits = [int(b) for b in bits]
    v = np.zeros(1 << len(bits), dtype=complex)
    v[int("".join(map(str, bits)), 2)] = 1
    return v


def product_state(*factors: np.ndarray) -> np.ndarray:
    out = np.array([1], dtype=complex)
    for f in factors:
        out = np.kron(out, np.asarray(f, dtype=complex))
    return out


def plus_state(n: int) -> np.ndarray:
    return np.full(1 << n, (1 / SQRT2) ** n, dtype=complex)


def density(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def _check_qubit(q: int, n: int) -> None:
    if not 1 <= q <= n:
        raise ValueError(f"qubit {q} out of range 1..{n}")


def apply_matrix(psi: np.ndarray, u: np.ndarray, qubits: tuple[int, ...]) -> np.ndarray:
    """Apply a ``2**k`` square matrix to the listed qubits (first listed = high bit)."""
    psi = np.asarray(psi, dtype=complex)
    n = n_qubits_of(psi)
    for q in qubits:
        _check_qubit(q, n)
    if len(set(qubits)) != len(qubits):
        raise ValueError(f"repeated qubits {qubits}")
    k = len(qubits)
    t = psi.reshape([2] * n)
    axes = [q - 1 for q in qubits]
    t = np.tensordot(u.reshape([2] * (2 * k)), t, axes=(list(range(k, 2 * k)), axes))
    t = np.moveaxis(t, list(range(k)), axes)
    return t.reshape(-1)


def apply_gate(psi: np.ndarray, g: GateSpec) -> np.ndarray:
    return apply_matrix(psi, g.unitary(), g.targets)


def apply_gates(psi: np.ndarray, gates) -> np.ndarray:
    """Apply gates in time order (first element acts first)."""
    for g in gates:
        psi = apply_gate(psi, g)
    return psi


def gate_unitary(gates, n: int) -> np.ndarray:
    """Dense unitary of a gate sequence in time order."""
    cols = [apply_gates(ket(format(i, f"0{n}b")), gates) for i in range(1 << n)]
    return np.stack(cols, axis=1)


def _check_basis(basis) -> tuple[np.ndarray, np.ndarray]:
    b0, b1 = (np.asarray(b, dtype=complex) for b in basis)
    gram = np.array([[np.vdot(a, b) for b in (b0, b1)] for a in (b0, b1)])
    if not np.allclose(gram, I2, atol=1e-12):
        raise ValueError("measurement basis is not orthonormal")
    return b0, b1


def project_qubit(psi: np.ndarray, q: int, vec: np.ndarray) -> np.ndarray:
    """Unnormalized ``<vec|_q psi`` on the remaining qubits (order kept)."""
    n = n_qubits_of(psi)
    _check_qubit(q, n)
    if n == 1:
        return np.array([np.vdot(vec, psi)])
    t = np.asarray(psi, dtype=complex).reshape([2] * n)
    return np.tensordot(np.conj(vec), t, axes=([0], [q - 1])).reshape(-1)


def measure_qubit(psi: np.ndarray, q: int, basis, rng=None, outcome: int | None = None):
    """Projective measurement of qubit ``q`` in an orthonormal ``basis = (b0, b1)``.

    Pass ``outcome`` to force a branch, otherwise an outcome is drawn from
    ``rng`` (a ``numpy.random.Generator``). Returns ``(s, probability,
    post_state)`` where the post-measurement state has qubit ``q`` removed.
    """
    vecs = _check_basis(basis)
    branches = [project_qubit(psi, q, v) for v in vecs]
    probs = [float(np.vdot(b, b).real) for b in branches]
    total = sum(probs)
    if abs(total - 1) > 1e-10:
        raise NormalizationError(f"state norm^2 is {total}")
    if outcome is None:
        if rng is None:
            raise ValueError("need rng or a forced outcome")
        outcome = int(rng.random() >= probs[0])
    if outcome not in (0, 1):
        raise ValueError("outcome must be 0 or 1")
    p = probs[outcome]
    if p < 1e-12:
        raise ValueError(f"outcome {outcome} has zero probability")
    return outcome, p, branches[outcome] / np.sqrt(p)


def partial_trace(rho: np.ndarray, keep) -> np.ndarray:
    """Reduced density matrix on ``keep`` (1-based labels, returned in ascending order)."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim == 1:
        rho = density(rho)
    n = n_qubits_of(rho)
    keep = sorted(set(keep))
    if not keep:
        raise ValueError("keep set is empty")
    for q in keep:
        _check_qubit(q, n)
    drop = [q - 1 for q in range(1, n + 1) if q not in keep]
    t = rho.reshape([2] * (2 * n))
    # trace pairs from the highest axis down so remaining indices stay valid
    for i, ax in enumerate(sorted(drop, reverse=True)):
        m = n - i
        t = np.trace(t, axis1=ax, axis2=ax + m)
    d = 1 << len(keep)
    return t.reshape(d, d)


def fidelity(rho: np.ndarray, psi_target: np.ndarray) -> float:
    """``<psi|rho|psi>``; ``rho`` may itself be a pure state vector."""
    psi = np.asarray(psi_target, dtype=complex)
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim == 1:
        if rho.shape != psi.shape:
            raise DimensionError("dimension mismatch")
        return float(abs(np.vdot(psi, rho)) ** 2)
    if rho.shape != (psi.size, psi.size):
        raise DimensionError("dimension mismatch")
    return float(np.vdot(psi, rho @ psi).real)


def state_equal_up_to_global_phase(a: np.ndarray, b: np.ndarray, tol: float = 1e-10) -> bool:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise DimensionError("dimension mismatch")
    return bool(abs(np.vdot(a, b)) >= 1 - tol)


def check_density(rho: np.ndarray, tol: float = 1e-10, pos_tol: float = 1e-8) -> None:
    """Raise ``ValueError`` unless ``rho`` is Hermitian, unit-trace and positive."""
    rho = np.asarray(rho, dtype=complex)
    if not np.allclose(rho, rho.conj().T, atol=tol):
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1) > tol:
        raise NormalizationError("density matrix trace is not 1")
    if np.linalg.eigvalsh(rho).min() < -pos_tol:
        raise ValueError("density matrix is not positive semidefinite")


def schmidt_rank(psi: np.ndarray, part, tol: float = 1e-10) -> int:
    """Schmidt rank of ``psi`` across ``part`` | rest."""
    n = n_qubits_of(psi)
    part = sorted(part)
    rest = [q for q in range(1, n + 1) if q not in part]
    t = np.asarray(psi).reshape([2] * n).transpose([q - 1 for q in part + rest])
    sv = np.linalg.svd(t.reshape(1 << len(part), -1), compute_uv=False)
    return int(np.sum(sv > tol))
