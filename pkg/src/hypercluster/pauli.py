"""Signed Pauli strings in the symplectic (x, z) bit representation.

Qubits are labelled 1..n in the public API; qubit ``q`` lives in bit ``q - 1``
of the ``x`` and ``z`` masks. A factor with both bits set is the Hermitian
``Y``, so the ``phase`` field is exactly the scalar in front of the tensor
product of Hermitian factors.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_PHASES = {0: 1, 1: 1j, 2: -1, 3: -1j}
_PHASE_LABELS = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_CHARS = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
_BITS = {v: k for k, v in _CHARS.items()}


class DimensionError(ValueError):
    """Operands act on different numbers of qubits."""


class NormalizationError(ValueError):
    """A state vector or density matrix is not normalized."""


def _single_exponent(x1: int, z1: int, x2: int, z2: int) -> int:
    # power of i picked up by P(x1,z1) * P(x2,z2) for Hermitian single-qubit Paulis
    if x1 == 0 and z1 == 0:
        return 0
    if x1 == 1 and z1 == 1:
        return z2 - x2
    if x1 == 1:
        return z2 * (2 * x2 - 1)
    return x2 * (1 - 2 * z2)


@dataclass(frozen=True)
class PauliString:
    n_qubits: int
    x_bits: int = 0
    z_bits: int = 0
    phase_power: int = 0  # phase is i**phase_power

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        limit = 1 << self.n_qubits
        if not (0 <= self.x_bits < limit and 0 <= self.z_bits < limit):
            raise ValueError("bitmask exceeds n_qubits")
        object.__setattr__(self, "phase_power", self.phase_power % 4)

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliString":
        return cls(n_qubits)

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Parse labels such as ``"+XZIZII"``, ``"-YI"`` or ``"iZ"``."""
        s = label.strip()
        power = 0
        if s.startswith("-"):
            power, s = 2, s[1:]
        elif s.startswith("+"):
            s = s[1:]
        if s.startswith("i"):
            power, s = power + 1, s[1:]
        if not s or any(c not in _BITS for c in s):
            raise ValueError(f"bad Pauli label {label!r}")
        x = z = 0
        for q, c in enumerate(s):
            xb, zb = _BITS[c]
            x |= xb << q
            z |= zb << q
        return cls(len(s), x, z, power)

    @classmethod
    def from_factors(cls, n_qubits: int, factors: dict[int, str], sign: int = 1) -> "PauliString":
        """Build from ``{qubit: 'X' | 'Y' | 'Z'}`` using 1-based qubit labels."""
        chars = ["I"] * n_qubits
        for q, c in factors.items():
            if not 1 <= q <= n_qubits:
                raise ValueError(f"qubit {q} out of range")
            chars[q - 1] = c
        return cls.from_label(("-" if sign < 0 else "+") + "".join(chars))

    @property
    def phase(self) -> complex:
        return _PHASES[self.phase_power]

    @property
    def is_hermitian(self) -> bool:
        return self.phase_power in (0, 2)

    def factor(self, q: int) -> str:
        b = q - 1
        return _CHARS[((self.x_bits >> b) & 1, (self.z_bits >> b) & 1)]

    @property
    def label(self) -> str:
        return _PHASE_LABELS[self.phase_power] + "".join(
            self.factor(q) for q in range(1, self.n_qubits + 1)
        )

    def __str__(self) -> str:
        return self.label

    def __mul__(self, other: "PauliString") -> "PauliString":
        return pauli_mul(self, other)

    def __neg__(self) -> "PauliString":
        return PauliString(self.n_qubits, self.x_bits, self.z_bits, self.phase_power + 2)

    def same_operator(self, other: "PauliString") -> bool:
        """Equality ignoring the phase."""
        return (self.n_qubits, self.x_bits, self.z_bits) == (other.n_qubits, other.x_bits, other.z_bits)

    def is_identity(self) -> bool:
        return self.x_bits == 0 and self.z_bits == 0

    def commutes_with(self, other: "PauliString") -> bool:
        _check_sizes(self, other)
        sym = bin(self.x_bits & other.z_bits).count("1") + bin(self.z_bits & other.x_bits).count("1")
        return sym % 2 == 0

    def to_matrix(self) -> np.ndarray:
        mats = {
            "I": np.eye(2),
            "X": np.array([[0, 1], [1, 0]]),
            "Y": np.array([[0, -1j], [1j, 0]]),
            "Z": np.diag([1, -1]),
        }
        m = np.array([[self.phase]], dtype=complex)
        for q in range(1, self.n_qubits + 1):
            m = np.kron(m, mats[self.factor(q)])
        return m


def _check_sizes(a: PauliString, b: PauliString) -> None:
    if a.n_qubits != b.n_qubits:
        raise DimensionError(f"{a.n_qubits}-qubit vs {b.n_qubits}-qubit Pauli string")


def pauli_mul(a: PauliString, b: PauliString) -> PauliString:
    """Operator product ``a @ b`` with exact phase."""
    _check_sizes(a, b)
    power = a.phase_power + b.phase_power
    for bit in range(a.n_qubits):
        power += _single_exponent(
            (a.x_bits >> bit) & 1, (a.z_bits >> bit) & 1, (b.x_bits >> bit) & 1, (b.z_bits >> bit) & 1
        )
    return PauliString(a.n_qubits, a.x_bits ^ b.x_bits, a.z_bits ^ b.z_bits, power)


def pauli_support(p: PauliString) -> set[int]:
    """1-based labels of the qubits where ``p`` acts non-trivially."""
    mask = p.x_bits | p.z_bits
    return {b + 1 for b in range(p.n_qubits) if (mask >> b) & 1}


def _index_mask(mask: int, n: int) -> int:
    # qubit q (bit q-1 of a Pauli mask) is bit n-q of an amplitude index
    out = 0
    for b in range(n):
        if (mask >> b) & 1:
            out |= 1 << (n - 1 - b)
    return out


_POPCOUNT = np.array([bin(i).count("1") for i in range(1 << 12)], dtype=np.int64)


def _action(p: PauliString) -> tuple[int, np.ndarray]:
    """Return (flip mask, coefficient per input index) with P|i> = c_i |i ^ flip>."""
    n = p.n_qubits
    if n > 12:
        raise ValueError("dense Pauli action limited to 12 qubits")
    xm = _index_mask(p.x_bits, n)
    zm = _index_mask(p.z_bits, n)
    idx = np.arange(1 << n)
    # P = phase * i^{|x&z|} X^x Z^z, and Z^z acts first
    coeff = p.phase * 1j ** int(_POPCOUNT[p.x_bits & p.z_bits])
    return xm, coeff * (1 - 2 * (_POPCOUNT[idx & zm] & 1))


def apply_pauli(p: PauliString, psi: np.ndarray) -> np.ndarray:
    """Return ``p |psi>`` without forming the dense operator."""
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (1 << p.n_qubits,):
        raise DimensionError(f"state of length {psi.size} for {p.n_qubits}-qubit Pauli string")
    xm, c = _action(p)
    out = np.empty_like(psi)
    out[np.arange(psi.size) ^ xm] = c * psi
    return out


def pauli_expectation(p: PauliString, state: np.ndarray, atol: float = 1e-10) -> float:
    """Expectation of a Hermitian Pauli string on a state vector or density matrix."""
    if not p.is_hermitian:
        raise ValueError(f"{p.label} is not Hermitian")
    state = np.asarray(state, dtype=complex)
    if state.ndim == 1:
        norm = np.vdot(state, state).real
        if abs(norm - 1) > atol:
            raise NormalizationError(f"state norm^2 is {norm}")
        return float(np.vdot(state, apply_pauli(p, state)).real)
    dim = 1 << p.n_qubits
    if state.shape != (dim, dim):
        raise DimensionError("density matrix does not match Pauli string size")
    tr = np.trace(state).real
    if abs(tr - 1) > atol:
        raise NormalizationError(f"density matrix trace is {tr}")
    xm, c = _action(p)
    idx = np.arange(dim)
    # Tr(P rho) = sum_i c_i rho[i, i ^ x]
    return float(np.sum(c * state[idx, idx ^ xm]).real)
