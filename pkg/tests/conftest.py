"""Shared independent oracles: explicit Kronecker products instead of the package kernels."""
import numpy as np
import pytest

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
PHASE = {"+": 1, "-": -1, "+i": 1j, "-i": -1j}


def dense_pauli(label: str) -> np.ndarray:
    """Matrix of a label such as '-iXZY', built by kron only."""
    for prefix in ("+i", "-i", "+", "-"):
        if label.startswith(prefix):
            phase, body = PHASE[prefix], label[len(prefix):]
            break
    else:
        phase, body = 1, label
    m = np.array([[phase]], dtype=complex)
    for c in body:
        m = np.kron(m, PAULI[c])
    return m


def embed_1q(u: np.ndarray, q: int, n: int) -> np.ndarray:
    m = np.array([[1]], dtype=complex)
    for k in range(1, n + 1):
        m = np.kron(m, u if k == q else np.eye(2))
    return m


def controlled(u: np.ndarray, c: int, t: int, n: int) -> np.ndarray:
    p0 = np.diag([1, 0]).astype(complex)
    p1 = np.diag([0, 1]).astype(complex)
    return embed_1q(p0, c, n) + embed_1q(p1, c, n) @ embed_1q(u, t, n)


def random_state(rng, n: int) -> np.ndarray:
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return v / np.linalg.norm(v)


def random_density(rng, n: int, rank: int | None = None) -> np.ndarray:
    d = 1 << n
    a = rng.normal(size=(d, rank or d)) + 1j * rng.normal(size=(d, rank or d))
    r = a @ a.conj().T
    return r / np.trace(r).real


def random_unitary(rng, d: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)))
    return q * (np.diag(r) / abs(np.diag(r)))


@pytest.fixture
def rng():
    return np.random.default_rng(20260601)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
