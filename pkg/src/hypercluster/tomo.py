"""Simulated two-qubit tomography of one degree of freedom.

Counts are simulated for the 16-setting analysis set on a single DOF after
projecting the other two DOFs onto a product branch, then inverted linearly
and refined by maximum likelihood over the triangular factorization
``rho = T^dagger T / Tr(T^dagger T)`` with Poisson statistics.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .data import load_json
from .he6 import DOFS, MAPPING, BellStateId, _dof, build_lc6_tilde, dof_ket, embed, pair_ket
from .statevec import density

DEFAULT_RATE = 500.0  # coincidences per second
DEFAULT_TIME = 20.0  # seconds per setting
BRANCH_WEIGHT = 0.25  # ideal probability of each product branch


@dataclass(frozen=True)
class NoiseModel:
    """Phase-flip probability per qubit of each DOF plus a white-noise fraction."""

    p_pi: float = 0.0
    p_k: float = 0.0
    p_c: float = 0.0
    w: float = 0.0

    def __post_init__(self):
        for name in ("p_pi", "p_k", "p_c", "w"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v} outside [0, 1]")

    def dephasing(self, dof: str) -> float:
        return {"pi": self.p_pi, "k": self.p_k, "c": self.p_c}[_dof(dof)]


# Illustrative preset from a coarse grid search so that the nine simulated
# branch fidelities fall in [0.79, 0.94] with the E/I row lowest.
CALIBRATED_NOISE = NoiseModel(p_pi=0.06, p_k=0.045, p_c=0.10, w=0.08)


def _z_signs(q: int, n: int = 6) -> np.ndarray:
    idx = np.arange(1 << n)
    return 1 - 2 * ((idx >> (n - q)) & 1)


def apply_noise(psi: np.ndarray, nm: NoiseModel, rng=None) -> np.ndarray:
    """Closed-form channel: per-qubit dephasing by DOF, then white-noise mixing.

    ``rng`` is accepted for call-site symmetry with the sampling functions and
    is not used.
    """
    rho = density(psi)
    n = int(np.log2(rho.shape[0]))
    for dof in DOFS:
        p = nm.dephasing(dof)
        if p == 0:
            continue
        for q in MAPPING.qubits[dof]:
            d = _z_signs(q, n)
            rho = (1 - p) * rho + p * (rho * np.outer(d, d))
    if nm.w:
        rho = (1 - nm.w) * rho + nm.w * np.eye(rho.shape[0]) / rho.shape[0]
    return rho


@dataclass(frozen=True)
class AnalysisSetting:
    """Projection of photon A onto ``a`` and photon B onto ``b`` (polarization-style names)."""

    label: str

    @property
    def a(self) -> str:
        return self.label[0]

    @property
    def b(self) -> str:
        return self.label[1]

    def vector(self, dof: str = "pi") -> np.ndarray:
        """Two-qubit analysis state in (A, B) order, with H/V read as the DOF's two levels."""
        return np.kron(dof_ket(dof, self.a), dof_ket(dof, self.b))


def standard_settings() -> list[AnalysisSetting]:
    return [AnalysisSetting(s) for s in load_json("tomography_settings.json")["settings"]]


@dataclass(frozen=True)
class CountRecord:
    setting: str
    count: int
    mean: float
    time: float = DEFAULT_TIME
    rate: float = DEFAULT_RATE

    def to_dict(self) -> dict:
        return {"setting": self.setting, "count": self.count, "mean": self.mean, "time": self.time, "rate": self.rate}


def _normalize_branch(dof: str, branch: dict) -> tuple[str, dict]:
    dof = _dof(dof)
    branch = {_dof(k): v for k, v in branch.items()}
    if dof in branch or set(branch) | {dof} != set(DOFS):
        raise ValueError("branch must fix exactly the two DOFs other than the tomographed one")
    return dof, branch


def setting_projector(dof: str, branch: dict, setting: AnalysisSetting) -> np.ndarray:
    """Six-qubit ket of the branch selector times the analysis state."""
    dof, branch = _normalize_branch(dof, branch)
    pairs = {d: pair_ket(d, labels) for d, labels in branch.items()}
    pairs[dof] = setting.vector(dof)
    return embed(pairs)


def branch_probability(rho: np.ndarray, dof: str, branch: dict) -> float:
    dof, branch = _normalize_branch(dof, branch)
    total = 0.0
    for a in ("H", "V"):
        for b in ("H", "V"):
            v = setting_projector(dof, branch, AnalysisSetting(a + b))
            total += float(np.vdot(v, rho @ v).real)
    return total


def expected_counts(rho: np.ndarray, dof: str, branch: dict, settings=None,
                    counts_per_setting: float | None = None, rate: float = DEFAULT_RATE,
                    time: float = DEFAULT_TIME) -> np.ndarray:
    """Mean count per setting: ``intensity * Tr[rho Pi] / BRANCH_WEIGHT``.

    ``Pi`` includes the branch selector on the other two DOFs. Dividing by the
    fixed ideal branch weight keeps the means linear in ``rho`` while a pure
    conditional state measured on its own projector gives exactly the
    intensity, which defaults to ``rate * time``.
    """
    settings = standard_settings() if settings is None else settings
    intensity = rate * time if counts_per_setting is None else counts_per_setting
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim == 1:
        rho = density(rho)
    means = []
    for s in settings:
        v = setting_projector(dof, branch, s)
        means.append(intensity * float(np.vdot(v, rho @ v).real) / BRANCH_WEIGHT)
    return np.clip(np.array(means), 0.0, None)


def simulate_counts(rho: np.ndarray, dof: str, branch: dict, rng: np.random.Generator, settings=None,
                    counts_per_setting: float | None = None, rate: float = DEFAULT_RATE,
                    time: float = DEFAULT_TIME) -> list[CountRecord]:
    """Independent Poisson counts per analysis setting."""
    settings = standard_settings() if settings is None else settings
    if branch_probability(density(rho) if np.ndim(rho) == 1 else rho, dof, branch) < 1e-12:
        raise ValueError(f"branch {branch} has zero probability")
    means = expected_counts(rho, dof, branch, settings, counts_per_setting, rate, time)
    if counts_per_setting is not None:
        rate = counts_per_setting / time
    counts = rng.poisson(means)
    return [CountRecord(s.label, int(c), float(m), time, rate) for s, c, m in zip(settings, counts, means)]


_PAULI = [np.eye(2), np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]]), np.diag([1, -1])]
PAULI_BASIS = [np.kron(a, b).astype(complex) for a in _PAULI for b in _PAULI]


def _setting_vectors(settings) -> np.ndarray:
    return np.array([s.vector("pi") for s in settings])


def _counts_array(counts) -> np.ndarray:
    return np.array([c.count if isinstance(c, CountRecord) else c for c in counts], dtype=float)


def linear_inversion(counts, settings=None) -> np.ndarray:
    """Hermitian unit-trace estimate solving the 16 linear count equations exactly."""
    settings = standard_settings() if settings is None else settings
    n = _counts_array(counts)
    vecs = _setting_vectors(settings)
    a = np.array([[np.vdot(v, s @ v).real for s in PAULI_BASIS] for v in vecs])
    x = np.linalg.lstsq(a, n, rcond=None)[0]
    rho = sum(c * s for c, s in zip(x, PAULI_BASIS))
    tr = np.trace(rho).real
    if tr <= 0:
        raise ValueError("linear inversion produced non-positive trace; counts are all zero?")
    return rho / tr


_TRIL = np.tril_indices(4)
_OFF = np.tril_indices(4, -1)


def params_to_t(t: np.ndarray) -> np.ndarray:
    """16 reals -> lower-triangular T with real diagonal."""
    m = np.zeros((4, 4), dtype=complex)
    m[np.diag_indices(4)] = t[:4]
    m[_OFF] = t[4:10] + 1j * t[10:16]
    return m


def t_to_params(m: np.ndarray) -> np.ndarray:
    return np.concatenate([np.diag(m).real, m[_OFF].real, m[_OFF].imag])


def rho_from_params(t: np.ndarray) -> np.ndarray:
    m = params_to_t(t)
    g = m.conj().T @ m
    return g / np.trace(g).real


def _initial_t(rho: np.ndarray, intensity: float) -> np.ndarray:
    vals, vecs = np.linalg.eigh((rho + rho.conj().T) / 2)
    vals = np.clip(vals, 1e-3, None)
    pos = (vecs * vals) @ vecs.conj().T
    pos = intensity * pos / np.trace(pos).real
    j = np.eye(4)[::-1]
    low = np.linalg.cholesky(j @ pos @ j)
    return j @ low.conj().T @ j  # lower triangular with T^dagger T = pos


def _nll_and_grad(t: np.ndarray, vecs: np.ndarray, n: np.ndarray):
    m = params_to_t(t)
    tv = vecs @ m.T  # row k = T psi_k
    mu = np.maximum(np.sum(np.abs(tv) ** 2, axis=1), 1e-300)
    pos = n > 0
    # Poisson deviance / 2: sum(mu - n) - sum(n log(mu / n)), zero at a perfect fit
    f = np.sum(mu - n) - np.sum(n[pos] * np.log(mu[pos] / n[pos]))
    w = 1.0 - n / mu
    g = np.einsum("k,ki,kj->ij", w, tv, vecs.conj())  # sum_k w_k (T psi_k) psi_k^dagger
    grad_m = 2 * g
    grad = np.concatenate([np.diag(grad_m).real, grad_m[_OFF].real, grad_m[_OFF].imag])
    return f, grad


@dataclass
class Reconstruction:
    rho: np.ndarray
    linear_estimate: np.ndarray
    nll: float
    iterations: int
    converged: bool
    message: str = ""
    params: np.ndarray = field(default=None, repr=False)


def reconstruct(counts, settings=None, max_iter: int = 10_000, rel_tol: float = 1e-9) -> Reconstruction:
    """Linear inversion followed by Poisson maximum likelihood over ``T^dagger T``."""
    settings = standard_settings() if settings is None else settings
    if len(settings) != 16:
        raise ValueError("reconstruction expects the 16-setting analysis set")
    n = _counts_array(counts)
    vecs = _setting_vectors(settings)
    lin = linear_inversion(n, settings)
    a = np.array([np.vdot(v, v).real for v in vecs])
    intensity = max(float(np.sum(n[:4]) / np.sum(a[:4])), 1e-9) if n[:4].sum() > 0 else max(n.mean() * 4, 1e-9)
    t0 = t_to_params(_initial_t(lin, intensity))
    res = minimize(_nll_and_grad, t0, args=(vecs, n), jac=True, method="L-BFGS-B",
                   options={"maxiter": max_iter, "ftol": rel_tol, "gtol": 1e-10, "maxcor": 30})
    return Reconstruction(rho=rho_from_params(res.x), linear_estimate=lin, nll=float(res.fun),
                          iterations=int(res.nit), converged=bool(res.success), message=str(res.message),
                          params=res.x)


@dataclass
class FidelityRow:
    selector: dict
    output_dof: str
    target: str
    fidelities: list
    reference: float
    reference_uncertainty: float

    @property
    def mean(self) -> float:
        return float(np.mean(self.fidelities))

    @property
    def minimum(self) -> float:
        return float(np.min(self.fidelities))

    @property
    def spread(self) -> float:
        return float(np.std(self.fidelities))

    def to_dict(self) -> dict:
        return {
            "selector": self.selector, "output_dof": self.output_dof, "target": self.target,
            "mean_fidelity": self.mean, "min_fidelity": self.minimum, "std_fidelity": self.spread,
            "n_seeds": len(self.fidelities), "reference_fidelity": self.reference,
            "reference_uncertainty": self.reference_uncertainty,
        }


def reference_rows() -> list[dict]:
    return load_json("bell_fidelities.json")["rows"]


def target_state(row: dict) -> np.ndarray:
    return BellStateId(row["target"], row["output_dof"]).state()


def conditional_density(rho: np.ndarray, dof: str, branch: dict) -> np.ndarray:
    """Normalized two-qubit state of ``dof`` after projecting the other DOFs onto ``branch``."""
    vs = np.array([setting_projector(dof, branch, AnalysisSetting(a + b)) for a in "HV" for b in "HV"])
    cond = vs.conj() @ rho @ vs.T
    tr = np.trace(cond).real
    if tr < 1e-12:
        raise ValueError(f"branch {branch} has zero probability")
    return cond / tr


def exact_branch_fidelity(rho: np.ndarray, dof: str, branch: dict, target: np.ndarray) -> float:
    """Fidelity of the exact conditional two-qubit state (no counting noise)."""
    cond = conditional_density(rho, dof, branch)
    return float(np.vdot(target, cond @ target).real)


def exact_fidelities(nm: NoiseModel) -> list[float]:
    rho = apply_noise(build_lc6_tilde(), nm)
    return [exact_branch_fidelity(rho, r["output_dof"], r["selector"], target_state(r)) for r in reference_rows()]


def bell_fidelity_report(nm: NoiseModel = NoiseModel(), counts_per_setting: float = DEFAULT_RATE * DEFAULT_TIME,
                  seeds=range(50)) -> list[FidelityRow]:
    """Simulate, reconstruct and score every branch of the reference Bell-state list."""
    rho = apply_noise(build_lc6_tilde(), nm)
    settings = standard_settings()
    out = []
    for i, row in enumerate(reference_rows()):
        target = target_state(row)
        fids = []
        for seed in seeds:
            rng = np.random.default_rng([int(seed), i])
            counts = simulate_counts(rho, row["output_dof"], row["selector"], rng, settings, counts_per_setting)
            rec = reconstruct(counts, settings)
            fids.append(float(np.vdot(target, rec.rho @ target).real))
        out.append(FidelityRow(row["selector"], row["output_dof"], row["target"], fids,
                             row["fidelity"], row["uncertainty"]))
    return out


def cell_labels(dof: str) -> list[str]:
    lv = MAPPING.levels[_dof(dof)]
    return [a + b for a in lv for b in lv]


def bar_chart_data(rho: np.ndarray, dof: str) -> list[dict]:
    """One record per density-matrix cell with real and imaginary parts."""
    labels = cell_labels(dof)
    return [{"row": labels[i], "col": labels[j], "re": float(rho[i, j].real), "im": float(rho[i, j].imag)}
            for i in range(4) for j in range(4)]
