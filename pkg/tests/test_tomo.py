import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import dense_pauli, random_density, random_state
from hypercluster.export import matrix_from_csv, matrix_from_json, matrix_to_csv, matrix_to_json
from hypercluster.he6 import MAPPING, bell, build_lc6_tilde
from hypercluster.statevec import density
from hypercluster.tomo import (
    BRANCH_WEIGHT,
    CALIBRATED_NOISE,
    DEFAULT_RATE,
    DEFAULT_TIME,
    AnalysisSetting,
    NoiseModel,
    apply_noise,
    bar_chart_data,
    branch_probability,
    cell_labels,
    conditional_density,
    exact_fidelities,
    expected_counts,
    linear_inversion,
    reconstruct,
    reference_rows,
    rho_from_params,
    setting_projector,
    simulate_counts,
    standard_settings,
)

PSI = build_lc6_tilde()
N = DEFAULT_RATE * DEFAULT_TIME
PI_BRANCH = {"c": "EE", "k": "rl"}


def dephasing_oracle(psi, probs):
    """Sum over all 2^6 Z-error patterns with their product weights."""
    rho = np.zeros((64, 64), dtype=complex)
    for pattern in itertools.product((0, 1), repeat=6):
        w = 1.0
        label = ""
        for q, e in enumerate(pattern, 1):
            p = probs.get(q, 0.0)
            w *= p if e else 1 - p
            label += "Z" if e else "I"
        if w:
            z = dense_pauli(label)
            rho += w * z @ np.outer(psi, psi.conj()) @ z
    return rho


def pure_counts(psi2):
    return [N * abs(np.vdot(s.vector(), psi2)) ** 2 for s in standard_settings()]


def test_settings_set():
    labels = [s.label for s in standard_settings()]
    assert len(labels) == 16 and len(set(labels)) == 16
    assert labels[:4] == ["HH", "HV", "VV", "VH"]
    r = AnalysisSetting("RH").vector()
    assert np.allclose(r, np.kron(np.array([1, -1j]) / np.sqrt(2), [1, 0]))


def test_noise_validation_and_trivial_cases():
    with pytest.raises(ValueError):
        NoiseModel(p_pi=1.2)
    with pytest.raises(ValueError):
        NoiseModel(w=-0.1)
    assert np.allclose(apply_noise(PSI, NoiseModel()), density(PSI))
    assert np.allclose(apply_noise(PSI, NoiseModel(w=1.0)), np.eye(64) / 64)
    rho = apply_noise(PSI, CALIBRATED_NOISE)
    assert np.trace(rho).real == pytest.approx(1.0)
    assert np.linalg.eigvalsh(rho).min() > -1e-12


def test_dephasing_matches_kraus_oracle():
    nm = NoiseModel(p_pi=0.05, p_k=0.02, p_c=0.1)
    probs = {q: nm.dephasing(d) for d, qs in MAPPING.qubits.items() for q in qs}
    assert np.allclose(apply_noise(PSI, nm), dephasing_oracle(PSI, probs), atol=1e-12)


def test_polarization_dephasing_closed_form():
    # one phase flip on either polarization qubit maps phi+ to phi-; two restore it
    f = exact_fidelities(NoiseModel(p_pi=0.05))
    assert f[:4] == [pytest.approx(0.95**2 + 0.05**2, abs=1e-12)] * 4
    assert f[4:8] == [pytest.approx(1.0, abs=1e-12)] * 4
    # E/I row conditions on ++: single flips leave the branch, double flips land
    # on an orthogonal Bell state (frozen from the Kraus oracle)
    assert f[8] == pytest.approx(0.95**2 / (0.95**2 + 0.05**2), abs=1e-12)


def test_white_noise_closed_form():
    # branch projector has rank 4: ideal weight (1-w)/4, white weight w/16 spread over 4 states
    w = 0.5
    want = ((1 - w) / 4 + w / 64) / ((1 - w) / 4 + w / 16)
    assert want == pytest.approx(0.85)
    assert exact_fidelities(NoiseModel(w=w)) == [pytest.approx(want, abs=1e-12)] * 9


def test_calibrated_preset_range():
    f = exact_fidelities(CALIBRATED_NOISE)
    assert all(0.79 <= x <= 0.94 for x in f)
    assert f[-1] == min(f)


def test_means_examples():
    phi = bell("phi+")
    own = [AnalysisSetting("HH")]
    # pure conditional state on its own projector gives the full intensity
    rho_h = np.zeros(64, dtype=complex)
    rho_h[setting_projector("pi", PI_BRANCH, own[0]).argmax()] = 1
    assert expected_counts(rho_h, "pi", PI_BRANCH, own)[0] == pytest.approx(N / BRANCH_WEIGHT)
    sel = setting_projector("pi", PI_BRANCH, AnalysisSetting("HH")) + setting_projector("pi", PI_BRANCH, AnalysisSetting("VV"))
    sel /= np.linalg.norm(sel)
    rho = 0.25 * density(sel) + 0.75 * np.eye(64) / 64
    means = expected_counts(PSI, "pi", PI_BRANCH)
    assert means[0] == pytest.approx(N / 2)  # HH on phi+ conditional: 1/2 of N
    assert means[1] == pytest.approx(0.0, abs=1e-9)  # HV orthogonal
    assert np.allclose(means, pure_counts(phi), atol=1e-8)
    assert branch_probability(density(PSI), "pi", PI_BRANCH) == pytest.approx(0.25)
    assert branch_probability(rho, "pi", PI_BRANCH) == pytest.approx(0.25 + 0.75 * 4 / 64)


def test_means_are_linear(rng):
    a, b = random_density(rng, 6, rank=3), random_density(rng, 6, rank=2)
    lhs = expected_counts(0.3 * a + 0.7 * b, "k", {"c": "II", "pi": "VH"})
    rhs = 0.3 * expected_counts(a, "k", {"c": "II", "pi": "VH"}) + 0.7 * expected_counts(b, "k", {"c": "II", "pi": "VH"})
    assert np.allclose(lhs, rhs, atol=1e-10)


def test_branch_validation():
    with pytest.raises(ValueError):
        expected_counts(PSI, "pi", {"c": "EE"})
    with pytest.raises(ValueError):
        expected_counts(PSI, "pi", {"c": "EE", "pi": "HH"})
    with pytest.raises(ValueError, match="zero probability"):
        simulate_counts(PSI, "pi", {"c": "EI", "k": "rl"}, np.random.default_rng(0))


def test_simulated_counts_are_seeded():
    a = simulate_counts(PSI, "pi", PI_BRANCH, np.random.default_rng(4))
    b = simulate_counts(PSI, "pi", PI_BRANCH, np.random.default_rng(4))
    assert [r.count for r in a] == [r.count for r in b]
    assert a[0].setting == "HH" and a[0].mean == pytest.approx(N / 2)
    assert set(a[0].to_dict()) == {"setting", "count", "mean", "time", "rate"}


def test_linear_inversion_oracle(rng):
    for _ in range(50):
        rho = random_density(rng, 2, rank=int(rng.integers(1, 5)))
        means = [N * np.vdot(s.vector(), rho @ s.vector()).real for s in standard_settings()]
        assert np.allclose(linear_inversion(means), rho, atol=1e-8)


def test_mle_on_exact_means():
    rec = reconstruct(pure_counts(bell("phi+")))
    assert np.vdot(bell("phi+"), rec.rho @ bell("phi+")).real >= 1 - 1e-6
    flat = reconstruct([N / 4] * 16)
    assert np.trace(flat.rho @ flat.rho).real <= 0.26


def test_mle_recovers_mixed_state(rng):
    rho = random_density(rng, 2)
    means = [N * np.vdot(s.vector(), rho @ s.vector()).real for s in standard_settings()]
    rec = reconstruct(means)
    assert np.allclose(rec.rho, rho, atol=1e-5)
    assert rec.nll == pytest.approx(0.0, abs=1e-6)


def test_reconstruct_needs_sixteen_settings():
    with pytest.raises(ValueError):
        reconstruct([1] * 4, standard_settings()[:4])


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 20000), min_size=16, max_size=16).filter(lambda c: sum(c[:4]) > 0))
def test_mle_always_positive_semidefinite(counts):
    rho = reconstruct(counts).rho
    assert np.allclose(rho, rho.conj().T)
    assert np.trace(rho).real == pytest.approx(1.0)
    assert np.linalg.eigvalsh(rho).min() >= -1e-12


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-3, 3, allow_nan=False), min_size=16, max_size=16).filter(lambda t: sum(x * x for x in t) > 1e-3))
def test_parameterization_is_density(t):
    rho = rho_from_params(np.array(t))
    assert np.trace(rho).real == pytest.approx(1.0)
    assert np.linalg.eigvalsh(rho).min() >= -1e-12


def test_reconstruction_improves_with_counts():
    rho6 = apply_noise(PSI, CALIBRATED_NOISE)
    truth = conditional_density(rho6, "pi", PI_BRANCH)
    errors = []
    for n in (1e2, 1e3, 1e4):
        errs = []
        for seed in range(10):
            counts = simulate_counts(rho6, "pi", PI_BRANCH, np.random.default_rng(seed), counts_per_setting=n)
            errs.append(np.linalg.norm(reconstruct(counts).rho - truth))
        errors.append(np.mean(errs))
    assert errors[0] > errors[1] > errors[2]
    # roughly 1/sqrt(N): two decades of counts shrink the error about tenfold
    assert errors[2] < errors[0] / 5


def test_conditional_density_pure():
    for row in reference_rows():
        cond = conditional_density(density(PSI), row["output_dof"], row["selector"])
        assert np.trace(cond @ cond).real == pytest.approx(1.0)


def test_matrix_serialization_round_trips(rng):
    m = random_density(rng, 2)
    assert np.allclose(matrix_from_json(matrix_to_json(m)), m)
    assert np.allclose(matrix_from_csv(matrix_to_csv(m)), m, atol=1e-12)
    v = random_state(rng, 2)
    assert np.allclose(matrix_from_json(matrix_to_json(v[:, None]))[:, 0], v)


def test_bar_chart_data():
    assert cell_labels("k") == ["rr", "rl", "lr", "ll"]
    cells = bar_chart_data(density(bell("psi+")), "k")
    assert len(cells) == 16
    byrc = {(c["row"], c["col"]): c for c in cells}
    assert byrc[("rl", "lr")]["re"] == pytest.approx(0.5)
    assert byrc[("rr", "rr")]["re"] == 0.0
