import numpy as np
import pytest
from scipy import stats

from qeclab.noise import (
    NOISELESS,
    NoiseModel,
    depolarize_density,
    kraus_ops,
    sample_gate_fault,
    sample_memory,
)
from qeclab.statevec import Gate, StateVector, apply_pauli


def test_model_validation():
    NoiseModel(0.0, 0.0)
    NoiseModel(0.75, 0.999)
    with pytest.raises(ValueError):
        NoiseModel(-0.1, 0.0)
    with pytest.raises(ValueError):
        NoiseModel(0.8, 0.0)
    with pytest.raises(ValueError):
        NoiseModel(0.0, 1.0)
    assert NOISELESS.silent


def test_sample_memory_zero_rate():
    rng = np.random.default_rng(0)
    for _ in range(100):
        assert sample_memory(5, None, NoiseModel(0.0, 0.1), rng) == []


def test_sample_memory_respects_idle_mask():
    rng = np.random.default_rng(1)
    model = NoiseModel(0.5, 0.0)
    for _ in range(200):
        events = sample_memory(4, [1, 0, 0, 1], model, rng)
        for ev in events:
            assert ev.pauli.support() & 0b0110 == 0


def test_sample_memory_kind_frequencies():
    # eps = 0.3: X, Y, Z each at rate 0.1, within 5 sigma over 1e6 draws
    model = NoiseModel(0.3, 0.0)
    rng = np.random.default_rng(1234)
    trials = 1_000_000
    counts = {"X": 0, "Y": 0, "Z": 0}
    for _ in range(trials):
        for ev in sample_memory(1, None, model, rng):
            counts[ev.pauli.kind_on(0)] += 1
    sigma = np.sqrt(trials * 0.1 * 0.9)
    for kind in counts:
        assert abs(counts[kind] - trials * 0.1) < 5 * sigma


def test_sample_memory_binomial_counts():
    # number of faulted qubits per step ~ Binomial(n, eps); chi-square fit
    n, eps, trials = 7, 0.2, 1_000_000
    model = NoiseModel(eps, 0.0)
    rng = np.random.default_rng(99)
    observed = np.zeros(n + 1)
    for _ in range(trials):
        observed[len(sample_memory(n, None, model, rng))] += 1
    expected = np.array([
        trials * stats.binom.pmf(m, n, eps) for m in range(n + 1)
    ])
    # merge sparse tail bins to keep the chi-square valid
    sparse = np.nonzero(expected < 10)[0]
    cut = int(sparse[0]) if len(sparse) else len(expected)
    if cut < len(expected):
        obs = np.append(observed[:cut], observed[cut:].sum())
        exp = np.append(expected[:cut], expected[cut:].sum())
    else:
        obs, exp = observed, expected
    chi2 = float(((obs - exp) ** 2 / exp).sum())
    p_value = stats.chi2.sf(chi2, df=len(obs) - 1)
    assert p_value > 1e-4


def test_sample_gate_fault_zero_gamma():
    rng = np.random.default_rng(0)
    g = Gate.cnot(0, 1)
    for _ in range(100):
        assert sample_gate_fault(g, NoiseModel(0.1, 0.0), rng) is None


def test_sample_gate_fault_support():
    rng = np.random.default_rng(3)
    model = NoiseModel(0.0, 0.9)
    g = Gate.toffoli(1, 3, 5)
    for _ in range(300):
        ev = sample_gate_fault(g, model, rng, n=7)
        if ev is not None:
            assert not ev.pauli.is_identity()
            assert ev.pauli.support() & ~0b101010 == 0


def test_sample_gate_fault_cnot_frequencies():
    # gamma = 0.15: each of the 15 two-qubit Paulis at 0.01 within 5 sigma
    model = NoiseModel(0.0, 0.15)
    rng = np.random.default_rng(77)
    g = Gate.cnot(0, 1)
    trials = 2_000_000
    counts: dict[str, int] = {}
    for _ in range(trials):
        ev = sample_gate_fault(g, model, rng, n=2)
        if ev is not None:
            key = str(ev.pauli)
            counts[key] = counts.get(key, 0) + 1
    assert len(counts) == 15
    sigma = np.sqrt(trials * 0.01 * 0.99)
    for key, c in counts.items():
        assert abs(c - trials * 0.01) < 5 * sigma


def test_sample_gate_fault_toffoli_classes():
    model = NoiseModel(0.0, 0.63)
    rng = np.random.default_rng(11)
    g = Gate.toffoli(0, 1, 2)
    seen = set()
    faults = 0
    trials = 40_000
    for _ in range(trials):
        ev = sample_gate_fault(g, model, rng, n=3)
        if ev is not None:
            faults += 1
            seen.add(str(ev.pauli))
    assert len(seen) == 63
    assert abs(faults / trials - 0.63) < 0.01


def test_one_qubit_gate_fault_classes():
    model = NoiseModel(0.0, 0.5)
    rng = np.random.default_rng(21)
    seen = set()
    for _ in range(1000):
        ev = sample_gate_fault(Gate.h(0), model, rng, n=1)
        if ev is not None:
            seen.add(str(ev.pauli))
    assert seen == {"+X", "+Y", "+Z"}


def test_depolarize_density_identity_and_mixed():
    rho = np.array([[1, 0], [0, 0]], dtype=complex)
    assert np.allclose(depolarize_density(rho, 0.0), rho)
    out = depolarize_density(rho, 1.0)
    assert np.allclose(out, np.eye(2) / 2)


def test_depolarize_density_partial():
    rho = np.array([[1, 0], [0, 0]], dtype=complex)
    out = depolarize_density(rho, 0.4)
    assert np.allclose(out, np.diag([0.8, 0.2]))


def test_depolarize_density_rejects_bad_input():
    with pytest.raises(ValueError):
        depolarize_density(np.array([[1, 1], [0, 0]], dtype=complex), 0.1)
    with pytest.raises(ValueError):
        depolarize_density(np.eye(2, dtype=complex), 0.1)  # trace 2
    with pytest.raises(ValueError):
        depolarize_density(np.diag([1.0, 0.0]).astype(complex), 1.5)


def test_kraus_completeness():
    for eps in np.arange(0.0, 0.75, 0.1):
        ops = kraus_ops(NoiseModel(float(eps), 0.0))
        total = sum(op.conj().T @ op for op in ops)
        assert np.allclose(total, np.eye(2), atol=1e-12)
    ops = kraus_ops(NoiseModel(0.0, 0.0))
    assert np.allclose(ops[0], np.eye(2))
    for op in ops[1:]:
        assert np.allclose(op, 0)


def _trajectory_average(state_amps, n, eps, shots, seed):
    """Mean density matrix of sampled memory-noise trajectories."""
    model = NoiseModel(eps, 0.0)
    rng = np.random.default_rng(seed)
    dim = 1 << n
    acc = np.zeros((dim, dim), dtype=complex)
    base = StateVector(n, np.array(state_amps, dtype=complex))
    for _ in range(shots):
        s = base.copy()
        for ev in sample_memory(n, None, model, rng):
            apply_pauli(s, ev.pauli)
        acc += np.outer(s.amps, s.amps.conj())
    return acc / shots


@pytest.mark.parametrize("n,amps", [
    (1, [0.6, 0.8]),
    (2, [0.5, 0.5j, -0.5, 0.5]),
])
def test_sampler_matches_density_oracle(n, amps):
    eps = 0.3
    shots = 1_000_000 if n == 1 else 400_000
    avg = _trajectory_average(amps, n, eps, shots, seed=2024)
    rho0 = np.outer(amps, np.conj(amps))
    expect = depolarize_density(rho0, 4 * eps / 3)
    # element-wise 5 sigma with the binomial scale 1/sqrt(shots)
    tol = 5.0 / np.sqrt(shots)
    assert np.max(np.abs(avg - expect)) < tol


def test_sample_memory_accepts_bitvector_mask():
    from qeclab.gf2codes import BitVector
    rng = np.random.default_rng(4)
    model = NoiseModel(0.5, 0.0)
    mask = BitVector.from_string("1001")
    for _ in range(100):
        for ev in sample_memory(4, mask, model, rng):
            assert ev.pauli.support() & 0b0110 == 0
