import numpy as np
import pytest

import qeclab.ftcircuits as ftc
from qeclab.ftcircuits import (
    SHOR_FT,
    SIMPLE,
    ExtractionScheme,
    LayerClock,
    ShorAncilla,
    SyndromeRecord,
    circuit,
    correct,
    extract_syndrome_shor,
    extract_syndrome_simple,
    measure_generator_ft,
    noisy_layer,
    recover,
    recovery_duration,
    repeat_syndrome_protocol,
    steane_encode_circuit,
    steane_zero_circuit,
    synthesize_shor_ancilla,
)
from qeclab.noise import NOISELESS, NoiseModel
from qeclab.pauli import PauliString
from qeclab.qcodes import repetition_bitflip, repetition_phaseflip, steane, steane_plus_state
from qeclab.statevec import (
    Gate,
    StateVector,
    append_register,
    apply_gate,
    apply_pauli,
    overlap_sq,
)

RNG = np.random.default_rng


def encoded_plus():
    return steane_plus_state()


def encoded(a, b):
    code = steane()
    amps = a * code.logical_zero().amps + b * code.logical_one().amps
    amps /= np.linalg.norm(amps)
    return StateVector(7, amps)


def test_scheme_validation():
    assert SIMPLE.repetitions == 1
    assert SHOR_FT.repetitions == 3
    with pytest.raises(ValueError):
        ExtractionScheme("SIMPLE", 2)
    with pytest.raises(ValueError):
        ExtractionScheme("OTHER")


def test_encoder_produces_plus_state():
    state = steane_encode_circuit().run(StateVector.zero_state(7))
    assert overlap_sq(state, encoded_plus()) == pytest.approx(1.0, abs=1e-10)


def test_zero_circuit_produces_logical_zero():
    state = steane_zero_circuit().run(StateVector.zero_state(7))
    assert overlap_sq(state, steane().logical_zero()) == pytest.approx(1.0, abs=1e-10)


def test_encoder_under_noise_dents_fidelity():
    model = NoiseModel(0.01, 0.01)
    rng = RNG(7)
    shots, hits = 400, 0
    target = encoded_plus()
    for _ in range(shots):
        state = steane_encode_circuit().run(StateVector.zero_state(7), model, rng)
        if overlap_sq(state, target) < 1 - 1e-6:
            hits += 1
    assert 0 < hits < shots


def test_encoder_text_dump():
    text = steane_encode_circuit().render()
    lines = text.split("\n")
    assert len(lines) == 6
    assert lines[0] == "L1: H(1) H(2) H(4)"
    assert lines[1] == "L2: CNOT(1;7) CNOT(2;3) CNOT(4;5)"
    assert lines[5].startswith("L6: H(1) H(2)")


def test_layer_rejects_qubit_reuse():
    with pytest.raises(ValueError):
        circuit(3, [[Gate.cnot(0, 1), Gate.x(1)]])


def test_simple_extraction_unit_syndromes():
    code = steane()
    rng = RNG(0)
    syn, _ = extract_syndrome_simple(
        apply_pauli(encoded_plus(), PauliString.single(7, 6, "X")),
        code, NOISELESS, rng)
    assert syn == (1, 1, 1, 0, 0, 0)
    syn, _ = extract_syndrome_simple(encoded_plus(), code, NOISELESS, rng)
    assert syn == (0, 0, 0, 0, 0, 0)
    syn, _ = extract_syndrome_simple(
        apply_pauli(encoded_plus(), PauliString.single(7, 1, "Z")),
        code, NOISELESS, rng)
    assert syn == (0, 0, 0, 0, 1, 0)


def test_shor_ancilla_noiseless():
    anc = synthesize_shor_ancilla(NOISELESS, RNG(1))
    assert anc.attempts == 1 and anc.verified
    amps = anc.state.amps
    for idx in range(16):
        parity = bin(idx).count("1") & 1
        expect = 0.0 if parity else 1 / np.sqrt(8)
        assert abs(amps[idx] - expect) < 1e-10


def _synthesis_with_injection(after_layer, qubit):
    """Run the cat synthesis noiselessly with one X injected; no H yet.

    Returns (verification outcome, residual flip weight on the cat mod
    the 1111 complement), with outcome read from the exact probability.
    """
    s = StateVector.zero_state(5)
    for i, layer in enumerate(ftc._SHOR_SYNTH_LAYERS):
        noisy_layer(s, layer, NOISELESS, None)
        if i == after_layer:
            apply_pauli(s, PauliString.single(5, qubit, "X"))
    view = s.amps.reshape(16, 2)
    p1 = float(np.sum(np.abs(view[:, 1]) ** 2))
    assert p1 in (0.0, 1.0) or abs(p1) < 1e-12 or abs(p1 - 1) < 1e-12
    outcome = 1 if p1 > 0.5 else 0
    kept = view[:, outcome]
    support = [idx for idx in range(16) if abs(kept[idx]) > 1e-12]
    assert len(support) == 2
    e = support[0]
    residual = min(bin(e).count("1"), bin(e ^ 0b1111).count("1"))
    return outcome, residual


def test_verification_completeness_exhaustive():
    # every single X fault leaving >= 2 residual flips is rejected
    accepted_single = 0
    for after_layer in range(len(ftc._SHOR_SYNTH_LAYERS)):
        for qubit in range(5):
            outcome, residual = _synthesis_with_injection(after_layer, qubit)
            if outcome == 0:
                assert residual <= 1
                if residual == 1:
                    accepted_single += 1
    assert accepted_single > 0   # tolerable single faults do pass


def test_verification_spec_cases():
    # X on qubit 2 (1-based) between CNOT(1;2) and CNOT(2;3): rejected
    outcome, residual = _synthesis_with_injection(1, 1)
    assert outcome == 1 and residual >= 1
    # X on qubit 2 after the whole chain: accepted with one residual flip
    outcome, residual = _synthesis_with_injection(3, 1)
    assert outcome == 0 and residual == 1


def test_measure_generator_ft_bits():
    code = steane()
    gen = PauliString.z_type(code.z_checks[2], 7)   # IIIZZZZ
    rng = RNG(3)
    errored = apply_pauli(encoded_plus(), PauliString.single(7, 6, "X"))
    bit, _ = measure_generator_ft(errored, gen, synthesize_shor_ancilla(NOISELESS, rng),
                                  NOISELESS, rng)
    assert bit == 1
    bit, _ = measure_generator_ft(encoded_plus(), gen,
                                  synthesize_shor_ancilla(NOISELESS, rng),
                                  NOISELESS, rng)
    assert bit == 0


def test_measure_generator_ft_rejects_unverified():
    anc = synthesize_shor_ancilla(NOISELESS, RNG(0))
    anc.verified = False
    gen = PauliString.z_type(steane().z_checks[0], 7)
    with pytest.raises(ftc.UnverifiedAncillaError):
        measure_generator_ft(encoded_plus(), gen, anc, NOISELESS, RNG(0))


def _ancilla_outcome_distribution(a, b):
    """Exact 16-bin distribution of the ancilla measurement for a|0>+b|1>_E."""
    state = encoded(a, b)
    gen = PauliString.z_type(steane().z_checks[2], 7)
    anc = synthesize_shor_ancilla(NOISELESS, RNG(5))
    joint = append_register(state, anc.state)
    support = [q for q in range(7) if (gen.z >> q) & 1]
    for j, q in enumerate(support):
        apply_gate(joint, Gate.cnot(q, 7 + j))
    probs = np.abs(joint.amps.reshape(128, 16)) ** 2
    return probs.sum(axis=0)


def test_ancilla_outcomes_reveal_nothing_about_amplitudes():
    d1 = _ancilla_outcome_distribution(1.0, 0.0)
    d2 = _ancilla_outcome_distribution(0.6, 0.8j)
    assert np.allclose(d1, d2, atol=1e-12)
    even = [i for i in range(16) if bin(i).count("1") % 2 == 0]
    assert np.allclose(d1[even], 1 / 8, atol=1e-12)
    odd = [i for i in range(16) if bin(i).count("1") % 2 == 1]
    assert np.allclose(d1[odd], 0.0, atol=1e-12)


def test_shor_extraction_unit_syndromes():
    code = steane()
    rng = RNG(11)
    syn, _ = extract_syndrome_shor(
        apply_pauli(encoded_plus(), PauliString.single(7, 6, "X")),
        code, NOISELESS, rng)
    assert syn == (1, 1, 1, 0, 0, 0)
    syn, _ = extract_syndrome_shor(encoded_plus(), code, NOISELESS, rng)
    assert syn == (0, 0, 0, 0, 0, 0)
    syn, _ = extract_syndrome_shor(
        apply_pauli(encoded_plus(), PauliString.single(7, 3, "Y")),
        code, NOISELESS, rng)
    assert syn == (0, 0, 1, 0, 0, 1)


def test_simple_and_shor_agree_on_weight1_errors():
    code = steane()
    rng = RNG(21)
    for q in range(7):
        for kind in ("X", "Y", "Z"):
            err = PauliString.single(7, q, kind)
            s1, _ = extract_syndrome_simple(
                apply_pauli(encoded_plus(), err), code, NOISELESS, rng)
            s2, _ = extract_syndrome_shor(
                apply_pauli(encoded_plus(), err), code, NOISELESS, rng)
            assert s1 == s2


def test_repeat_protocol_decisions(monkeypatch):
    code = steane()
    syndromes = {}

    def fake_extract(state, code_, model, rng, clock=None):
        value = syndromes["seq"].pop(0)
        if clock is not None:
            clock.tick(ftc.SHOR_ROUND_LAYERS)
        return value, state

    monkeypatch.setattr(ftc, "extract_syndrome_shor", fake_extract)
    s0 = (0, 0, 0, 0, 0, 0)
    sa = (1, 0, 0, 0, 0, 0)
    sb = (0, 1, 0, 0, 0, 0)
    sc = (0, 0, 1, 0, 0, 0)

    syndromes["seq"] = [sa, sa]
    record, _ = repeat_syndrome_protocol(encoded_plus(), code, NOISELESS, RNG(0))
    assert record.decision == sa and record.rounds == [sa, sa]

    syndromes["seq"] = [sa, sb, sa]
    record, _ = repeat_syndrome_protocol(encoded_plus(), code, NOISELESS, RNG(0))
    assert record.decision == sa

    syndromes["seq"] = [sa, sb, sc]
    record, _ = repeat_syndrome_protocol(encoded_plus(), code, NOISELESS, RNG(0))
    assert record.deferred and len(record.rounds) == 3


def test_correct_examples():
    code = steane()
    state = apply_pauli(encoded_plus(), PauliString.single(7, 6, "X"))
    state = correct(state, code, (1, 1, 1, 0, 0, 0))
    assert overlap_sq(state, encoded_plus()) == pytest.approx(1.0, abs=1e-10)
    state = correct(encoded_plus(), code, (0, 0, 0, 0, 0, 0))
    assert overlap_sq(state, encoded_plus()) == pytest.approx(1.0)
    state = apply_pauli(encoded_plus(), PauliString.single(7, 1, "Z"))
    state = correct(state, code, (0, 0, 0, 0, 1, 0))
    assert overlap_sq(state, encoded_plus()) == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("scheme", [SIMPLE, SHOR_FT])
def test_recover_all_weight1_errors_steane(scheme):
    code = steane()
    rng = RNG(33)
    for q in range(7):
        for kind in ("X", "Y", "Z"):
            state = apply_pauli(encoded_plus(), PauliString.single(7, q, kind))
            state = recover(state, code, scheme, NOISELESS, rng)
            assert overlap_sq(state, encoded_plus()) >= 1 - 1e-9


def test_recover_weight2_fails_sideways():
    # the decoder lands on the distance-1 neighbour of the wrong codeword:
    # a net logical operator, which moves any state it does not stabilize
    code = steane()
    err = PauliString(7, x=0b0000011, z=0)   # X on qubits 0 and 1
    zero = code.logical_zero()
    state = apply_pauli(zero.copy(), err)
    state = recover(state, code, SIMPLE, NOISELESS, RNG(1))
    assert overlap_sq(state, zero) < 1e-9
    err = PauliString(7, x=0, z=0b0000011)   # Z on qubits 0 and 1
    state = apply_pauli(encoded_plus(), err)
    state = recover(state, code, SIMPLE, NOISELESS, RNG(1))
    assert overlap_sq(state, encoded_plus()) < 1e-9


def test_recover_preserves_coherence():
    code = steane()
    rng = RNG(5)
    for seed in range(4):
        gen = RNG(seed)
        a, b = gen.normal(size=2) + 1j * gen.normal(size=2)
        target = encoded(a, b)
        for scheme in (SIMPLE, SHOR_FT):
            state = recover(target.copy(), code, scheme, NOISELESS, rng)
            assert overlap_sq(state, target) >= 1 - 1e-9


def test_recover_rep3():
    code = repetition_bitflip()
    rng = RNG(2)
    base = StateVector(3, np.array([0.6, 0, 0, 0, 0, 0, 0, 0.8], dtype=complex))
    for q in range(3):
        state = apply_pauli(base.copy(), PauliString.single(3, q, "X"))
        state = recover(state, code, SIMPLE, NOISELESS, rng)
        assert overlap_sq(state, base) == pytest.approx(1.0, abs=1e-10)


def test_recover_phase3():
    code = repetition_phaseflip()
    rng = RNG(2)
    zero, one = code.logical_zero(), code.logical_one()
    base = StateVector(3, 0.6 * zero.amps + 0.8 * one.amps)
    for q in range(3):
        state = apply_pauli(base.copy(), PauliString.single(3, q, "Z"))
        state = recover(state, code, SIMPLE, NOISELESS, rng)
        assert overlap_sq(state, base) == pytest.approx(1.0, abs=1e-10)


def test_recovery_durations():
    code = steane()
    clock = LayerClock()
    recover(encoded_plus(), code, SIMPLE, NOISELESS, RNG(0), clock)
    assert clock.layers == 12
    clock = LayerClock()
    recover(encoded_plus(), code, SHOR_FT, NOISELESS, RNG(0), clock)
    assert clock.layers == 20
    assert recovery_duration(SIMPLE) == 12
    assert recovery_duration(SHOR_FT) == 20
    assert recovery_duration(SHOR_FT, rounds=3) == 29


def test_transversal_cnot_propagation_demo():
    # two rep3 blocks; an X on control qubit 2 spreads only to target qubit 2
    control = StateVector.basis_state("111")
    target = StateVector.basis_state("111")
    joint = append_register(control, target)
    clean = joint.copy()
    for q in range(3):
        apply_gate(clean, Gate.cnot(q, 3 + q))
    errored = joint.copy()
    apply_pauli(errored, PauliString.single(6, 2, "X"))
    for q in range(3):
        apply_gate(errored, Gate.cnot(q, 3 + q))
    diff = apply_pauli(clean.copy(), PauliString(6, x=0b100100, z=0))
    assert np.allclose(errored.amps, diff.amps)


def test_shor_recover_under_noise_runs():
    code = steane()
    model = NoiseModel(1e-3, 1e-3)
    rng = RNG(9)
    state = steane_encode_circuit().run(StateVector.zero_state(7), model, rng)
    state = recover(state, code, SHOR_FT, model, rng)
    assert state.n == 7
    assert state.norm_error() < 1e-8
