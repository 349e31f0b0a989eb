"""Recovery circuitry: encoding, syndrome extraction, and correction.

Everything here advances a register one layer at a time: a layer applies
its gates (each followed by a possible gate fault), then memory noise
hits every qubit of the register. Ancilla measurements are noiseless and
take no layer of their own, matching an error model without measurement
noise.

Layer budgets (documented schedule; the exact packing is an artifact):

* simple-ancilla recovery, 12 layers: four CNOT rounds copying the
  bit-flip syndrome onto three ancillas, a transversal H, four rounds
  for the phase-flip syndrome onto three fresh ancillas, H back, then
  one X-correction layer and one Z-correction layer.
* Shor-FT recovery, 20 layers nominal: two syndrome rounds of 9 layers
  each (three Z-generator couplings, H, three X-generator couplings,
  H, one classical decision layer) plus the two correction layers.
  Shor ancillas are produced offline in parallel factories: their
  5-qubit synthesis circuits run under the same noise model in a
  detached register and do not hold up the data clock. A disagreeing
  pair of syndromes triggers a third round (9 extra layers, actual
  duration 29); its cost is excluded from the nominal count, which
  follows the one-round-per-cycle accounting of the threshold analysis.
"""
from __future__ import annotations

from dataclasses import dataclass

from .noise import NOISELESS, NoiseModel, sample_gate_fault, sample_memory
from .pauli import PauliString
from .qcodes import QuantumCode
from .statevec import (
    Gate,
    StateVector,
    append_qubits,
    append_register,
    apply_gate,
    apply_pauli,
    discard_qubits,
    measure_qubit,
)

SIMPLE_RECOVERY_LAYERS = 12
SHOR_RECOVERY_LAYERS = 20
SHOR_ROUND_LAYERS = 9


class AncillaSynthesisError(RuntimeError):
    """Verified ancilla could not be produced within the attempt budget."""


class UnverifiedAncillaError(ValueError):
    """Shor-ancilla coupling requires a verified ancilla block."""


@dataclass(frozen=True)
class ExtractionScheme:
    kind: str
    repetitions: int = 1

    def __post_init__(self):
        if self.kind not in ("SIMPLE", "SHOR_FT"):
            raise ValueError("kind must be SIMPLE or SHOR_FT")
        if self.kind == "SIMPLE" and self.repetitions != 1:
            raise ValueError("simple extraction has no repetitions")
        if self.repetitions < 1:
            raise ValueError("repetitions must be positive")


SIMPLE = ExtractionScheme("SIMPLE", 1)
SHOR_FT = ExtractionScheme("SHOR_FT", 3)


@dataclass
class SyndromeRecord:
    """Rounds of extracted syndromes and the decision taken."""

    rounds: list[tuple[int, ...]]
    decision: tuple[int, ...] | None   # syndrome to use, or None = defer

    @property
    def deferred(self) -> bool:
        return self.decision is None


class LayerClock:
    """Counts elapsed circuit layers on the data register."""

    def __init__(self):
        self.layers = 0

    def tick(self, count: int = 1):
        self.layers += count


def noisy_gates(state: StateVector, gates, model: NoiseModel, rng) -> int:
    """Apply gates, each followed by its sampled fault; returns active mask."""
    active = 0
    for g in gates:
        apply_gate(state, g)
        fault = sample_gate_fault(g, model, rng, n=state.n)
        if fault is not None:
            apply_pauli(state, fault.pauli)
        for q in g.qubits:
            active |= 1 << q
    return active


def noisy_layer(state: StateVector, gates, model: NoiseModel, rng,
                clock: LayerClock | None = None) -> StateVector:
    """One time step: gates with gate faults, then memory noise.

    Memory noise hits every qubit in the register each step, gate-active
    ones included; free evolution at rate epsilon runs alongside the gate
    error budget rather than being suppressed by it.
    """
    noisy_gates(state, gates, model, rng)
    if model.epsilon > 0.0:
        for ev in sample_memory(state.n, None, model, rng):
            apply_pauli(state, ev.pauli)
    if clock is not None:
        clock.tick()
    return state


@dataclass(frozen=True)
class Circuit:
    """A fixed schedule of gate layers on ``n`` qubits."""

    n: int
    layers: tuple[tuple[Gate, ...], ...]

    @property
    def duration(self) -> int:
        return len(self.layers)

    def render(self) -> str:
        lines = []
        for i, layer in enumerate(self.layers, start=1):
            gates = " ".join(g.render() for g in layer)
            lines.append(f"L{i}: {gates}" if gates else f"L{i}:")
        return "\n".join(lines)

    def run(self, state: StateVector, model: NoiseModel = NOISELESS,
            rng=None, clock: LayerClock | None = None) -> StateVector:
        for layer in self.layers:
            noisy_layer(state, layer, model, rng, clock)
        return state


def _validate_layers(layers):
    for layer in layers:
        used = set()
        for g in layer:
            for q in g.qubits:
                if q in used:
                    raise ValueError("layer reuses a qubit")
                used.add(q)
    return tuple(tuple(layer) for layer in layers)


def circuit(n: int, layers) -> Circuit:
    return Circuit(n, _validate_layers(layers))


# ----------------------------------------------------------------------
# Steane encoder (|0_E> preparation + transversal H)
# ----------------------------------------------------------------------

def steane_zero_circuit() -> Circuit:
    """Prepare |0_E> from |0000000>: H on the pivots, then the fan-out."""
    return circuit(7, [
        [Gate.h(0), Gate.h(1), Gate.h(3)],
        [Gate.cnot(0, 6), Gate.cnot(1, 2), Gate.cnot(3, 4)],
        [Gate.cnot(1, 6), Gate.cnot(0, 4), Gate.cnot(3, 5)],
        [Gate.cnot(3, 6), Gate.cnot(0, 2)],
        [Gate.cnot(1, 5)],
    ])


def steane_encode_circuit() -> Circuit:
    """|0_E> preparation followed by a transversal H: encodes (|0>+|1>)/sqrt2."""
    prep = steane_zero_circuit()
    h_layer = tuple(Gate.h(q) for q in range(7))
    return Circuit(7, prep.layers + (h_layer,))


# ----------------------------------------------------------------------
# Simple (non fault-tolerant) extraction: 3+3 bare ancillas
# ----------------------------------------------------------------------

# Four CNOT rounds per block; (data qubit, check index) pairs chosen so
# each round touches disjoint qubits and check i sees exactly the support
# of parity row i of the [7,4,3] matrix.
_STEANE_ROUNDS = (
    ((0, 0), (1, 1), (3, 2)),
    ((6, 0), (2, 1), (4, 2)),
    ((2, 0), (6, 1), (5, 2)),
    ((4, 0), (5, 1), (6, 2)),
)

_H7 = tuple(Gate.h(q) for q in range(7))


def _couple_block(state, model, rng, clock) -> tuple[tuple[int, int, int], StateVector]:
    """Attach three bare ancillas, run the four rounds, measure them out."""
    state = append_qubits(state, 3)
    for round_pairs in _STEANE_ROUNDS:
        gates = [Gate.cnot(q, 7 + anc) for q, anc in round_pairs]
        noisy_layer(state, gates, model, rng, clock)
    bits = []
    for anc in range(3):
        out, state = measure_qubit(state, 7 + anc, rng)
        bits.append(out)
    state = discard_qubits(state, [7, 8, 9])
    return (bits[0], bits[1], bits[2]), state


def extract_syndrome_simple(state: StateVector, code: QuantumCode,
                            model: NoiseModel, rng,
                            clock: LayerClock | None = None
                            ) -> tuple[tuple[int, ...], StateVector]:
    """Ten layers: bit-flip block, H, phase-flip block, H."""
    if code.name != "steane":
        raise ValueError("simple extraction is wired for the Steane code")
    (s1, s2, s3), state = _couple_block(state, model, rng, clock)
    noisy_layer(state, _H7, model, rng, clock)
    (s4, s5, s6), state = _couple_block(state, model, rng, clock)
    noisy_layer(state, _H7, model, rng, clock)
    return (s1, s2, s3, s4, s5, s6), state


# ----------------------------------------------------------------------
# Shor ancilla: synthesis, verification, transversal coupling
# ----------------------------------------------------------------------

@dataclass
class ShorAncilla:
    state: StateVector
    attempts: int
    verified: bool = True


_SHOR_SYNTH_LAYERS = (
    (Gate.h(0),),
    (Gate.cnot(0, 1),),
    (Gate.cnot(1, 2),),
    (Gate.cnot(2, 3),),
    (Gate.cnot(0, 4),),
    (Gate.cnot(3, 4),),
)


def synthesize_shor_ancilla(model: NoiseModel, rng,
                            max_attempts: int = 25) -> ShorAncilla:
    """Cat chain + {1,4} parity check, retried until the check reads 0.

    The verification measurement itself is error free; everything else in
    the synthesis circuit runs under the noise model. The accepted cat is
    transversally Hadamard rotated into the even-parity ancilla state.
    """
    for attempt in range(1, max_attempts + 1):
        s = StateVector.zero_state(5)
        for layer in _SHOR_SYNTH_LAYERS:
            noisy_layer(s, layer, model, rng)
        outcome, s = measure_qubit(s, 4, rng)
        if outcome == 1:
            continue
        s = discard_qubits(s, [4])
        noisy_layer(s, tuple(Gate.h(q) for q in range(4)), model, rng)
        return ShorAncilla(state=s, attempts=attempt)
    raise AncillaSynthesisError(f"no verified ancilla in {max_attempts} attempts")


def _support_qubits(generator: PauliString) -> list[int]:
    mask = generator.support()
    return [q for q in range(generator.n) if (mask >> q) & 1]


def measure_generator_ft(state: StateVector, generator: PauliString,
                         ancilla: ShorAncilla, model: NoiseModel, rng,
                         data_rotated: bool = False,
                         clock: LayerClock | None = None
                         ) -> tuple[int, StateVector]:
    """One syndrome bit via a verified 4-qubit Shor ancilla.

    Z-type generators couple with transversal CNOT(data_j; ancilla_j);
    X-type generators are conjugated by H on their support unless the
    caller already rotated the data register. The syndrome bit is the
    parity of the destructively measured ancilla.
    """
    if generator.n != state.n:
        raise ValueError("generator size mismatch")
    if weight_of(generator) != 4:
        raise ValueError("Shor coupling expects weight-4 generators")
    if not ancilla.verified:
        raise UnverifiedAncillaError("ancilla block was not verified")
    support = _support_qubits(generator)
    x_type = generator.x != 0
    sandwich = x_type and not data_rotated
    n = state.n
    if sandwich:
        noisy_layer(state, tuple(Gate.h(q) for q in support), model, rng, clock)
    state = append_register(state, ancilla.state)
    gates = [Gate.cnot(q, n + j) for j, q in enumerate(support)]
    noisy_layer(state, gates, model, rng, clock)
    parity = 0
    for j in range(4):
        out, state = measure_qubit(state, n + j, rng)
        parity ^= out
    state = discard_qubits(state, [n, n + 1, n + 2, n + 3])
    if sandwich:
        noisy_layer(state, tuple(Gate.h(q) for q in support), model, rng, clock)
    return parity, state


def weight_of(p: PauliString) -> int:
    return p.support().bit_count()


def extract_syndrome_shor(state: StateVector, code: QuantumCode,
                          model: NoiseModel, rng,
                          clock: LayerClock | None = None
                          ) -> tuple[tuple[int, ...], StateVector]:
    """One 9-layer round: Z couplings, H, X couplings, H, decision layer."""
    if code.name != "steane":
        raise ValueError("Shor extraction is wired for the Steane code")
    bits = []
    for row in code.z_checks:
        anc = synthesize_shor_ancilla(model, rng)
        bit, state = measure_generator_ft(
            state, PauliString.z_type(row, 7), anc, model, rng, clock=clock)
        bits.append(bit)
    noisy_layer(state, _H7, model, rng, clock)
    for row in code.x_checks:
        anc = synthesize_shor_ancilla(model, rng)
        bit, state = measure_generator_ft(
            state, PauliString.x_type(row, 7), anc, model, rng,
            data_rotated=True, clock=clock)
        bits.append(bit)
    noisy_layer(state, _H7, model, rng, clock)
    noisy_layer(state, (), model, rng, clock)   # classical decision step
    return tuple(bits), state


def repeat_syndrome_protocol(state: StateVector, code: QuantumCode,
                             model: NoiseModel, rng,
                             clock: LayerClock | None = None
                             ) -> tuple[SyndromeRecord, StateVector]:
    """Extract up to three syndromes; act only on a value seen twice."""
    s1, state = extract_syndrome_shor(state, code, model, rng, clock)
    s2, state = extract_syndrome_shor(state, code, model, rng, clock)
    if s1 == s2:
        return SyndromeRecord([s1, s2], s1), state
    s3, state = extract_syndrome_shor(state, code, model, rng, clock)
    rounds = [s1, s2, s3]
    if s3 == s1 or s3 == s2:
        return SyndromeRecord(rounds, s3), state
    return SyndromeRecord(rounds, None), state


# ----------------------------------------------------------------------
# Correction and full recovery
# ----------------------------------------------------------------------

def _decode_position(bits: tuple[int, int, int]) -> int:
    """Three syndrome bits -> 1-based qubit position (0 = clean)."""
    return bits[0] + 2 * bits[1] + 4 * bits[2]


def correct(state: StateVector, code: QuantumCode, syndrome: tuple[int, ...],
            model: NoiseModel = NOISELESS, rng=None,
            clock: LayerClock | None = None) -> StateVector:
    """Two layers: X at the bit-flip position, Z at the phase-flip one."""
    if code.name != "steane":
        raise ValueError("correct() decodes the Steane syndrome layout")
    pos_x = _decode_position(syndrome[0:3])
    pos_z = _decode_position(syndrome[3:6])
    noisy_layer(state, [Gate.x(pos_x - 1)] if pos_x else [], model, rng, clock)
    noisy_layer(state, [Gate.z(pos_z - 1)] if pos_z else [], model, rng, clock)
    return state


_REP3_ROUNDS = (((0, 0), (2, 1)), ((1, 0), (0, 1)))
_REP3_POSITION = {(1, 1): 0, (1, 0): 1, (0, 1): 2}


def _rep3_extract(state, model, rng, clock):
    state = append_qubits(state, 2)
    for round_pairs in _REP3_ROUNDS:
        gates = [Gate.cnot(q, 3 + anc) for q, anc in round_pairs]
        noisy_layer(state, gates, model, rng, clock)
    a, state = measure_qubit(state, 3, rng)
    b, state = measure_qubit(state, 4, rng)
    state = discard_qubits(state, [3, 4])
    return (a, b), state


def _rep3_correct_layer(state, bits, kind, model, rng, clock):
    pos = _REP3_POSITION.get(bits)
    gates = [Gate(kind, (pos,))] if pos is not None else []
    return noisy_layer(state, gates, model, rng, clock)


def recover(state: StateVector, code: QuantumCode, scheme: ExtractionScheme,
            model: NoiseModel, rng,
            clock: LayerClock | None = None) -> StateVector:
    """Full extraction plus correction for the supported codes."""
    if code.name == "steane":
        if scheme.kind == "SIMPLE":
            syn, state = extract_syndrome_simple(state, code, model, rng, clock)
            return correct(state, code, syn, model, rng, clock)
        record, state = repeat_syndrome_protocol(state, code, model, rng, clock)
        if record.deferred:
            # no action this cycle; the correction slots still elapse
            noisy_layer(state, (), model, rng, clock)
            noisy_layer(state, (), model, rng, clock)
            return state
        return correct(state, code, record.decision, model, rng, clock)

    if code.name == "rep3":
        bits, state = _rep3_extract(state, model, rng, clock)
        return _rep3_correct_layer(state, bits, "X", model, rng, clock)

    if code.name == "phase3":
        h3 = tuple(Gate.h(q) for q in range(3))
        noisy_layer(state, h3, model, rng, clock)
        bits, state = _rep3_extract(state, model, rng, clock)
        state = _rep3_correct_layer(state, bits, "X", model, rng, clock)
        noisy_layer(state, h3, model, rng, clock)
        return state

    raise ValueError(f"no recovery wired for code {code.name!r}")


def recovery_duration(scheme: ExtractionScheme, rounds: int | None = None) -> int:
    """Nominal layer counts; pass rounds=3 for the disagreement path."""
    if scheme.kind == "SIMPLE":
        return SIMPLE_RECOVERY_LAYERS
    used = 2 if rounds is None else rounds
    return used * SHOR_ROUND_LAYERS + 2
