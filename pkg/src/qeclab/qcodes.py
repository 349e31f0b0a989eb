"""Quantum code constructors: repetition, phase-flip, Shor-9, Steane, CSS.

Logical basis states are built as fresh StateVectors on demand. Check rows
(x_checks / z_checks) are the classical parity rows driving phase-flip and
bit-flip syndrome extraction; for the Steane code both sets are the rows of
the [7,4,3] parity-check matrix.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .gf2codes import BitVector, LinearCode, dual, hamming_7_4_3, min_distance, syndrome
from .pauli import PauliString, StabilizerGroup, validate
from .statevec import Gate, StateVector, apply_gate, apply_pauli


class ContainmentError(ValueError):
    """CSS construction requires C2 to be a subcode of C1."""


def _word_to_index(word: int, n: int) -> int:
    """Coordinate-mask word -> amplitude index (coordinate 0 = MSB)."""
    out = 0
    for i in range(n):
        if (word >> i) & 1:
            out |= 1 << (n - 1 - i)
    return out


def superposition_state(n: int, words, phases=None) -> StateVector:
    """Equal-weight superposition over coordinate-mask words."""
    words = list(words)
    amps = np.zeros(1 << n, dtype=np.complex128)
    norm = 1.0 / np.sqrt(len(words))
    for j, w in enumerate(words):
        sign = 1.0 if phases is None else phases[j]
        amps[_word_to_index(w, n)] = sign * norm
    return StateVector(n, amps)


def coset_state(c2: LinearCode, a: BitVector) -> StateVector:
    """|C2 + a> = uniform superposition over the coset of C2 shifted by a."""
    if len(a) != c2.n:
        raise ValueError("shift length must equal the block length")
    return superposition_state(c2.n, (w ^ a.value for w in c2.codewords()))


def uniform_code_state(code: LinearCode) -> StateVector:
    return coset_state(code, BitVector.zero(code.n))


@dataclass
class QuantumCode:
    """An [[n, k, d]] code with stabilizer generators and state builders."""

    name: str
    n: int
    k: int
    d: int
    stabilizer: StabilizerGroup
    z_checks: tuple[int, ...]          # rows detecting bit-flips
    x_checks: tuple[int, ...]          # rows detecting phase-flips
    _zero: Callable[[], StateVector]
    _one: Callable[[], StateVector] | None
    correctable: list[PauliString] = field(default_factory=list)
    logical_x: PauliString | None = None
    logical_z: PauliString | None = None
    d_is_bound: bool = False

    def logical_zero(self) -> StateVector:
        return self._zero()

    def logical_one(self) -> StateVector:
        if self._one is None:
            raise ValueError(f"{self.name} has no second logical state")
        return self._one()

    def __repr__(self):
        bound = ">=" if self.d_is_bound else ""
        return f"QuantumCode({self.name} [[{self.n},{self.k},{bound}{self.d}]])"


def _weight_one_errors(n: int) -> list[PauliString]:
    out = [PauliString.identity(n)]
    for q in range(n):
        for kind in ("X", "Y", "Z"):
            out.append(PauliString.single(n, q, kind))
    return out


def repetition_bitflip() -> QuantumCode:
    """[[3,1,3]] against bit-flips: span{|000>, |111>}."""
    rows = (0b011, 0b101)   # coordinate masks 110, 101
    gens = [PauliString.z_type(r, 3) for r in rows]
    correctable = [PauliString.identity(3)] + [
        PauliString.single(3, q, "X") for q in (2, 1, 0)
    ]
    return QuantumCode(
        name="rep3",
        n=3, k=1, d=3,
        stabilizer=StabilizerGroup(gens),
        z_checks=rows, x_checks=(),
        _zero=lambda: StateVector.basis_state("000"),
        _one=lambda: StateVector.basis_state("111"),
        correctable=correctable,
        logical_x=PauliString.from_label("XXX"),
        logical_z=PauliString.from_label("ZII"),
    )


def repetition_phaseflip() -> QuantumCode:
    """[[3,1,3]] against phase-flips: the Hadamard rotation of rep3."""
    rows = (0b011, 0b101)
    gens = [PauliString.x_type(r, 3) for r in rows]

    def rotated(bits: str) -> Callable[[], StateVector]:
        def build():
            s = StateVector.basis_state(bits)
            for q in range(3):
                apply_gate(s, Gate.h(q))
            return s
        return build

    correctable = [PauliString.identity(3)] + [
        PauliString.single(3, q, "Z") for q in (2, 1, 0)
    ]
    return QuantumCode(
        name="phase3",
        n=3, k=1, d=3,
        stabilizer=StabilizerGroup(gens),
        z_checks=(), x_checks=rows,
        _zero=rotated("000"),
        _one=rotated("111"),
        correctable=correctable,
        logical_x=PauliString.from_label("XII"),
        logical_z=PauliString.from_label("ZZZ"),
    )


def shor9() -> QuantumCode:
    """Shor's [[9,1,3]]: three cat blocks with sign redundancy."""
    def block(sign: float) -> np.ndarray:
        amps = np.zeros(8, dtype=np.complex128)
        amps[0b000] = 1.0 / np.sqrt(2)
        amps[0b111] = sign / np.sqrt(2)
        return amps

    def build(sign: float) -> Callable[[], StateVector]:
        def make():
            b = block(sign)
            return StateVector(9, np.kron(np.kron(b, b), b))
        return make

    z_rows = (0b000000011, 0b000000110, 0b000011000,
              0b000110000, 0b011000000, 0b110000000)
    x_rows = (0b000111111, 0b111111000)
    gens = [PauliString.z_type(r, 9) for r in z_rows]
    gens += [PauliString.x_type(r, 9) for r in x_rows]
    return QuantumCode(
        name="shor9",
        n=9, k=1, d=3,
        stabilizer=StabilizerGroup(gens),
        z_checks=z_rows, x_checks=x_rows,
        _zero=build(+1.0),
        _one=build(-1.0),
        correctable=_weight_one_errors(9),
        logical_x=PauliString.from_label("XXXXXXXXX"),
        logical_z=PauliString.from_label("ZZZZZZZZZ"),
    )


@dataclass
class CssCode(QuantumCode):
    """CSS code Q(C1, C2) built from classical codes C2 within C1."""

    c1: LinearCode = None
    c2: LinearCode = None
    coset_reps: tuple[BitVector, ...] = ()


def css(c1: LinearCode, c2: LinearCode, name: str = "") -> CssCode:
    """Build Q(C1, C2) = [[n, k1-k2, D >= min(d1, d of dual(C2))]]."""
    if c1.n != c2.n:
        raise ContainmentError("codes must share the block length")
    for i in range(c2.k):
        if syndrome(c1, c2.g_row(i)).value != 0:
            raise ContainmentError("C2 is not contained in C1")
    n = c1.n
    k = c1.k - c2.k

    # group C1 codewords into cosets of C2 via the C2 syndrome;
    # canonical representative: minimal weight, string-lex tie-break
    reps: dict[int, int] = {}
    for w in c1.codewords():
        s = c2._syndrome_int(w)
        best = reps.get(s)
        if best is None or _rep_key(w, n) < _rep_key(best, n):
            reps[s] = w
    rep_list = sorted(reps.values(), key=lambda w: _rep_key(w, n))
    if len(rep_list) != 1 << k:
        raise ContainmentError("coset count mismatch")

    d1 = min_distance(c1)
    d2_perp = min_distance(dual(c2))
    gens = [PauliString.x_type(row, n) for row in c2.G]
    gens += [PauliString.z_type(row, n) for row in c1.H]

    def builder(shift: int) -> Callable[[], StateVector]:
        return lambda: coset_state(c2, BitVector(shift, n))

    dist = min(d1, d2_perp)
    t = (dist - 1) // 2
    return CssCode(
        name=name or f"css({c1.name},{c2.name})",
        n=n, k=k, d=dist,
        stabilizer=StabilizerGroup(gens),
        z_checks=tuple(c1.H), x_checks=tuple(c2.G),
        _zero=builder(rep_list[0]),
        _one=builder(rep_list[1]) if k >= 1 and len(rep_list) > 1 else None,
        correctable=_weight_one_errors(n) if t >= 1 else [PauliString.identity(n)],
        d_is_bound=True,
        c1=c1, c2=c2,
        coset_reps=tuple(BitVector(w, n) for w in rep_list),
    )


def _rep_key(word: int, n: int):
    return (word.bit_count(), tuple((word >> i) & 1 for i in range(n)))


def steane() -> QuantumCode:
    """The [[7,1,3]] code from the [7,4,3] Hamming pair."""
    hamming = hamming_7_4_3()
    code = css(hamming, dual(hamming), name="steane")
    code.d_is_bound = False   # distance exactly 3
    code.logical_x = PauliString.from_label("XXXXXXX")
    code.logical_z = PauliString.from_label("ZZZZZZZ")
    return code


def steane_plus_state() -> StateVector:
    """(|0_E> + |1_E>)/sqrt(2), the encoded |+> used by the experiments."""
    code = steane()
    zero = code.logical_zero()
    one = code.logical_one()
    return StateVector(7, (zero.amps + one.amps) / np.sqrt(2.0))


def dual_code_theorem_check(code: LinearCode) -> bool:
    """Hadamard-rotate |C| and compare amplitudes against |dual(C)|."""
    if code.n > 12:
        raise ValueError("check limited to n <= 12")
    state = uniform_code_state(code)
    for q in range(code.n):
        apply_gate(state, Gate.h(q))
    expected = uniform_code_state(dual(code))
    return bool(np.allclose(state.amps, expected.amps, atol=1e-10))


def quantum_hamming_bound(n: int) -> tuple[bool, bool]:
    """2(1+3n) <= 2^n for one logical qubit at distance 3."""
    if n < 1:
        raise ValueError("need n >= 1")
    lhs = 2 * (1 + 3 * n)
    rhs = 1 << n
    return lhs <= rhs, lhs == rhs


def code_by_name(name: str) -> QuantumCode:
    builders = {
        "rep3": repetition_bitflip,
        "phase3": repetition_phaseflip,
        "shor9": shor9,
        "steane": steane,
    }
    try:
        return builders[name]()
    except KeyError:
        raise ValueError(f"unknown code {name!r}") from None


def validate_code(code: QuantumCode) -> bool:
    """Generators form a valid stabilizer and fix both logical states."""
    if not validate(code.stabilizer):
        return False
    states = [code.logical_zero()]
    if code._one is not None:
        states.append(code.logical_one())
    for g in code.stabilizer:
        for s in states:
            fixed = apply_pauli(s.copy(), g)
            if abs(np.vdot(s.amps, fixed.amps).real - 1.0) > 1e-10:
                return False
    return True
