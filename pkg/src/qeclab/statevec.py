"""Dense complex state-vector simulator for small registers.

Basis convention: qubit 0 is the most significant bit of the amplitude
index, so the ket |q0 q1 ... q(n-1)> written left to right reads exactly
like the binary form of its index. Gates mutate the state in place and
return it. The Y gate is the real matrix [[0,-1],[1,0]] (the -i*sigma_Y
convention used throughout, keeping Clifford circuits real).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import PauliString

_INV_SQRT2 = 1.0 / np.sqrt(2.0)
_MAX_QUBITS = 16
_ATOL = 1e-10

_index_cache: dict[int, np.ndarray] = {}


def _indices(size: int) -> np.ndarray:
    arr = _index_cache.get(size)
    if arr is None:
        arr = np.arange(size, dtype=np.int64)
        _index_cache[size] = arr
    return arr


class NormDriftError(RuntimeError):
    """State norm drifted beyond tolerance outside a measurement."""


class EntangledQubitError(ValueError):
    """Tried to discard a qubit that is not in a product basis state."""


class StateVector:
    __slots__ = ("n", "amps")

    def __init__(self, n: int, amps: np.ndarray):
        if n < 1 or n > _MAX_QUBITS:
            raise ValueError(f"qubit count must be in [1, {_MAX_QUBITS}]")
        if amps.shape != (1 << n,):
            raise ValueError("amplitude array has wrong size")
        self.n = n
        self.amps = np.ascontiguousarray(amps, dtype=np.complex128)

    @classmethod
    def zero_state(cls, n: int) -> "StateVector":
        amps = np.zeros(1 << n, dtype=np.complex128)
        amps[0] = 1.0
        return cls(n, amps)

    @classmethod
    def basis_state(cls, bits: str) -> "StateVector":
        """|bits>, e.g. basis_state("110") = |110>."""
        n = len(bits)
        amps = np.zeros(1 << n, dtype=np.complex128)
        amps[int(bits, 2)] = 1.0
        return cls(n, amps)

    def copy(self) -> "StateVector":
        return StateVector(self.n, self.amps.copy())

    def norm_error(self) -> float:
        return abs(float(np.vdot(self.amps, self.amps).real) - 1.0)

    def assert_normalized(self, tol: float = _ATOL) -> None:
        err = self.norm_error()
        if err > tol:
            raise NormDriftError(f"norm drift {err:.3e} exceeds {tol:.1e}")

    def probability(self, bits: str) -> float:
        return float(abs(self.amps[int(bits, 2)]) ** 2)

    def dump_csv(self, fh) -> None:
        """Debug dump: one row per basis state (bit-string, re, im)."""
        for idx in range(1 << self.n):
            a = self.amps[idx]
            fh.write(f"{idx:0{self.n}b},{float(a.real)!r},{float(a.imag)!r}\n")


# ----------------------------------------------------------------------
# Gates
# ----------------------------------------------------------------------

_ONE_QUBIT = ("X", "Y", "Z", "H")


@dataclass(frozen=True)
class Gate:
    """A unitary with qubits listed controls-first, target last."""

    kind: str
    qubits: tuple[int, ...]

    @classmethod
    def x(cls, q: int) -> "Gate":
        return cls("X", (q,))

    @classmethod
    def y(cls, q: int) -> "Gate":
        return cls("Y", (q,))

    @classmethod
    def z(cls, q: int) -> "Gate":
        return cls("Z", (q,))

    @classmethod
    def h(cls, q: int) -> "Gate":
        return cls("H", (q,))

    @classmethod
    def cnot(cls, control: int, target: int) -> "Gate":
        return cls("CNOT", (control, target))

    @classmethod
    def cz(cls, control: int, target: int) -> "Gate":
        return cls("CZ", (control, target))

    @classmethod
    def toffoli(cls, c1: int, c2: int, target: int) -> "Gate":
        return cls("TOFFOLI", (c1, c2, target))

    @classmethod
    def mcx(cls, controls, target: int) -> "Gate":
        return cls("MCX", (*controls, target))

    @classmethod
    def mcz(cls, controls, target: int) -> "Gate":
        return cls("MCZ", (*controls, target))

    @property
    def controls(self) -> tuple[int, ...]:
        return self.qubits[:-1] if self.kind not in _ONE_QUBIT else ()

    @property
    def target(self) -> int:
        return self.qubits[-1]

    def render(self) -> str:
        """1-based text form matching circuit dumps, e.g. CNOT(1;8)."""
        if self.kind in _ONE_QUBIT:
            return f"{self.kind}({self.qubits[0] + 1})"
        ctl = ",".join(str(q + 1) for q in self.controls)
        return f"{self.kind}({ctl};{self.target + 1})"


def _axis_view(amps: np.ndarray, n: int, q: int) -> np.ndarray:
    """Reshape so the chosen qubit is the middle axis."""
    return amps.reshape(1 << q, 2, -1)


def _apply_x_axis(view: np.ndarray) -> None:
    tmp = view[:, 0, :].copy()
    view[:, 0, :] = view[:, 1, :]
    view[:, 1, :] = tmp


def _apply_y_axis(view: np.ndarray) -> None:
    tmp = view[:, 0, :].copy()
    view[:, 0, :] = -view[:, 1, :]
    view[:, 1, :] = tmp


def _apply_z_axis(view: np.ndarray) -> None:
    view[:, 1, :] *= -1.0


def _apply_h_axis(view: np.ndarray) -> None:
    a = view[:, 0, :].copy()
    b = view[:, 1, :]
    view[:, 0, :] = (a + b) * _INV_SQRT2
    view[:, 1, :] = (a - b) * _INV_SQRT2


_ONE_QUBIT_KERNEL = {
    "X": _apply_x_axis,
    "Y": _apply_y_axis,
    "Z": _apply_z_axis,
    "H": _apply_h_axis,
}


def apply_gate(state: StateVector, g: Gate) -> StateVector:
    """Apply one gate in place and return the state."""
    n = state.n
    if len(set(g.qubits)) != len(g.qubits):
        raise ValueError(f"repeated qubit in {g}")
    if any(not 0 <= q < n for q in g.qubits):
        raise IndexError(f"qubit index out of range in {g}")

    kind = g.kind
    if kind in _ONE_QUBIT:
        _ONE_QUBIT_KERNEL[kind](_axis_view(state.amps, n, g.qubits[0]))
        return state

    if kind in ("CZ", "MCZ"):
        # phase -1 where every participating qubit is 1
        nd = state.amps.reshape([2] * n)
        idx = [slice(None)] * n
        for q in g.qubits:
            idx[q] = 1
        nd[tuple(idx)] *= -1.0
        return state

    if kind in ("CNOT", "TOFFOLI", "MCX"):
        nd = state.amps.reshape([2] * n)
        idx: list = [slice(None)] * n
        for c in g.controls:
            idx[c] = 1
        sub = nd[tuple(idx)]
        t_axis = g.target - sum(1 for c in g.controls if c < g.target)
        i0 = [slice(None)] * sub.ndim
        i1 = [slice(None)] * sub.ndim
        i0[t_axis] = 0
        i1[t_axis] = 1
        tmp = sub[tuple(i0)].copy()
        sub[tuple(i0)] = sub[tuple(i1)]
        sub[tuple(i1)] = tmp
        return state

    raise ValueError(f"unknown gate kind {kind!r}")


# ----------------------------------------------------------------------
# Pauli strings on states
# ----------------------------------------------------------------------

def _basis_mask(mask: int, n: int) -> int:
    """Qubit-indexed mask -> basis-bit mask (qubit 0 = MSB)."""
    out = 0
    for i in range(n):
        if (mask >> i) & 1:
            out |= 1 << (n - 1 - i)
    return out


def _pauli_phases(state: StateVector, p: PauliString) -> tuple[int, np.ndarray]:
    """Return (basis X mask, per-basis-state sign vector of X^x Z^z)."""
    n = state.n
    xb = _basis_mask(p.x, n)
    zb = _basis_mask(p.z, n)
    idx = _indices(1 << n)
    parity = np.bitwise_count(idx & zb).astype(np.int64) & 1
    signs = (1.0 - 2.0 * parity) * float(p.sign)
    return xb, signs


def apply_pauli(state: StateVector, p: PauliString) -> StateVector:
    """Apply sign * X^x Z^z; involutive up to the tracked sign."""
    if p.n != state.n:
        raise ValueError("operator size mismatch")
    xb, signs = _pauli_phases(state, p)
    idx = _indices(1 << state.n)
    out = np.empty_like(state.amps)
    out[idx ^ xb] = state.amps * signs
    state.amps = out
    return state


def apply_controlled_pauli(state: StateVector, control: int, p: PauliString) -> StateVector:
    """Apply the hermitian form of p to the control=1 subspace."""
    n = state.n
    if p.n != n:
        raise ValueError("operator size mismatch")
    if (p.support() >> control) & 1:
        raise ValueError("control qubit inside operator support")
    xb, signs = _pauli_phases(state, p)
    phase = (1j) ** p.y_count()
    idx = _indices(1 << n)
    sel = idx[(idx >> (n - 1 - control)) & 1 == 1]
    out = state.amps.copy()
    out[sel ^ xb] = state.amps[sel] * (signs[sel] * phase)
    state.amps = out
    return state


def pauli_expectation(state: StateVector, p: PauliString) -> float:
    """<psi| U |psi> for the hermitian form U of p."""
    work = state.copy()
    apply_pauli(work, p)
    val = np.vdot(state.amps, work.amps) * (1j) ** p.y_count()
    return float(val.real)


# ----------------------------------------------------------------------
# Measurement
# ----------------------------------------------------------------------

def measure_qubit(state: StateVector, q: int, rng) -> tuple[int, StateVector]:
    """Born-rule measurement in the computational basis; projects in place."""
    if not 0 <= q < state.n:
        raise IndexError("qubit index out of range")
    view = _axis_view(state.amps, state.n, q)
    p1 = float(np.sum(np.abs(view[:, 1, :]) ** 2))
    outcome = 1 if rng.random() < p1 else 0
    keep_p = p1 if outcome else 1.0 - p1
    view[:, 1 - outcome, :] = 0.0
    state.amps *= 1.0 / np.sqrt(keep_p)
    return outcome, state


def measure_pauli(state: StateVector, p: PauliString, rng) -> tuple[int, StateVector]:
    """Projective measurement of a Pauli operator; returns (+-1, state).

    Strings containing Y are measured through the hermitian substitution
    sigma_Y = i*Y; the bare string would square to -1 for an odd number
    of Y factors and has no +-1 eigenspaces.
    """
    if p.n != state.n:
        raise ValueError("operator size mismatch")
    u_psi = state.copy()
    apply_pauli(u_psi, p)
    if p.y_count():
        u_psi.amps *= (1j) ** p.y_count()
    exp = float(np.vdot(state.amps, u_psi.amps).real)
    exp = min(1.0, max(-1.0, exp))
    p_plus = 0.5 * (1.0 + exp)
    eig = 1 if rng.random() < p_plus else -1
    state.amps = state.amps + eig * u_psi.amps
    norm_sq = 2.0 * (1.0 + eig * exp)
    state.amps *= 1.0 / np.sqrt(norm_sq)
    return eig, state


def overlap_sq(state: StateVector, reference: StateVector) -> float:
    """|<reference|state>|^2."""
    if state.n != reference.n:
        raise ValueError("size mismatch")
    return float(abs(np.vdot(reference.amps, state.amps)) ** 2)


# ----------------------------------------------------------------------
# Register plumbing
# ----------------------------------------------------------------------

def append_qubits(state: StateVector, m: int, value: str | None = None) -> StateVector:
    """Tensor-extend with m fresh qubits (default all |0>)."""
    if value is None:
        value = "0" * m
    if len(value) != m:
        raise ValueError("basis string length mismatch")
    extra = np.zeros(1 << m, dtype=np.complex128)
    extra[int(value, 2)] = 1.0
    return StateVector(state.n + m, np.kron(state.amps, extra))


def append_register(state: StateVector, other: StateVector) -> StateVector:
    """Tensor product, appending ``other``'s qubits after ``state``'s."""
    return StateVector(state.n + other.n, np.kron(state.amps, other.amps))


def discard_qubits(state: StateVector, qubits) -> StateVector:
    """Drop qubits that sit in a definite basis state (post-measurement)."""
    amps = state.amps
    n = state.n
    for q in sorted(set(qubits), reverse=True):
        if not 0 <= q < n:
            raise IndexError("qubit index out of range")
        view = amps.reshape(1 << q, 2, -1)
        p1 = float(np.sum(np.abs(view[:, 1, :]) ** 2))
        p0 = float(np.sum(np.abs(view[:, 0, :]) ** 2))
        if p1 <= 1e-12:
            kept = view[:, 0, :]
            keep_p = p0
        elif p0 <= 1e-12:
            kept = view[:, 1, :]
            keep_p = p1
        else:
            raise EntangledQubitError(f"qubit {q} is not in a basis state")
        amps = np.ascontiguousarray(kept).reshape(-1) / np.sqrt(keep_p)
        n -= 1
    if n < 1:
        raise ValueError("cannot discard every qubit")
    return StateVector(n, amps)
