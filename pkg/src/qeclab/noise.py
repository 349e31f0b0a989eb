"""Depolarizing error model: trajectory samplers and an exact small oracle.

Memory noise hits each flagged qubit independently per time step: no
fault with probability 1-epsilon, otherwise X, Y or Z at epsilon/3 each.
A gate on m qubits fails with probability gamma, drawing uniformly one
of the 4^m - 1 non-identity Pauli patterns on its qubits (gamma/3 per
pattern for one-qubit gates, gamma/15 for CNOT/CZ, gamma/63 for
Toffoli-class); the fault is applied after the ideal gate. The circuit
executors treat every qubit as exposed to free evolution in every step,
so gate-active qubits collect the gate fault budget on top of memory
noise, not instead of it.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import PauliString
from .statevec import Gate

_PAULI_KINDS = ("X", "Y", "Z")


@dataclass(frozen=True)
class NoiseModel:
    """Memory rate epsilon per qubit per step; gate rate gamma per gate."""

    epsilon: float
    gamma: float

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 0.75:
            raise ValueError("epsilon must be in [0, 0.75]")
        if not 0.0 <= self.gamma < 1.0:
            raise ValueError("gamma must be in [0, 1)")

    @property
    def silent(self) -> bool:
        return self.epsilon == 0.0 and self.gamma == 0.0


NOISELESS = NoiseModel(0.0, 0.0)


@dataclass(frozen=True)
class FaultEvent:
    """A sampled Pauli fault at a given circuit layer."""

    layer: int
    pauli: PauliString


def _idle_indices(n: int, idle_mask) -> list[int]:
    if idle_mask is None:
        return list(range(n))
    return [q for q, flag in zip(range(n), idle_mask) if flag]


def sample_memory(n: int, idle_mask, model: NoiseModel, rng,
                  layer: int = 0) -> list[FaultEvent]:
    """Independent depolarizing faults on the flagged idle qubits.

    ``idle_mask`` is a per-qubit 0/1 sequence (BitVector works); None
    means every qubit is idle.
    """
    if model.epsilon == 0.0:
        return []
    idle = _idle_indices(n, idle_mask)
    if not idle:
        return []
    draws = rng.random(len(idle))
    events = []
    for q, u in zip(idle, draws):
        if u < model.epsilon:
            # reuse the draw: u/epsilon is uniform on [0,1) given a fault
            kind = _PAULI_KINDS[min(2, int(u / model.epsilon * 3))]
            events.append(FaultEvent(layer, PauliString.single(n, q, kind)))
    return events


def _pauli_on_qubits(n: int, qubits, pattern: int) -> PauliString:
    """Base-4 digit per qubit: 1 = X, 2 = Y, 3 = Z."""
    x = z = 0
    for q in qubits:
        digit = pattern & 3
        pattern >>= 2
        if digit == 1:
            x |= 1 << q
        elif digit == 2:
            x |= 1 << q
            z |= 1 << q
        elif digit == 3:
            z |= 1 << q
    return PauliString(n, x, z)


def sample_gate_fault(g: Gate, model: NoiseModel, rng,
                      n: int | None = None, layer: int = 0) -> FaultEvent | None:
    """Post-gate fault: uniform over the non-identity Paulis on the gate."""
    if model.gamma == 0.0:
        return None
    if rng.random() >= model.gamma:
        return None
    m = len(g.qubits)
    count = (1 << (2 * m)) - 1
    pattern = int(rng.integers(count)) + 1
    reg = n if n is not None else max(g.qubits) + 1
    return FaultEvent(layer, _pauli_on_qubits(reg, g.qubits, pattern))


# ----------------------------------------------------------------------
# Exact density-operator oracle (1-2 qubits)
# ----------------------------------------------------------------------

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1], [1, 0]], dtype=complex)   # real -i*sigma_Y
_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def _check_density(rho: np.ndarray) -> int:
    """Validate a 1- or 2-qubit density matrix; return qubit count."""
    rho = np.asarray(rho)
    if rho.shape not in ((2, 2), (4, 4)):
        raise ValueError("oracle supports 1 or 2 qubits only")
    if not np.allclose(rho, rho.conj().T, atol=1e-10):
        raise ValueError("density matrix must be hermitian")
    if abs(np.trace(rho).real - 1.0) > 1e-10:
        raise ValueError("density matrix must have unit trace")
    if np.linalg.eigvalsh(rho).min() < -1e-10:
        raise ValueError("density matrix must be positive semidefinite")
    return 1 if rho.shape == (2, 2) else 2


def depolarize_density(rho: np.ndarray, p: float) -> np.ndarray:
    """p * I/2 per qubit + (1-p) * rho; two qubits depolarize independently."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must be in [0, 1]")
    m = _check_density(rho)
    rho = np.asarray(rho, dtype=complex)
    eps = 0.75 * p  # Kraus weight: epsilon = 3p/4
    for q in range(m):
        ops = []
        for sigma in (_X, _Y, _Z):
            full = sigma if m == 1 else (
                np.kron(sigma, _I2) if q == 0 else np.kron(_I2, sigma)
            )
            ops.append(full)
        rho = (1 - eps) * rho + (eps / 3) * sum(o @ rho @ o.conj().T for o in ops)
    return rho


def kraus_ops(model: NoiseModel) -> list[np.ndarray]:
    """Single-qubit interaction operators of the memory channel."""
    eps = model.epsilon
    return [
        np.sqrt(1 - eps) * _I2,
        np.sqrt(eps / 3) * _X,
        np.sqrt(eps / 3) * _Y,
        np.sqrt(eps / 3) * _Z,
    ]
