"""n-qubit Pauli operators in symplectic form, and stabilizer generator sets.

A PauliString is sign * X^x * Z^z (Z part applied first), with masks in the
same bit convention as gf2codes.BitVector: bit i of a mask addresses qubit i,
qubit 0 being the leftmost letter of the text form. A qubit with both mask
bits set carries Y = X*Z = -i*sigma_Y, the real-matrix convention, so Y
squares to minus the identity and all operator entries stay real.
"""
from __future__ import annotations

from .gf2codes import BitVector, _rank

_KINDS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_LETTER = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}


class PauliSizeError(ValueError):
    """Operands act on different register sizes."""


class PauliString:
    __slots__ = ("n", "x", "z", "sign")

    def __init__(self, n: int, x: int = 0, z: int = 0, sign: int = 1):
        if n < 1:
            raise ValueError("need at least one qubit")
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        mask = (1 << n) - 1
        if (x & ~mask) or (z & ~mask):
            raise ValueError("mask exceeds register size")
        self.n = n
        self.x = x
        self.z = z
        self.sign = sign

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n)

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Parse canonical text, e.g. "+IIIZZZZ" or "-XY"."""
        sign = 1
        if label and label[0] in "+-":
            sign = 1 if label[0] == "+" else -1
            label = label[1:]
        if not label:
            raise ValueError("empty Pauli label")
        x = z = 0
        for i, c in enumerate(label):
            try:
                xb, zb = _KINDS[c]
            except KeyError:
                raise ValueError(f"bad Pauli letter {c!r}") from None
            x |= xb << i
            z |= zb << i
        return cls(len(label), x, z, sign)

    @classmethod
    def single(cls, n: int, qubit: int, kind: str) -> "PauliString":
        """One non-identity factor on ``qubit`` (0-based)."""
        if not 0 <= qubit < n:
            raise IndexError("qubit out of range")
        xb, zb = _KINDS[kind]
        return cls(n, xb << qubit, zb << qubit)

    @classmethod
    def x_type(cls, support: BitVector | int, n: int | None = None) -> "PauliString":
        """X on every set bit of ``support`` (a code row, say)."""
        if isinstance(support, BitVector):
            return cls(len(support), x=support.value)
        return cls(n, x=support)

    @classmethod
    def z_type(cls, support: BitVector | int, n: int | None = None) -> "PauliString":
        if isinstance(support, BitVector):
            return cls(len(support), z=support.value)
        return cls(n, z=support)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PauliString)
            and (self.n, self.x, self.z, self.sign)
            == (other.n, other.x, other.z, other.sign)
        )

    def __hash__(self):
        return hash((self.n, self.x, self.z, self.sign))

    def __str__(self) -> str:
        letters = "".join(
            _LETTER[((self.x >> i) & 1, (self.z >> i) & 1)] for i in range(self.n)
        )
        return ("+" if self.sign > 0 else "-") + letters

    def __repr__(self) -> str:
        return f"PauliString('{self}')"

    def kind_on(self, qubit: int) -> str:
        return _LETTER[((self.x >> qubit) & 1, (self.z >> qubit) & 1)]

    def support(self) -> int:
        """Mask of qubits carrying a non-identity factor."""
        return self.x | self.z

    def y_count(self) -> int:
        return (self.x & self.z).bit_count()

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0


def weight(p: PauliString) -> int:
    """Number of non-identity tensor factors."""
    return (p.x | p.z).bit_count()


def commutes(p: PauliString, q: PauliString) -> bool:
    """Symplectic test: <p.x, q.z> + <p.z, q.x> = 0 (mod 2)."""
    if p.n != q.n:
        raise PauliSizeError("size mismatch")
    a = (p.x & q.z).bit_count()
    b = (p.z & q.x).bit_count()
    return ((a + b) & 1) == 0


def multiply(p: PauliString, q: PauliString) -> PauliString:
    """Operator product p * q (q acts first); tracks the +-1 phase."""
    if p.n != q.n:
        raise PauliSizeError("size mismatch")
    # commuting Z^z1 past X^x2 costs (-1) per overlapping position
    flips = (p.z & q.x).bit_count() & 1
    sign = p.sign * q.sign * (-1 if flips else 1)
    return PauliString(p.n, p.x ^ q.x, p.z ^ q.z, sign)


class StabilizerGroup:
    """A list of commuting, independent Pauli generators."""

    def __init__(self, generators: list[PauliString]):
        if not generators:
            raise ValueError("need at least one generator")
        n = generators[0].n
        if any(g.n != n for g in generators):
            raise PauliSizeError("generators act on different sizes")
        self.n = n
        self.generators = list(generators)

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def __repr__(self):
        return f"StabilizerGroup({[str(g) for g in self.generators]})"


def syndrome_of(stab: StabilizerGroup, error: PauliString) -> BitVector:
    """Bit i set iff the error anticommutes with generator i."""
    if stab.n != error.n:
        raise PauliSizeError("size mismatch")
    value = 0
    for i, g in enumerate(stab.generators):
        if not commutes(g, error):
            value |= 1 << i
    return BitVector(value, len(stab.generators))


def validate(stab: StabilizerGroup) -> bool:
    """All pairs commute and no generator is a product of the others."""
    gens = stab.generators
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            if not commutes(gens[i], gens[j]):
                return False
    # independence over GF(2) of the length-2n symplectic vectors
    rows = [g.x | (g.z << stab.n) for g in gens]
    return _rank(rows) == len(gens)
