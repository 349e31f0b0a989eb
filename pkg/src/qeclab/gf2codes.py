"""Binary linear block codes over GF(2).

Words and matrix rows are stored as machine integers: bit i of the integer
is coordinate i of the word (coordinate numbering starts at the leftmost
character of the string form, so ``BitVector.from_string("0110011")`` has
coordinate 2 set). Row operations are XORs on those integers.
"""
from __future__ import annotations

from itertools import combinations
from math import comb


class LengthMismatchError(ValueError):
    """Operands have incompatible lengths."""


class DimensionTooLargeError(ValueError):
    """Requested enumeration is not feasible for this code size."""


# ----------------------------------------------------------------------
# Words
# ----------------------------------------------------------------------

class BitVector:
    """A fixed-length word over {0,1}."""

    __slots__ = ("value", "n")

    def __init__(self, value: int, n: int):
        if n < 1:
            raise ValueError("length must be >= 1")
        if value < 0 or value >> n:
            raise ValueError(f"value {value} does not fit in {n} bits")
        self.value = value
        self.n = n

    @classmethod
    def from_bits(cls, bits) -> "BitVector":
        bits = list(bits)
        value = 0
        for i, b in enumerate(bits):
            if b not in (0, 1):
                raise ValueError("entries must be 0 or 1")
            value |= b << i
        return cls(value, len(bits))

    @classmethod
    def from_string(cls, s: str) -> "BitVector":
        return cls.from_bits(int(c) for c in s)

    @classmethod
    def zero(cls, n: int) -> "BitVector":
        return cls(0, n)

    @classmethod
    def unit(cls, n: int, position: int) -> "BitVector":
        """Weight-1 word; ``position`` is 0-based."""
        if not 0 <= position < n:
            raise IndexError("position out of range")
        return cls(1 << position, n)

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexError("coordinate out of range")
        return (self.value >> i) & 1

    def __iter__(self):
        v = self.value
        for _ in range(self.n):
            yield v & 1
            v >>= 1

    def __xor__(self, other: "BitVector") -> "BitVector":
        if self.n != other.n:
            raise LengthMismatchError("length mismatch")
        return BitVector(self.value ^ other.value, self.n)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitVector)
            and self.n == other.n
            and self.value == other.value
        )

    def __hash__(self):
        return hash((self.value, self.n))

    def __str__(self) -> str:
        return "".join(str(b) for b in self)

    def __repr__(self) -> str:
        return f"BitVector('{self}')"

    def weight(self) -> int:
        return self.value.bit_count()


def hamming_weight(u: BitVector) -> int:
    """Number of nonzero coordinates."""
    return u.weight()


def hamming_distance(u: BitVector, v: BitVector) -> int:
    """Number of coordinates where u and v differ."""
    if len(u) != len(v):
        raise LengthMismatchError("length mismatch")
    return (u.value ^ v.value).bit_count()


# ----------------------------------------------------------------------
# GF(2) row arithmetic on integer masks
# ----------------------------------------------------------------------

def _rref(rows: list[int]) -> list[int]:
    """Reduced row echelon form; returns nonzero rows, pivot order."""
    rows = [r for r in rows]
    out: list[int] = []
    pivots: list[int] = []
    for r in rows:
        for p, q in zip(pivots, out):
            if (r >> p) & 1:
                r ^= q
        if r == 0:
            continue
        p = (r & -r).bit_length() - 1
        for j, q in enumerate(out):
            if (q >> p) & 1:
                out[j] = q ^ r
        out.append(r)
        pivots.append(p)
    order = sorted(range(len(out)), key=lambda j: pivots[j])
    return [out[j] for j in order]


def _rank(rows: list[int]) -> int:
    return len(_rref(rows))


def _nullspace(rows: list[int], n: int) -> list[int]:
    """Basis of {v : row · v = 0 for every row}, as integer masks."""
    reduced = _rref(rows)
    pivots = [(r & -r).bit_length() - 1 for r in reduced]
    pivot_set = set(pivots)
    basis = []
    for free in range(n):
        if free in pivot_set:
            continue
        v = 1 << free
        for p, r in zip(pivots, reduced):
            if (r >> free) & 1:
                v |= 1 << p
        basis.append(v)
    return basis


def _span_canonical(rows: list[int]) -> tuple[int, ...]:
    """Canonical form of a row span; equal spans give equal tuples."""
    return tuple(sorted(_rref(rows)))


def _iter_span(rows: list[int]):
    """All 2^k combinations of the rows, by Gray-code accumulation."""
    yield 0
    word = 0
    for i in range(1, 1 << len(rows)):
        word ^= rows[(i & -i).bit_length() - 1]
        yield word


# ----------------------------------------------------------------------
# Linear codes
# ----------------------------------------------------------------------

# Coset-leader tables are only built when 2^(n-k) stays small.
_MAX_SYNDROME_BITS = 20


class LinearCode:
    """An [n, k, d] binary linear code given by generator rows.

    G rows are a basis of the code; H rows are a basis of the dual,
    satisfying G · H^T = 0. The distance d and the coset-leader table
    are computed lazily and cached.
    """

    def __init__(self, n: int, g_rows, h_rows=None, name: str = ""):
        g_rows = [int(r) for r in g_rows]
        mask = (1 << n) - 1
        if any(r & ~mask for r in g_rows):
            raise ValueError("generator row exceeds block length")
        if _rank(g_rows) != len(g_rows):
            raise ValueError("generator rows are not independent")
        self.n = n
        self.k = len(g_rows)
        self.G = tuple(g_rows)
        if h_rows is None:
            h_rows = _nullspace(g_rows, n) if g_rows else [1 << i for i in range(n)]
        h_rows = [int(r) for r in h_rows]
        if len(h_rows) != n - self.k or _rank(h_rows) != n - self.k:
            raise ValueError("parity-check rows do not have rank n - k")
        for g in g_rows:
            for h in h_rows:
                if (g & h).bit_count() & 1:
                    raise ValueError("G and H are not orthogonal")
        self.H = tuple(h_rows)
        self.name = name or f"[{n},{self.k}]"
        self._d: int | None = None
        self._leaders: dict[int, int] | None = None

    def __repr__(self) -> str:
        return f"LinearCode({self.name}, n={self.n}, k={self.k})"

    @property
    def d(self) -> int:
        return min_distance(self)

    def codewords(self):
        """Iterate all 2^k codewords as integer masks."""
        return _iter_span(list(self.G))

    def g_row(self, i: int) -> BitVector:
        return BitVector(self.G[i], self.n)

    def h_row(self, i: int) -> BitVector:
        return BitVector(self.H[i], self.n)

    def render(self) -> str:
        """0/1 text rows of G and H, one row per line."""
        lines = [f"{self.name}  [n={self.n}, k={self.k}]"]
        lines.append("G:")
        lines += ["  " + str(self.g_row(i)) for i in range(self.k)]
        lines.append("H:")
        lines += ["  " + str(self.h_row(i)) for i in range(self.n - self.k)]
        return "\n".join(lines)

    def _syndrome_int(self, v: int) -> int:
        s = 0
        for i, h in enumerate(self.H):
            s |= ((h & v).bit_count() & 1) << i
        return s

    def _coset_leaders(self) -> dict[int, int]:
        if self._leaders is not None:
            return self._leaders
        r = self.n - self.k
        if r > _MAX_SYNDROME_BITS:
            raise DimensionTooLargeError(
                f"coset-leader table needs 2^{r} entries"
            )
        leaders: dict[int, int] = {0: 0}
        total = 1 << r
        for w in range(1, self.n + 1):
            if len(leaders) == total:
                break
            # within a weight class, first hit in string-lex order wins
            patterns = sorted(
                (sum(1 << p for p in c) for c in combinations(range(self.n), w)),
                key=lambda m: tuple((m >> i) & 1 for i in range(self.n)),
            )
            for m in patterns:
                s = self._syndrome_int(m)
                if s not in leaders:
                    leaders[s] = m
        self._leaders = leaders
        return leaders


def encode(code: LinearCode, x: BitVector) -> BitVector:
    """Message -> codeword xG."""
    if len(x) != code.k:
        raise LengthMismatchError(f"message length {len(x)} != k={code.k}")
    word = 0
    for i, row in enumerate(code.G):
        if (x.value >> i) & 1:
            word ^= row
    return BitVector(word, code.n)


def syndrome(code: LinearCode, v: BitVector) -> BitVector:
    """H · v^T; zero exactly on codewords."""
    if len(v) != code.n:
        raise LengthMismatchError(f"word length {len(v)} != n={code.n}")
    if code.n == code.k:
        # full space: every word is a codeword, syndrome degenerates
        return BitVector(0, 1)
    return BitVector(code._syndrome_int(v.value), code.n - code.k)


def decode_syndrome(code: LinearCode, v: BitVector) -> BitVector:
    """Nearest-coset correction: v XOR the cached minimum-weight leader."""
    if len(v) != code.n:
        raise LengthMismatchError(f"word length {len(v)} != n={code.n}")
    s = code._syndrome_int(v.value)
    leader = code._coset_leaders()[s]
    return BitVector(v.value ^ leader, code.n)


def min_distance(code: LinearCode) -> int:
    """Exact minimum nonzero-codeword weight, by exhaustive enumeration."""
    if code._d is not None:
        return code._d
    if code.k == 0:
        raise DimensionTooLargeError("zero code has no nonzero codeword")
    if code.k <= 24:
        best = code.n
        word = 0
        for i in range(1, 1 << code.k):
            word ^= code.G[(i & -i).bit_length() - 1]
            w = word.bit_count()
            if w < best:
                best = w
    else:
        # high-rate code: search outward by weight for a zero syndrome
        best = None
        budget = 10_000_000
        for w in range(1, code.n + 1):
            if comb(code.n, w) > budget:
                raise DimensionTooLargeError("code too large to enumerate")
            for c in combinations(range(code.n), w):
                m = sum(1 << p for p in c)
                if code._syndrome_int(m) == 0:
                    best = w
                    break
            if best is not None:
                break
    code._d = best
    return best


def dual(code: LinearCode) -> LinearCode:
    """Orthogonal code: generator and parity-check swap roles."""
    return LinearCode(code.n, code.H, h_rows=code.G,
                      name=f"dual({code.name})")


def is_weakly_self_dual(code: LinearCode) -> bool:
    """True iff C is contained in its dual (all generator pairs orthogonal)."""
    for gi in code.G:
        for gj in code.G:
            if (gi & gj).bit_count() & 1:
                return False
    return True


def reed_muller(r: int, m: int) -> LinearCode:
    """RM(r, m) with the monomial-basis generator matrix."""
    if not (0 <= r <= m <= 7):
        raise ValueError("need 0 <= r <= m <= 7")
    n = 1 << m
    rows = []
    # variable j evaluates to bit (m-1-j) of the point index
    var_rows = []
    for j in range(m):
        row = 0
        for point in range(n):
            if (point >> (m - 1 - j)) & 1:
                row |= 1 << point
        var_rows.append(row)
    ones = (1 << n) - 1
    for degree in range(r + 1):
        for subset in combinations(range(m), degree):
            row = ones
            for j in subset:
                row &= var_rows[j]
            rows.append(row)
    return LinearCode(n, rows, name=f"RM({r},{m})")


def puncture(code: LinearCode, coordinate: int) -> LinearCode:
    """Delete one coordinate from every codeword and re-derive the basis."""
    if code.n < 2:
        raise ValueError("cannot puncture below length 1")
    if not 0 <= coordinate < code.n:
        raise IndexError("coordinate out of range")
    low = (1 << coordinate) - 1
    punctured = []
    for row in code.G:
        punctured.append((row & low) | ((row >> (coordinate + 1)) << coordinate))
    basis = _rref(punctured)
    return LinearCode(code.n - 1, basis, name=f"{code.name}/p{coordinate}")


def hamming_7_4_3() -> LinearCode:
    """The [7,4,3] Hamming code; column j of H is the binary form of j."""
    h_rows = [
        BitVector.from_string("1010101").value,
        BitVector.from_string("0110011").value,
        BitVector.from_string("0001111").value,
    ]
    g_rows = _nullspace(h_rows, 7)
    return LinearCode(7, g_rows, h_rows=h_rows, name="[7,4,3]")


def repetition_code(n: int) -> LinearCode:
    """[n, 1, n] repetition code."""
    if n < 1:
        raise ValueError("need n >= 1")
    return LinearCode(n, [(1 << n) - 1], name=f"[{n},1,{n}]")


def full_space(n: int) -> LinearCode:
    """[n, n, 1]: every word is a codeword."""
    return LinearCode(n, [1 << i for i in range(n)], h_rows=[],
                      name=f"[{n},{n},1]")


def zero_code(n: int) -> LinearCode:
    """[n, 0]: only the zero word."""
    return LinearCode(n, [], name=f"[{n},0]")


def hamming_bound(n: int, k: int, t: int) -> tuple[bool, bool]:
    """Sphere-packing bound sum_{i<=t} C(n,i) <= 2^(n-k).

    The i = 0 term is included so that equality ("perfect") means the
    radius-t spheres cover the whole space.
    """
    if t > n:
        raise ValueError("t cannot exceed n")
    spheres = sum(comb(n, i) for i in range(t + 1))
    budget = 1 << (n - k)
    return spheres <= budget, spheres == budget
