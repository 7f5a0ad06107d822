"""Bit-packed linear algebra over GF(2).

Vectors and matrix rows are stored as Python ints: bit i of the integer is
coordinate i, so arbitrary lengths pack into machine words for free and a
matrix-vector product is an AND plus a popcount parity per row.  The textual
form of a vector is a fixed-width string of '0'/'1' with index 0 first; that
string is what dataset files and the wire protocol carry.

All values are immutable after construction; elimination routines work on
copies and never mutate their inputs.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass

# enumerate_span refuses above this rank: 2^25 vectors is no longer desk-scale.
MAX_SPAN_RANK = 24


@dataclass(frozen=True, slots=True)
class BitVec:
    """Length-n vector over GF(2); bit i of `bits` is coordinate i."""

    n: int
    bits: int

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError(f"negative BitVec length {self.n}")
        if self.bits < 0 or self.bits >> self.n:
            raise ValueError(f"bits set beyond length {self.n}")

    @classmethod
    def zeros(cls, n: int) -> BitVec:
        return cls(n, 0)

    @classmethod
    def unit(cls, n: int, i: int) -> BitVec:
        if not 0 <= i < n:
            raise ValueError(f"index {i} out of range for length {n}")
        return cls(n, 1 << i)

    @classmethod
    def from_indices(cls, n: int, indices: Iterable[int]) -> BitVec:
        bits = 0
        for i in indices:
            if not 0 <= i < n:
                raise ValueError(f"index {i} out of range for length {n}")
            bits |= 1 << i
        return cls(n, bits)

    @classmethod
    def from01(cls, text: str) -> BitVec:
        if text.strip("01"):
            raise ValueError(f"not a 0/1 string: {text!r}")
        return cls(len(text), int(text[::-1], 2) if text else 0)

    def to01(self) -> str:
        return format(self.bits, f"0{self.n}b")[::-1] if self.n else ""

    def get(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise ValueError(f"index {i} out of range for length {self.n}")
        return (self.bits >> i) & 1

    def weight(self) -> int:
        return self.bits.bit_count()

    def is_zero(self) -> bool:
        return self.bits == 0

    def support(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.n) if (self.bits >> i) & 1)

    def __xor__(self, other: BitVec) -> BitVec:
        if self.n != other.n:
            raise ValueError(f"length mismatch: {self.n} vs {other.n}")
        return BitVec(self.n, self.bits ^ other.bits)

    def __and__(self, other: BitVec) -> BitVec:
        if self.n != other.n:
            raise ValueError(f"length mismatch: {self.n} vs {other.n}")
        return BitVec(self.n, self.bits & other.bits)

    def dot(self, other: BitVec) -> int:
        """Inner product over GF(2)."""
        if self.n != other.n:
            raise ValueError(f"length mismatch: {self.n} vs {other.n}")
        return (self.bits & other.bits).bit_count() & 1


@dataclass(frozen=True)
class BitMat:
    """Row-major GF(2) matrix; each row packed like a BitVec of length `cols`."""

    rows: tuple[int, ...]
    cols: int

    def __post_init__(self) -> None:
        if self.cols < 0:
            raise ValueError(f"negative column count {self.cols}")
        for r in self.rows:
            if r < 0 or r >> self.cols:
                raise ValueError(f"row bits set beyond {self.cols} columns")

    @classmethod
    def from_rows(cls, rows: Iterable[BitVec]) -> BitMat:
        rows = list(rows)
        if not rows:
            raise ValueError("from_rows needs at least one row; use BitMat((), cols)")
        cols = rows[0].n
        if any(r.n != cols for r in rows):
            raise ValueError("rows differ in length")
        return cls(tuple(r.bits for r in rows), cols)

    @classmethod
    def from_strings(cls, rows: Iterable[str]) -> BitMat:
        return cls.from_rows([BitVec.from01(r) for r in rows])

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def row(self, i: int) -> BitVec:
        return BitVec(self.cols, self.rows[i])

    def to_strings(self) -> list[str]:
        return [self.row(i).to01() for i in range(self.nrows)]


def mat_vec_mul(m: BitMat, v: BitVec) -> BitVec:
    """H @ v over GF(2): output bit i is the parity of row_i AND v."""
    if m.cols != v.n:
        raise ValueError(f"dimension mismatch: {m.cols} cols vs length-{v.n} vector")
    out = 0
    for i, row in enumerate(m.rows):
        out |= ((row & v.bits).bit_count() & 1) << i
    return BitVec(m.nrows, out)


def combine_rows(m: BitMat, c: BitVec) -> BitVec:
    """XOR of the rows of m selected by c, i.e. c^T @ m."""
    if m.nrows != c.n:
        raise ValueError(f"dimension mismatch: {m.nrows} rows vs length-{c.n} selector")
    acc = 0
    for i, row in enumerate(m.rows):
        if (c.bits >> i) & 1:
            acc ^= row
    return BitVec(m.cols, acc)


def transpose(m: BitMat) -> BitMat:
    out = []
    for j in range(m.cols):
        col = 0
        for i, row in enumerate(m.rows):
            col |= ((row >> j) & 1) << i
        out.append(col)
    return BitMat(tuple(out), m.nrows)


class RowSpace:
    """Echelonized row space with O(rank) membership tests.

    Rows are reduced by lowest set bit; `_pivots` maps pivot index -> row,
    where every stored row is a combination of the original rows.
    """

    def __init__(self, m: BitMat):
        self._pivots: dict[int, int] = {}
        for row in m.rows:
            self._insert(row)

    def _insert(self, bits: int) -> None:
        while bits:
            p = (bits & -bits).bit_length() - 1
            other = self._pivots.get(p)
            if other is None:
                self._pivots[p] = bits
                return
            bits ^= other

    def reduce(self, bits: int) -> int:
        while bits:
            p = (bits & -bits).bit_length() - 1
            other = self._pivots.get(p)
            if other is None:
                return bits
            bits ^= other
        return 0

    def contains_bits(self, bits: int) -> bool:
        return self.reduce(bits) == 0

    def contains(self, v: BitVec) -> bool:
        return self.reduce(v.bits) == 0

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def basis_rows(self) -> tuple[int, ...]:
        """Independent echelon rows, ordered by pivot index."""
        return tuple(self._pivots[p] for p in sorted(self._pivots))


def rank(m: BitMat) -> int:
    """GF(2) row rank via Gaussian elimination (input unchanged)."""
    return RowSpace(m).rank


def solve_in_rowspace(m: BitMat, v: BitVec) -> BitVec | None:
    """Coefficients c with c^T @ m == v, or None when v is not in the row space."""
    if m.cols != v.n:
        raise ValueError(f"dimension mismatch: {m.cols} cols vs length-{v.n} vector")
    # Echelonize while tracking, for each stored row, which original rows built it.
    pivots: dict[int, tuple[int, int]] = {}  # pivot -> (row bits, combo mask)
    combos = []
    for i, row in enumerate(m.rows):
        bits, combo = row, 1 << i
        while bits:
            p = (bits & -bits).bit_length() - 1
            if p not in pivots:
                pivots[p] = (bits, combo)
                break
            obits, ocombo = pivots[p]
            bits ^= obits
            combo ^= ocombo
        combos.append(combo)
    bits, combo = v.bits, 0
    while bits:
        p = (bits & -bits).bit_length() - 1
        if p not in pivots:
            return None
        obits, ocombo = pivots[p]
        bits ^= obits
        combo ^= ocombo
    return BitVec(m.nrows, combo)


def solve_mat_vec(m: BitMat, s: BitVec) -> BitVec | None:
    """A particular solution x of m @ x == s, or None when none exists."""
    return solve_in_rowspace(transpose(m), s)


def enumerate_span(m: BitMat) -> Iterator[BitVec]:
    """Yield every vector in the row space of m exactly once (2^rank of them)."""
    space = RowSpace(m)
    if space.rank > MAX_SPAN_RANK:
        raise ValueError(
            f"rank {space.rank} exceeds enumeration guard of {MAX_SPAN_RANK}"
        )
    basis = space.basis_rows()
    acc = 0
    yield BitVec(m.cols, 0)
    # Gray-code walk: step k flips exactly one basis row.
    for k in range(1, 1 << len(basis)):
        acc ^= basis[(k & -k).bit_length() - 1]
        yield BitVec(m.cols, acc)


def kernel_basis(m: BitMat) -> BitMat:
    """Basis of {v : m @ v == 0}, one row per free column (cols - rank rows)."""
    # Full RREF with pivot-column bookkeeping.
    reduced: list[int] = []
    pivot_cols: list[int] = []
    for row in m.rows:
        bits = row
        for pc, r in zip(pivot_cols, reduced):
            if (bits >> pc) & 1:
                bits ^= r
        if bits == 0:
            continue
        p = (bits & -bits).bit_length() - 1
        for i in range(len(reduced)):
            if (reduced[i] >> p) & 1:
                reduced[i] ^= bits
        reduced.append(bits)
        pivot_cols.append(p)
    pivot_set = set(pivot_cols)
    basis = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        v = 1 << f
        for pc, r in zip(pivot_cols, reduced):
            if (r >> f) & 1:
                v |= 1 << pc
        basis.append(v)
    return BitMat(tuple(basis), m.cols)
