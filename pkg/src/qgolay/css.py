"""Code-agnostic CSS machinery: Pauli errors, syndromes, residual classification.

Conventions fixed here and used by dataset files and the wire protocol:

* a syndrome is the Z-type check outcomes (rows of Hz, flagging X errors)
  followed by the X-type check outcomes (rows of Hx, flagging Z errors);
* the 2n-bit label/correction vector is the x-part in bits 0..n-1 followed
  by the z-part in bits n..2n-1.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

from .gf2 import BitMat, BitVec, RowSpace


class CodeConstructionError(ValueError):
    """A code failed one of its construction-time invariants."""


class ResidualClass(enum.Enum):
    TRIVIAL = "trivial"
    LOGICAL_X = "logical_x"
    LOGICAL_Z = "logical_z"
    LOGICAL_Y = "logical_y"
    SYNDROME_NONZERO = "syndrome_nonzero"


@dataclass(frozen=True, slots=True)
class PauliError:
    """n-qubit Pauli as an (x-part, z-part) pair; qubit i carries Y iff both bits are set."""

    x: BitVec
    z: BitVec

    def __post_init__(self) -> None:
        if self.x.n != self.z.n:
            raise ValueError(f"x/z length mismatch: {self.x.n} vs {self.z.n}")

    @classmethod
    def identity(cls, n: int) -> PauliError:
        return cls(BitVec.zeros(n), BitVec.zeros(n))

    @classmethod
    def single(cls, n: int, qubit: int, kind: str) -> PauliError:
        """One-qubit X, Y or Z on the given qubit."""
        if kind not in ("X", "Y", "Z"):
            raise ValueError(f"unknown Pauli kind {kind!r}")
        x = BitVec.unit(n, qubit) if kind in ("X", "Y") else BitVec.zeros(n)
        z = BitVec.unit(n, qubit) if kind in ("Y", "Z") else BitVec.zeros(n)
        return cls(x, z)

    @classmethod
    def from_label01(cls, text: str) -> PauliError:
        """Parse a 2n-char bit string: x-part first, then z-part."""
        if len(text) % 2:
            raise ValueError(f"label string has odd length {len(text)}")
        n = len(text) // 2
        return cls(BitVec.from01(text[:n]), BitVec.from01(text[n:]))

    def to_label01(self) -> str:
        return self.x.to01() + self.z.to01()

    @property
    def n(self) -> int:
        return self.x.n

    def is_identity(self) -> bool:
        return self.x.is_zero() and self.z.is_zero()

    def weight(self) -> int:
        """Number of qubits acted on non-trivially."""
        return (self.x.bits | self.z.bits).bit_count()

    def __xor__(self, other: PauliError) -> PauliError:
        return PauliError(self.x ^ other.x, self.z ^ other.z)


def symplectic_product(a: PauliError, b: PauliError) -> int:
    """0 when a and b commute, 1 when they anticommute."""
    return a.x.dot(b.z) ^ a.z.dot(b.x)


@dataclass(frozen=True, slots=True)
class Syndrome:
    """Ordered stabilizer outcomes: n_z bits of Z-type checks, then n_x of X-type."""

    bits: BitVec
    n_z: int
    n_x: int

    def __post_init__(self) -> None:
        if self.bits.n != self.n_z + self.n_x:
            raise ValueError(
                f"syndrome length {self.bits.n} != {self.n_z} + {self.n_x}"
            )

    @property
    def z_outcomes(self) -> BitVec:
        """Outcomes of the Z-type checks (rows of Hz); nonzero bits flag X errors."""
        return BitVec(self.n_z, self.bits.bits & ((1 << self.n_z) - 1))

    @property
    def x_outcomes(self) -> BitVec:
        """Outcomes of the X-type checks (rows of Hx); nonzero bits flag Z errors."""
        return BitVec(self.n_x, self.bits.bits >> self.n_z)

    def is_zero(self) -> bool:
        return self.bits.is_zero()

    def to01(self) -> str:
        return self.bits.to01()


@dataclass(frozen=True)
class CssCode:
    """A CSS code instance: check matrices plus one logical X/Z pair per encoded qubit.

    `hx` rows are the x-supports of the X-type stabilizer generators and `hz`
    rows the z-supports of the Z-type generators.  Validity (orthogonality,
    commutation, symplectic pairing of the logicals) is checked on
    construction; instances are immutable and safe to share between threads.
    """

    name: str
    n: int
    hx: BitMat
    hz: BitMat
    logical_x: tuple[PauliError, ...]
    logical_z: tuple[PauliError, ...]
    distance: int | None = None

    def __post_init__(self) -> None:
        if self.hx.cols != self.n or self.hz.cols != self.n:
            raise CodeConstructionError(
                f"{self.name}: check matrices must have {self.n} columns"
            )
        for rx in self.hx.rows:
            for rz in self.hz.rows:
                if (rx & rz).bit_count() & 1:
                    raise CodeConstructionError(
                        f"{self.name}: Hx and Hz rows are not orthogonal"
                    )
        k = len(self.logical_x)
        if k == 0 or len(self.logical_z) != k:
            raise CodeConstructionError(
                f"{self.name}: need matching nonempty logical X/Z lists"
            )
        stabilizers = [
            PauliError(self.hx.row(i), BitVec.zeros(self.n))
            for i in range(self.hx.nrows)
        ] + [
            PauliError(BitVec.zeros(self.n), self.hz.row(i))
            for i in range(self.hz.nrows)
        ]
        for logical in (*self.logical_x, *self.logical_z):
            if logical.n != self.n:
                raise CodeConstructionError(f"{self.name}: logical operator size")
            if any(symplectic_product(logical, s) for s in stabilizers):
                raise CodeConstructionError(
                    f"{self.name}: logical operator anticommutes with a stabilizer"
                )
        for i, lx in enumerate(self.logical_x):
            for j, lz in enumerate(self.logical_z):
                want = 1 if i == j else 0
                if symplectic_product(lx, lz) != want:
                    raise CodeConstructionError(
                        f"{self.name}: logical pairing broken at ({i},{j})"
                    )

    @property
    def k(self) -> int:
        return len(self.logical_x)

    @property
    def n_syndrome(self) -> int:
        return self.hz.nrows + self.hx.nrows

    @property
    def n_label(self) -> int:
        return 2 * self.n

    @cached_property
    def _x_stabilizer_space(self) -> RowSpace:
        """Span of the x-supports of X-type stabilizers (rows of Hx)."""
        return RowSpace(self.hx)

    @cached_property
    def _z_stabilizer_space(self) -> RowSpace:
        return RowSpace(self.hz)


def extract_syndrome(code: CssCode, e: PauliError) -> Syndrome:
    """Perfect (noiseless) syndrome: concat(Hz @ x-part, Hx @ z-part)."""
    if e.n != code.n:
        raise ValueError(f"error on {e.n} qubits, code has {code.n}")
    # Monte Carlo hot path: word-AND + popcount parity per check row.
    xb, zb = e.x.bits, e.z.bits
    bits = 0
    for i, row in enumerate(code.hz.rows):
        bits |= ((row & xb).bit_count() & 1) << i
    offset = code.hz.nrows
    for i, row in enumerate(code.hx.rows):
        bits |= ((row & zb).bit_count() & 1) << (offset + i)
    return Syndrome(BitVec(offset + code.hx.nrows, bits), offset, code.hx.nrows)


def apply_correction(e: PauliError, c: PauliError) -> PauliError:
    """Residual Pauli after applying correction c to error e (product up to phase)."""
    if e.n != c.n:
        raise ValueError(f"size mismatch: {e.n} vs {c.n}")
    return e ^ c


def classify_residual(code: CssCode, r: PauliError) -> ResidualClass:
    """Classify a residual Pauli against the code's stabilizer group.

    A residual with nonzero syndrome is SYNDROME_NONZERO.  Otherwise the
    x-part is harmless iff it lies in the span of the X-stabilizer x-supports
    (rows of Hx), and dually for the z-part; the two flags map onto
    TRIVIAL / LOGICAL_X / LOGICAL_Z / LOGICAL_Y.
    """
    if r.n != code.n:
        raise ValueError(f"residual on {r.n} qubits, code has {code.n}")
    xb, zb = r.x.bits, r.z.bits
    for row in code.hz.rows:
        if (row & xb).bit_count() & 1:
            return ResidualClass.SYNDROME_NONZERO
    for row in code.hx.rows:
        if (row & zb).bit_count() & 1:
            return ResidualClass.SYNDROME_NONZERO
    fx = not code._x_stabilizer_space.contains_bits(xb)
    fz = not code._z_stabilizer_space.contains_bits(zb)
    if fx and fz:
        return ResidualClass.LOGICAL_Y
    if fx:
        return ResidualClass.LOGICAL_X
    if fz:
        return ResidualClass.LOGICAL_Z
    return ResidualClass.TRIVIAL
