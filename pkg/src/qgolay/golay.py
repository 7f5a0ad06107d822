"""Construction and validation of the three [[23,1,7]] Golay code variants.

Each variant starts from a degree-23 generator polynomial over GF(2) whose
coefficient vector, circularly shifted, spans an 11-dimensional space; the
published 11x23 parity-check matrix for that variant is stored verbatim and
revalidated against the shift span on every build.  With Hx = Hz = H the
matrix defines a CSS code on 23 qubits encoding one logical qubit at
distance 7, with the all-ones operator as the logical X and Z representative.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .css import CodeConstructionError, CssCode, PauliError
from .gf2 import BitMat, BitVec, RowSpace, enumerate_span, kernel_basis, mat_vec_mul, rank

N = 23
NUM_CHECKS = 11

GOLAY_LABELS = ("h1", "h2", "h3")

# Exponents with coefficient 1, lowest degree first.
_GENERATOR_EXPONENTS: dict[str, tuple[int, ...]] = {
    "h1": (0, 1, 2, 3, 4, 7, 10, 12),
    "h2": (0, 1, 2, 3, 5, 6, 8, 10, 11, 12, 14, 16),
    "h3": (0, 1, 3, 5, 7, 8, 10, 11, 12, 13, 14, 15, 16, 17, 18, 21),
}

_EXPECTED_WEIGHT = {"h1": 8, "h2": 12, "h3": 16}
_EXPECTED_DEGREE = {"h1": 12, "h2": 16, "h3": 21}

# The published parity-check matrices, index 0 (coefficient of x^0) leftmost.
PARITY_CHECK_ROWS: dict[str, tuple[str, ...]] = {
    "h1": (
        "11111001001010000000000",
        "01111100100101000000000",
        "00111110010010100000000",
        "00011111001001010000000",
        "00001111100100101000000",
        "00000111110010010100000",
        "00000011111001001010000",
        "00000001111100100101000",
        "00000000111110010010100",
        "00000000011111001001010",
        "00000000001111100100101",
    ),
    "h2": (
        "10111011111101100000000",
        "01011101111110110000000",
        "11110110101110101000000",
        "11101001100111111000000",
        "00101110111111011000000",
        "11111110111000010100000",
        "11111010110011001010000",
        "11111000110110100101000",
        "11111001110100010010100",
        "11111001010101001001010",
        "11111001000101100100101",
    ),
    "h3": (
        "10111111110110111110000",
        "11100111111111110101000",
        "11111011001111101111000",
        "01011111111011011111000",
        "01110011111111111010100",
        "11011111011101110110100",
        "11101110101011111110100",
        "01111101100111110111100",
        "10111010111111010111100",
        "11111110100111011101010",
        "11010111111010111100101",
    ),
}


@dataclass(frozen=True)
class GeneratorPolynomial:
    """Length-23 coefficient vector of one of the three generator polynomials."""

    label: str
    coefficients: BitVec

    @property
    def weight(self) -> int:
        return self.coefficients.weight()

    @property
    def degree(self) -> int:
        return self.coefficients.bits.bit_length() - 1


@dataclass(frozen=True)
class ParityCheckMatrix:
    """A validated 11x23 parity-check matrix tied to its source polynomial."""

    matrix: BitMat
    source: str


def generator_polynomial(label: str) -> GeneratorPolynomial:
    if label not in GOLAY_LABELS:
        raise ValueError(f"unknown polynomial label {label!r}; expected one of {GOLAY_LABELS}")
    poly = GeneratorPolynomial(label, BitVec.from_indices(N, _GENERATOR_EXPONENTS[label]))
    if poly.weight != _EXPECTED_WEIGHT[label]:
        raise CodeConstructionError(f"{label}: polynomial weight {poly.weight}")
    if poly.degree != _EXPECTED_DEGREE[label]:
        raise CodeConstructionError(f"{label}: polynomial degree {poly.degree}")
    return poly


def _rotate_right(bits: int, k: int, n: int = N) -> int:
    k %= n
    mask = (1 << n) - 1
    return ((bits << k) | (bits >> (n - k))) & mask


def circular_shifts(p: GeneratorPolynomial) -> BitMat:
    """23x23 matrix whose row k is the coefficient vector rotated right by k."""
    if p.coefficients.n != N:
        raise ValueError(f"expected length-{N} coefficients, got {p.coefficients.n}")
    return BitMat(
        tuple(_rotate_right(p.coefficients.bits, k) for k in range(N)), N
    )


def build_parity_matrix(label: str) -> ParityCheckMatrix:
    """Return the published matrix for `label` after checking all its invariants."""
    poly = generator_polynomial(label)
    matrix = BitMat.from_strings(PARITY_CHECK_ROWS[label])
    if matrix.nrows != NUM_CHECKS or matrix.cols != N:
        raise CodeConstructionError(f"{label}: expected an 11x23 matrix")
    if rank(matrix) != NUM_CHECKS:
        raise CodeConstructionError(f"{label}: rank != 11")
    shift_span = RowSpace(circular_shifts(poly))
    for i in range(matrix.nrows):
        if not shift_span.contains(matrix.row(i)):
            raise CodeConstructionError(
                f"{label}: row {i} outside the cyclic span of the polynomial"
            )
    for i, ri in enumerate(matrix.rows):
        for rj in matrix.rows[i:]:
            if (ri & rj).bit_count() & 1:
                raise CodeConstructionError(f"{label}: H @ H^T != 0")
    return ParityCheckMatrix(matrix, label)


@lru_cache(maxsize=None)
def build_golay_css(label: str) -> CssCode:
    """CSS code with Hx = Hz = the label's parity-check matrix; validates distance 7."""
    matrix = build_parity_matrix(label).matrix
    kernel = kernel_basis(matrix)
    if kernel.nrows != N - NUM_CHECKS:
        raise CodeConstructionError(f"{label}: kernel dimension {kernel.nrows} != 12")
    min_weight = min(
        v.weight() for v in enumerate_span(kernel) if not v.is_zero()
    )
    if min_weight != 7:
        raise CodeConstructionError(
            f"{label}: minimum nonzero codeword weight {min_weight} != 7"
        )
    ones = BitVec(N, (1 << N) - 1)
    if not mat_vec_mul(matrix, ones).is_zero():
        raise CodeConstructionError(f"{label}: all-ones vector is not a codeword")
    if RowSpace(matrix).contains(ones):
        raise CodeConstructionError(f"{label}: all-ones vector is a stabilizer")
    if not ones.dot(ones):
        raise CodeConstructionError(f"{label}: logical X/Z overlap must be odd")
    logical_x = PauliError(ones, BitVec.zeros(N))
    logical_z = PauliError(BitVec.zeros(N), ones)
    return CssCode(
        name=f"golay:{label}",
        n=N,
        hx=matrix,
        hz=matrix,
        logical_x=(logical_x,),
        logical_z=(logical_z,),
        distance=7,
    )


def dual_spaces_equal(label_a: str, label_b: str) -> bool:
    """Informational diagnostic: do two variants share the same check row space?

    Nothing downstream relies on the answer; the three variants are treated
    as independent code instances throughout.
    """
    ma = build_parity_matrix(label_a).matrix
    mb = build_parity_matrix(label_b).matrix
    space_a = RowSpace(ma)
    return all(space_a.contains(mb.row(i)) for i in range(mb.nrows))
