"""Syndrome-to-correction strategies.

In-process decoders: the exact Golay syndrome-table decoder (minimum weight
per axis), the toric matching decoder, and a desk-scale exact
maximum-likelihood oracle.  The client for external (learned) decoders
speaking the line protocol lives in `protocol`.

Every in-process decoder returns corrections whose syndrome equals its
input; external decoders carry no such guarantee and are policed by the
harness instead.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .css import CodeConstructionError, CssCode, PauliError, Syndrome
from .gf2 import BitMat, BitVec, enumerate_span, kernel_basis, rank, solve_mat_vec
from .golay import ParityCheckMatrix
from .noise import NoiseModel
from .toric import (
    Coord,
    ToricLattice,
    defect_positions,
    plaquette_path_edges,
    toroidal_distance,
    vertex_path_edges,
)

# Exact matching above this many defects per type falls back to greedy pairing.
EXACT_MATCHING_LIMIT = 12

# Default evaluation budget for the ML oracle: every coset pair of the Golay code.
DEFAULT_ML_BUDGET = 1 << 24


@dataclass(frozen=True)
class DecoderOutcome:
    correction: PauliError
    decoder_id: str


class Decoder:
    """Shared surface: scalar `decode` plus a batch `predict` over 0/1 arrays."""

    decoder_id: str = "?"

    def __init__(self, code: CssCode):
        self.code = code
        self.n_syndrome = code.n_syndrome
        self.n_output = code.n_label

    def decode(self, s: Syndrome) -> DecoderOutcome:
        raise NotImplementedError

    def predict(self, syndromes: np.ndarray) -> np.ndarray:
        """Decode a (m, n_syndrome) 0/1 array into a (m, n_output) 0/1 array."""
        syndromes = np.asarray(syndromes)
        if syndromes.ndim != 2 or syndromes.shape[1] != self.n_syndrome:
            raise ValueError(
                f"expected shape (m, {self.n_syndrome}), got {syndromes.shape}"
            )
        out = np.zeros((syndromes.shape[0], self.n_output), dtype=np.uint8)
        n_z = self.code.hz.nrows
        for i, row in enumerate(syndromes):
            bits = 0
            for j, v in enumerate(row):
                bits |= (int(v) & 1) << j
            s = Syndrome(BitVec(self.n_syndrome, bits), n_z, self.n_syndrome - n_z)
            c = self.decode(s).correction
            label = c.x.bits | (c.z.bits << self.code.n)
            out[i] = [(label >> j) & 1 for j in range(self.n_output)]
        return out

    def close(self) -> None:
        pass


@dataclass(frozen=True)
class SyndromeTable:
    """All 2048 coset leaders of weight <= 3, indexed by 11-bit syndrome value."""

    leaders: tuple[int, ...]

    def lookup(self, syndrome_bits: int) -> int:
        return self.leaders[syndrome_bits]


def build_syndrome_table(h: ParityCheckMatrix | BitMat) -> SyndromeTable:
    """Enumerate every error of weight <= 3 and key it by its syndrome.

    The sphere sizes 1 + 23 + 253 + 1771 = 2048 = 2^11 tile the syndrome
    space exactly; any collision or gap disproves that and aborts.
    """
    matrix = h.matrix if isinstance(h, ParityCheckMatrix) else h
    n, m = matrix.cols, matrix.nrows
    if n != 23 or m != 11 or rank(matrix) != 11:
        raise CodeConstructionError("syndrome table needs a rank-11 11x23 matrix")
    columns = [0] * n
    for j in range(n):
        col = 0
        for i, row in enumerate(matrix.rows):
            col |= ((row >> j) & 1) << i
        columns[j] = col
    leaders: list[int | None] = [None] * (1 << m)
    leaders[0] = 0
    for w in (1, 2, 3):
        for combo in itertools.combinations(range(n), w):
            key = 0
            bits = 0
            for j in combo:
                key ^= columns[j]
                bits |= 1 << j
            if leaders[key] is not None:
                raise CodeConstructionError(
                    f"syndrome collision at key {key}: perfect-code property violated"
                )
            leaders[key] = bits
    if any(v is None for v in leaders):
        raise CodeConstructionError("syndrome table incomplete")
    return SyndromeTable(tuple(leaders))  # type: ignore[arg-type]


class TableDecoder(Decoder):
    """Exact minimum-weight decoder for the Golay code, per axis independently."""

    decoder_id = "table"

    def __init__(self, code: CssCode):
        super().__init__(code)
        self._table_z = build_syndrome_table(code.hz)
        self._table_x = (
            self._table_z
            if code.hx.rows == code.hz.rows
            else build_syndrome_table(code.hx)
        )

    def decode(self, s: Syndrome) -> DecoderOutcome:
        if s.bits.n != self.n_syndrome:
            raise ValueError(f"expected {self.n_syndrome} syndrome bits, got {s.bits.n}")
        x = self._table_z.lookup(s.z_outcomes.bits)
        z = self._table_x.lookup(s.x_outcomes.bits)
        n = self.code.n
        return DecoderOutcome(PauliError(BitVec(n, x), BitVec(n, z)), self.decoder_id)


def _greedy_pairing(coords: list[Coord], d: int) -> list[tuple[Coord, Coord]]:
    remaining = sorted(coords)
    pairs = []
    while remaining:
        best = None
        for i, j in itertools.combinations(range(len(remaining)), 2):
            dist = toroidal_distance(d, remaining[i], remaining[j])
            if best is None or dist < best[0]:
                best = (dist, i, j)
        _, i, j = best  # type: ignore[misc]
        pairs.append((remaining[i], remaining[j]))
        del remaining[j], remaining[i]
    return pairs


def _exact_pairing(coords: list[Coord], d: int) -> list[tuple[Coord, Coord]]:
    """Minimum total toroidal distance over all perfect pairings.

    Enumeration is lexicographic over the sorted defect list and keeps the
    first optimum, so ties resolve to the lexicographically smallest pairing.
    """
    coords = sorted(coords)
    best_cost = float("inf")
    best_pairs: list[tuple[Coord, Coord]] = []

    def recurse(remaining: tuple[Coord, ...], cost: float, pairs: list) -> None:
        nonlocal best_cost, best_pairs
        if not remaining:
            best_cost, best_pairs = cost, list(pairs)
            return
        a = remaining[0]
        rest = remaining[1:]
        for idx, b in enumerate(rest):
            step = cost + toroidal_distance(d, a, b)
            if step >= best_cost:
                continue
            pairs.append((a, b))
            recurse(rest[:idx] + rest[idx + 1 :], step, pairs)
            pairs.pop()

    recurse(tuple(coords), 0.0, [])
    return best_pairs


def _match_axis(coords: list[Coord], d: int, path_fn) -> int:
    if len(coords) % 2:
        raise ValueError(f"odd defect count {len(coords)}")
    if len(coords) <= EXACT_MATCHING_LIMIT:
        pairs = _exact_pairing(coords, d)
    else:
        pairs = _greedy_pairing(coords, d)
    bits = 0
    for a, b in pairs:
        for e in path_fn(d, a, b):
            bits ^= 1 << e
    return bits


class MatchingDecoder(Decoder):
    """Toric decoder: pair defects at minimum total toroidal Manhattan distance."""

    decoder_id = "match"

    def __init__(self, lattice: ToricLattice):
        super().__init__(lattice.code)
        self.lattice = lattice

    def decode(self, s: Syndrome) -> DecoderOutcome:
        plaquette, vertex = defect_positions(self.lattice, s)
        d = self.lattice.d
        x_bits = _match_axis(plaquette, d, plaquette_path_edges)
        z_bits = _match_axis(vertex, d, vertex_path_edges)
        n = self.code.n
        return DecoderOutcome(
            PauliError(BitVec(n, x_bits), BitVec(n, z_bits)), self.decoder_id
        )


@lru_cache(maxsize=8)
def _kernel_span_bits(matrix: BitMat) -> np.ndarray:
    """All 2^(n - rank) kernel elements of a check matrix, as packed ints."""
    return np.array(
        [v.bits for v in enumerate_span(kernel_basis(matrix))], dtype=np.int64
    )


def _coset_matrix(matrix: BitMat, outcomes: BitVec) -> tuple[np.ndarray, np.ndarray]:
    """(packed ints, bit matrix) of all solutions of H @ v == outcomes."""
    v0 = solve_mat_vec(matrix, outcomes)
    if v0 is None:
        raise ValueError("syndrome outside the column space of the check matrix")
    packed = _kernel_span_bits(matrix) ^ v0.bits
    shifts = np.arange(matrix.cols, dtype=np.int64)
    return packed, ((packed[:, None] >> shifts) & 1).astype(np.float32)


def ml_decode_oracle(
    code: CssCode,
    model: NoiseModel,
    s: Syndrome,
    budget: int = DEFAULT_ML_BUDGET,
) -> DecoderOutcome:
    """Exact (degeneracy-unaware) maximum-likelihood decode.

    Enumerates every syndrome-consistent error and returns the single most
    probable one under the noise model.  Intended as a point oracle for at
    most a few hundred syndromes, not for sweeps; cost is the product of the
    two coset sizes (2^24 for the Golay code) and is capped by `budget`.
    """
    kx_dim = code.n - rank(code.hz)
    kz_dim = code.n - rank(code.hx)
    cost = (1 << kx_dim) * (1 << kz_dim)
    if cost > budget:
        raise ValueError(
            f"coset enumeration needs {cost} evaluations, over budget {budget}"
        )
    xs, xm = _coset_matrix(code.hz, s.z_outcomes)
    zs, zm = _coset_matrix(code.hx, s.x_outcomes)
    n = code.n
    wx = xm.sum(axis=1, dtype=np.float32)
    wz = zm.sum(axis=1, dtype=np.float32)
    ncross = xm @ zm.T
    with np.errstate(divide="ignore"):
        lx, ly, lz, li = (
            float(v) for v in np.log([model.px, model.py, model.pz, 1.0 - model.p])
        )
    finite = all(map(math.isfinite, (lx, ly, lz, li)))
    if finite:
        # log P factorizes as const + a|x| + b|z| + c|x AND z|; the count
        # matrices are exact small integers, so only the combination needs
        # double precision.
        scores = (ly - lx - lz + li) * ncross.astype(np.float64)
        scores += (lx - li) * wx[:, None].astype(np.float64)
        scores += (lz - li) * wz[None, :].astype(np.float64)
    else:
        scores = np.zeros(ncross.shape, dtype=np.float64)
        terms = (
            (lx, wx[:, None] - ncross),
            (lz, wz[None, :] - ncross),
            (ly, ncross),
            (li, n - wx[:, None] - wz[None, :] + ncross),
        )
        for logp, cnt in terms:
            if np.isneginf(logp):
                scores[cnt > 0] = -np.inf
            else:
                scores += cnt.astype(np.float64) * logp
    i, j = np.unravel_index(int(np.argmax(scores)), scores.shape)
    correction = PauliError(BitVec(n, int(xs[i])), BitVec(n, int(zs[j])))
    return DecoderOutcome(correction, "ml-oracle")
