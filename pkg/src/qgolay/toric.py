"""Distance-d toric code on a d x d torus, qubits on edges (n = 2*d^2).

Layout convention (fixes dataset and wire bit order): the horizontal edge
leaving vertex (r, c) eastward has index r*d + c; the vertical edge leaving
it southward has index d^2 + r*d + c.  Vertex checks are X-type, plaquette
checks Z-type; check (r, c) maps to row r*d + c.  One dependent check per
type -- the one at (d-1, d-1) -- is dropped from the external syndrome and
reconstructed by parity, so the syndrome is 2*(d^2 - 1) bits (48 at d = 5).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .css import CodeConstructionError, CssCode, PauliError, Syndrome
from .gf2 import BitMat, BitVec, rank

Coord = tuple[int, int]


@dataclass(frozen=True)
class ToricLattice:
    """Toric code instance: the CSS view plus the full (dependent) check sets."""

    d: int
    code: CssCode
    vertex_checks: BitMat
    plaquette_checks: BitMat

    @property
    def n(self) -> int:
        return 2 * self.d * self.d


def horizontal_edge(d: int, r: int, c: int) -> int:
    return (r % d) * d + (c % d)


def vertical_edge(d: int, r: int, c: int) -> int:
    return d * d + (r % d) * d + (c % d)


def _vertex_row(d: int, r: int, c: int) -> int:
    edges = (
        horizontal_edge(d, r, c),
        horizontal_edge(d, r, c - 1),
        vertical_edge(d, r, c),
        vertical_edge(d, r - 1, c),
    )
    bits = 0
    for e in edges:
        bits |= 1 << e
    return bits

def _plaquette_row(d: int, r: int, c: int) -> int:
    edges = (
        horizontal_edge(d, r, c),
        horizontal_edge(d, r + 1, c),
        vertical_edge(d, r, c),
        vertical_edge(d, r, c + 1),
    )
    bits = 0
    for e in edges:
        bits |= 1 << e
    return bits


@lru_cache(maxsize=None)
def build_toric(d: int) -> ToricLattice:
    """Build and validate the distance-d toric code."""
    if d < 2:
        raise ValueError(f"toric code needs d >= 2, got {d}")
    n = 2 * d * d
    vertex = BitMat(
        tuple(_vertex_row(d, r, c) for r in range(d) for c in range(d)), n
    )
    plaquette = BitMat(
        tuple(_plaquette_row(d, r, c) for r in range(d) for c in range(d)), n
    )
    for m, what in ((vertex, "vertex"), (plaquette, "plaquette")):
        if any(row.bit_count() != 4 for row in m.rows):
            raise CodeConstructionError(f"toric d={d}: {what} row weight != 4")
        acc = 0
        for row in m.rows:
            acc ^= row
        if acc:
            raise CodeConstructionError(f"toric d={d}: {what} global parity broken")
        if rank(m) != d * d - 1:
            raise CodeConstructionError(f"toric d={d}: {what} rank != d^2 - 1")
    # Non-contractible loops: X logicals cross the torus on the dual lattice,
    # Z logicals on the direct lattice; weight d each, symplectic pairing 1-1.
    zeros = BitVec.zeros(n)
    lx0 = BitVec.from_indices(n, [vertical_edge(d, 0, c) for c in range(d)])
    lz0 = BitVec.from_indices(n, [vertical_edge(d, r, 0) for r in range(d)])
    lx1 = BitVec.from_indices(n, [horizontal_edge(d, r, 0) for r in range(d)])
    lz1 = BitVec.from_indices(n, [horizontal_edge(d, 0, c) for c in range(d)])
    code = CssCode(
        name=f"toric:{d}",
        n=n,
        hx=BitMat(vertex.rows[:-1], n),
        hz=BitMat(plaquette.rows[:-1], n),
        logical_x=(PauliError(lx0, zeros), PauliError(lx1, zeros)),
        logical_z=(PauliError(zeros, lz0), PauliError(zeros, lz1)),
        distance=d,
    )
    return ToricLattice(d=d, code=code, vertex_checks=vertex, plaquette_checks=plaquette)


def _defects(outcome_bits: int, n_kept: int, d: int) -> list[Coord]:
    """Coordinates of violated checks, reconstructing the dropped (d-1, d-1) one."""
    coords = [(i // d, i % d) for i in range(n_kept) if (outcome_bits >> i) & 1]
    if len(coords) % 2:
        coords.append((d - 1, d - 1))
    return coords


def defect_positions(lattice: ToricLattice, s: Syndrome) -> tuple[list[Coord], list[Coord]]:
    """(plaquette defects, vertex defects) for a syndrome of this lattice.

    Plaquette (Z-type) defects flag X errors, vertex (X-type) defects flag Z
    errors; each list always has even length because a check set's total
    parity is fixed by the other checks.
    """
    d = lattice.d
    n_checks = d * d - 1
    if s.n_z != n_checks or s.n_x != n_checks:
        raise ValueError(
            f"syndrome layout {s.n_z}+{s.n_x} does not match toric d={d}"
        )
    plaquette = _defects(s.z_outcomes.bits, n_checks, d)
    vertex = _defects(s.x_outcomes.bits, n_checks, d)
    return plaquette, vertex


def toroidal_distance(d: int, a: Coord, b: Coord) -> int:
    dr = abs(a[0] - b[0])
    dc = abs(a[1] - b[1])
    return min(dr, d - dr) + min(dc, d - dc)


def _axis_steps(d: int, start: int, stop: int) -> list[int]:
    """Signed unit steps along one axis, wrapping the short way (+1 on ties)."""
    delta = (stop - start) % d
    if delta == 0:
        return []
    if delta <= d - delta:
        return [+1] * delta
    return [-1] * (d - delta)


def plaquette_path_edges(d: int, a: Coord, b: Coord) -> list[int]:
    """Edges crossed by a shortest dual-lattice walk from plaquette a to b (rows first)."""
    edges = []
    r, c = a
    for step in _axis_steps(d, a[0], b[0]):
        # crossing between plaquette rows r and r+step shares a horizontal edge
        edges.append(horizontal_edge(d, r + (1 if step > 0 else 0), c))
        r = (r + step) % d
    for step in _axis_steps(d, a[1], b[1]):
        edges.append(vertical_edge(d, r, c + (1 if step > 0 else 0)))
        c = (c + step) % d
    return edges


def vertex_path_edges(d: int, a: Coord, b: Coord) -> list[int]:
    """Edges of a shortest direct-lattice walk from vertex a to b (rows first)."""
    edges = []
    r, c = a
    for step in _axis_steps(d, a[0], b[0]):
        edges.append(vertical_edge(d, r if step > 0 else r - 1, c))
        r = (r + step) % d
    for step in _axis_steps(d, a[1], b[1]):
        edges.append(horizontal_edge(d, r, c if step > 0 else c - 1))
        c = (c + step) % d
    return edges
