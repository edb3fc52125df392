"""Topology of clique complexes: boundary matrices over GF(2), Betti
numbers, Euler characteristic and entropy, two-dimensional filtration
surfaces with transition detection, and clique persistence tracking.

Indexing bridge: clique sizes k = 1, 2, 3, ... (vertices, edges,
triangles) map to topological dimensions d = k - 1. Counts m_k are stored
by clique size; Betti numbers are reported by dimension as
beta_d = m_{d+1} - r_{d+1} - r_{d+2} with r_1 := 0, where r_k is the
GF(2) rank of the incidence of (k-1)-cliques in k-cliques.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .cliques import CliqueComplex, enumerate_cliques
from .errors import InvariantError
from .graph import ComplexGraph, VertexSet, clique_density, edge_filter, is_clique

NEG_INF = float("-inf")


@dataclass(frozen=True)
class BoundaryMatrix:
    """Incidence of (k-1)-cliques (rows) in k-cliques (columns).

    Rows are stored as integer bitmasks over the column index, so GF(2)
    elimination is a sequence of XORs.
    """

    k: int
    row_cliques: tuple[VertexSet, ...]
    col_cliques: tuple[VertexSet, ...]
    rows: tuple[int, ...]

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.row_cliques), len(self.col_cliques))

    def to_dense(self) -> np.ndarray:
        n_rows, n_cols = self.shape
        out = np.zeros((n_rows, n_cols), dtype=np.uint8)
        for i, bits in enumerate(self.rows):
            for j in range(n_cols):
                if (bits >> j) & 1:
                    out[i, j] = 1
        return out


def boundary_matrix(c: CliqueComplex, k: int) -> BoundaryMatrix:
    """Build B_k with deterministic lexicographic row/column order."""
    if k < 1:
        raise ValueError("k must be >= 1")
    row_cliques = tuple(sorted(c.by_size.get(k - 1, [])))
    col_cliques = tuple(sorted(c.by_size.get(k, [])))
    row_index = {s: i for i, s in enumerate(row_cliques)}
    rows = [0] * len(row_cliques)
    for j, col in enumerate(col_cliques):
        for facet in combinations(col, k - 1):
            i = row_index.get(facet)
            if i is None:
                raise InvariantError(
                    f"complex is not downward closed: {facet} missing"
                )
            rows[i] |= 1 << j
    return BoundaryMatrix(
        k=k, row_cliques=row_cliques, col_cliques=col_cliques, rows=tuple(rows)
    )


def _rank_bits(rows: Sequence[int]) -> int:
    """GF(2) rank by elimination on packed bit rows."""
    work = [r for r in rows if r]
    rank = 0
    while work:
        pivot_row = work.pop()
        rank += 1
        low_bit = pivot_row & -pivot_row
        work = [r ^ pivot_row if r & low_bit else r for r in work]
        work = [r for r in work if r]
    return rank


def gf2_rank(b: BoundaryMatrix) -> int:
    return _rank_bits(b.rows)


@dataclass(frozen=True)
class BettiProfile:
    """Betti numbers indexed by dimension, with the ranks and counts that
    produced them (indexed by clique size)."""

    betti: tuple[int, ...]
    ranks: dict[int, int]
    counts: dict[int, int]


def validate_closure(c: CliqueComplex) -> None:
    for k in sorted(c.by_size):
        if k < 2:
            continue
        lower = set(c.by_size.get(k - 1, []))
        for s in c.by_size[k]:
            for facet in combinations(s, k - 1):
                if facet not in lower:
                    raise InvariantError(
                        f"complex is not downward closed: {facet} missing"
                    )


def betti_numbers(c: CliqueComplex, dmax: int) -> BettiProfile:
    """Betti numbers beta_0..beta_dmax from binary ranks of the boundary
    matrices."""
    if dmax < 0:
        raise ValueError("dmax must be >= 0")
    top_needed = dmax + 2
    if c.k_max < top_needed and c.m(c.k_max) > 0:
        raise ValueError(
            f"complex enumerated through size {c.k_max} cannot support "
            f"dmax={dmax}; need sizes through {top_needed}"
        )
    validate_closure(c)
    ranks: dict[int, int] = {1: 0}
    for k in range(2, top_needed + 1):
        if c.m(k) == 0:
            ranks[k] = 0
        else:
            ranks[k] = gf2_rank(boundary_matrix(c, k))
    betti = []
    for d in range(dmax + 1):
        beta = c.m(d + 1) - ranks[d + 1] - ranks[d + 2]
        if beta < 0:
            raise InvariantError(f"negative Betti number at dimension {d}")
        betti.append(beta)
    counts = {k: c.m(k) for k in range(1, max(c.k_max, top_needed) + 1)}
    return BettiProfile(betti=tuple(betti), ranks=ranks, counts=counts)


def euler_characteristic(c: CliqueComplex) -> int:
    """Alternating sum of clique counts, starting at vertices:
    chi = m_1 - m_2 + m_3 - ..."""
    return sum((-1) ** (k - 1) * len(v) for k, v in c.by_size.items())


def euler_entropy(chi: int) -> float:
    """ln|chi|, with -inf at chi = 0 marking a topological transition."""
    if chi == 0:
        return NEG_INF
    return math.log(abs(chi))


def density_filtered_graph(
    g: ComplexGraph,
    k_ref: int,
    delta_t: float,
    cliques: Iterable[VertexSet] | None = None,
) -> ComplexGraph:
    """Rebuild the network from the k_ref-cliques of density >= delta_t.

    Cliques come from exhaustive enumeration unless a pre-found list is
    supplied (e.g. sampler output). The result keeps all n vertices.
    """
    if k_ref < 2:
        raise ValueError("k_ref must be >= 2")
    if cliques is None:
        source = enumerate_cliques(g, k_ref).by_size.get(k_ref, [])
    else:
        source = [tuple(sorted(s)) for s in cliques]
        for s in source:
            if len(s) != k_ref:
                raise ValueError(f"{s} is not a {k_ref}-set")
            if not is_clique(g, s):
                raise ValueError(f"{s} is not a clique in the host graph")
    w = np.zeros((g.n, g.n), dtype=complex)
    for s in source:
        if clique_density(g, s) >= delta_t:
            for i, j in combinations(s, 2):
                w[i, j] = g.weights[i, j]
                w[j, i] = g.weights[j, i]
    return ComplexGraph(g.n, w)


def density_filter_complex(
    g: ComplexGraph,
    k_ref: int,
    delta_t: float,
    cliques: Iterable[VertexSet] | None = None,
) -> CliqueComplex:
    """Full clique complex of the density-filtered reconstruction."""
    rebuilt = density_filtered_graph(g, k_ref, delta_t, cliques)
    return enumerate_cliques(rebuilt, rebuilt.n)


@dataclass(frozen=True)
class SurfaceCell:
    m: dict[int, int]
    chi: int
    s_chi: float

    @property
    def tpt(self) -> bool:
        return self.chi == 0


@dataclass(frozen=True)
class FiltrationSurface:
    """Grid over (omega_t, delta_t) of clique counts and Euler data."""

    omega_axis: tuple[float, ...]
    delta_axis: tuple[float, ...]
    cells: tuple[tuple[SurfaceCell, ...], ...]
    k_ref: int

    def cell(self, i: int, j: int) -> SurfaceCell:
        return self.cells[i][j]


def filtration_surface(
    g: ComplexGraph,
    omega_axis: Sequence[float],
    delta_axis: Sequence[float],
    k_ref: int,
) -> FiltrationSurface:
    """Two-dimensional filtration: cell (i, j) keeps edges with
    |w| <= omega_axis[i], then reconstructs from k_ref-cliques of density
    >= delta_axis[j] and takes the full clique complex."""
    omega_axis = tuple(float(x) for x in omega_axis)
    delta_axis = tuple(float(x) for x in delta_axis)
    if not omega_axis or not delta_axis:
        raise ValueError("axes must be nonempty")
    if list(omega_axis) != sorted(omega_axis) or list(delta_axis) != sorted(
        delta_axis
    ):
        raise ValueError("axes must be ascending")
    rows = []
    for omega_t in omega_axis:
        filtered = edge_filter(g, omega_t, "keep_leq")
        # One clique pass per omega row; each delta column just re-thresholds.
        ref_cliques = enumerate_cliques(filtered, k_ref).by_size.get(k_ref, [])
        with_density = [(clique_density(filtered, s), s) for s in ref_cliques]
        row = []
        for delta_t in delta_axis:
            keep = [s for d, s in with_density if d >= delta_t]
            complex_ = density_filter_complex(filtered, k_ref, delta_t, keep)
            chi = euler_characteristic(complex_)
            row.append(
                SurfaceCell(m=complex_.counts, chi=chi, s_chi=euler_entropy(chi))
            )
        rows.append(tuple(row))
    return FiltrationSurface(
        omega_axis=omega_axis,
        delta_axis=delta_axis,
        cells=tuple(rows),
        k_ref=k_ref,
    )


@dataclass(frozen=True)
class TptReport:
    """Cells where chi vanishes, plus adjacent cell pairs where it
    changes sign (the transition front)."""

    zero_cells: tuple[tuple[int, int], ...]
    sign_fronts: tuple[tuple[tuple[int, int], tuple[int, int]], ...]

    def __bool__(self) -> bool:
        return bool(self.zero_cells or self.sign_fronts)


def tpt_points(s: FiltrationSurface) -> TptReport:
    zeros = []
    fronts = []
    n_i = len(s.omega_axis)
    n_j = len(s.delta_axis)
    for i in range(n_i):
        for j in range(n_j):
            chi = s.cell(i, j).chi
            if chi == 0:
                zeros.append((i, j))
            for di, dj in ((1, 0), (0, 1)):
                i2, j2 = i + di, j + dj
                if i2 < n_i and j2 < n_j:
                    if chi * s.cell(i2, j2).chi < 0:
                        fronts.append(((i, j), (i2, j2)))
    return TptReport(zero_cells=tuple(zeros), sign_fronts=tuple(fronts))


def euler_entropy_path(
    s: FiltrationSurface, path: Sequence[tuple[int, int]]
) -> list[float]:
    """Euler entropy along an ordered list of grid cells."""
    out = []
    for i, j in path:
        if not (0 <= i < len(s.omega_axis) and 0 <= j < len(s.delta_axis)):
            raise ValueError(f"cell ({i}, {j}) outside the grid")
        out.append(s.cell(i, j).s_chi)
    return out


@dataclass(frozen=True)
class PersistencePair:
    clique: VertexSet
    birth: float
    death: float


def clique_persistence(g: ComplexGraph, k: int) -> list[PersistencePair]:
    """Birth/death thresholds of each k-clique under the growing keep_leq
    edge filtration.

    A clique is born when its heaviest internal edge enters; it dies when
    it stops being maximal, i.e. at the smallest threshold at which some
    outside vertex adjacent to all members has all its connecting edges
    present. Cliques never absorbed die at +inf.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    mags = g.magnitudes()
    pairs = []
    for s in enumerate_cliques(g, k).by_size.get(k, []):
        internal = [mags[i, j] for i, j in combinations(s, 2)]
        birth = max(internal)
        death = math.inf
        for v in range(g.n):
            if v in s:
                continue
            spokes = [mags[v, u] for u in s]
            if any(x == 0 for x in spokes):
                continue
            absorbed_at = max(birth, max(spokes))
            death = min(death, absorbed_at)
        pairs.append(PersistencePair(clique=s, birth=float(birth), death=death))
    return pairs
