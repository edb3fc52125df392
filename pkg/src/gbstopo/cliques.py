"""Weighted clique search seeded by sampler output, plus exact clique
enumeration for oracles and downstream topology.

The search pipeline per shot is: pattern -> vertex subset -> greedy
shrinking to a clique -> local search toward the target size. Both the
shrinking and the expansion score candidate sets by the weighted density
|sum w_ij| / (k(k-1)), which keeps complex phase cancellation first class.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .errors import BudgetError, UndefinedRatioError
from .graph import (
    ComplexGraph,
    VertexSet,
    clique_density,
    is_clique,
    vertex_set,
)
from .sampler import Pattern, SampleBatch

CLIQUE_BUDGET = 5_000_000


@dataclass(frozen=True)
class Clique:
    vertices: VertexSet
    k: int
    density: float


@dataclass(frozen=True)
class CliqueComplex:
    """All cliques of a graph grouped by size, complete through k_max.

    by_size[k] lists every k-clique in ascending lexicographic order.
    If by_size[k_max] is empty the graph has no cliques beyond k_max
    either, so the complex is complete at every size.
    """

    by_size: dict[int, list[VertexSet]]
    k_max: int

    def m(self, k: int) -> int:
        return len(self.by_size.get(k, []))

    @property
    def counts(self) -> dict[int, int]:
        return {k: len(v) for k, v in sorted(self.by_size.items())}

    def max_nonempty_size(self) -> int:
        sizes = [k for k, v in self.by_size.items() if v]
        return max(sizes) if sizes else 0


@dataclass(frozen=True)
class SearchReport:
    shots_in: int
    cliques_found: tuple[Clique, ...]
    success_rate: float
    density_histogram: dict[float, int]


def _density_or_zero(g: ComplexGraph, s: VertexSet) -> float:
    return clique_density(g, s) if len(s) >= 2 else 0.0


def make_clique(g: ComplexGraph, s: Sequence[int]) -> Clique:
    s = vertex_set(s)
    if not is_clique(g, s):
        raise ValueError(f"{s} is not a clique")
    return Clique(vertices=s, k=len(s), density=_density_or_zero(g, s))


def pattern_to_subset(p: Pattern) -> VertexSet:
    """Vertices whose mode registered at least one photon."""
    return tuple(i for i, c in enumerate(p) if c >= 1)


def greedy_shrink(g: ComplexGraph, s: Sequence[int]) -> Clique:
    """Peel vertices until the set is a clique.

    At each step the removed vertex is the one whose removal maximizes the
    residual weighted density; ties remove the smallest index.
    """
    cur = list(vertex_set(s))
    if not cur:
        raise ValueError("cannot shrink an empty set")
    while not is_clique(g, cur):
        best_v = None
        best_score = -1.0
        for v in cur:
            rest = tuple(u for u in cur if u != v)
            score = _density_or_zero(g, rest)
            if score > best_score:
                best_score = score
                best_v = v
        cur.remove(best_v)
    return make_clique(g, cur)


def _common_neighbors(g: ComplexGraph, s: Sequence[int]) -> list[int]:
    members = set(s)
    out = []
    for v in range(g.n):
        if v in members:
            continue
        if all(g.weights[v, u] != 0 for u in s):
            out.append(v)
    return out


def local_search(
    g: ComplexGraph, c: Clique, target_k: int, max_iters: int = 50
) -> Clique | None:
    """Grow a clique to exactly target_k vertices, swapping out of plateaus.

    Expansion adds the common neighbor that maximizes the new density.
    When no common neighbor exists below the target, up to max_iters swap
    moves are tried: replace one member by an outside vertex adjacent to
    the rest, preferring swaps that reopen growth, otherwise accepting
    density-raising ones. Oversized inputs are trimmed first (every
    subset of a clique is a clique). Returns None when the target stays
    unreachable.
    """
    cur = list(c.vertices)
    while len(cur) > target_k:
        best_v = None
        best_score = -1.0
        for v in cur:
            rest = tuple(u for u in cur if u != v)
            score = _density_or_zero(g, rest)
            if score > best_score:
                best_score = score
                best_v = v
        cur.remove(best_v)

    def expand() -> None:
        while len(cur) < target_k:
            cands = _common_neighbors(g, cur)
            if not cands:
                return
            best_v = None
            best_score = -1.0
            for v in cands:
                score = _density_or_zero(g, vertex_set(cur + [v]))
                if score > best_score:
                    best_score = score
                    best_v = v
            cur.append(best_v)

    expand()
    iters = 0
    while len(cur) < target_k and iters < max_iters:
        growth_swap = None
        density_swap = None
        base_density = _density_or_zero(g, vertex_set(cur))
        for u in sorted(cur):
            rest = [w for w in cur if w != u]
            for v in _common_neighbors(g, rest):
                if v == u:
                    continue
                swapped = vertex_set(rest + [v])
                if growth_swap is None and _common_neighbors(g, swapped):
                    growth_swap = (u, v)
                    break
                if (
                    density_swap is None
                    and _density_or_zero(g, swapped) > base_density
                ):
                    density_swap = (u, v)
            if growth_swap:
                break
        chosen = growth_swap or density_swap
        if chosen is None:
            return None
        u, v = chosen
        cur.remove(u)
        cur.append(v)
        iters += 1
        expand()
    if len(cur) == target_k:
        return make_clique(g, cur)
    return None


def find_cliques(
    g: ComplexGraph, b: SampleBatch, target_k: int, max_iters: int = 50
) -> SearchReport:
    """Run the full per-shot search pipeline and tally the success rate.

    Empty subsets (vacuum shots) count as failures in the denominator.
    """
    found: list[Clique] = []
    for p in b.patterns:
        subset = pattern_to_subset(p)
        if not subset:
            continue
        seed_clique = greedy_shrink(g, subset)
        result = local_search(g, seed_clique, target_k, max_iters)
        if result is not None:
            found.append(result)
    shots = len(b.patterns)
    rate = len(found) / shots if shots else 0.0
    hist: dict[float, int] = {}
    for c in found:
        hist[c.density] = hist.get(c.density, 0) + 1
    return SearchReport(
        shots_in=shots,
        cliques_found=tuple(found),
        success_rate=rate,
        density_histogram=dict(sorted(hist.items())),
    )


def enhancement(p_num: float, p_den: float) -> float:
    """Success-rate ratio between two samplers."""
    if p_den <= 0:
        raise UndefinedRatioError(p_num, p_den)
    return p_num / p_den


def binomial_interval(
    successes: int, shots: int, z: float = 1.959963984540054
) -> tuple[float, float]:
    """Wilson score interval for a binomial rate (default 95%)."""
    if shots <= 0:
        raise ValueError("shots must be positive")
    p = successes / shots
    den = 1.0 + z * z / shots
    centre = (p + z * z / (2 * shots)) / den
    half = z * math.sqrt(p * (1 - p) / shots + z * z / (4 * shots * shots)) / den
    return centre - half, centre + half


def _bron_kerbosch_pivot(
    r: list[int],
    p: set[int],
    x: set[int],
    nbrs: list[set[int]],
    out: list[VertexSet],
) -> None:
    if not p and not x:
        out.append(tuple(sorted(r)))
        return
    # Pivot with the most candidates swallowed; smallest index on ties.
    pivot = max(sorted(p | x), key=lambda u: len(p & nbrs[u]))
    for v in sorted(p - nbrs[pivot]):
        _bron_kerbosch_pivot(r + [v], p & nbrs[v], x & nbrs[v], nbrs, out)
        p.remove(v)
        x.add(v)


def maximal_cliques(g: ComplexGraph) -> list[VertexSet]:
    """All maximal cliques, via Bron-Kerbosch with pivoting."""
    nbrs = [set(g.neighbors(v)) for v in range(g.n)]
    out: list[VertexSet] = []
    _bron_kerbosch_pivot([], set(range(g.n)), set(), nbrs, out)
    return sorted(out)


def enumerate_cliques(
    g: ComplexGraph, k_max: int, budget: int = CLIQUE_BUDGET
) -> CliqueComplex:
    """Every clique of size 1..k_max, via maximal cliques plus downward
    closure. Complete and duplicate free."""
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    collected: set[VertexSet] = set()
    for m in maximal_cliques(g):
        for k in range(1, min(len(m), k_max) + 1):
            for sub in combinations(m, k):
                collected.add(sub)
                if len(collected) > budget:
                    raise BudgetError(
                        f"clique count exceeds budget {budget}",
                        required=len(collected),
                        budget=budget,
                    )
    by_size: dict[int, list[VertexSet]] = {k: [] for k in range(1, k_max + 1)}
    for s in sorted(collected, key=lambda t: (len(t), t)):
        by_size[len(s)].append(s)
    return CliqueComplex(by_size=by_size, k_max=k_max)


def save_report(r: SearchReport) -> bytes:
    cliques = sorted(
        r.cliques_found, key=lambda c: (-c.density, c.vertices)
    )
    doc = {
        "shots": r.shots_in,
        "successes": len(r.cliques_found),
        "success_rate": r.success_rate,
        "density_histogram": [
            {"density": d, "count": c} for d, c in r.density_histogram.items()
        ],
        "cliques": [
            {"vertices": list(c.vertices), "density": c.density}
            for c in cliques
        ],
    }
    return json.dumps(doc, indent=1).encode("utf-8")
