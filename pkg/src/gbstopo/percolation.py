"""k-clique percolation, topological damage injection, Renyi entropy of
sampling patterns, and the threshold sweep tying entropy to the
percolation order parameter.

Two k-cliques are adjacent when they differ by exactly one node, i.e.
share k-1 nodes. Percolation clusters are the connected components of
that adjacency; the order parameter Phi = N*/N is the node fraction of
the largest cluster.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Sequence

import numpy as np
from scipy.stats import spearmanr

from . import sampler as smp
from .cliques import enumerate_cliques
from .encoding import encode
from .errors import EmptyConditionError
from .graph import ComplexGraph, VertexSet
from .tda import density_filtered_graph


@dataclass(frozen=True)
class PercolationReport:
    k: int
    clusters: tuple[VertexSet, ...]
    phi: float
    largest_nodes: int


@dataclass(frozen=True)
class PhiCurve:
    axis: tuple[float, ...]
    phi: tuple[float, ...]
    largest_nodes: tuple[int, ...]


@dataclass(frozen=True)
class EntropyCurve:
    axis: tuple[float, ...]
    values: tuple[float, ...]          # normalized entropies in [0, 1]
    alpha: float
    photon_total: int
    raw_values: tuple[float, ...] = ()
    backend: str = "exact"
    shots: int = 0


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, a: int) -> int:
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1


def clique_adjacency(cliques: Sequence[VertexSet]) -> list[list[int]]:
    """Adjacency lists over clique indices; cliques are adjacent iff they
    share exactly k-1 nodes.

    Found by bucketing on (k-1)-subsets: two distinct k-cliques share at
    most one such subset, so each adjacent pair appears in exactly one
    bucket.
    """
    if not cliques:
        return []
    k = len(cliques[0])
    if any(len(c) != k for c in cliques):
        raise ValueError("cliques must all have the same size")
    buckets: dict[VertexSet, list[int]] = {}
    for idx, c in enumerate(cliques):
        for facet in combinations(c, k - 1):
            buckets.setdefault(facet, []).append(idx)
    adj: list[set[int]] = [set() for _ in cliques]
    for members in buckets.values():
        for a, b in combinations(members, 2):
            adj[a].add(b)
            adj[b].add(a)
    return [sorted(s) for s in adj]


def percolation_clusters(g: ComplexGraph, k: int) -> PercolationReport:
    """Union-find over clique adjacency; clusters report node unions."""
    if k < 2:
        raise ValueError("k must be >= 2")
    cliques = enumerate_cliques(g, k).by_size.get(k, [])
    if not cliques:
        return PercolationReport(k=k, clusters=(), phi=0.0, largest_nodes=0)
    adj = clique_adjacency(cliques)
    uf = _UnionFind(len(cliques))
    for a, nbrs in enumerate(adj):
        for b in nbrs:
            uf.union(a, b)
    groups: dict[int, set[int]] = {}
    for idx, c in enumerate(cliques):
        groups.setdefault(uf.find(idx), set()).update(c)
    clusters = sorted(
        (tuple(sorted(nodes)) for nodes in groups.values()),
        key=lambda t: (-len(t), t),
    )
    largest = len(clusters[0])
    return PercolationReport(
        k=k,
        clusters=tuple(clusters),
        phi=largest / g.n,
        largest_nodes=largest,
    )


def damage(g: ComplexGraph, node: int, k: int) -> ComplexGraph:
    """Remove every edge lying inside at least one k-clique that contains
    `node`; everything else is untouched."""
    if not 0 <= node < g.n:
        raise ValueError(f"node {node} out of range")
    w = np.array(g.weights)
    for s in enumerate_cliques(g, k).by_size.get(k, []):
        if node not in s:
            continue
        for i, j in combinations(s, 2):
            w[i, j] = 0.0
            w[j, i] = 0.0
    return ComplexGraph(g.n, w)


def renyi_entropy(p, alpha: float) -> float:
    """Natural-log Renyi entropy H_alpha = ln(sum p_i^alpha) / (1 - alpha),
    with the Shannon limit at alpha = 1."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if isinstance(p, Mapping):
        probs = np.array(list(p.values()), dtype=float)
    else:
        probs = np.asarray(list(p), dtype=float)
    if np.any(probs < 0):
        raise ValueError("negative probability")
    if abs(float(probs.sum()) - 1.0) > 1e-9:
        raise ValueError(f"unnormalized distribution (sum {probs.sum()})")
    probs = probs[probs > 0]
    if alpha == 1.0:
        return float(-np.sum(probs * np.log(probs)))
    return float(np.log(np.sum(probs**alpha)) / (1.0 - alpha))


def normalized_renyi(
    hist: Mapping[smp.Pattern, float], alpha: float, modes: int, photons: int
) -> float:
    """Entropy relative to its ceiling over collision-free patterns,
    ln C(modes, photons)."""
    ceiling = math.comb(modes, photons)
    if ceiling < 2:
        raise ValueError(
            f"normalization undefined: C({modes},{photons}) = {ceiling}"
        )
    return renyi_entropy(hist, alpha) / math.log(ceiling)


def curve_correlation(a: Sequence[float], b: Sequence[float]) -> float:
    """Spearman rank correlation with mid-rank ties."""
    if len(a) != len(b):
        raise ValueError("sequences must have equal length")
    if len(a) < 3:
        raise ValueError("need at least 3 points")
    rho = spearmanr(list(a), list(b)).statistic
    return float(rho)


@dataclass(frozen=True)
class SweepConfig:
    """Sampler/encoding settings shared by every threshold of a sweep."""

    k_ref: int
    alpha: float
    photon_total: int
    target_spectral: float = 0.7
    d: float = 0.0
    backend: str = "exact"
    shots: int = 3000
    seed: int = 0
    cutoff_total: int = 6
    cutoff_per_mode: int = 6
    collision_policy: str = "threshold_collapse"


def _entropy_at(g: ComplexGraph, cfg: SweepConfig) -> tuple[float, float]:
    """(H_alpha, normalized H_alpha) of the conditioned pattern law of g.

    Graphs that cannot be sampled (no edges) or that put no mass on the
    conditioning total report the floor value 0.
    """
    if g.num_edges() == 0:
        return 0.0, 0.0
    enc = encode(g, cfg.target_spectral, cfg.d)
    try:
        if cfg.backend == "exact":
            dist = smp.enumerate_distribution(
                enc, cfg.cutoff_total, cfg.cutoff_per_mode
            )
            hist = smp.conditional_from_distribution(
                dist, cfg.photon_total, cfg.collision_policy
            )
        else:
            if cfg.backend == "gbs":
                batch = smp.sample_gbs(
                    enc, cfg.shots, cfg.cutoff_total, cfg.cutoff_per_mode, cfg.seed
                )
            elif cfg.backend == "squashed":
                batch = smp.sample_squashed(enc, cfg.shots, cfg.seed)
            else:
                raise ValueError(f"unknown sweep backend {cfg.backend!r}")
            hist = smp.conditional_pattern_histogram(
                batch, cfg.photon_total, cfg.collision_policy
            )
    except EmptyConditionError:
        return 0.0, 0.0
    h = renyi_entropy(hist, cfg.alpha)
    h_norm = normalized_renyi(hist, cfg.alpha, g.n, cfg.photon_total)
    return h, h_norm


def percolation_entropy_sweep(
    g: ComplexGraph, thresholds: Sequence[float], cfg: SweepConfig
) -> tuple[PhiCurve, EntropyCurve]:
    """Per density threshold: reconstruct the network from qualifying
    k_ref-cliques, measure Phi there, re-encode and measure the
    normalized Renyi entropy of photon patterns conditioned on the
    configured total."""
    axis = tuple(float(t) for t in thresholds)
    phis: list[float] = []
    largest: list[int] = []
    raw: list[float] = []
    norm: list[float] = []
    for delta_t in axis:
        filtered = density_filtered_graph(g, cfg.k_ref, delta_t)
        report = percolation_clusters(filtered, cfg.k_ref)
        phis.append(report.phi)
        largest.append(report.largest_nodes)
        h, h_norm = _entropy_at(filtered, cfg)
        raw.append(h)
        norm.append(h_norm)
    phi_curve = PhiCurve(axis=axis, phi=tuple(phis), largest_nodes=tuple(largest))
    entropy_curve = EntropyCurve(
        axis=axis,
        values=tuple(norm),
        alpha=cfg.alpha,
        photon_total=cfg.photon_total,
        raw_values=tuple(raw),
        backend=cfg.backend,
        shots=0 if cfg.backend == "exact" else cfg.shots,
    )
    return phi_curve, entropy_curve
