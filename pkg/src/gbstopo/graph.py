"""Complex-weighted undirected graphs: construction, generators, densities,
threshold filters and file IO.

Edge weights are complex numbers w_ij = alpha + i*beta. A missing edge is
stored as exactly 0, so "edge present" and "weight nonzero" coincide.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import FormatError

# An ascending tuple of distinct vertex indices.
VertexSet = tuple[int, ...]


def vertex_set(vertices: Iterable[int]) -> VertexSet:
    """Canonicalize an iterable of vertex indices into a sorted tuple."""
    vs = tuple(sorted(int(v) for v in vertices))
    if any(a == b for a, b in zip(vs, vs[1:])):
        raise ValueError(f"duplicate vertex in {vs}")
    return vs


@dataclass(frozen=True, eq=False)
class ComplexGraph:
    """Immutable n-vertex network with a complex symmetric adjacency matrix.

    Invariants enforced at construction: weights is n x n, symmetric,
    zero on the diagonal.
    """

    n: int
    weights: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("vertex count must be positive")
        w = np.asarray(self.weights, dtype=complex)
        if w.shape != (self.n, self.n):
            raise ValueError(f"weights shape {w.shape} != ({self.n}, {self.n})")
        if not np.array_equal(w, w.T):
            raise ValueError("weights must be symmetric")
        if np.any(w.diagonal() != 0):
            raise ValueError("diagonal must be zero")
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)

    def magnitudes(self) -> np.ndarray:
        return np.abs(self.weights)

    def has_edge(self, i: int, j: int) -> bool:
        return i != j and self.weights[i, j] != 0

    def edges(self) -> Iterator[tuple[int, int, complex]]:
        """Yield (i, j, w_ij) with i < j for every present edge."""
        iu, ju = np.triu_indices(self.n, k=1)
        for i, j in zip(iu, ju):
            w = self.weights[i, j]
            if w != 0:
                yield int(i), int(j), complex(w)

    def num_edges(self) -> int:
        return int(np.count_nonzero(self.weights)) // 2

    def neighbors(self, v: int) -> VertexSet:
        return tuple(int(u) for u in np.nonzero(self.weights[v])[0])


def graph_from_edges(
    n: int, edges: Iterable[tuple[int, int, complex]]
) -> ComplexGraph:
    """Build a graph from (i, j, weight) triples, mirroring each edge."""
    w = np.zeros((n, n), dtype=complex)
    for i, j, wij in edges:
        w[i, j] = wij
        w[j, i] = wij
    return ComplexGraph(n, w)


def load_graph(source) -> ComplexGraph:
    """Parse the canonical edge-list format.

    `source` may be bytes, str, or a readable file object. The document is
    a JSON object {"n": int, "edges": [{"i","j","re","im"}, ...]} with
    i < j and no duplicates; unlisted pairs have weight 0.
    """
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    try:
        doc = json.loads(source)
    except json.JSONDecodeError as exc:
        raise FormatError(f"graph document is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "n" not in doc or "edges" not in doc:
        raise FormatError("graph document must have fields 'n' and 'edges'")
    n = doc["n"]
    if not isinstance(n, int) or n < 1:
        raise FormatError(f"invalid vertex count: {n!r}")
    w = np.zeros((n, n), dtype=complex)
    seen: set[tuple[int, int]] = set()
    for rec in doc["edges"]:
        try:
            i, j = int(rec["i"]), int(rec["j"])
            wij = complex(float(rec["re"]), float(rec["im"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"bad edge record {rec!r}") from exc
        if i == j:
            raise FormatError(f"self-loop at vertex {i} is not allowed")
        if not (0 <= i < n and 0 <= j < n):
            raise FormatError(f"edge ({i},{j}) out of range for n={n}")
        if i > j:
            raise FormatError(f"edge ({i},{j}) violates i < j ordering")
        if (i, j) in seen:
            raise FormatError(f"duplicate edge ({i},{j})")
        if wij == 0:
            raise FormatError(
                f"edge ({i},{j}) has zero weight; omit absent edges instead"
            )
        seen.add((i, j))
        w[i, j] = wij
        w[j, i] = wij
    return ComplexGraph(n, w)


def save_graph(g: ComplexGraph) -> bytes:
    """Serialize to the canonical edge-list format; inverse of load_graph.

    Floats are emitted with repr precision so the round trip is bit exact.
    """
    edges = [
        {"i": i, "j": j, "re": w.real, "im": w.imag} for i, j, w in g.edges()
    ]
    return json.dumps({"n": g.n, "edges": edges}, indent=1).encode("utf-8")


WeightLaw = tuple[tuple[float, float], tuple[float, float]]


def random_dual_layer(
    n: int,
    edge_prob: float,
    weight_law: WeightLaw = ((-1.0, 1.0), (-1.0, 1.0)),
    seed: int = 0,
) -> ComplexGraph:
    """Random network with independent real and imaginary weight layers.

    Each unordered pair is an edge with probability edge_prob; a present
    edge gets w = alpha + i*beta with alpha, beta uniform on the given
    ranges. Deterministic for a fixed seed.
    """
    if not 0.0 <= edge_prob <= 1.0:
        raise ValueError(f"edge probability {edge_prob} outside [0, 1]")
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    m = n * (n - 1) // 2
    present = rng.random(m) < edge_prob
    (alo, ahi), (blo, bhi) = weight_law
    alpha = rng.uniform(alo, ahi, m)
    beta = rng.uniform(blo, bhi, m)
    w = np.zeros((n, n), dtype=complex)
    iu, ju = np.triu_indices(n, k=1)
    vals = np.where(present, alpha + 1j * beta, 0.0)
    w[iu, ju] = vals
    w[ju, iu] = vals
    return ComplexGraph(n, w)


def clique_density(g: ComplexGraph, s: Sequence[int]) -> float:
    """Weighted density |sum over ordered pairs of w_ij| / (k(k-1)).

    Defined for any vertex set of size k >= 2; s need not be a clique.
    """
    s = vertex_set(s)
    k = len(s)
    if k < 2:
        raise ValueError("density requires at least 2 vertices")
    sub = g.weights[np.ix_(s, s)]
    return float(abs(sub.sum())) / (k * (k - 1))


def edge_filter(g: ComplexGraph, omega_t: float, mode: str) -> ComplexGraph:
    """Retain edges by weight magnitude.

    keep_leq keeps edges with 0 < |w| <= omega_t, keep_geq keeps
    |w| >= omega_t. Vertex count is unchanged.
    """
    if omega_t < 0:
        raise ValueError("threshold must be nonnegative")
    mag = g.magnitudes()
    if mode == "keep_leq":
        mask = (mag > 0) & (mag <= omega_t)
    elif mode == "keep_geq":
        mask = (mag > 0) & (mag >= omega_t)
    else:
        raise ValueError(f"unknown filter mode {mode!r}")
    return ComplexGraph(g.n, np.where(mask, g.weights, 0.0))


def is_clique(g: ComplexGraph, s: Sequence[int]) -> bool:
    """True iff every pair in s is an edge; empty and singleton sets pass."""
    s = vertex_set(s)
    if len(s) <= 1:
        return True
    sub = g.weights[np.ix_(s, s)]
    off_diag = sub[~np.eye(len(s), dtype=bool)]
    return bool(np.all(off_diag != 0))


def relabel(g: ComplexGraph, perm: Sequence[int]) -> ComplexGraph:
    """Apply a vertex permutation: new vertex perm[v] is old vertex v."""
    perm = list(perm)
    if sorted(perm) != list(range(g.n)):
        raise ValueError("perm must be a permutation of range(n)")
    inv = np.argsort(perm)
    return ComplexGraph(g.n, g.weights[np.ix_(inv, inv)])
