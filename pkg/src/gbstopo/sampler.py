"""Exact desk-scale simulation of the GBS output law, classical baselines
and a uniform loss model.

The pure-state law for a machine program (U, r_i) with B = U diag(tanh r) U^T:

    P(p) = (prod_i sech r_i) * |haf(B_p)|^2 / prod_i p_i!

where B_p repeats row/column i exactly p_i times. Probabilities of patterns
with odd photon total vanish (no perfect matching of an odd set).

All samplers draw per-shot randomness from (seed, backend tag, shot index),
so batches are bit-reproducible regardless of execution order.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .encoding import GBSEncoding, reconstruct
from .errors import BudgetError, EmptyConditionError, FormatError, InvariantError

Pattern = tuple[int, ...]

PATTERN_BUDGET = 5_000_000

# Stream tags keep the per-shot RNG streams of different consumers disjoint.
_TAG_GBS = 0
_TAG_UNIFORM = 1
_TAG_SQUASHED = 2
_TAG_LOSS = 3


@dataclass(frozen=True)
class PatternDistribution:
    """Finite truncation of the sampler law, keyed by photon pattern."""

    entries: dict[Pattern, float]
    cutoff_total: int
    cutoff_per_mode: int
    mass: float


@dataclass(frozen=True)
class SampleBatch:
    patterns: tuple[Pattern, ...]
    seed: int
    backend: str
    loss_eta: float = 1.0
    cutoff_total: int | None = None
    cutoff_per_mode: int | None = None

    def __len__(self) -> int:
        return len(self.patterns)


def hafnian(m: np.ndarray) -> complex:
    """Hafnian by recursive expansion with memoization on index subsets.

    Sums the product of entries over all perfect matchings. The empty
    matrix gives 1 and odd dimensions give 0. Adequate to dim ~ 20.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("hafnian requires a square matrix")
    dim = m.shape[0]
    if dim and float(np.max(np.abs(m - m.T))) > 1e-12:
        raise ValueError("hafnian requires a symmetric matrix")
    if dim == 0:
        return 1.0 + 0.0j
    if dim % 2 == 1:
        return 0.0 + 0.0j

    memo: dict[int, complex] = {}

    def rec(mask: int) -> complex:
        if mask == 0:
            return 1.0 + 0.0j
        cached = memo.get(mask)
        if cached is not None:
            return cached
        i = (mask & -mask).bit_length() - 1  # lowest set index
        rest = mask & ~(1 << i)
        total = 0.0 + 0.0j
        sub = rest
        while sub:
            j = (sub & -sub).bit_length() - 1
            sub &= sub - 1
            mij = m[i, j]
            if mij != 0:
                total += mij * rec(rest & ~(1 << j))
        memo[mask] = total
        return total

    return complex(rec((1 << dim) - 1))


def _sech_prefactor(lambdas: np.ndarray) -> float:
    # sech(atanh(lam)) = sqrt(1 - lam^2)
    return float(np.prod(np.sqrt(1.0 - lambdas**2)))


def _pattern_prob(b: np.ndarray, prefactor: float, p: Pattern) -> float:
    total = sum(p)
    if total % 2 == 1:
        return 0.0
    if total == 0:
        return prefactor
    rows = np.repeat(np.arange(len(p)), p)
    h = hafnian(b[np.ix_(rows, rows)])
    denom = 1.0
    for c in p:
        denom *= math.factorial(c)
    return prefactor * float(abs(h)) ** 2 / denom


def pattern_probability(e: GBSEncoding, p: Iterable[int]) -> float:
    """Exact probability of one photon-number pattern under the GBS law."""
    p = tuple(int(x) for x in p)
    if len(p) != e.n:
        raise ValueError(f"pattern length {len(p)} != mode count {e.n}")
    if any(c < 0 for c in p):
        raise ValueError("photon counts must be nonnegative")
    b = reconstruct(e.u, e.lambdas)
    return _pattern_prob(b, _sech_prefactor(e.lambdas), p)


def _iter_patterns(
    n_modes: int, cutoff_total: int, cutoff_per_mode: int
) -> Iterator[Pattern]:
    """All patterns with sum <= cutoff_total, entries <= cutoff_per_mode,
    in lexicographic order."""
    pattern = [0] * n_modes

    def rec(mode: int, remaining: int) -> Iterator[Pattern]:
        if mode == n_modes:
            yield tuple(pattern)
            return
        for c in range(min(remaining, cutoff_per_mode) + 1):
            pattern[mode] = c
            yield from rec(mode + 1, remaining - c)
        pattern[mode] = 0

    yield from rec(0, cutoff_total)


def count_patterns(n_modes: int, cutoff_total: int, cutoff_per_mode: int) -> int:
    """Number of admissible patterns, by dynamic programming."""
    ways = [1] + [0] * cutoff_total
    for _ in range(n_modes):
        nxt = [0] * (cutoff_total + 1)
        for t in range(cutoff_total + 1):
            if ways[t] == 0:
                continue
            for c in range(min(cutoff_per_mode, cutoff_total - t) + 1):
                nxt[t + c] += ways[t]
        ways = nxt
    return sum(ways)


def enumerate_distribution(
    e: GBSEncoding,
    cutoff_total: int,
    cutoff_per_mode: int,
    budget: int = PATTERN_BUDGET,
) -> PatternDistribution:
    """Exact probabilities of every pattern within the cutoffs."""
    if cutoff_total < 0 or cutoff_per_mode < 0:
        raise ValueError("cutoffs must be nonnegative")
    required = count_patterns(e.n, cutoff_total, cutoff_per_mode)
    if required > budget:
        raise BudgetError(
            f"{required} patterns exceed the enumeration budget {budget}",
            required=required,
            budget=budget,
        )
    b = reconstruct(e.u, e.lambdas)
    prefactor = _sech_prefactor(e.lambdas)
    entries: dict[Pattern, float] = {}
    mass = 0.0
    for p in _iter_patterns(e.n, cutoff_total, cutoff_per_mode):
        prob = _pattern_prob(b, prefactor, p)
        entries[p] = prob
        mass += prob
    if mass > 1.0 + 1e-9:
        raise InvariantError(f"enumerated mass {mass} exceeds 1")
    return PatternDistribution(
        entries=entries,
        cutoff_total=cutoff_total,
        cutoff_per_mode=cutoff_per_mode,
        mass=mass,
    )


def _shot_rng(seed: int, tag: int, shot: int) -> np.random.Generator:
    return np.random.default_rng([seed, tag, shot])


def sample_gbs(
    e: GBSEncoding,
    shots: int,
    cutoff_total: int,
    cutoff_per_mode: int,
    seed: int,
    budget: int = PATTERN_BUDGET,
) -> SampleBatch:
    """I.i.d. draws from the enumerated law renormalized by its mass."""
    dist = enumerate_distribution(e, cutoff_total, cutoff_per_mode, budget)
    patterns = list(dist.entries.keys())
    probs = np.array([dist.entries[p] for p in patterns])
    if dist.mass <= 0:
        raise InvariantError("enumerated distribution has zero mass")
    cum = np.cumsum(probs / dist.mass)
    cum[-1] = 1.0
    out = []
    for i in range(shots):
        u = _shot_rng(seed, _TAG_GBS, i).random()
        out.append(patterns[int(np.searchsorted(cum, u, side="right"))])
    return SampleBatch(
        patterns=tuple(out),
        seed=seed,
        backend="gbs",
        cutoff_total=cutoff_total,
        cutoff_per_mode=cutoff_per_mode,
    )


def sample_uniform(n_modes: int, k: int, shots: int, seed: int) -> SampleBatch:
    """Uniformly random k-subsets of modes, encoded as 0/1 patterns."""
    if k > n_modes:
        raise ValueError(f"k={k} exceeds mode count {n_modes}")
    if k < 0:
        raise ValueError("k must be nonnegative")
    out = []
    for i in range(shots):
        rng = _shot_rng(seed, _TAG_UNIFORM, i)
        subset = rng.choice(n_modes, size=k, replace=False)
        p = [0] * n_modes
        for v in subset:
            p[int(v)] = 1
        out.append(tuple(p))
    return SampleBatch(patterns=tuple(out), seed=seed, backend="uniform")


def sample_squashed(e: GBSEncoding, shots: int, seed: int) -> SampleBatch:
    """Classical baseline: squeezed inputs replaced by their squashed
    counterparts (squeezed quadrature raised to vacuum variance).

    Each shot draws a real amplitude a_i ~ Normal(0, (e^{2 r_i} - 1)/4)
    per input mode, propagates beta = U a, and detects
    count_i ~ Poisson(|beta_i|^2).
    """
    std = np.sqrt((np.exp(2.0 * e.squeezings) - 1.0) / 4.0)
    out = []
    for i in range(shots):
        rng = _shot_rng(seed, _TAG_SQUASHED, i)
        a = rng.normal(0.0, 1.0, size=e.n) * std
        beta = e.u @ a
        counts = rng.poisson(np.abs(beta) ** 2)
        out.append(tuple(int(c) for c in counts))
    return SampleBatch(patterns=tuple(out), seed=seed, backend="squashed")


def _thin_pattern_exact(p: Pattern, eta: float) -> dict[Pattern, float]:
    """Distribution of a pattern after independent per-photon survival."""
    results: dict[Pattern, float] = {(): 1.0}
    for c in p:
        probs = [
            math.comb(c, k) * eta**k * (1 - eta) ** (c - k) for k in range(c + 1)
        ]
        nxt: dict[Pattern, float] = {}
        for prefix, w in results.items():
            for k, pk in enumerate(probs):
                if pk == 0.0:
                    continue
                nxt[prefix + (k,)] = nxt.get(prefix + (k,), 0.0) + w * pk
        results = nxt
    return results


def apply_loss(x, eta: float, seed: int = 0):
    """Uniform loss: each photon survives independently with probability eta.

    Batches are thinned stochastically (per-shot streams); distributions
    are convolved exactly, so the seed is unused for them.
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError("eta must lie in [0, 1]")
    if isinstance(x, SampleBatch):
        out = []
        for i, p in enumerate(x.patterns):
            rng = _shot_rng(seed, _TAG_LOSS, i)
            out.append(tuple(int(rng.binomial(c, eta)) for c in p))
        return SampleBatch(
            patterns=tuple(out),
            seed=x.seed,
            backend=x.backend,
            loss_eta=x.loss_eta * eta,
            cutoff_total=x.cutoff_total,
            cutoff_per_mode=x.cutoff_per_mode,
        )
    if isinstance(x, PatternDistribution):
        # Thinned patterns are componentwise <= their source, so the
        # original key set (all patterns within cutoffs) still covers them.
        acc: dict[Pattern, float] = {p: 0.0 for p in x.entries}
        for p, w in x.entries.items():
            if w == 0.0:
                continue
            for q, t in _thin_pattern_exact(p, eta).items():
                acc[q] = acc.get(q, 0.0) + w * t
        entries = {p: acc[p] for p in sorted(acc)}
        return PatternDistribution(
            entries=entries,
            cutoff_total=x.cutoff_total,
            cutoff_per_mode=x.cutoff_per_mode,
            mass=x.mass,
        )
    raise TypeError(f"cannot apply loss to {type(x).__name__}")


def collapse_threshold(p: Pattern) -> Pattern:
    """Map photon counts to detector clicks (counts > 0 become 1)."""
    return tuple(1 if c > 0 else 0 for c in p)


def conditional_pattern_histogram(
    b: SampleBatch, total: int, collision_policy: str
) -> dict[Pattern, float]:
    """Empirical distribution of the patterns of shots carrying `total`
    photons.

    collision_free_only keeps only shots that are already 0/1 patterns;
    threshold_collapse keeps every qualifying shot and collapses counts to
    clicks afterwards.
    """
    if total < 0:
        raise ValueError("total must be nonnegative")
    if collision_policy == "collision_free_only":
        selected = [
            p for p in b.patterns if sum(p) == total and all(c <= 1 for c in p)
        ]
    elif collision_policy == "threshold_collapse":
        selected = [collapse_threshold(p) for p in b.patterns if sum(p) == total]
    else:
        raise ValueError(f"unknown collision policy {collision_policy!r}")
    if not selected:
        raise EmptyConditionError(
            f"no shots with photon total {total} under {collision_policy}"
        )
    hist: dict[Pattern, float] = {}
    for p in selected:
        hist[p] = hist.get(p, 0.0) + 1.0
    norm = float(len(selected))
    return {p: hist[p] / norm for p in sorted(hist)}


def conditional_from_distribution(
    d: PatternDistribution, total: int, collision_policy: str
) -> dict[Pattern, float]:
    """Exact analogue of conditional_pattern_histogram on a distribution."""
    if total < 0:
        raise ValueError("total must be nonnegative")
    acc: dict[Pattern, float] = {}
    for p, w in d.entries.items():
        if w == 0.0 or sum(p) != total:
            continue
        if collision_policy == "collision_free_only":
            if any(c > 1 for c in p):
                continue
            key = p
        elif collision_policy == "threshold_collapse":
            key = collapse_threshold(p)
        else:
            raise ValueError(f"unknown collision policy {collision_policy!r}")
        acc[key] = acc.get(key, 0.0) + w
    norm = sum(acc.values())
    if norm <= 0.0:
        raise EmptyConditionError(
            f"no probability mass at photon total {total} under {collision_policy}"
        )
    return {p: acc[p] / norm for p in sorted(acc)}


def save_batch(b: SampleBatch) -> bytes:
    header = {
        "backend": b.backend,
        "seed": b.seed,
        "eta": b.loss_eta,
        "cutoff_total": b.cutoff_total,
        "cutoff_per_mode": b.cutoff_per_mode,
        "shots": len(b.patterns),
    }
    lines = [json.dumps(header)]
    for p in b.patterns:
        lines.append(json.dumps({"pattern": list(p), "total": sum(p)}))
    return ("\n".join(lines) + "\n").encode("utf-8")


def load_batch(source) -> SampleBatch:
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    lines = [ln for ln in source.splitlines() if ln.strip()]
    if not lines:
        raise FormatError("empty sample file")
    try:
        header = json.loads(lines[0])
        backend = header["backend"]
        seed = int(header["seed"])
        eta = float(header["eta"])
        patterns = []
        for ln in lines[1:]:
            rec = json.loads(ln)
            p = tuple(int(c) for c in rec["pattern"])
            if "total" in rec and rec["total"] != sum(p):
                raise FormatError(f"inconsistent total in record {rec!r}")
            patterns.append(p)
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise FormatError(f"bad sample file: {exc}") from exc
    return SampleBatch(
        patterns=tuple(patterns),
        seed=seed,
        backend=backend,
        loss_eta=eta,
        cutoff_total=header.get("cutoff_total"),
        cutoff_per_mode=header.get("cutoff_per_mode"),
    )


def save_distribution(d: PatternDistribution) -> bytes:
    doc = {
        "cutoff_total": d.cutoff_total,
        "cutoff_per_mode": d.cutoff_per_mode,
        "mass": d.mass,
        "entries": [
            {"pattern": list(p), "probability": w} for p, w in d.entries.items()
        ],
    }
    return json.dumps(doc, indent=1).encode("utf-8")


def load_distribution(source) -> PatternDistribution:
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    try:
        doc = json.loads(source)
        entries = {
            tuple(int(c) for c in rec["pattern"]): float(rec["probability"])
            for rec in doc["entries"]
        }
        return PatternDistribution(
            entries=entries,
            cutoff_total=int(doc["cutoff_total"]),
            cutoff_per_mode=int(doc["cutoff_per_mode"]),
            mass=float(doc["mass"]),
        )
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise FormatError(f"bad distribution file: {exc}") from exc
