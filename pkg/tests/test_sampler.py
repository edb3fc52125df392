import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gbstopo.encoding import encode
from gbstopo.errors import BudgetError, EmptyConditionError, FormatError
from gbstopo.graph import ComplexGraph, graph_from_edges
from gbstopo.sampler import (
    SampleBatch,
    apply_loss,
    conditional_from_distribution,
    conditional_pattern_histogram,
    count_patterns,
    enumerate_distribution,
    hafnian,
    load_batch,
    load_distribution,
    pattern_probability,
    sample_gbs,
    sample_squashed,
    sample_uniform,
    save_batch,
    save_distribution,
)
from helpers import matching_sum_hafnian


def single_mode_encoding(lam):
    g = ComplexGraph(1, np.zeros((1, 1), dtype=complex))
    return encode(g, 0.7, d=lam)


def tmsv_encoding(t):
    return encode(graph_from_edges(2, [(0, 1, 1.0)]), t)


def random_symmetric(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.uniform(-1, 1, (n, n)) + 1j * rng.uniform(-1, 1, (n, n))
    return (a + a.T) / 2


class TestHafnian:
    def test_two_by_two(self):
        assert hafnian(np.array([[0, 3.0], [3.0, 0]])) == pytest.approx(3.0)

    def test_k4_has_three_matchings(self):
        m = np.ones((4, 4)) - np.eye(4)
        assert hafnian(m) == pytest.approx(3.0)

    def test_empty_matrix(self):
        assert hafnian(np.zeros((0, 0))) == pytest.approx(1.0)

    def test_odd_dimension_is_zero(self):
        assert hafnian(np.zeros((3, 3))) == 0

    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            hafnian(np.zeros((2, 3)))

    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError):
            hafnian(np.array([[0, 1.0], [0.5, 0]]))

    def test_matches_matching_sum_8x8(self):
        m = random_symmetric(8, seed=0)
        got, want = hafnian(m), matching_sum_hafnian(m)
        assert abs(got - want) / abs(want) < 1e-9

    @given(st.integers(0, 10_000))
    @settings(max_examples=30, deadline=None)
    def test_matches_matching_sum_random(self, seed):
        rng = np.random.default_rng(seed)
        dim = int(rng.integers(1, 6)) * 2
        m = random_symmetric(dim, seed)
        got, want = hafnian(m), matching_sum_hafnian(m)
        assert abs(got - want) <= 1e-9 * max(1.0, abs(want))


class TestPatternProbability:
    def test_single_mode_vacuum(self):
        e = single_mode_encoding(0.45)
        r = e.squeezings[0]
        assert pattern_probability(e, (0,)) == pytest.approx(
            1 / math.cosh(r), abs=1e-12
        )

    def test_single_mode_pair(self):
        e = single_mode_encoding(0.45)
        r = e.squeezings[0]
        want = 0.5 * math.tanh(r) ** 2 / math.cosh(r)
        assert pattern_probability(e, (2,)) == pytest.approx(want, abs=1e-12)

    def test_tmsv_diagonal(self):
        t = 0.6
        e = tmsv_encoding(t)
        r = math.atanh(t)
        assert pattern_probability(e, (1, 1)) == pytest.approx(
            t**2 / math.cosh(r) ** 2, abs=1e-12
        )

    def test_odd_total_is_exactly_zero(self):
        e = tmsv_encoding(0.5)
        assert pattern_probability(e, (1, 0)) == 0.0
        assert pattern_probability(e, (2, 1)) == 0.0

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            pattern_probability(tmsv_encoding(0.5), (1, 1, 0))


class TestEnumerateDistribution:
    def test_vacuum_only(self):
        g = ComplexGraph(2, np.zeros((2, 2), dtype=complex))
        e = encode(g, 0.5, d=1e-15)
        d = enumerate_distribution(e, 4, 4)
        assert d.entries[(0, 0)] == pytest.approx(1.0)
        assert d.mass == pytest.approx(1.0)

    def test_single_mode_mass(self):
        d = enumerate_distribution(single_mode_encoding(0.5), 8, 8)
        want = sum(
            0.5 ** (2 * n)
            * math.factorial(2 * n)
            / (4**n * math.factorial(n) ** 2)
            for n in range(5)
        ) * math.sqrt(1 - 0.25)
        assert d.mass == pytest.approx(want, abs=1e-12)
        assert d.mass >= 0.999

    def test_tmsv_closed_form(self):
        t = 0.6
        d = enumerate_distribution(tmsv_encoding(t), 10, 10)
        r = math.atanh(t)
        for n in range(6):
            assert d.entries[(n, n)] == pytest.approx(
                t ** (2 * n) / math.cosh(r) ** 2, abs=1e-10
            )
        off = [v for k, v in d.entries.items() if k[0] != k[1]]
        assert max(off) < 1e-20

    def test_mass_monotone_in_cutoff(self):
        e = tmsv_encoding(0.7)
        masses = [enumerate_distribution(e, c, c).mass for c in (2, 4, 6, 8)]
        assert all(a < b for a, b in zip(masses, masses[1:]))

    def test_budget_error(self):
        e = tmsv_encoding(0.5)
        with pytest.raises(BudgetError) as exc_info:
            enumerate_distribution(e, 10, 10, budget=5)
        assert exc_info.value.required == count_patterns(2, 10, 10)

    def test_count_patterns_matches_enumeration(self):
        from gbstopo.sampler import _iter_patterns

        listed = list(_iter_patterns(3, 4, 2))
        assert len(listed) == count_patterns(3, 4, 2) == 23
        assert len(set(listed)) == len(listed)


class TestSampleGbs:
    def test_vacuum_encoding_all_zero(self):
        g = ComplexGraph(3, np.zeros((3, 3), dtype=complex))
        e = encode(g, 0.5, d=1e-15)
        b = sample_gbs(e, 20, 4, 4, seed=0)
        assert all(p == (0, 0, 0) for p in b.patterns)

    def test_deterministic(self):
        e = tmsv_encoding(0.6)
        a = sample_gbs(e, 100, 8, 8, seed=9)
        b = sample_gbs(e, 100, 8, 8, seed=9)
        assert a.patterns == b.patterns

    def test_tmsv_ratio(self):
        t = 0.6
        e = tmsv_encoding(t)
        b = sample_gbs(e, 10_000, 10, 10, seed=3)
        c = Counter(b.patterns)
        ratio = c[(1, 1)] / c[(0, 0)]
        p00 = 1 - t * t
        sigma = math.sqrt(10_000 * p00 * t * t * (1 + t * t))
        assert abs(c[(1, 1)] - t * t * c[(0, 0)]) < 3 * sigma
        assert ratio == pytest.approx(t * t, rel=0.15)


class TestPermutationEquivariance:
    def test_pattern_probabilities_permute_with_vertices(self):
        from gbstopo.graph import random_dual_layer, relabel

        g = random_dual_layer(4, 0.8, seed=19)
        perm = [2, 0, 3, 1]
        h = relabel(g, perm)
        eg, eh = encode(g, 0.6), encode(h, 0.6)
        for p in [(1, 1, 0, 0), (2, 0, 0, 0), (1, 0, 1, 2), (1, 1, 1, 1)]:
            mapped = [0] * 4
            for mode, c in enumerate(p):
                mapped[perm[mode]] = c
            assert pattern_probability(eg, p) == pytest.approx(
                pattern_probability(eh, tuple(mapped)), abs=1e-12
            )


class TestSampleUniform:
    def test_k_equals_modes(self):
        b = sample_uniform(4, 4, 10, seed=0)
        assert all(p == (1, 1, 1, 1) for p in b.patterns)

    def test_k_zero(self):
        b = sample_uniform(4, 0, 10, seed=0)
        assert all(p == (0, 0, 0, 0) for p in b.patterns)

    def test_k_too_large(self):
        with pytest.raises(ValueError):
            sample_uniform(3, 4, 1, seed=0)

    def test_subset_frequencies(self):
        shots = 100_000
        b = sample_uniform(6, 3, shots, seed=1)
        counts = Counter(b.patterns)
        assert len(counts) == 20
        sigma = math.sqrt(shots * 0.05 * 0.95)
        for pattern, c in counts.items():
            assert sum(pattern) == 3
            assert abs(c - shots * 0.05) < 3 * sigma


class TestSampleSquashed:
    def test_no_squeezing_gives_vacuum(self):
        g = ComplexGraph(3, np.zeros((3, 3), dtype=complex))
        e = encode(g, 0.5, d=1e-15)
        b = sample_squashed(e, 50, seed=2)
        assert all(p == (0, 0, 0) for p in b.patterns)

    def test_single_mode_mean(self):
        e = single_mode_encoding(0.5)
        shots = 100_000
        b = sample_squashed(e, shots, seed=4)
        totals = np.array([sum(p) for p in b.patterns])
        want = (math.exp(2 * e.squeezings[0]) - 1) / 4
        # var(count) = E[lam] + 2 E[lam]^2 heuristic bound via sample std
        assert abs(totals.mean() - want) < 3 * totals.std() / math.sqrt(shots)

    def test_total_mean_invariant_under_unitary(self):
        # same squeezing spectrum behind two different interferometers
        e1 = encode(graph_from_edges(4, [(0, 1, 1.0), (2, 3, 1.0)]), 0.55)
        e2 = encode(
            graph_from_edges(4, [(0, 2, 1.0), (1, 3, 0.99)]), 0.55
        )
        assert np.allclose(e1.lambdas, e2.lambdas, atol=0.01)
        shots = 60_000
        m1 = np.mean([sum(p) for p in sample_squashed(e1, shots, 7).patterns])
        m2 = np.mean([sum(p) for p in sample_squashed(e2, shots, 8).patterns])
        assert m1 == pytest.approx(m2, rel=0.05)

    def test_deterministic(self):
        e = tmsv_encoding(0.5)
        assert (
            sample_squashed(e, 64, seed=5).patterns
            == sample_squashed(e, 64, seed=5).patterns
        )


class TestApplyLoss:
    def test_eta_one_is_identity_on_batches(self):
        b = SampleBatch(patterns=((1, 2), (0, 4)), seed=0, backend="x")
        assert apply_loss(b, 1.0, seed=1).patterns == b.patterns

    def test_eta_zero_gives_vacuum(self):
        b = SampleBatch(patterns=((1, 2), (3, 0)), seed=0, backend="x")
        assert all(
            p == (0, 0) for p in apply_loss(b, 0.0, seed=1).patterns
        )

    def test_distribution_mean_halves(self):
        d = enumerate_distribution(tmsv_encoding(0.6), 10, 10)
        lossy = apply_loss(d, 0.5)
        mean = sum(sum(p) * w for p, w in d.entries.items())
        mean_lossy = sum(sum(p) * w for p, w in lossy.entries.items())
        assert mean_lossy == pytest.approx(0.5 * mean, abs=1e-12)
        assert lossy.mass == pytest.approx(d.mass, abs=1e-12)

    def test_distribution_eta_zero_point_mass(self):
        d = enumerate_distribution(tmsv_encoding(0.6), 6, 6)
        lossy = apply_loss(d, 0.0)
        assert lossy.entries[(0, 0)] == pytest.approx(d.mass)

    def test_batch_thinning_statistics(self):
        b = SampleBatch(patterns=tuple([(8,)] * 4000), seed=0, backend="x")
        thinned = apply_loss(b, 0.25, seed=3)
        mean = np.mean([p[0] for p in thinned.patterns])
        assert mean == pytest.approx(2.0, abs=3 * math.sqrt(8 * 0.25 * 0.75 / 4000))

    def test_invalid_eta(self):
        with pytest.raises(ValueError):
            apply_loss(SampleBatch(patterns=(), seed=0, backend="x"), 1.5)


class TestConditionalHistogram:
    def batch(self):
        return SampleBatch(
            patterns=((1, 1, 0), (1, 1, 0), (2, 0, 0)), seed=0, backend="x"
        )

    def test_collision_free_only(self):
        hist = conditional_pattern_histogram(self.batch(), 2, "collision_free_only")
        assert hist == {(1, 1, 0): 1.0}

    def test_threshold_collapse(self):
        hist = conditional_pattern_histogram(self.batch(), 2, "threshold_collapse")
        assert hist[(1, 1, 0)] == pytest.approx(2 / 3)
        assert hist[(1, 0, 0)] == pytest.approx(1 / 3)

    def test_empty_batch_raises(self):
        b = SampleBatch(patterns=(), seed=0, backend="x")
        with pytest.raises(EmptyConditionError):
            conditional_pattern_histogram(b, 2, "threshold_collapse")

    def test_no_matching_total_raises(self):
        with pytest.raises(EmptyConditionError):
            conditional_pattern_histogram(self.batch(), 6, "threshold_collapse")

    def test_distribution_variant_matches_closed_form(self):
        t = 0.6
        d = enumerate_distribution(tmsv_encoding(t), 8, 8)
        hist = conditional_from_distribution(d, 2, "collision_free_only")
        assert hist == {(1, 1): 1.0}
        hist2 = conditional_from_distribution(d, 2, "threshold_collapse")
        # (1,1) vs collapsed (2,0) and (0,2); P(2,0)=P(0,2)=0 for TMSV
        assert hist2[(1, 1)] == pytest.approx(1.0)


class TestBatchIO:
    def test_round_trip(self):
        b = sample_uniform(5, 2, 17, seed=12)
        b2 = load_batch(save_batch(b))
        assert b2.patterns == b.patterns
        assert (b2.seed, b2.backend, b2.loss_eta) == (12, "uniform", 1.0)

    def test_bad_file(self):
        with pytest.raises(FormatError):
            load_batch(b"")
        with pytest.raises(FormatError):
            load_batch(b'{"backend": "x"}\nnot json')

    def test_distribution_round_trip(self):
        d = enumerate_distribution(tmsv_encoding(0.5), 6, 6)
        d2 = load_distribution(save_distribution(d))
        assert d2.entries == d.entries
        assert d2.mass == d.mass
