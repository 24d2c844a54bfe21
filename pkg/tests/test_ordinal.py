import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chaostda.dynsys import SystemParams, simulate
from chaostda.ordinal import (DegenerateNetworkError, EmbeddingParams, PermutationSequence,
                              opn_from_series, opn_from_symbols, permutation_entropy,
                              permutation_index, permutation_sequence, rank_pattern,
                              select_tau_mpe, takens_embed)


def test_embed_examples():
    assert takens_embed(np.arange(5.0), 3, 1).shape == (3, 3)
    np.testing.assert_array_equal(takens_embed([1, 2, 3, 4], 2, 2), [[1, 3], [2, 4]])
    np.testing.assert_array_equal(takens_embed([4, 7, 9, 10, 6], 3, 1)[0], [4, 7, 9])
    with pytest.raises(ValueError):
        takens_embed([1.0, 2.0], 3, 1)


def test_embedding_params_bounds():
    for n, tau in [(1, 1), (9, 1), (3, 0)]:
        with pytest.raises(ValueError):
            EmbeddingParams(n, tau)


def test_index_examples():
    assert permutation_index([1.0, 2.0, 3.0]) == 0
    assert rank_pattern([3.0, 2.0, 1.0]) == (2, 1, 0)
    assert permutation_index([3.0, 2.0, 1.0]) == 5
    assert rank_pattern([5.0, 5.0, 1.0]) == (1, 2, 0)
    with pytest.raises(ValueError):
        permutation_index([1.0])


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_index_is_lexicographic_rank(n):
    # enumerate all permutations in lexicographic order as the oracle
    for k, perm in enumerate(itertools.permutations(range(n))):
        assert permutation_index(np.array(perm, dtype=float)) == k


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=2, max_size=8))
def test_index_invariant_under_monotone_maps(values):
    v = np.array(values, dtype=float)
    assert permutation_index(v) == permutation_index(np.exp(v / 3) * 2 + 7)
    assert 0 <= permutation_index(v) < math.factorial(v.size)


def test_entropy_examples():
    assert permutation_entropy(PermutationSequence(np.full(10, 3), 3)) == 0.0
    uniform = PermutationSequence(np.arange(24), 4)
    assert permutation_entropy(uniform) == pytest.approx(1.0)
    two = PermutationSequence(np.array([0, 1, 0, 1]), 3)
    assert permutation_entropy(two) == pytest.approx(1 / math.log2(6))
    assert permutation_entropy(two) == pytest.approx(0.3869, abs=1e-4)


def test_fig2_square_network():
    net = opn_from_symbols([1, 2, 6, 6, 6, 3, 1])
    assert net.edges == {(1, 2), (2, 6), (3, 6), (1, 3)}
    assert net.n_nodes == 4
    # a 4-cycle: opposite corners two hops apart
    assert sorted(net.dist.max(axis=1)) == [2, 2, 2, 2]


def test_monotone_series_is_degenerate():
    with pytest.raises(DegenerateNetworkError):
        opn_from_series(np.arange(100.0), EmbeddingParams(3, 1))


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 23), min_size=2, max_size=120))
def test_network_metric_properties(symbols):
    if len(set(symbols)) < 2:
        with pytest.raises(DegenerateNetworkError):
            opn_from_symbols(symbols)
        return
    net = opn_from_symbols(symbols)
    d = net.dist
    assert np.array_equal(d, d.T)
    assert not np.diag(d).any()
    assert np.isfinite(d).all()
    # triangle inequality, exhaustive
    assert np.all(d[:, None, :] <= d[:, :, None] + d[None, :, :] + 1e-12)
    assert net.n_nodes <= len(set(symbols))
    assert len(net.edges) <= len(symbols) - 1
    assert all(a != b for a, b in net.edges)


def test_rossler_networks_ring_vs_dense():
    periodic = simulate(SystemParams.rossler(0.25), 500.0).head(40000)
    chaotic = simulate(SystemParams.rossler(0.5), 500.0).head(40000)
    p = opn_from_series(periodic, EmbeddingParams(6, 170))
    c = opn_from_series(chaotic, EmbeddingParams(6, 170))
    assert c.n_nodes > 2 * p.n_nodes
    # a ring: every node has exactly two neighbours
    deg = (p.dist == 1).sum(axis=1)
    assert np.all(deg == 2)


def test_deterministic():
    x = np.random.default_rng(0).normal(size=500)
    a = opn_from_series(x, EmbeddingParams(4, 2))
    b = opn_from_series(x, EmbeddingParams(4, 2))
    assert np.array_equal(a.dist, b.dist) and a.edges == b.edges


def test_select_tau_examples():
    assert select_tau_mpe(np.ones(200), 3, range(2, 10)) == 2
    pes = []
    for seed in range(10):
        x = np.random.default_rng(seed).normal(size=3000)
        pes.append([permutation_entropy(permutation_sequence(x, 3, t)) for t in range(1, 6)])
    assert np.mean(pes, axis=0).min() > 0.95
    with pytest.raises(ValueError):
        select_tau_mpe(np.ones(10), 3, range(20, 30))


def test_select_tau_finds_quarter_period():
    x = np.sin(2 * np.pi * np.arange(2000) / 40)
    assert 5 <= select_tau_mpe(x, 3, range(1, 21)) <= 20
