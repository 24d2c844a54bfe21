"""Delay embedding, ordinal patterns and ordinal partition networks."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from .timeseries import as_array


class DegenerateNetworkError(ValueError):
    """The symbol sequence visits fewer than two distinct patterns."""


@dataclass(frozen=True)
class EmbeddingParams:
    n: int = 6
    tau: int = 1

    def __post_init__(self):
        if not 2 <= self.n <= 8:
            raise ValueError("permutation dimension must lie in [2, 8]")
        if self.tau < 1:
            raise ValueError("delay must be at least one sample")


@dataclass(frozen=True)
class PermutationSequence:
    symbols: np.ndarray
    n: int


@dataclass(frozen=True)
class OrdinalNetwork:
    """Undirected, unweighted transition graph between ordinal patterns.

    ``nodes`` holds pattern indices, ``edges`` pairs of pattern indices, and
    ``dist`` the hop-count distance between ``nodes[i]`` and ``nodes[j]``.
    """

    nodes: np.ndarray
    edges: frozenset
    dist: np.ndarray
    warnings: tuple = field(default=())

    @property
    def n_nodes(self) -> int:
        return self.nodes.size


def takens_embed(series, n: int, tau: int = 1) -> np.ndarray:
    """Rows ``[x_i, x_{i+tau}, ..., x_{i+(n-1)tau}]``."""
    x = as_array(series)
    m = x.size - (n - 1) * tau
    if m < 1:
        raise ValueError(f"series of {x.size} samples is too short for n={n}, tau={tau}")
    idx = np.arange(m)[:, None] + tau * np.arange(n)[None, :]
    return x[idx]


def _ranks(vectors: np.ndarray) -> np.ndarray:
    # stable sort: among equal values the earlier position ranks lower
    order = np.argsort(vectors, axis=-1, kind="stable")
    return np.argsort(order, axis=-1, kind="stable")


def _lehmer(ranks: np.ndarray) -> np.ndarray:
    n = ranks.shape[-1]
    index = np.zeros(ranks.shape[:-1], dtype=np.int64)
    for i in range(n - 1):
        smaller_after = (ranks[..., i + 1:] < ranks[..., i:i + 1]).sum(axis=-1)
        index += smaller_after * math.factorial(n - 1 - i)
    return index


def rank_pattern(v) -> tuple:
    return tuple(int(r) for r in _ranks(np.asarray(v, dtype=float)))


def permutation_index(v) -> int:
    """Lexicographic index of the rank pattern of ``v`` (0 for increasing)."""
    v = np.asarray(v, dtype=float)
    if not 2 <= v.size <= 8:
        raise ValueError("vector dimension must lie in [2, 8]")
    return int(_lehmer(_ranks(v)))


def permutation_sequence(series, n: int, tau: int = 1) -> PermutationSequence:
    vectors = takens_embed(series, n, tau)
    return PermutationSequence(_lehmer(_ranks(vectors)), n)


def permutation_entropy(symbols: PermutationSequence) -> float:
    """Shannon entropy of pattern frequencies normalised by ``log2(n!)``."""
    s = np.asarray(symbols.symbols)
    if s.size == 0:
        raise ValueError("empty symbol sequence")
    _, counts = np.unique(s, return_counts=True)
    p = counts / s.size
    h = -np.sum(p * np.log2(p))
    return float(max(h, 0.0) / math.log2(math.factorial(symbols.n)))


def select_tau_mpe(series, n: int, tau_range) -> int:
    """Delay in ``tau_range`` with the largest normalised permutation entropy.

    Ties go to the smallest delay.
    """
    x = as_array(series)
    taus = [int(t) for t in tau_range if x.size - (n - 1) * int(t) >= 1 and int(t) >= 1]
    if not taus:
        raise ValueError("no embeddable delay in tau_range")
    best_tau, best_pe = taus[0], -1.0
    for tau in taus:
        pe = permutation_entropy(permutation_sequence(x, n, tau))
        if pe > best_pe + 1e-12:
            best_tau, best_pe = tau, pe
    return best_tau


def opn_from_symbols(symbols) -> OrdinalNetwork:
    """Network whose edges are the observed transitions between patterns.

    Repeated consecutive symbols add no self-loop. Distances are shortest
    hop counts; if the graph is disconnected only its largest component is
    kept and a warning is attached.
    """
    s = np.asarray(symbols, dtype=np.int64)
    if s.size:
        s = s[np.concatenate(([True], s[1:] != s[:-1]))]
    nodes = np.unique(s)
    if nodes.size < 2:
        raise DegenerateNetworkError("fewer than two distinct permutations")
    pos = np.searchsorted(nodes, s)
    a, b = pos[:-1], pos[1:]
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    pairs = np.unique(np.column_stack((lo, hi)), axis=0)
    k = nodes.size
    adj = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(k, k))
    warnings = ()
    n_comp, labels = connected_components(adj, directed=False)
    keep = np.arange(k)
    if n_comp > 1:
        biggest = np.argmax(np.bincount(labels))
        keep = np.nonzero(labels == biggest)[0]
        warnings = (f"network has {n_comp} components; kept the largest "
                    f"({keep.size} of {k} nodes)",)
    dist = shortest_path(adj, method="D", directed=False, unweighted=True)
    dist = dist[np.ix_(keep, keep)]
    kept = set(keep.tolist())
    edges = frozenset((int(nodes[i]), int(nodes[j])) for i, j in pairs
                      if i in kept and j in kept)
    return OrdinalNetwork(nodes[keep], edges, dist, warnings)


def opn_from_series(series, params: EmbeddingParams) -> OrdinalNetwork:
    seq = permutation_sequence(series, params.n, params.tau)
    return opn_from_symbols(seq.symbols)
