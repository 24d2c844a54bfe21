"""Brute-force references, independent of the library's algorithms."""
from __future__ import annotations

from collections import Counter
from itertools import combinations

import numpy as np


def gf2_rank(rows) -> int:
    """Rank over GF(2) of a 0/1 matrix given as a 2D array."""
    M = np.array(rows, dtype=np.uint8) % 2
    if M.size == 0:
        return 0
    M = M.copy()
    rank = 0
    n_rows, n_cols = M.shape
    for col in range(n_cols):
        pivot = None
        for r in range(rank, n_rows):
            if M[r, col]:
                pivot = r
                break
        if pivot is None:
            continue
        M[[rank, pivot]] = M[[pivot, rank]]
        for r in range(n_rows):
            if r != rank and M[r, col]:
                M[r] ^= M[rank]
        rank += 1
        if rank == n_rows:
            break
    return rank


def _boundary(faces, cofaces):
    index = {f: i for i, f in enumerate(faces)}
    B = np.zeros((len(faces), len(cofaces)), dtype=np.uint8)
    for j, s in enumerate(cofaces):
        for f in combinations(s, len(s) - 1):
            B[index[f], j] = 1
    return B


def rips_diagram_bruteforce(D, dims=(0, 1)):
    """Persistence pairs of the Rips filtration from persistent Betti numbers.

    For every pair of levels a <= b the rank of H_p(K_a) -> H_p(K_b) is
    ``dim Z_p(K_a) - dim(Z_p(K_a) ∩ B_p(K_b))`` computed with GF(2) ranks of
    the full complexes; multiplicities follow by inclusion-exclusion.
    Returns {dim: Counter((birth, death))} with death = inf for classes alive
    at the largest level.
    """
    D = np.asarray(D, dtype=float)
    n = D.shape[0]
    levels = sorted(set(D[np.triu_indices(n, 1)].tolist()) | {0.0})

    def filt(s):
        return max((D[i, j] for i, j in combinations(s, 2)), default=0.0)

    simplices = {k: [s for s in combinations(range(n), k + 1)] for k in range(3)}

    def complex_at(level, k):
        return [s for s in simplices[k] if filt(s) <= level]

    def cycles_basis(level, p):
        """Return (dim Z_p, a basis of Z_p in the global chain coordinates)."""
        cells = complex_at(level, p)
        all_cells = simplices[p]
        if p == 0:
            basis = np.zeros((len(cells), len(all_cells)), dtype=np.uint8)
            idx = {s: i for i, s in enumerate(all_cells)}
            for r, s in enumerate(cells):
                basis[r, idx[s]] = 1
            return basis
        faces = simplices[p - 1]
        B = _boundary(faces, cells)
        # null space of B over GF(2)
        null = _gf2_nullspace(B)
        idx = {s: i for i, s in enumerate(all_cells)}
        basis = np.zeros((len(null), len(all_cells)), dtype=np.uint8)
        for r, v in enumerate(null):
            for c, s in enumerate(cells):
                if v[c]:
                    basis[r, idx[s]] = 1
        return basis

    def boundaries(level, p):
        cells = complex_at(level, p + 1)
        if not cells:
            return np.zeros((0, len(simplices[p])), dtype=np.uint8)
        return _boundary(simplices[p], cells).T

    def pbetti(a, b, p):
        Z = cycles_basis(a, p)
        zdim = gf2_rank(Z) if len(Z) else 0
        if zdim == 0:
            return 0
        Bb = boundaries(b, p)
        bdim = gf2_rank(Bb) if len(Bb) else 0
        both = np.vstack([Z, Bb]) if len(Bb) else Z
        sdim = gf2_rank(both)
        return zdim - (zdim + bdim - sdim)

    L = len(levels)
    result = {}
    for p in dims:
        beta = {}
        for i in range(L):
            for j in range(i, L):
                beta[i, j] = pbetti(levels[i], levels[j], p)

        def bt(i, j):
            if i < 0:
                return 0
            return beta[i, j]

        pairs = Counter()
        for i in range(L):
            for j in range(i + 1, L):
                mu = bt(i, j - 1) - bt(i - 1, j - 1) - bt(i, j) + bt(i - 1, j)
                if mu:
                    pairs[(levels[i], levels[j])] += mu
            ess = bt(i, L - 1) - bt(i - 1, L - 1)
            if ess:
                pairs[(levels[i], float("inf"))] += ess
        result[p] = pairs
    return result


def _gf2_nullspace(B):
    B = np.array(B, dtype=np.uint8) % 2
    n_rows, n_cols = B.shape
    M = B.copy()
    pivots = []
    r = 0
    for c in range(n_cols):
        pr = None
        for i in range(r, n_rows):
            if M[i, c]:
                pr = i
                break
        if pr is None:
            continue
        M[[r, pr]] = M[[pr, r]]
        for i in range(n_rows):
            if i != r and M[i, c]:
                M[i] ^= M[r]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(n_cols, dtype=np.uint8)
        v[f] = 1
        for row, pc in enumerate(pivots):
            if M[row, f]:
                v[pc] = 1
        basis.append(v)
    return basis


def sublevel_diagram_bruteforce(grid):
    """0D sublevel pairs of a 2D grid by counting components at every level.

    A component alive at level v is identified by its minimum value and the
    first pixel attaining it (row-major); tracking identities between
    consecutive levels gives births and deaths. Returns a Counter of
    (birth, death) with the essential class dying at the global maximum.
    """
    g = np.asarray(grid, dtype=float)
    if g.ndim == 1:
        g = g[None, :]
    h, w = g.shape
    levels = sorted(set(g.ravel().tolist()))

    def components(level):
        mask = g <= level
        label = -np.ones((h, w), dtype=int)
        comps = []
        for y in range(h):
            for x in range(w):
                if mask[y, x] and label[y, x] < 0:
                    stack = [(y, x)]
                    label[y, x] = len(comps)
                    cells = []
                    while stack:
                        cy, cx = stack.pop()
                        cells.append((cy, cx))
                        for ny, nx in ((cy - 1, cx), (cy + 1, cx), (cy, cx - 1), (cy, cx + 1)):
                            if 0 <= ny < h and 0 <= nx < w and mask[ny, nx] and label[ny, nx] < 0:
                                label[ny, nx] = len(comps)
                                stack.append((ny, nx))
                    comps.append(cells)
        # identity of a component: its oldest cell (lowest value, then row-major)
        return [min(cells, key=lambda c: (g[c], c[0] * w + c[1])) for cells in comps]

    pairs = Counter()
    prev = set()
    for level in levels:
        now = set(components(level))
        for root in prev - now:
            pairs[(g[root], level)] += 1
        prev = now
    for root in prev:
        pairs[(g[root], float(g.max()))] += 1
    return Counter({k: v for k, v in pairs.items() if k[1] > k[0] or k == (g.min(), g.max())})


def shortest_path_metric(n, edges):
    """All-pairs hop counts by Floyd-Warshall (inf when disconnected)."""
    D = np.full((n, n), np.inf)
    np.fill_diagonal(D, 0)
    for i, j in edges:
        D[i, j] = D[j, i] = 1
    for k in range(n):
        D = np.minimum(D, D[:, [k]] + D[[k], :])
    return D


def random_connected_graph(rng, n_max=8):
    n = int(rng.integers(2, n_max + 1))
    perm = rng.permutation(n)
    edges = {tuple(sorted((int(perm[i]), int(perm[rng.integers(0, i)])))) for i in range(1, n)}
    p = rng.uniform(0.0, 0.6)
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                edges.add((i, j))
    return n, sorted(edges)
