"""Persistent homology engines and persistence-diagram statistics.

Two filtrations are supported:

* 0-dimensional sublevel-set persistence of a 2D scalar field (union-find,
  4-connectivity, elder rule);
* Vietoris-Rips persistence in dimensions 0 and 1 of a finite metric,
  H1 by a cohomology column reduction with clearing.
"""
from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import numba
import numpy as np
from numba.typed import Dict, List

DEFAULT_BIRTH_FLOOR = 0.01


@dataclass(frozen=True)
class PersistenceDiagram:
    """Multiset of ``(dim, birth, death)`` points.

    Classes that never die carry a finite stand-in death and ``essential``
    set to True.
    """

    dims: np.ndarray
    births: np.ndarray
    deaths: np.ndarray
    essential: np.ndarray

    def __post_init__(self):
        dims = np.asarray(self.dims, dtype=np.int64).reshape(-1)
        b = np.asarray(self.births, dtype=float).reshape(-1)
        d = np.asarray(self.deaths, dtype=float).reshape(-1)
        e = np.asarray(self.essential, dtype=bool).reshape(-1)
        if not (dims.size == b.size == d.size == e.size):
            raise ValueError("diagram columns differ in length")
        if np.any(d < b):
            raise ValueError("death before birth")
        for name, arr in (("dims", dims), ("births", b), ("deaths", d), ("essential", e)):
            object.__setattr__(self, name, arr)

    @classmethod
    def empty(cls):
        return cls(np.zeros(0, int), np.zeros(0), np.zeros(0), np.zeros(0, bool))

    @classmethod
    def from_points(cls, points, essential=None):
        pts = np.asarray(points, dtype=float).reshape(-1, 3)
        ess = np.zeros(len(pts), bool) if essential is None else essential
        return cls(pts[:, 0].astype(np.int64), pts[:, 1], pts[:, 2], ess)

    def __len__(self):
        return self.dims.size

    def restrict(self, dim: int) -> "PersistenceDiagram":
        m = self.dims == dim
        return PersistenceDiagram(self.dims[m], self.births[m], self.deaths[m], self.essential[m])

    def finite(self) -> "PersistenceDiagram":
        m = ~self.essential
        return PersistenceDiagram(self.dims[m], self.births[m], self.deaths[m], self.essential[m])

    @property
    def lifetimes(self) -> np.ndarray:
        return self.deaths - self.births

    def pairs(self, dim: int | None = None) -> list:
        """Sorted ``(birth, death)`` tuples, optionally for one dimension."""
        dg = self if dim is None else self.restrict(dim)
        return sorted(zip(dg.births.tolist(), dg.deaths.tolist()))

    def to_csv(self, path=None) -> str:
        """CSV with columns ``dim,birth,death,essential``; 17 significant digits."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["dim", "birth", "death", "essential"])
        for r, b, d, e in zip(self.dims, self.births, self.deaths, self.essential):
            w.writerow([int(r), f"{b:.17g}", f"{d:.17g}", int(e)])
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text)
        return text

    @classmethod
    def from_csv(cls, source) -> "PersistenceDiagram":
        text = source
        if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source):
            text = Path(source).read_text()
        rows = list(csv.DictReader(io.StringIO(text)))
        return cls(np.array([int(r["dim"]) for r in rows], dtype=np.int64),
                   np.array([float(r["birth"]) for r in rows]),
                   np.array([float(r["death"]) for r in rows]),
                   np.array([r["essential"].strip() in ("1", "True", "true") for r in rows]))


@dataclass(frozen=True)
class LifetimeStats:
    lifetimes: np.ndarray
    total: float


def lifetime_stats(diagram: PersistenceDiagram) -> LifetimeStats:
    life = diagram.finite().lifetimes
    return LifetimeStats(life, float(life.sum()))


# ---------------------------------------------------------------- sublevel 0D

@numba.njit(cache=True)
def _find(parent, i):
    root = i
    while parent[root] != root:
        root = parent[root]
    while parent[i] != root:
        nxt = parent[i]
        parent[i] = root
        i = nxt
    return root


@numba.njit(cache=True)
def _sublevel_pairs(flat, h, w, order):
    n = flat.size
    parent = np.full(n, -1, dtype=np.int64)
    # birth position in the processing order of each component root
    birth_rank = np.zeros(n, dtype=np.int64)
    rank_of = np.empty(n, dtype=np.int64)
    for r in range(n):
        rank_of[order[r]] = r
    births = np.empty(n)
    deaths = np.empty(n)
    k = 0
    nbr = np.empty(4, dtype=np.int64)
    for r in range(n):
        p = order[r]
        parent[p] = p
        birth_rank[p] = r
        y, x = p // w, p % w
        m = 0
        if y > 0:
            nbr[m] = p - w
            m += 1
        if y < h - 1:
            nbr[m] = p + w
            m += 1
        if x > 0:
            nbr[m] = p - 1
            m += 1
        if x < w - 1:
            nbr[m] = p + 1
            m += 1
        for t in range(m):
            q = nbr[t]
            if parent[q] < 0:
                continue
            a = _find(parent, p)
            b = _find(parent, q)
            if a == b:
                continue
            # elder rule: the component born later dies here
            if birth_rank[a] < birth_rank[b]:
                a, b = b, a
            births[k] = flat[order[birth_rank[a]]]
            deaths[k] = flat[p]
            k += 1
            parent[a] = b
    return births[:k], deaths[:k]


def sublevel_0d(field) -> PersistenceDiagram:
    """0-dimensional persistence of the sublevel sets ``{f <= level}``.

    Pixels are joined to their 4 neighbours. Ties are broken by row-major
    position, so among equal values the earlier pixel is older. Pairs of
    zero persistence are dropped; the single essential class is born at the
    global minimum and reported dying at the global maximum.
    """
    f = np.asarray(field, dtype=float)
    if f.ndim == 1:
        f = f[None, :]
    if f.ndim != 2 or f.size == 0:
        raise ValueError("field must be a non-empty 2D grid")
    if not np.all(np.isfinite(f)):
        raise ValueError("field values must be finite")
    h, w = f.shape
    flat = np.ascontiguousarray(f.reshape(-1))
    order = np.argsort(flat, kind="stable").astype(np.int64)
    b, d = _sublevel_pairs(flat, h, w, order)
    keep = d > b
    b, d = b[keep], d[keep]
    births = np.concatenate(([flat.min()], b))
    deaths = np.concatenate(([flat.max()], d))
    ess = np.zeros(births.size, bool)
    ess[0] = True
    return PersistenceDiagram(np.zeros(births.size, np.int64), births, deaths, ess)


def superlevel_0d(field) -> PersistenceDiagram:
    """0D persistence of the superlevel sets ``{f >= level}``.

    Computed as the sublevel diagram of ``-f``, so coordinates come out
    negated: a component whose peak is ``p`` and which merges into an older
    one at level ``m`` appears as the point ``(-p, -m)``. Distances to the
    origin are therefore measured in units of ``f`` itself.
    """
    return sublevel_0d(-np.asarray(field, dtype=float))


# ------------------------------------------------------------- Vietoris-Rips

# Triangle keys: filtration rank first, then reversed lexicographic order of
# the vertex triple. Edges are likewise taken in reversed lexicographic order
# within a filtration value; this pairing of tie-breaks keeps most columns
# unreduced.

@numba.njit(cache=True)
def _tri_key(f, a, b, c, n):
    n3 = n * n * n
    return f * n3 + (n3 - 1 - (a * n * n + b * n + c))


@numba.njit(cache=True)
def _cofacet_key(i, j, k, R, n):
    f = max(R[i, j], R[i, k], R[j, k])
    if k < i:
        return _tri_key(f, k, i, j, n)
    if k < j:
        return _tri_key(f, i, k, j, n)
    return _tri_key(f, i, j, k, n)


@numba.njit(cache=True)
def _coboundary(i, j, R, n):
    """Sorted keys of the triangles containing edge (i, j), i < j."""
    out = np.empty(n - 2, dtype=np.int64)
    m = 0
    for k in range(n):
        if k != i and k != j:
            out[m] = _cofacet_key(i, j, k, R, n)
            m += 1
    out.sort()
    return out


@numba.njit(cache=True)
def _min_cofacet(i, j, R, n):
    best = np.int64(-1)
    for k in range(n):
        if k != i and k != j:
            key = _cofacet_key(i, j, k, R, n)
            if best < 0 or key < best:
                best = key
    return best


@numba.njit(cache=True)
def _symdiff(x, y):
    out = np.empty(x.size + y.size, dtype=np.int64)
    i = j = m = 0
    while i < x.size and j < y.size:
        if x[i] < y[j]:
            out[m] = x[i]
            i += 1
            m += 1
        elif y[j] < x[i]:
            out[m] = y[j]
            j += 1
            m += 1
        else:
            i += 1
            j += 1
    while i < x.size:
        out[m] = x[i]
        i += 1
        m += 1
    while j < y.size:
        out[m] = y[j]
        j += 1
        m += 1
    return out[:m]


@numba.njit(cache=True)
def _h1_pairs(R, ei, ej):
    """Cohomology reduction over the given (positive) edges.

    Edges arrive in decreasing filtration order. Returns, per edge, the
    filtration rank of the triangle that kills it, or -1 if none does.
    A column whose unreduced pivot is unclaimed is never materialised.
    """
    n = R.shape[0]
    n3 = n * n * n
    n_cols = ei.size
    death = np.full(n_cols, -1, dtype=np.int64)
    owner = Dict.empty(key_type=numba.int64, value_type=numba.int64)
    stored = List()
    stored.append(np.empty(0, dtype=np.int64))
    slot = np.zeros(n_cols, dtype=np.int64)  # 0: not materialised yet
    for c in range(n_cols):
        piv = _min_cofacet(ei[c], ej[c], R, n)
        if piv < 0:
            continue
        if piv not in owner:
            owner[piv] = c
            death[c] = piv // n3
            continue
        col = _coboundary(ei[c], ej[c], R, n)
        while col.size > 0:
            piv = col[0]
            if piv in owner:
                o = owner[piv]
                if slot[o] == 0:
                    stored.append(_coboundary(ei[o], ej[o], R, n))
                    slot[o] = len(stored) - 1
                col = _symdiff(col, stored[slot[o]])
            else:
                owner[piv] = c
                death[c] = piv // n3
                stored.append(col)
                slot[c] = len(stored) - 1
                break
    return death


@numba.njit(cache=True)
def _kruskal(n, ei, ej):
    parent = np.arange(n)
    negative = np.zeros(ei.size, dtype=np.bool_)
    for e in range(ei.size):
        a = _find(parent, ei[e])
        b = _find(parent, ej[e])
        if a != b:
            parent[max(a, b)] = min(a, b)
            negative[e] = True
    return negative


def _check_metric(dist) -> np.ndarray:
    D = np.asarray(dist, dtype=float)
    if D.ndim != 2 or D.shape[0] != D.shape[1]:
        raise ValueError("distance matrix must be square")
    if not np.all(np.isfinite(D)):
        raise ValueError("distance matrix must be finite")
    if np.any(D < 0):
        raise ValueError("distances must be non-negative")
    if not np.array_equal(D, D.T):
        raise ValueError("distance matrix must be symmetric")
    if np.any(np.diag(D) != 0):
        raise ValueError("distance matrix must have a zero diagonal")
    return D


def vr_persistence(dist, max_dim: int = 1) -> PersistenceDiagram:
    """H0 and H1 persistence of the Vietoris-Rips filtration of ``dist``.

    A simplex enters at the largest pairwise distance among its vertices.
    Classes that never die are flagged essential and given death
    ``max(dist) + 1``. Zero-persistence pairs are dropped.
    """
    if max_dim not in (0, 1):
        raise ValueError("only max_dim 0 or 1 is supported")
    D = _check_metric(dist)
    n = D.shape[0]
    if n == 0:
        return PersistenceDiagram.empty()
    values, ranks = np.unique(D, return_inverse=True)
    R = ranks.reshape(n, n).astype(np.int64)
    top = float(values[-1]) + 1.0

    iu, ju = np.triu_indices(n, 1)
    order = np.lexsort((-(iu * n + ju), R[iu, ju]))
    ei, ej = iu[order].astype(np.int64), ju[order].astype(np.int64)
    negative = _kruskal(n, ei, ej)

    h0_deaths = D[ei[negative], ej[negative]]
    h0_deaths = h0_deaths[h0_deaths > 0]
    n_components = n - int(negative.sum())
    dims = [np.zeros(h0_deaths.size + n_components, np.int64)]
    births = [np.zeros(h0_deaths.size + n_components)]
    deaths = [np.concatenate((h0_deaths, np.full(n_components, top)))]
    ess = [np.concatenate((np.zeros(h0_deaths.size, bool), np.ones(n_components, bool)))]

    if max_dim >= 1 and n >= 3:
        pos = np.nonzero(~negative)[0][::-1]
        if pos.size:
            di = _h1_pairs(R, ei[pos], ej[pos])
            b = D[ei[pos], ej[pos]]
            never = di < 0
            d = np.where(never, top, values[np.maximum(di, 0)])
            keep = never | (d > b)
            dims.append(np.ones(int(keep.sum()), np.int64))
            births.append(b[keep])
            deaths.append(d[keep])
            ess.append(never[keep])
    return PersistenceDiagram(np.concatenate(dims), np.concatenate(births),
                              np.concatenate(deaths), np.concatenate(ess))


# ---------------------------------------------------------------- statistics

def diagram_distance_mean(diagram: PersistenceDiagram,
                          birth_floor: float = DEFAULT_BIRTH_FLOOR,
                          include_essential: bool = True) -> float | None:
    """Mean distance to the origin of the 0D points with ``|birth| >= birth_floor``.

    The magnitude of the birth is compared so that diagrams of negated
    fields (see `superlevel_0d`) are filtered by peak height. Returns None
    when no point survives.
    """
    dg = diagram.restrict(0)
    if not include_essential:
        dg = dg.finite()
    keep = np.abs(dg.births) >= birth_floor
    if not np.any(keep):
        return None
    return float(np.mean(np.hypot(dg.births[keep], dg.deaths[keep])))


def persistence_score(diagrams, birth_floor: float = DEFAULT_BIRTH_FLOOR,
                      include_essential: bool = True) -> float:
    """Ensemble mean over diagrams of the mean 0D point distance to the origin.

    Diagrams with no point passing the birth floor are excluded with a
    warning; if every diagram is excluded a ValueError is raised.
    """
    diagrams = list(diagrams)
    if not diagrams:
        raise ValueError("need at least one diagram")
    means = [diagram_distance_mean(d, birth_floor, include_essential) for d in diagrams]
    kept = [m for m in means if m is not None]
    if len(kept) < len(means):
        warnings.warn(f"{len(means) - len(kept)} of {len(means)} diagrams had no point "
                      f"born at or above {birth_floor} and were excluded", RuntimeWarning)
    if not kept:
        raise ValueError("every diagram was excluded from the persistence score")
    return float(np.mean(kept))


def _entropy(lifetimes: np.ndarray) -> tuple:
    life = lifetimes[lifetimes > 0]
    total = float(life.sum())
    if life.size <= 1:
        return 0.0, total
    p = life / total
    return float(-np.sum(p * np.log2(p))), total


def persistent_entropy(diagram: PersistenceDiagram, dim: int | None = 1) -> float:
    """Base-2 Shannon entropy of the normalised finite lifetimes of ``dim``."""
    dg = diagram if dim is None else diagram.restrict(dim)
    return _entropy(dg.finite().lifetimes)[0]


def normalized_persistent_entropy(diagram: PersistenceDiagram, dim: int = 1) -> float:
    """Persistent entropy divided by ``log2`` of the total lifetime.

    Defined as 0 (with a warning for the ``total <= 1`` case) when the
    diagram has fewer than two points or the total lifetime is at most 1.
    """
    ent, total = _entropy(diagram.restrict(dim).finite().lifetimes)
    if ent == 0.0:
        return 0.0
    if total <= 1.0:
        warnings.warn(f"total lifetime {total:g} <= 1; normalised entropy set to 0",
                      RuntimeWarning)
        return 0.0
    return ent / math.log2(total)
