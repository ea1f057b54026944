"""Bottleneck distance, distance matrices and single-linkage dendrograms."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .homology import PersistenceDiagram

INF = math.inf


# ------------------------------------------------------------------ bottleneck

def _as_points(A) -> list[tuple[float, float]]:
    return [(float(b), float(d)) for b, d in A if b < d]


def _has_perfect_matching(adj: list[list[int]], n_right: int) -> bool:
    # Kuhn's augmenting paths; adjacency lists are in a fixed order so the
    # search is deterministic
    match_right = [-1] * n_right

    def augment(u: int, seen: list[bool]) -> bool:
        for v in adj[u]:
            if seen[v]:
                continue
            seen[v] = True
            if match_right[v] < 0 or augment(match_right[v], seen):
                match_right[v] = u
                return True
        return False

    for u in range(len(adj)):
        if not augment(u, [False] * n_right):
            return False
    return True


def _finite_bottleneck(A: list, B: list) -> float:
    m, n = len(A), len(B)
    if m == 0 and n == 0:
        return 0.0
    a = np.array(A, dtype=float).reshape(-1, 2)
    b = np.array(B, dtype=float).reshape(-1, 2)
    cross = np.maximum(np.abs(a[:, None, 0] - b[None, :, 0]),
                       np.abs(a[:, None, 1] - b[None, :, 1])) if m and n else np.zeros((m, n))
    diag_a = (a[:, 1] - a[:, 0]) / 2
    diag_b = (b[:, 1] - b[:, 0]) / 2
    candidates = np.unique(np.concatenate([cross.ravel(), diag_a, diag_b, [0.0]]))

    # left: A points then diagonal copies of B; right: B points then diagonal copies of A
    def feasible(eps: float) -> bool:
        adj = []
        for i in range(m):
            row = [j for j in range(n) if cross[i, j] <= eps]
            if diag_a[i] <= eps:
                row.append(n + i)
            adj.append(row)
        for j in range(n):
            row = [j] if diag_b[j] <= eps else []
            row.extend(n + i for i in range(m))
            adj.append(row)
        return _has_perfect_matching(adj, n + m)

    lo, hi = 0, len(candidates) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(candidates[mid]):
            hi = mid
        else:
            lo = mid + 1
    return float(candidates[lo])


def bottleneck_distance(A, B) -> float:
    """Exact bottleneck distance between two single-dimension diagrams.

    ``A`` and ``B`` are sequences of ``(birth, death)`` pairs; deaths may be
    ``inf``. Points at infinity only match each other, so unequal counts give
    ``inf``.
    """
    A, B = _as_points(A), _as_points(B)
    ess_a = sorted(b for b, d in A if d == INF)
    ess_b = sorted(b for b, d in B if d == INF)
    if len(ess_a) != len(ess_b):
        return INF
    # on a line, matching in sorted order minimises the largest displacement
    ess = max((abs(x - y) for x, y in zip(ess_a, ess_b)), default=0.0)
    fin = _finite_bottleneck([p for p in A if p[1] != INF], [p for p in B if p[1] != INF])
    return max(ess, fin)


def diagram_equal(A: PersistenceDiagram, B: PersistenceDiagram, dims: Sequence[int] | None = None) -> bool:
    """Exact multiset equality, per dimension."""
    keys = set(A.points) | set(B.points) if dims is None else set(dims)
    return all(A[k] == B[k] for k in keys)


# ------------------------------------------------------------- distance matrix

@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    labels: tuple[str, ...]
    d: np.ndarray

    def __post_init__(self):
        d = np.array(self.d, dtype=float)
        if d.ndim != 2 or d.shape[0] != d.shape[1] or d.shape[0] != len(self.labels):
            raise ValueError("distance matrix must be square and match the labels")
        if not np.array_equal(d, d.T):
            raise ValueError("distance matrix must be symmetric")
        if np.any(np.diag(d) != 0):
            raise ValueError("distance matrix must have a zero diagonal")
        if np.any(d < 0):
            raise ValueError("distances must be nonnegative")
        d.setflags(write=False)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "labels", tuple(map(str, self.labels)))

    @property
    def n(self) -> int:
        return len(self.labels)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow([""] + list(self.labels))
        for label, row in zip(self.labels, self.d):
            writer.writerow([label] + ["inf" if v == INF else repr(float(v)) for v in row])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "DistanceMatrix":
        rows = [r for r in csv.reader(io.StringIO(text)) if r]
        labels = rows[0][1:]
        return cls(tuple(labels), np.array([[float(v) for v in r[1:]] for r in rows[1:]]))


def bottleneck_matrix(diagrams: Sequence[PersistenceDiagram], dim: int,
                      labels: Sequence[str] | None = None) -> DistanceMatrix:
    n = len(diagrams)
    labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(n))
    d = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d[i, j] = d[j, i] = bottleneck_distance(diagrams[i][dim], diagrams[j][dim])
    return DistanceMatrix(labels, d)


# ------------------------------------------------------------------ dendrogram

@dataclass(frozen=True)
class Dendrogram:
    """Merge list ``(height, a, b, new_id)``; leaves are ``0..n-1``, merges get ``n, n+1, ...``."""

    leaves: tuple[str, ...]
    merges: tuple[tuple[float, int, int, int], ...]

    def to_json(self) -> str:
        return json.dumps({"leaves": list(self.leaves),
                           "merges": [[h, a, b, c] for h, a, b, c in self.merges]})

    @classmethod
    def from_json(cls, text: str) -> "Dendrogram":
        data = json.loads(text)
        return cls(tuple(data["leaves"]),
                   tuple((float(h), int(a), int(b), int(c)) for h, a, b, c in data["merges"]))

    def clusters_at(self, height: float) -> list[frozenset[int]]:
        """Leaf clusters after applying every merge at height <= ``height``."""
        members = {i: frozenset([i]) for i in range(len(self.leaves))}
        for h, a, b, c in self.merges:
            if h > height:
                break
            members[c] = members.pop(a) | members.pop(b)
        return sorted(members.values(), key=min)


def single_linkage(D: DistanceMatrix) -> Dendrogram:
    """Single-linkage merge tree via Prim's minimum spanning tree.

    MST edges sorted by (height, smaller leaf, larger leaf) are replayed through
    a union-find; each merge names the two current cluster ids in ascending
    order.
    """
    d = D.d
    if not np.all(np.isfinite(d)):
        raise ValueError("single linkage needs a finite distance matrix")
    n = D.n
    edges = []
    if n > 1:
        in_tree = np.zeros(n, dtype=bool)
        best = np.full(n, INF)
        parent = np.zeros(n, dtype=int)
        in_tree[0] = True
        best[:] = d[0]
        for _ in range(n - 1):
            cand = np.where(in_tree, INF, best)
            v = int(np.argmin(cand))
            u = int(parent[v])
            edges.append((float(d[u, v]), min(u, v), max(u, v)))
            in_tree[v] = True
            closer = ~in_tree & (d[v] < best)
            best[closer] = d[v][closer]
            parent[closer] = v
    edges.sort()
    root = list(range(n))
    cluster = list(range(n))          # cluster id currently owned by each root

    def find(x):
        while root[x] != x:
            root[x] = root[root[x]]
            x = root[x]
        return x

    merges = []
    next_id = n
    for h, u, v in edges:
        ru, rv = find(u), find(v)
        a, b = sorted((cluster[ru], cluster[rv]))
        root[rv] = ru
        cluster[ru] = next_id
        merges.append((h, a, b, next_id))
        next_id += 1
    return Dendrogram(D.labels, tuple(merges))
