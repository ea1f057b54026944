import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from netpers.diagmetric import (
    Dendrogram,
    DistanceMatrix,
    bottleneck_distance,
    bottleneck_matrix,
    diagram_equal,
    single_linkage,
)
from netpers.homology import PersistenceDiagram

INF = math.inf
coord = st.integers(0, 8).map(float)


@st.composite
def diagrams(draw, max_points=3, essential=False):
    pts = []
    for _ in range(draw(st.integers(0, max_points))):
        b = draw(coord)
        d = b + draw(st.integers(1, 6))
        pts.append((b, float(d)))
    if essential:
        pts += [(draw(coord), INF) for _ in range(draw(st.integers(0, 2)))]
    return pts


def brute_bottleneck(A, B):
    """Minimise the largest cost over every bijection of A + diag(B) with B + diag(A)."""
    m, n = len(A), len(B)
    left = [("pt", p) for p in A] + [("diag", q) for q in B]
    right = [("pt", q) for q in B] + [("diag", p) for p in A]

    def cost(u, v):
        if u[0] == "pt" and v[0] == "pt":
            return max(abs(u[1][0] - v[1][0]), abs(u[1][1] - v[1][1]))
        if u[0] == "pt":
            return (u[1][1] - u[1][0]) / 2
        if v[0] == "pt":
            return (v[1][1] - v[1][0]) / 2
        return 0.0

    if m + n == 0:
        return 0.0
    return min(max(cost(left[i], right[j]) for i, j in enumerate(perm))
               for perm in itertools.permutations(range(m + n)))


def test_examples():
    assert bottleneck_distance([(1, 3)], [(1, 4)]) == 1
    assert bottleneck_distance([(1, 3)], []) == 1
    assert bottleneck_distance([], []) == 0
    assert bottleneck_distance([(0, INF)], [(2, INF)]) == 2
    assert bottleneck_distance([(0, INF)], []) == INF
    assert bottleneck_distance([(0, INF), (0, 1)], [(0.5, INF)]) == 0.5


@given(diagrams(), diagrams())
def test_matches_exhaustive_matcher(A, B):
    assert bottleneck_distance(A, B) == pytest.approx(brute_bottleneck(A, B), abs=1e-12)


@given(diagrams(essential=True), diagrams(essential=True), diagrams(essential=True))
def test_pseudometric(A, B, C):
    ab = bottleneck_distance(A, B)
    assert bottleneck_distance(A, A) == 0
    assert ab == bottleneck_distance(B, A)
    assert ab <= bottleneck_distance(A, C) + bottleneck_distance(C, B)


def test_diagram_equal():
    A = PersistenceDiagram({0: [(0, 1)], 1: [(1, 2)]})
    B = PersistenceDiagram({0: [(0, 1)]})
    assert not diagram_equal(A, B)
    assert diagram_equal(A, B, dims=[0])


def test_bottleneck_matrix():
    dg = [PersistenceDiagram({1: [(1, 3)]}), PersistenceDiagram({1: [(1, 4)]}), PersistenceDiagram({})]
    D = bottleneck_matrix(dg, 1, ["x", "y", "z"])
    assert D.d.tolist() == [[0, 1, 1], [1, 0, 1.5], [1, 1.5, 0]]


# ------------------------------------------------------------ distance matrix

def test_distance_matrix_validation():
    with pytest.raises(ValueError, match="symmetric"):
        DistanceMatrix(("a", "b"), [[0, 1], [2, 0]])
    with pytest.raises(ValueError, match="diagonal"):
        DistanceMatrix(("a", "b"), [[1, 1], [1, 0]])
    with pytest.raises(ValueError, match="nonnegative"):
        DistanceMatrix(("a", "b"), [[0, -1], [-1, 0]])
    with pytest.raises(ValueError, match="square"):
        DistanceMatrix(("a",), [[0, 1], [1, 0]])


def test_distance_matrix_csv_round_trip():
    D = DistanceMatrix(("a", "b", "c"), [[0, 0.5, INF], [0.5, 0, 2], [INF, 2, 0]])
    back = DistanceMatrix.from_csv(D.to_csv())
    assert back.labels == D.labels and np.array_equal(back.d, D.d)
    assert D.to_csv().splitlines()[0] == ",a,b,c"


# ------------------------------------------------------------------ dendrogram

@st.composite
def distance_matrices(draw):
    n = draw(st.integers(1, 7))
    vals = draw(st.lists(st.integers(1, 6), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))
    d = np.zeros((n, n))
    d[np.triu_indices(n, 1)] = vals
    d = d + d.T
    return DistanceMatrix(tuple(f"p{i}" for i in range(n)), d)


def reachability_clusters(D, h):
    n = D.n
    seen, out = set(), []
    for s in range(n):
        if s in seen:
            continue
        comp, stack = {s}, [s]
        while stack:
            u = stack.pop()
            for v in range(n):
                if v not in comp and D.d[u, v] <= h:
                    comp.add(v)
                    stack.append(v)
        seen |= comp
        out.append(frozenset(comp))
    return sorted(out, key=min)


@given(distance_matrices())
def test_cuts_match_threshold_graph_components(D):
    T = single_linkage(D)
    assert len(T.merges) == D.n - 1
    for h in range(0, 8):
        assert T.clusters_at(h) == reachability_clusters(D, h)


@given(distance_matrices())
def test_merge_heights_are_sorted_and_ids_fresh(D):
    T = single_linkage(D)
    heights = [m[0] for m in T.merges]
    assert heights == sorted(heights)
    assert [m[3] for m in T.merges] == list(range(D.n, 2 * D.n - 1))
    assert all(a < b for _, a, b, _ in T.merges)


def test_dendrogram_example_and_json():
    D = DistanceMatrix(("a", "b", "c"), [[0, 1, 4], [1, 0, 3], [4, 3, 0]])
    T = single_linkage(D)
    assert T.merges == ((1.0, 0, 1, 3), (3.0, 2, 3, 4))
    assert Dendrogram.from_json(T.to_json()) == T
    assert T.to_json() == '{"leaves": ["a", "b", "c"], "merges": [[1.0, 0, 1, 3], [3.0, 2, 3, 4]]}'


def test_single_linkage_rejects_infinite_entries():
    with pytest.raises(ValueError, match="finite"):
        single_linkage(DistanceMatrix(("a", "b"), [[0, INF], [INF, 0]]))
