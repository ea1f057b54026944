import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from netpers.filtration import Relation, closure, dowker_pair_from_relation
from netpers.homology import betti_numbers
from netpers.relationlab import (
    Cover,
    NotSimplicial,
    are_contiguous,
    barycentric_subdivision,
    compose,
    contiguity_items,
    cover_from_relation,
    dowker_maps,
    functorial_items,
    is_order_reversing,
    is_simplicial,
    least_vertex_map,
    maximal_simplices,
    nerve,
    random_nested_pair,
    relation_from_cover,
    sink_assignment_map,
    verify_fdt_pair,
    vertex_order_key,
)


@st.composite
def relations(draw, max_side=4):
    nr, nc = draw(st.integers(1, max_side)), draw(st.integers(1, max_side))
    inc = draw(arrays(bool, (nr, nc)))
    if not inc.any():
        inc[0, 0] = True
    return Relation(inc)


def test_subdivision_of_a_triangle():
    sd, ids = barycentric_subdivision(closure([(0, 1, 2)]))
    counts = [sum(1 for s in sd if len(s) == k) for k in (1, 2, 3)]
    assert counts == [7, 12, 6]
    assert closure(sd) == sd
    assert sorted(ids.values()) == list(range(7))


@st.composite
def complexes(draw):
    tops = draw(st.lists(st.sets(st.integers(0, 5), min_size=1, max_size=4), min_size=1, max_size=4))
    return closure(tops)


@given(complexes())
def test_subdivision_is_closed_and_keeps_homology(K):
    sd, _ = barycentric_subdivision(K)
    assert closure(sd) == sd
    assert {v for (v,) in (s for s in sd if len(s) == 1)} == set(K)
    assert betti_numbers(sd, 3) == betti_numbers(K, 3)


def test_vertex_order_extends_inclusion():
    assert vertex_order_key((1,)) < vertex_order_key((0, 1))
    assert (0, 1) < (1,)   # plain tuple order does not


@given(relations())
def test_least_vertex_map_is_simplicial_and_order_reversing(R):
    E, _ = dowker_pair_from_relation(R)
    sd, _ = barycentric_subdivision(E)
    phi = least_vertex_map(E)
    assert is_simplicial(phi, sd, E)
    assert is_order_reversing(phi, E)


@given(relations())
def test_nerve_of_row_cover_is_the_row_complex(R):
    E, F = dowker_pair_from_relation(R)
    C = cover_from_relation(R)
    assert C.host == F
    assert nerve(C) == E


def test_relation_cover_round_trip_transposes():
    R = Relation(np.array([[1, 1, 0], [0, 1, 1]], dtype=bool))
    back = relation_from_cover(cover_from_relation(R))
    assert back == R.transpose()
    E, F = dowker_pair_from_relation(back)
    assert E == cover_from_relation(R).host and F == nerve(cover_from_relation(R))


def test_cover_validation():
    host = closure([(0, 1), (1, 2)])
    with pytest.raises(ValueError, match="cover"):
        Cover(host, {"x": closure([(0, 1)])})
    with pytest.raises(ValueError, match="faces"):
        Cover(host, {"x": frozenset({(0, 1)}), "y": closure([(1, 2)])})
    with pytest.raises(ValueError, match="subcomplex"):
        Cover(host, {"x": closure([(0, 2)]), "y": host})
    hollow = closure([(0, 1), (1, 2), (0, 2)])
    not_simplices = Cover(hollow, {"all": hollow})
    assert not not_simplices.of_simplices
    with pytest.raises(ValueError):
        relation_from_cover(not_simplices)


def test_nerve_example():
    host = closure([(0, 1), (1, 2), (2, 3)])
    C = Cover(host, {"a": closure([(0, 1)]), "b": closure([(1, 2)]), "c": closure([(2, 3)])})
    assert nerve(C) == closure([("a", "b"), ("b", "c")])


def test_sink_assignment_choice_rules():
    R = Relation(np.array([[1, 1, 1], [0, 1, 1]], dtype=bool))
    assert sink_assignment_map(R, "least-index")[(0, 1)] == 1
    assert sink_assignment_map(R, "greatest-index")[(0, 1)] == 2
    assert sink_assignment_map(R, "least-index")[(0,)] == 0
    with pytest.raises(ValueError):
        sink_assignment_map(R, "random")


@pytest.mark.parametrize("rule", ["least-index", "greatest-index", "median-index"])
def test_contiguity_items_hold(rule):
    rng = np.random.default_rng(7)
    for _ in range(15):
        R, R2 = random_nested_pair(rng, int(rng.integers(1, 5)), int(rng.integers(1, 5)))
        E, F = dowker_pair_from_relation(R)
        if max(len(E), len(F)) > 50:
            continue
        assert all(contiguity_items(dowker_maps(R, rule)).values())
        assert all(functorial_items(R, R2, rule).values())


def test_contiguity_checker():
    K = closure([(0, 1, 2)])
    ident = {0: 0, 1: 1, 2: 2}
    assert are_contiguous(ident, {0: 0, 1: 0, 2: 0}, K, K)
    hollow = closure([(0, 1), (1, 2), (0, 2)])
    assert not are_contiguous(ident, {0: 1, 1: 2, 2: 0}, hollow, hollow)
    with pytest.raises(NotSimplicial):
        are_contiguous(ident, ident, K, hollow)


def test_compose_and_maximal_simplices():
    assert compose({1: "a", 2: "b"}, {0: 1, 5: 2}) == {0: "a", 5: "b"}
    assert maximal_simplices(closure([(0, 1), (1, 2, 3)])) == [(0, 1), (1, 2, 3)]


def test_budget_and_nesting_errors():
    with pytest.raises(ValueError, match="subdivision"):
        dowker_maps(Relation(np.ones((6, 1), dtype=bool)))
    R = Relation(np.array([[1, 0]], dtype=bool))
    S = Relation(np.array([[0, 1]], dtype=bool))
    with pytest.raises(ValueError, match="contained"):
        verify_fdt_pair(R, S)
    with pytest.raises(ValueError, match="contained"):
        functorial_items(R, S)


@given(relations(max_side=5))
def test_row_and_column_complexes_share_homology(R):
    E, F = dowker_pair_from_relation(R)
    assert betti_numbers(E, 2) == betti_numbers(F, 2)


def test_fdt_report_on_a_nested_pair():
    R = Relation(np.array([[1, 1, 0], [0, 1, 1], [1, 0, 1]], dtype=bool))
    R2 = Relation(np.array([[1, 1, 0], [0, 1, 1], [1, 1, 1]], dtype=bool))
    rep = verify_fdt_pair(R, R2)
    assert rep.ok
    assert rep.betti_E == [1, 1, 0] and rep.betti_E2 == [1, 0, 0]
    assert rep.rank_E == [1, 0, 0]
