import itertools
import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from netpers.network import (
    BudgetExceeded,
    Network,
    NetworkParseError,
    codistortion,
    cycle_network,
    distortion_of_relation,
    is_correspondence,
    load_network,
    map_distortion,
    max_symmetrize,
    network_distance_correspondences,
    network_distance_maps,
    pair_swap,
    parse_network,
    save_network,
    transpose,
)

finite = st.floats(-5, 5, allow_nan=False, allow_infinity=False)


@st.composite
def networks(draw, max_n=4):
    n = draw(st.integers(1, max_n))
    w = draw(arrays(np.float64, (n, n), elements=finite))
    return Network.from_matrix(w)


def brute_network_distance(X, Y):
    # every nonempty relation, keep the correspondences
    pairs = [(i, j) for i in range(X.n) for j in range(Y.n)]
    best = math.inf
    for mask in range(1, 1 << len(pairs)):
        R = [p for k, p in enumerate(pairs) if mask >> k & 1]
        if {i for i, _ in R} == set(range(X.n)) and {j for _, j in R} == set(range(Y.n)):
            best = min(best, distortion_of_relation(X, Y, R))
    return best / 2


# ------------------------------------------------------------------- parsing

def test_three_node_json_parses(three_node):
    text = json.dumps({"labels": ["a", "b", "c"],
                       "weights": [[-1, 1, 2], [1, 0, 2], [1, 2, 0]]})
    X = parse_network(text, "json")
    assert X.n == 3 and X == three_node
    assert X.weight("a", "a") == -1 and X.weight("a", "c") == 2 and X.weight("c", "a") == 1


@pytest.mark.parametrize("text, fragment", [
    ('{"labels": ["a", "b"], "weights": [[0, 1]]}', "expected 2 matrix rows"),
    ('{"labels": ["a", "b"], "weights": [[0, 1], [1]]}', "row 1"),
    ('{"labels": ["a", "a"], "weights": [[0, 1], [1, 0]]}', "duplicate"),
    ('{"labels": ["a", "b"], "weights": [[0, "x"], [1, 0]]}', "cell (0, 1)"),
    ('{"labels": ["a", "b"], "weights": [[0, 1], [NaN, 0]]}', "cell (1, 0)"),
    ('{"labels": [], "weights": []}', "empty"),
    ("[1, 2]", "labels"),
    ("{nope", "invalid JSON"),
])
def test_parse_errors_name_the_problem(text, fragment):
    with pytest.raises(NetworkParseError, match=None) as exc:
        parse_network(text, "json")
    assert fragment in str(exc.value)


def test_csv_parse_and_nonfinite():
    X = parse_network("a,b\n0,1\n2,0\n", "csv")
    assert X.weight("b", "a") == 2
    with pytest.raises(NetworkParseError, match="non-finite"):
        parse_network("a,b\n0,inf\n2,0\n", "csv")


def test_constructor_rejects_bad_matrices():
    with pytest.raises(ValueError):
        Network(("a", "b"), np.zeros((2, 3)))
    with pytest.raises(ValueError):
        Network(("a",), np.array([[np.inf]]))
    with pytest.raises(ValueError):
        Network(("a", "a"), np.zeros((2, 2)))


def test_weights_are_read_only(three_node):
    with pytest.raises(ValueError):
        three_node.weights[0, 0] = 5


@given(networks())
def test_text_round_trips(X):
    assert parse_network(X.to_json(), "json") == X
    assert parse_network(X.to_csv(), "csv") == X


def test_file_round_trip(tmp_path, three_node):
    for suffix in ("json", "csv"):
        path = tmp_path / f"net.{suffix}"
        save_network(three_node, path)
        assert load_network(path) == three_node
    with pytest.raises(NetworkParseError, match="cannot read"):
        load_network(tmp_path / "missing.json")


# ---------------------------------------------------------------- transforms

def test_transform_examples(three_node):
    T = transpose(three_node)
    assert T.weight("a", "c") == 1 and T.weight("c", "a") == 2
    S = max_symmetrize(three_node)
    assert S.weight("a", "c") == 2 and S.weight("c", "a") == 2
    assert np.array_equal(S.weights, S.weights.T)


@given(networks())
def test_transpose_is_an_involution(X):
    assert transpose(transpose(X)) == X


@given(networks())
def test_symmetrize_is_idempotent_and_transpose_blind(X):
    S = max_symmetrize(X)
    assert max_symmetrize(S) == S
    assert max_symmetrize(transpose(X)) == S


@given(networks(max_n=5), st.data())
def test_pair_swap_is_an_involution(X, data):
    if X.n < 2:
        return
    i, j = data.draw(st.lists(st.integers(0, X.n - 1), min_size=2, max_size=2, unique=True))
    a, b = X.labels[i], X.labels[j]
    assert pair_swap(pair_swap(X, a, b), a, b) == X
    assert pair_swap(X, a, b) == pair_swap(X, b, a)


@given(networks(max_n=5))
def test_swapping_every_pair_transposes(X):
    Z = X
    for a, b in itertools.combinations(X.labels, 2):
        Z = pair_swap(Z, a, b)
    assert Z == transpose(X)


def test_pair_swap_errors(three_node):
    with pytest.raises(ValueError):
        pair_swap(three_node, "a", "a")
    with pytest.raises(KeyError):
        pair_swap(three_node, "a", "zz")


def test_cycle_network():
    G = cycle_network(4)
    assert G.weights.tolist() == [[0, 1, 2, 3], [3, 0, 1, 2], [2, 3, 0, 1], [1, 2, 3, 0]]
    assert G.labels == ("x1", "x2", "x3", "x4")
    with pytest.raises(ValueError):
        cycle_network(2)


# --------------------------------------------------------------- distortion

def test_distortion_and_correspondence_helpers(three_node):
    ident = [(i, i) for i in range(3)]
    assert distortion_of_relation(three_node, three_node, ident) == 0
    assert is_correspondence(ident, 3, 3)
    assert not is_correspondence([(0, 0), (1, 1)], 3, 3)
    with pytest.raises(ValueError):
        distortion_of_relation(three_node, three_node, [])
    assert map_distortion(three_node, three_node, [0, 1, 2]) == 0
    # collapsing everything onto a: largest gap is |w(x, x') - w(a, a)|
    assert map_distortion(three_node, three_node, [0, 0, 0]) == 3


def test_codistortion_matches_its_definition():
    rng = np.random.default_rng(1)
    X = Network.from_matrix(rng.normal(size=(3, 3)))
    Y = Network.from_matrix(rng.normal(size=(2, 2)))
    phi, psi = [1, 0, 1], [2, 0]
    want_xy = max(abs(X.weights[x, psi[y]] - Y.weights[phi[x], y]) for x in range(3) for y in range(2))
    want_yx = max(abs(Y.weights[y, phi[x]] - X.weights[psi[y], x]) for x in range(3) for y in range(2))
    assert codistortion(X, Y, phi, psi, "XY") == pytest.approx(want_xy, abs=0)
    assert codistortion(X, Y, phi, psi, "YX") == pytest.approx(want_yx, abs=0)


def test_single_node_distance():
    X = Network.from_matrix([[1.0]])
    Y = Network.from_matrix([[4.0]])
    assert network_distance_correspondences(X, Y) == 1.5
    assert network_distance_maps(X, Y)[0] == 1.5


def test_distance_to_one_point_is_half_the_weight_range(three_node):
    # the only correspondence with a point relates everything to it
    P = Network.from_matrix([[0.5]])
    spread = np.abs(three_node.weights - 0.5).max()
    assert network_distance_correspondences(three_node, P) == spread / 2


@given(networks(max_n=3), networks(max_n=3))
def test_both_exact_searches_match_brute_force(X, Y):
    want = brute_network_distance(X, Y)
    assert network_distance_correspondences(X, Y) == pytest.approx(want, abs=1e-12)
    assert network_distance_maps(X, Y)[0] == pytest.approx(want, abs=1e-12)


@given(networks(max_n=3), networks(max_n=3), networks(max_n=3))
def test_network_distance_is_a_pseudometric(X, Y, Z):
    dxy = network_distance_correspondences(X, Y)
    assert network_distance_correspondences(X, X) == 0
    assert dxy == network_distance_correspondences(Y, X)
    assert dxy <= network_distance_correspondences(X, Z) + network_distance_correspondences(Z, Y) + 1e-12


def test_maps_search_returns_witnesses():
    rng = np.random.default_rng(3)
    X = Network.from_matrix(rng.normal(size=(3, 3)))
    Y = Network.from_matrix(rng.normal(size=(2, 2)))
    d, phi, psi = network_distance_maps(X, Y)
    value = max(map_distortion(X, Y, phi), map_distortion(Y, X, psi),
                codistortion(X, Y, phi, psi, "XY"), codistortion(X, Y, phi, psi, "YX"))
    assert d == pytest.approx(value / 2, abs=1e-15)


def test_budgets():
    X = Network.from_matrix(np.zeros((5, 5)))
    with pytest.raises(BudgetExceeded):
        network_distance_correspondences(X, X)
    with pytest.raises(BudgetExceeded):
        network_distance_maps(X, X, budget=1000)
