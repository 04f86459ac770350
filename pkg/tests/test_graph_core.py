import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import CORPUS, CORPUS_IDS
from oracles import hops_floyd_warshall, laplacian_by_loops
from graphspread import (
    Graph,
    distance_matrix,
    gen_complete,
    gen_cycle,
    gen_path,
    gen_random,
    gen_star,
    geodesic_distances,
    normalized_laplacian,
)
from graphspread.errors import (
    DegenerateDegreeError,
    DisconnectedGraphError,
    GraphError,
    InvalidArgumentError,
    InvalidSizeError,
)
from graphspread.graph_core import is_connected, weighted_distances


def test_star_small():
    w = gen_star(3).weights
    assert w[0, 1] == w[0, 2] == 1
    assert w[1, 2] == 0


def test_star_degrees():
    deg = gen_star(5).degrees
    assert deg[0] == 4
    assert np.all(deg[1:] == 1)


def test_star_too_small():
    with pytest.raises(InvalidSizeError):
        gen_star(2)


def test_complete_and_cycle():
    w = gen_complete(3).weights
    assert np.array_equal(w, np.ones((3, 3)) - np.eye(3))
    assert np.all(gen_cycle(4).degrees == 2)


@pytest.mark.parametrize(
    "call",
    [lambda: gen_cycle(2), lambda: gen_path(1), lambda: gen_complete(1),
     lambda: gen_random(1, 0.5), lambda: gen_random(5, 0.0), lambda: gen_random(5, 1.5)],
)
def test_generator_arguments(call):
    with pytest.raises(InvalidArgumentError):
        call()


def test_random_deterministic():
    assert gen_random(6, 0.5, seed=1) == gen_random(6, 0.5, seed=1)


def test_random_gives_up():
    # a 40-node graph at p = 0.001 is essentially never connected
    with pytest.raises(InvalidArgumentError):
        gen_random(40, 0.001, seed=0)


@given(st.integers(2, 14), st.floats(0.15, 1.0), st.integers(0, 10_000))
def test_random_generator_invariants(n, p, seed):
    g = gen_random(n, p, seed)
    w = g.weights
    assert np.array_equal(w, w.T)
    assert np.all(np.diag(w) == 0)
    assert is_connected(g)


@pytest.mark.parametrize("name,g,uc", CORPUS, ids=CORPUS_IDS)
def test_generators_connected(name, g, uc):
    assert np.all(geodesic_distances(g, 0) >= 0)


def test_graph_rejects_bad_matrices():
    with pytest.raises(GraphError):
        Graph([[0, 1], [2, 0]])
    with pytest.raises(GraphError):
        Graph([[1, 1], [1, 0]])
    with pytest.raises(GraphError):
        Graph([[0, -1], [-1, 0]])


def test_laplacian_star3():
    lap = normalized_laplacian(gen_star(3))
    assert np.allclose(np.diag(lap), 1.0, atol=0)
    assert lap[0, 1] == pytest.approx(-1 / np.sqrt(2), abs=1e-15)
    assert lap[0, 2] == pytest.approx(-1 / np.sqrt(2), abs=1e-15)
    assert lap[1, 2] == 0


def test_laplacian_k2():
    assert np.array_equal(normalized_laplacian(gen_complete(2)), [[1.0, -1.0], [-1.0, 1.0]])


@pytest.mark.parametrize("name,g,uc", CORPUS, ids=CORPUS_IDS)
def test_laplacian_matches_definition(name, g, uc):
    lap = normalized_laplacian(g)
    assert np.array_equal(lap, lap.T)
    assert np.allclose(lap, laplacian_by_loops(g.weights), atol=1e-15)
    kernel = np.sqrt(g.degrees)
    assert np.linalg.norm(lap @ kernel) <= 1e-12


def test_weighted_laplacian_kernel():
    g = Graph([[0, 2.5, 0, 1], [2.5, 0, 0.5, 0], [0, 0.5, 0, 3], [1, 0, 3, 0]])
    lap = normalized_laplacian(g)
    assert np.linalg.norm(lap @ np.sqrt(g.degrees)) <= 1e-12


def test_isolated_node():
    g = Graph([[0, 1, 0], [1, 0, 0], [0, 0, 0]])
    with pytest.raises(DegenerateDegreeError):
        normalized_laplacian(g)


def test_geodesic_examples():
    star = gen_star(5)
    assert geodesic_distances(star, 0).tolist() == [0, 1, 1, 1, 1]
    # leaf "2" in 1-based labels is node 1 here
    assert geodesic_distances(star, 1).tolist() == [1, 0, 2, 2, 2]
    assert geodesic_distances(gen_path(3), 0).tolist() == [0, 1, 2]


def test_geodesic_disconnected():
    g = Graph([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    with pytest.raises(DisconnectedGraphError):
        geodesic_distances(g, 0)
    with pytest.raises(DisconnectedGraphError):
        distance_matrix(g, 0)


@pytest.mark.parametrize("name,g,uc", CORPUS, ids=CORPUS_IDS)
def test_geodesic_matches_floyd_warshall(name, g, uc):
    assert np.array_equal(geodesic_distances(g, uc), hops_floyd_warshall(g.weights)[uc])


def test_distance_examples():
    star = gen_star(5)
    assert distance_matrix(star, 0).entries.tolist() == [0, 1, 1, 1, 1]
    assert sorted(distance_matrix(star, 1).entries.tolist()) == [0, 1, 4, 4, 4]
    assert distance_matrix(gen_path(4), 0).entries.tolist() == [0, 1, 4, 9]


@pytest.mark.parametrize("name,g,uc", CORPUS, ids=CORPUS_IDS)
def test_distance_default_is_squared_hops(name, g, uc):
    p = distance_matrix(g, uc)
    assert p.distance_kind == "squared_geodesic"
    assert p.entries[uc] == 0
    assert np.all(np.delete(p.entries, uc) > 0)
    root = np.sqrt(p.entries)
    assert np.array_equal(root, np.round(root))


def test_distance_kind_hook():
    g = Graph([[0, 2.0, 0], [2.0, 0, 3.0], [0, 3.0, 0]])
    assert distance_matrix(g, 0, "geodesic").entries.tolist() == [0, 1, 2]
    assert distance_matrix(g, 0, "squared_weighted").entries.tolist() == [0, 4, 25]
    assert weighted_distances(g, 2).tolist() == [5, 3, 0]
    custom = distance_matrix(g, 0, lambda gr, u: np.abs(np.arange(gr.n) - u) * 10.0)
    assert custom.entries.tolist() == [0, 10, 20]
    with pytest.raises(InvalidArgumentError):
        distance_matrix(g, 0, "manhattan")
    with pytest.raises(InvalidArgumentError):
        distance_matrix(g, 5)


@given(st.integers(3, 10), st.integers(0, 1000), st.data())
def test_distance_relabel_invariance(n, seed, data):
    g = gen_random(n, 0.5, seed)
    perm = np.array(data.draw(st.permutations(list(range(n)))))
    uc = data.draw(st.integers(0, n - 1))
    # new node i is old node perm[i], so the old center sits where perm == uc
    new_uc = int(np.flatnonzero(perm == uc)[0])
    before = distance_matrix(g, uc).entries
    after = distance_matrix(g.permuted(perm), new_uc).entries
    assert np.array_equal(after, before[perm])
