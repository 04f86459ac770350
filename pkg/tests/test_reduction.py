import functools
import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import CORPUS, CORPUS_IDS, random_unit
from oracles import dominated_brute_force
from graphspread import (
    BlockPartition,
    ReducedSignal,
    SpreadPoint,
    distance_matrix,
    expand_signal,
    find_block_structure,
    gen_complete,
    gen_cycle,
    gen_path,
    gen_random,
    gen_star,
    geodesic_distances,
    graph_spread,
    hypersphere_grid,
    is_circulant,
    is_constant_by_row,
    m_alpha,
    normalized_laplacian,
    pareto_frontier,
    sample_cloud,
    spectral_spread,
    uncertainty_curve,
    verify_property1,
)
from graphspread.errors import InvalidArgumentError
from graphspread.graph_core import Graph
from graphspread.reduction import (
    angle_count,
    check_block_form,
    lifted_eigenvectors,
    pareto_indices,
    reordered,
    restrict_signal,
)
from graphspread.spectral import spreads


@functools.lru_cache(maxsize=None)
def star_leaf(n=8):
    g = gen_star(n)
    return g, find_block_structure(g, 1)


# -- predicates ------------------------------------------------------------

def test_is_circulant_examples():
    assert is_circulant(np.array([[2.0, 3.0], [3.0, 2.0]]))
    assert is_circulant(np.eye(4))
    assert not is_circulant(np.array([[0, 1, 0], [0, 0, 1], [0, 1, 0]]))
    assert is_circulant(np.array([[5.0]]))


@given(st.lists(st.floats(-10, 10), min_size=1, max_size=7))
def test_is_circulant_of_rotations(row):
    k = len(row)
    m = np.array([np.roll(row, i) for i in range(k)])
    assert is_circulant(m)


def test_is_constant_by_row_examples():
    assert is_constant_by_row(np.zeros((3, 4)))
    assert is_constant_by_row(np.outer([2.0, 3.0], np.ones(3)))
    assert not is_constant_by_row(np.array([[1.0, 2.0]]))
    assert is_constant_by_row(np.array([[1.0, 1.0 + 1e-13]]), tol=1e-12)


# -- find_block_structure --------------------------------------------------

@pytest.mark.parametrize("n", [3, 5, 8])
def test_star_center_structure(n):
    part = find_block_structure(gen_star(n), 0)
    assert part.groups == ((0,), tuple(range(1, n)))
    assert part.reduced_dim == 2
    assert part.form() == f"{{x1; x2 ×{n - 1}}}"


@pytest.mark.parametrize("n", [4, 8, 10])
def test_star_leaf_structure(n):
    part = find_block_structure(gen_star(n), 1)
    assert part.groups == ((1,), (0,), tuple(range(2, n)))
    assert part.reduced_dim == 3
    assert part.form() == f"{{x1; x2; x3 ×{n - 2}}}"


@pytest.mark.parametrize("uc", range(5))
def test_complete_structure(uc):
    part = find_block_structure(gen_complete(5), uc)
    assert part.reduced_dim == 2
    assert part.groups[0] == (uc,)
    assert sorted(part.groups[1]) == [v for v in range(5) if v != uc]


def test_no_reduction_cases():
    assert find_block_structure(gen_path(4), 0).reduced_dim == 4
    # the two neighbours of a cycle node see different third nodes
    assert find_block_structure(gen_cycle(6), 0).reduced_dim == 6


def test_path_middle_pairs():
    # on a path of 3 seen from the middle, the two ends form a tail
    part = find_block_structure(gen_path(3), 1)
    assert part.groups == ((1,), (0, 2))


def test_free_first_tails_last():
    g = Graph.from_edges(7, [(0, 1, 1), (0, 2, 1), (0, 3, 1), (3, 4, 1), (3, 5, 1), (3, 6, 1)])
    part = find_block_structure(g, 0)
    sizes = part.sizes
    first_tail = int(np.argmax(sizes > 1))
    assert np.all(sizes[first_tail:] > 1)
    assert part.groups[0] == (0,)


def test_partition_validation():
    with pytest.raises(InvalidArgumentError):
        BlockPartition((0, 1, 2), ((0,), (2, 1)))
    with pytest.raises(InvalidArgumentError):
        BlockPartition((0, 1), ((0,), (1,), (1,)))


def test_partition_json_roundtrip():
    _, part = star_leaf()
    obj = json.loads(json.dumps(part.to_json()))
    assert obj["groups"][0] == [2]
    assert BlockPartition.from_json(obj) == part


def assert_structure_sound(g, uc, part):
    n = g.n
    assert part.reduced_dim <= n
    assert (part.reduced_dim == n) == (not part.tails)
    lap = normalized_laplacian(g)
    p = distance_matrix(g, uc)
    hops = geodesic_distances(g, uc)
    for tail in part.tails:
        assert np.ptp(hops[list(tail)]) == 0
    for alpha in (-3.0, -1.0, -0.3, 0.0):
        m = m_alpha(p, lap, alpha).matrix
        assert check_block_form(m, part, 1e-12)
        # the same blocks seen in the reordered matrix
        mr = reordered(m, part)
        pos = 0
        for grp in part.groups:
            k = len(grp)
            if k > 1:
                assert is_circulant(mr[pos:pos + k, pos:pos + k], 1e-12)
                rest = np.r_[0:pos, pos + k:n]
                assert is_constant_by_row(mr[np.ix_(rest, np.arange(pos, pos + k))], 1e-12)
            pos += k
        for tail in part.tails:
            lam, vecs = lifted_eigenvectors(m, tail)
            for j in range(vecs.shape[1]):
                v = vecs[:, j]
                assert np.linalg.norm(m @ v - lam[j] * v) <= 1e-10


@pytest.mark.parametrize("name,g,uc", CORPUS, ids=CORPUS_IDS)
def test_structure_sound_on_corpus(name, g, uc):
    assert_structure_sound(g, uc, find_block_structure(g, uc))


@given(st.integers(3, 9), st.floats(0.2, 0.9), st.integers(0, 5000), st.data())
def test_structure_sound_on_random_graphs(n, prob, seed, data):
    g = gen_random(n, prob, seed)
    uc = data.draw(st.integers(0, n - 1))
    part = find_block_structure(g, uc)
    assert_structure_sound(g, uc, part)
    assert verify_property1(g, uc, part, [-4.0, -1.0, -0.25])


@given(st.integers(4, 9), st.data())
def test_star_leaf_structure_under_relabeling(n, data):
    perm = np.array(data.draw(st.permutations(list(range(n)))))
    g = gen_star(n).permuted(perm)
    hub = int(np.flatnonzero(perm == 0)[0])
    uc = data.draw(st.sampled_from([v for v in range(n) if v != hub]))
    part = find_block_structure(g, uc)
    assert part.reduced_dim == 3
    assert part.groups[0] == (uc,) and part.groups[1] == (hub,)


# -- minimizer constant on tails ------------------------------------------

def test_verify_property1_examples():
    g, part = star_leaf(8)
    assert verify_property1(g, 1, part, np.linspace(-5, 0, 50))
    k5 = gen_complete(5)
    assert verify_property1(k5, 2, find_block_structure(k5, 2), [-2, -1, -0.5, 0])
    path = gen_path(4)
    assert verify_property1(path, 0, BlockPartition.trivial(4), [-1.0])


def test_verify_property1_rejects_wrong_partition():
    # the center and a leaf are never equal in the minimizer
    g = gen_star(5)
    bogus = BlockPartition((0, 1, 2, 3, 4), ((0, 1), (2,), (3,), (4,)))
    assert not verify_property1(g, 0, bogus, [-1.0])


# -- reduced signals -------------------------------------------------------

def test_expand_delta():
    g, part = star_leaf(5)
    x = expand_signal(ReducedSignal(np.array([1.0, 0.0, 0.0]), part))
    assert np.array_equal(x, np.eye(5)[1])


@given(st.floats(0, 2 * np.pi), st.floats(0, 2 * np.pi), st.integers(4, 10))
def test_expand_two_angle_family(theta, phi, n):
    _, part = star_leaf(n)
    c = np.array([np.cos(theta), np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi) / np.sqrt(n - 2)])
    x = expand_signal(ReducedSignal(c, part))
    assert abs(np.linalg.norm(x) - 1) <= 1e-10
    assert np.ptp(x[2:]) <= 1e-15


def test_expand_identity_and_errors(rng):
    part = BlockPartition.trivial(4)
    x = random_unit(rng, 1, 4)[0]
    assert np.array_equal(expand_signal(ReducedSignal(x, part)), x)
    with pytest.raises(InvalidArgumentError):
        expand_signal(ReducedSignal(np.array([1.0, 1.0, 0.0, 0.0]), part))
    with pytest.raises(InvalidArgumentError):
        expand_signal(ReducedSignal(np.array([1.0]), part))


@given(st.lists(st.floats(-1, 1), min_size=3, max_size=3).filter(lambda c: sum(v * v for v in c) > 1e-3))
def test_restrict_expand_roundtrip(c):
    _, part = star_leaf(7)
    c = np.array(c) / np.sqrt(np.dot(part.sizes, np.square(c)))
    x = expand_signal(ReducedSignal(c, part))
    assert np.array_equal(expand_signal(restrict_signal(x, part)), x)


# -- grid and cloud --------------------------------------------------------

def test_grid_sizes():
    assert angle_count(0.05) == 126
    assert len(list(hypersphere_grid(BlockPartition.trivial(1), 0.05))) == 1
    _, part = star_leaf(6)
    grid = list(hypersphere_grid(part, 0.05))
    assert len(grid) == 126 ** 2
    norms = [np.dot(part.sizes, r.coords ** 2) for r in grid]
    assert np.max(np.abs(np.array(norms) - 1)) <= 1e-10
    with pytest.raises(InvalidArgumentError):
        list(hypersphere_grid(part, 0.0))
    with pytest.raises(InvalidArgumentError):
        list(hypersphere_grid(part, -0.1))


def test_grid_size_guard():
    with pytest.raises(InvalidArgumentError):
        list(hypersphere_grid(BlockPartition.trivial(6), 0.01))


def test_star_center_cloud():
    g = gen_star(5)
    cloud = sample_cloud(g, 0, find_block_structure(g, 0), 0.05)
    # at grid resolution the leftmost samples sit near (0, 0.5)
    near_zero = cloud.s <= 1e-3
    assert np.min(cloud.g[near_zero]) == pytest.approx(0.5, abs=0.05)
    ellipse = 0.5 - 0.5 * np.sqrt(1 - (cloud.s - 1) ** 2)
    assert np.all(cloud.g >= ellipse - 1e-9)


def test_k2_cloud_closed_curve():
    g = gen_complete(2)
    cloud = sample_cloud(g, 0, find_block_structure(g, 0), 0.05)
    assert len(cloud) == 126
    t = np.arange(126) * 0.05
    assert np.allclose(cloud.g, np.sin(t) ** 2, atol=1e-14)
    assert np.allclose(cloud.s, 1 - 2 * np.cos(t) * np.sin(t), atol=1e-14)


@pytest.mark.parametrize("name,g,uc", [c for c in CORPUS if c[0] in ("star5-center", "star6-leaf", "K5")])
def test_cloud_points_recompute(name, g, uc):
    cloud = sample_cloud(g, uc, find_block_structure(g, uc), 0.1)
    p, lap = distance_matrix(g, uc), normalized_laplacian(g)
    assert np.all((cloud.s >= -1e-12) & (cloud.s <= 2 + 1e-12))
    assert np.all(cloud.g >= 0)
    for pt in cloud.points[::37]:
        assert abs(spectral_spread(pt.signal, lap) - pt.s) <= 1e-10
        assert abs(graph_spread(pt.signal, p) - pt.g) <= 1e-10


# -- Pareto frontier -------------------------------------------------------

def _pairs(pts):
    return [(pt.s, pt.g) for pt in pts]


def test_pareto_examples():
    pts = [SpreadPoint(0, 1), SpreadPoint(1, 0), SpreadPoint(1, 1)]
    assert _pairs(pareto_frontier(pts)) == [(0, 1), (1, 0)]
    assert _pairs(pareto_frontier([SpreadPoint(0.5, 0.5)])) == [(0.5, 0.5)]
    dup = [SpreadPoint(0.5, 0.5), SpreadPoint(0.5, 0.5), SpreadPoint(0.2, 0.9)]
    assert _pairs(pareto_frontier(dup)) == [(0.2, 0.9), (0.5, 0.5)]
    with pytest.raises(InvalidArgumentError):
        pareto_frontier([])


coords = st.lists(st.tuples(st.integers(0, 12), st.integers(0, 12)), min_size=1, max_size=60)


@given(coords)
def test_pareto_matches_brute_force(pts):
    s = np.array([a for a, _ in pts], dtype=float) / 4
    g = np.array([b for _, b in pts], dtype=float) / 4
    idx = pareto_indices(s, g)
    kept = set(zip(s[idx], g[idx]))
    expected = set(zip(s[~dominated_brute_force(s, g)], g[~dominated_brute_force(s, g)]))
    assert kept == expected
    assert len(idx) == len(kept)
    assert np.all(np.diff(s[idx]) > 0) and np.all(np.diff(g[idx]) < 0)


def test_star_center_frontier_above_lower_bound():
    g = gen_star(6)
    cloud = sample_cloud(g, 0, find_block_structure(g, 0), 0.05)
    curve = uncertainty_curve(g, 0)
    front = pareto_frontier(cloud)
    s = np.array([pt.s for pt in front])
    gs = np.array([pt.g for pt in front])
    assert np.all(gs >= curve.global_lower_bound(s) - 1e-9)


def test_star_leaf_frontier_above_lower_bound():
    g, part = star_leaf(10)
    cloud = sample_cloud(g, 1, part, 0.05)
    idx = pareto_indices(cloud.s, cloud.g)
    curve = uncertainty_curve(g, 1)
    assert np.all(cloud.g[idx] >= curve.global_lower_bound(cloud.s[idx]) - 1e-9)


# -- the reduction loses no optimal signals --------------------------------

# Fine grids: at the default step the grid staircase alone is wider than
# the 2e-3 allowance.
SMALL = [
    ("star4-center", gen_star(4), 0, 0.001),
    ("star5-center", gen_star(5), 0, 0.001),
    ("star5-leaf", gen_star(5), 1, 0.005),
    ("K4", gen_complete(4), 2, 0.001),
    ("path3-mid", gen_path(3), 1, 0.005),
]


@pytest.mark.parametrize("name,g,uc,step", SMALL, ids=[c[0] for c in SMALL])
def test_brute_force_equivalence(name, g, uc, step):
    rng = np.random.default_rng(7)
    p, lap = distance_matrix(g, uc), normalized_laplacian(g)
    s_rand, g_rand = spreads(random_unit(rng, 100_000, g.n), p, lap)
    keep = pareto_indices(s_rand, g_rand)
    s_rand, g_rand = s_rand[keep], g_rand[keep]

    cloud = sample_cloud(g, uc, find_block_structure(g, uc), step)
    idx = pareto_indices(cloud.s, cloud.g)
    s_red, g_red = cloud.s[idx], cloud.g[idx]
    inside = (s_rand >= s_red[0]) & (s_rand <= s_red[-1])
    excess = np.interp(s_rand[inside], s_red, g_red) - g_rand[inside]
    assert excess.max() <= 2e-3
