"""Vertex-level graphs: Laplacian construction, connectivity, Cayley graphs."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from qconsensus.netgraph import (
    WeightedDigraph,
    cayley_graph,
    generator_laplacian,
    is_strongly_connected,
    laplacian_of,
    underlying_graph,
)
from qconsensus.permgroup import generate_group, generator_set


def ring_gens(n):
    return generator_set(n, [[list(range(1, n + 1))]])


def swap_plus_cycle_3():
    # three sites, one 3-cycle plus one transposition
    return generator_set(3, [[[1, 2, 3]], [[1, 2]]], ["w123", "w12"])


# --- basic digraph validation ---


def test_digraph_rejects_self_loop():
    with pytest.raises(ValueError):
        WeightedDigraph(2, ((1, 1, 0.5),))


def test_digraph_rejects_duplicate_edge():
    with pytest.raises(ValueError):
        WeightedDigraph(3, ((1, 2, 0.5), (1, 2, 0.25)))


def test_digraph_rejects_negative_weight():
    with pytest.raises(ValueError):
        WeightedDigraph(2, ((1, 2, -0.1),))


def test_laplacian_of_single_edge():
    g = WeightedDigraph(3, ((1, 2, 0.7),))
    expected = np.array([[0.7, -0.7, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
    assert_allclose(laplacian_of(g), expected)


# --- generator Laplacians ---


def test_transposition_laplacian():
    gens = generator_set(3, [[[1, 2]]])
    w = 0.6
    expected = np.array([[w, -w, 0.0], [-w, w, 0.0], [0.0, 0.0, 0.0]])
    assert_allclose(generator_laplacian(gens, [w]), expected)


def test_cycle_laplacian_direction():
    # each vertex pulls from its preimage: under (1 2 3), vertex 1
    # pulls from 3, vertex 2 from 1, vertex 3 from 2
    gens = ring_gens(3)
    a = 0.4
    expected = np.array([[a, 0.0, -a], [-a, a, 0.0], [0.0, -a, a]])
    assert_allclose(generator_laplacian(gens, [a]), expected)


def test_two_generator_laplacian_sums():
    gens = swap_plus_cycle_3()
    a, b = 0.3, 0.15
    expected = np.array([
        [a + b, -b, -a],
        [-a - b, a + b, 0.0],
        [0.0, -a, a],
    ])
    assert_allclose(generator_laplacian(gens, [a, b]), expected)


def test_row_sums_exactly_zero_for_dyadic_weights():
    gens = generator_set(4, [[[1, 2, 3, 4]], [[1, 2]], [[3, 4]]])
    lap = generator_laplacian(gens, [0.25, 0.125, 0.0625])
    assert np.all(lap.sum(axis=1) == 0.0)


def test_generator_laplacian_matches_underlying_graph():
    gens = swap_plus_cycle_3()
    rng = np.random.default_rng(7)
    for _ in range(20):
        w = rng.uniform(0.01, 1.0, size=2)
        direct = generator_laplacian(gens, w)
        via_graph = laplacian_of(underlying_graph(gens, w))
        assert_allclose(direct, via_graph, atol=1e-15)


def test_underlying_graph_merges_parallel_edges():
    # both generators contribute the edge 2 -> 1
    gens = swap_plus_cycle_3()
    g = underlying_graph(gens, [0.3, 0.2])
    weights = {(u, v): w for u, v, w in g.edges}
    assert_allclose(weights[(2, 1)], 0.5)
    assert_allclose(weights[(1, 3)], 0.3)
    assert_allclose(weights[(1, 2)], 0.2)


def test_underlying_graph_drops_zero_weight():
    gens = swap_plus_cycle_3()
    g = underlying_graph(gens, [0.3, 0.0])
    assert all(w > 0 for _, _, w in g.edges)
    assert len(g.edges) == 3


# --- connectivity ---


def test_cycle_is_strongly_connected():
    g = underlying_graph(ring_gens(4), [1.0])
    assert is_strongly_connected(g)


def test_transposition_alone_is_not():
    gens = generator_set(3, [[[1, 2]]])
    assert not is_strongly_connected(underlying_graph(gens, [1.0]))


def test_zero_weight_breaks_connectivity():
    gens = swap_plus_cycle_3()
    assert is_strongly_connected(underlying_graph(gens, [0.2, 0.2]))
    assert not is_strongly_connected(underlying_graph(gens, [0.0, 0.2]))


# --- Cayley graphs ---


def test_cayley_graph_s3():
    gens = swap_plus_cycle_3()
    g = cayley_graph(gens, [0.3, 0.2])
    assert g.n_vertices == 6
    # every group element has one outgoing edge per generator
    out_deg = {}
    for u, v, w in g.edges:
        out_deg[u] = out_deg.get(u, 0) + 1
    assert all(out_deg[u] == 2 for u in range(1, 7))
    assert is_strongly_connected(g)
    lap = laplacian_of(g)
    assert_allclose(lap.sum(axis=1), 0.0, atol=1e-15)
    assert_allclose(np.diag(lap), 0.5)


def test_cayley_graph_default_unit_weights():
    gens = generator_set(3, [[[1, 2, 3]]])
    g = cayley_graph(gens)
    assert g.n_vertices == 3
    assert all(w == 1.0 for _, _, w in g.edges)


def test_cayley_graph_vertex_count_matches_group_order():
    gens = generator_set(4, [[[1, 2]], [[2, 3]], [[3, 4]]])
    g = cayley_graph(gens, [1.0, 1.0, 1.0])
    assert g.n_vertices == len(generate_group(gens))
