import io
import random
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from padb_net.graph import (
    Graph,
    add_edge,
    average_path_length,
    components,
    diameter,
    isolated_count,
    largest_component_fraction,
    metric_report,
    new_graph,
    path_stats,
    read_dump,
    remove_nodes,
    write_dump,
)
from oracles import brute_metrics, random_multigraph


def build(n, edges):
    g = Graph(n)
    for u, v in edges:
        g.add_edge(u, v)
    return g


def path3():
    return build(3, [(0, 1), (1, 2)])


def triangle():
    return build(3, [(0, 1), (1, 2), (2, 0)])


def star():
    return build(4, [(0, 1), (0, 2), (0, 3)])


def test_new_graph_empty_and_isolated():
    g = new_graph(0)
    assert g.node_count == 0 and g.edge_count == 0
    g = new_graph(5)
    assert g.degree.tolist() == [0] * 5
    with pytest.raises(ValueError):
        new_graph(-1)


def test_degrees_after_edges():
    g = new_graph(3)
    add_edge(g, 0, 1)
    add_edge(g, 1, 2)
    assert g.degree.tolist() == [1, 2, 1]


def test_self_loop_counts_once():
    g = new_graph(1).add_edge(0, 0)
    assert g.degree.tolist() == [1]
    assert g.adjacency == [[0]]
    assert g.neighbors(0) == []


def test_parallel_edges_kept():
    g = new_graph(2).add_edge(0, 1).add_edge(0, 1)
    assert g.degree.tolist() == [2, 2]
    assert g.adjacency == [[1, 1], [0, 0]]
    assert g.simple_edges()[0].size == 1


def test_out_of_range_edge_rejected():
    with pytest.raises(ValueError):
        new_graph(3).add_edge(0, 7)
    with pytest.raises(ValueError):
        new_graph(3).add_edges([0], [3])


def test_bulk_and_single_insertion_order():
    g = Graph(4)
    g.add_edge(0, 1)
    g.add_edges([1, 2], [2, 3])
    g.add_edge(3, 0)
    u, v = g.edges()
    assert list(zip(u.tolist(), v.tolist())) == [(0, 1), (1, 2), (2, 3), (3, 0)]
    assert g.degree.tolist() == [2, 2, 2, 2]


def test_path_metrics_small():
    assert average_path_length(path3()) == pytest.approx(4 / 3)
    assert diameter(path3()) == 2
    assert average_path_length(triangle()) == 1.0
    two = build(4, [(0, 1), (2, 3)])
    assert diameter(two) == 1
    assert average_path_length(two) == 1.0
    assert average_path_length(new_graph(3)) == 0.0
    assert diameter(new_graph(3)) == 0


def test_loops_and_multiedges_do_not_shorten():
    g = build(3, [(0, 1), (0, 1), (1, 1), (1, 2), (2, 2)])
    assert average_path_length(g) == pytest.approx(4 / 3)


def test_components_cases():
    g = build(4, [(0, 1), (1, 2), (2, 0)])
    comp = components(g)
    assert sorted(comp.sizes.tolist()) == [1, 3]
    assert largest_component_fraction(g) == 0.75
    assert components(new_graph(4)).sizes.tolist() == [1, 1, 1, 1]
    assert comp.labels.tolist() == [0, 0, 0, 1]


def test_isolated_count_conventions():
    assert isolated_count(new_graph(5)) == 5
    assert isolated_count(triangle()) == 0
    assert isolated_count(new_graph(2).add_edge(0, 0)) == 2


def test_remove_nodes_cases():
    g = triangle()
    h = remove_nodes(g, [])
    assert h.node_count == 3 and h.edges()[0].tolist() == g.edges()[0].tolist()

    h = remove_nodes(star(), [0])
    assert h.node_count == 3 and h.edge_count == 0
    assert h.parent_ids.tolist() == [1, 2, 3]
    assert h.meta["id_map"].tolist() == [-1, 0, 1, 2]

    k4 = build(4, [(u, v) for u in range(4) for v in range(u + 1, 4)])
    h = remove_nodes(k4, [2])
    assert h.edge_count == 3
    assert average_path_length(h) == 1.0


def test_metric_report_invariants():
    g = build(6, [(0, 1), (1, 2), (3, 4)])
    r = metric_report(g)
    assert sum(r.component_sizes) == 6
    assert r.component_sizes == [3, 2, 1]
    assert r.largest_component_fraction == 0.5
    assert r.isolated_fraction == pytest.approx(1 / 6)
    assert r.diameter >= np.ceil(r.average_path_length) - 1


def test_sampled_mode_records_sources():
    rng = random.Random(3)
    n = 60
    g = Graph(n)
    for t in range(1, n):
        g.add_edge(t, rng.randrange(t))
    exact = path_stats(g, exact=True)
    sampled = path_stats(g, exact=False, samples=20, rng=1)
    assert exact.exact and exact.sources == n
    assert not sampled.exact and sampled.sources == 20
    assert sampled.diameter <= exact.diameter
    assert abs(sampled.average_path_length - exact.average_path_length) < 1.5
    assert path_stats(g, exact=False, samples=20, rng=1) == sampled


def test_dump_roundtrip_and_format():
    g = build(3, [(0, 0), (0, 1), (2, 1)])
    buf = io.StringIO()
    write_dump(g, buf)
    assert buf.getvalue() == "3 3\n0 0\n0 1\n2 1\n"
    h = read_dump(io.StringIO(buf.getvalue()))
    assert h.edges()[0].tolist() == g.edges()[0].tolist()
    assert h.degree.tolist() == g.degree.tolist()


def test_brute_force_oracle_200_graphs():
    rng = random.Random(20240901)
    for _ in range(200):
        n, edges = random_multigraph(rng)
        g = build(n, edges)
        apl, dia, sizes = brute_metrics(n, edges)
        ps = path_stats(g, exact=True)
        assert ps.average_path_length == pytest.approx(apl, abs=1e-12)
        assert ps.diameter == dia
        assert sorted(components(g).sizes.tolist(), reverse=True) == sizes


@st.composite
def graphs(draw):
    n = draw(st.integers(1, 25))
    edges = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=60))
    return n, edges


@given(graphs(), st.data())
@settings(max_examples=100, deadline=None)
def test_remove_nodes_keeps_exactly_induced_edges(ge, data):
    n, edges = ge
    victims = data.draw(st.sets(st.integers(0, n - 1)))
    h = remove_nodes(build(n, edges), victims)
    back = h.parent_ids
    got = Counter((int(back[a]), int(back[b])) for a, b in zip(*(x.tolist() for x in h.edges())))
    want = Counter((u, v) for u, v in edges if u not in victims and v not in victims)
    assert got == want


@given(graphs(), st.randoms(use_true_random=False))
@settings(max_examples=100, deadline=None)
def test_component_sizes_invariant_under_permutation(ge, rnd):
    n, edges = ge
    g = build(n, edges)
    perm = list(range(n))
    rnd.shuffle(perm)
    h = build(n, [(perm[u], perm[v]) for u, v in edges])
    a, b = components(g), components(h)
    assert a.sizes.sum() == n
    assert sorted(a.sizes.tolist()) == sorted(b.sizes.tolist())
    # same partition up to relabelling
    pairs = {(int(a.labels[i]), int(b.labels[perm[i]])) for i in range(n)}
    assert len(pairs) == len(a.sizes)


@given(graphs())
@settings(max_examples=100, deadline=None)
def test_graph_invariants(ge):
    n, edges = ge
    g = build(n, edges)
    adj = g.adjacency
    for v in range(n):
        assert len(adj[v]) == g.degree[v]
        for u in set(adj[v]):
            if u != v:
                assert adj[v].count(u) == adj[u].count(v)
    ps = path_stats(g, exact=True)
    if n >= 2 and components(g).sizes.size == 1:
        assert 1 <= ps.average_path_length <= ps.diameter
