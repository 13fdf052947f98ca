import io
import math
from collections import Counter

import numpy as np
import pytest

from padb_net.generators import GenParams, generate_padb
from padb_net.graph import Graph
from padb_net.schemes import (
    SchemeConfig,
    assign_padb_keys,
    build_scheme,
    generate_cps,
    generate_eg,
    generate_ls,
    is_prime,
    shared_keys,
    smallest_prime_square_at_least,
    write_rings,
)
from oracles import brute_key_graph


def edge_set(g: Graph):
    a, b = g.simple_edges()
    return set(zip(a.tolist(), b.tolist()))


def key_multiplicity(ka):
    return Counter(int(x) for r in ka.rings for x in r)


def test_padb_keys_triangle():
    tri = Graph(3).add_edge(0, 1).add_edge(1, 2).add_edge(2, 0)
    ka = assign_padb_keys(tri)
    assert len(key_multiplicity(ka)) == 3
    assert [r.size for r in ka.rings] == [2, 2, 2]
    assert edge_set(ka.key_graph) == {(0, 1), (1, 2), (0, 2)}


def test_padb_keys_ignore_loops():
    ka = assign_padb_keys(Graph(1).add_edge(0, 0))
    assert ka.rings[0].size == 0
    assert ka.key_graph.edge_count == 0


def test_padb_keys_merge_parallel_edges():
    g = Graph(2).add_edge(0, 1).add_edge(1, 0)
    ka = assign_padb_keys(g)
    assert [r.size for r in ka.rings] == [1, 1]


def test_padb_ring_bound_and_pairwise_keys():
    g = generate_padb(GenParams(1000, 0.4, 4, 15, seed=3))
    ka = assign_padb_keys(g)
    assert max(r.size for r in ka.rings) <= 15
    assert set(key_multiplicity(ka).values()) == {2}
    assert edge_set(ka.key_graph) == brute_key_graph(ka.rings)
    u, v = g.simple_edges()
    for a, b in list(zip(u.tolist(), v.tolist()))[:50]:
        assert len(shared_keys(ka, a, b)) == 1


def test_eg_full_pool_is_complete():
    ka = generate_eg(SchemeConfig("EG", 6, pool_size=5, ring_size=5), seed=1)
    assert ka.key_graph.simple_edges()[0].size == 15
    assert shared_keys(ka, 0, 3) == set(range(5))


def test_eg_small_matches_brute_force():
    ka = generate_eg(SchemeConfig("EG", 3, pool_size=4, ring_size=2), seed=8)
    assert all(r.size == 2 and len(set(r.tolist())) == 2 for r in ka.rings)
    assert edge_set(ka.key_graph) == brute_key_graph(ka.rings)


def test_eg_mean_degree_hypergeometric():
    n, P, kappa = 2000, 100_000, 25
    q = 1 - math.comb(P - kappa, kappa) / math.comb(P, kappa)
    pairs = n * (n - 1) // 2
    sigma = 2 * math.sqrt(pairs * q * (1 - q)) / n
    ka = generate_eg(SchemeConfig("EG", n, pool_size=P, ring_size=kappa), seed=4)
    mean = ka.key_graph.degree.mean()
    assert abs(mean - (n - 1) * q) <= 3 * sigma


def test_cps_two_nodes():
    ka = generate_cps(SchemeConfig("CPS", 2, k=1), seed=0)
    assert len(key_multiplicity(ka)) == 1
    assert edge_set(ka.key_graph) == {(0, 1)}


def test_cps_degree_range_and_pairwise():
    ka = generate_cps(SchemeConfig("CPS", 10_000, k=7), seed=1)
    mean = ka.key_graph.degree.mean()
    assert 7 <= mean <= 14
    assert ka.key_graph.degree.min() >= 7
    assert set(key_multiplicity(ka).values()) == {2}


def test_cps_mean_degree_matches_expectation():
    # E[edges] = n*k - E[#mutual pairs]; a pair is mutual w.p. (k/(n-1))^2
    n, k = 3000, 7
    expected = 2 * (n * k - n * (n - 1) / 2 * (k / (n - 1)) ** 2) / n
    means = [generate_cps(SchemeConfig("CPS", n, k=k), seed=s).key_graph.degree.mean() for s in range(5)]
    assert np.mean(means) == pytest.approx(expected, abs=0.01)


def ls_share_oracle(i, j, q, k):
    a1, b1 = divmod(i, q)
    a2, b2 = divmod(j, q)
    if a1 == a2:
        return False
    x = (b2 - b1) * pow(a1 - a2, -1, q) % q
    return x < k


def test_ls_small_regular():
    ka = generate_ls(SchemeConfig("LS", 9, k=2, q=3))
    assert ka.key_graph.degree.tolist() == [4] * 9
    assert edge_set(ka.key_graph) == brute_key_graph(ka.rings)


def test_ls_full_design_single_shared_key():
    ka = generate_ls(SchemeConfig("LS", 9, k=3, q=3))
    for i in range(9):
        for j in range(i + 1, 9):
            shared = shared_keys(ka, i, j)
            if i // 3 == j // 3:
                assert shared == set()
            else:
                assert len(shared) == 1


@pytest.mark.parametrize("q,k,n", [(7, 4, 49), (11, 5, 100), (13, 13, 169)])
def test_ls_regular_and_algebraic_rule(q, k, n):
    ka = generate_ls(SchemeConfig("LS", n, k=k, q=q))
    if n == q * q:
        assert set(ka.key_graph.degree.tolist()) == {k * (q - 1)}
    want = {(i, j) for i in range(n) for j in range(i + 1, n) if ls_share_oracle(i, j, q, k)}
    assert edge_set(ka.key_graph) == want


def test_ls_full_scale_parameters():
    cfg = SchemeConfig("LS", 10_000, k=25)
    assert cfg.resolved_q() == 101
    assert SchemeConfig("LS", 2000, k=25).resolved_q() == 47
    # q must also admit k keys per ring
    assert SchemeConfig("LS", 300, k=25).resolved_q() == 29
    ka = generate_ls(SchemeConfig("LS", 200, k=25))
    assert {r.size for r in ka.rings} == {25}


def test_ls_rejects_bad_parameters():
    with pytest.raises(ValueError):
        SchemeConfig("LS", 9, k=2, q=4)
    with pytest.raises(ValueError):
        SchemeConfig("LS", 9, k=5, q=3)
    with pytest.raises(ValueError):
        SchemeConfig("LS", 10, k=2, q=3)


def test_primes():
    assert [x for x in range(30) if is_prime(x)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert smallest_prime_square_at_least(10_000) == 101
    assert smallest_prime_square_at_least(9) == 3
    assert smallest_prime_square_at_least(1) == 2


def test_other_config_validation():
    with pytest.raises(ValueError):
        SchemeConfig("EG", 10, pool_size=5, ring_size=6)
    with pytest.raises(ValueError):
        SchemeConfig("CPS", 5, k=5)
    with pytest.raises(ValueError):
        SchemeConfig("PADB", 100, k=4, d_max=3)
    with pytest.raises(ValueError):
        SchemeConfig("RNS", 100)


@pytest.mark.parametrize(
    "cfg",
    [
        SchemeConfig("PADB", 150, k=3, d_max=10),
        SchemeConfig("EG", 200, pool_size=2000, ring_size=10),
        SchemeConfig("CPS", 200, k=4),
        SchemeConfig("LS", 200, k=6),
        SchemeConfig("LS", 121, k=11, q=11),
    ],
    ids=lambda c: c.scheme,
)
def test_key_graph_matches_brute_force(cfg):
    for seed in range(3):
        ka = build_scheme(cfg, seed)
        assert edge_set(ka.key_graph) == brute_key_graph(ka.rings)
        again = build_scheme(cfg, seed)
        assert all(np.array_equal(a, b) for a, b in zip(ka.rings, again.rings))


def test_ring_dump_format():
    tri = Graph(4).add_edge(0, 1).add_edge(1, 2).add_edge(2, 0)
    buf = io.StringIO()
    write_rings(assign_padb_keys(tri), buf)
    # keys numbered over sorted pairs: (0,1)->0, (0,2)->1, (1,2)->2
    assert buf.getvalue() == "0: 0 1\n1: 0 2\n2: 1 2\n3:\n"
