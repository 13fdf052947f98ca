"""Independent brute-force references used by the test suite."""

from __future__ import annotations

import math
import random
from itertools import combinations

INF = math.inf


def floyd_warshall(n, edges):
    d = [[INF] * n for _ in range(n)]
    for i in range(n):
        d[i][i] = 0
    for u, v in edges:
        if u != v:
            d[u][v] = d[v][u] = 1
    for k in range(n):
        dk = d[k]
        for i in range(n):
            dik = d[i][k]
            if dik == INF:
                continue
            di = d[i]
            for j in range(n):
                if dik + dk[j] < di[j]:
                    di[j] = dik + dk[j]
    return d


def brute_metrics(n, edges):
    """(apl, diameter, sorted component sizes) from all-pairs distances."""
    d = floyd_warshall(n, edges)
    finite = [d[i][j] for i, j in combinations(range(n), 2) if d[i][j] < INF]
    apl = sum(finite) / len(finite) if finite else 0.0
    dia = max(finite) if finite else 0
    seen = [False] * n
    sizes = []
    for i in range(n):
        if not seen[i]:
            members = [j for j in range(n) if d[i][j] < INF]
            for j in members:
                seen[j] = True
            sizes.append(len(members))
    return apl, dia, sorted(sizes, reverse=True)


def random_multigraph(rng: random.Random, n_max=50):
    n = rng.randint(0, n_max)
    edges = []
    if n:
        density = rng.choice([0.02, 0.05, 0.1, 0.3])
        for u in range(n):
            for v in range(u, n):
                if rng.random() < density / (4 if u == v else 1):
                    edges.append((u, v) if rng.random() < 0.5 else (v, u))
        # occasional parallel copies
        edges += [e for e in edges if rng.random() < 0.1]
    return n, edges


def brute_key_graph(rings):
    """Edge set {(u, v): u < v, rings intersect} by direct pairwise test."""
    sets = [set(map(int, r)) for r in rings]
    return {(u, v) for u, v in combinations(range(len(sets)), 2) if sets[u] & sets[v]}


def uniform_attachment_degrees(n, k, rng: random.Random):
    """Each new node joins k distinct uniformly chosen earlier nodes; k seed loops."""
    deg = [1] * k + [0] * (n - k)
    for t in range(k, n):
        for u in rng.sample(range(t), k):
            deg[u] += 1
        deg[t] = k
    return deg
