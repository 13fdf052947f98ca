"""Key predistribution schemes and their key graphs.

Four schemes are supported:

* ``PADB``: one fresh pairwise key per edge of a degree-bounded PA graph.
* ``EG``: every node draws a uniform ``ring_size``-subset of a key pool.
* ``CPS``: every node picks ``k`` distinct partners; one pairwise key per pair.
* ``LS``: transversal design over Z_q; node ``(a, b)`` holds keys
  ``(x, a*x + b mod q)`` for ``x < k``.

Key ids are opaque non-negative integers. A key graph joins two distinct
nodes exactly when their rings intersect.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import TextIO

import numpy as np

from .generators import GenParams, generate_padb
from .graph import Graph

SCHEMES = ("PADB", "EG", "CPS", "LS")

# reference pool size at the reference network size
EG_REFERENCE_POOL = 500_000
EG_REFERENCE_N = 10_000


@dataclass(frozen=True)
class SchemeConfig:
    scheme: str
    n: int
    p: float = 0.4
    k: int = 4
    d_max: int = 25
    pool_size: int = EG_REFERENCE_POOL
    ring_size: int = 25
    q: int | None = None

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}; expected one of {SCHEMES}")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.scheme == "PADB":
            GenParams(self.n, self.p, self.k, self.d_max)
        elif self.scheme == "EG":
            if not 1 <= self.ring_size <= self.pool_size:
                raise ValueError(f"ring size must lie in [1, pool size], got {self.ring_size}")
        elif self.scheme == "CPS":
            if not 1 <= self.k < self.n:
                raise ValueError(f"CPS needs 1 <= k < n, got k={self.k}, n={self.n}")
        elif self.scheme == "LS":
            q = self.resolved_q()
            if not is_prime(q):
                raise ValueError(f"q={q} is not prime")
            if self.k > q:
                raise ValueError(f"LS needs k <= q, got k={self.k}, q={q}")
            if self.n > q * q:
                raise ValueError(f"LS with q={q} supports at most {q * q} nodes")

    def resolved_q(self) -> int:
        """Explicit ``q``, else the smallest prime with ``q*q >= n`` and ``q >= k``."""
        if self.q is not None:
            return self.q
        q = smallest_prime_square_at_least(self.n)
        while q < self.k or not is_prime(q):
            q += 1
        return q

    def describe(self) -> dict:
        if self.scheme == "PADB":
            return {"n": self.n, "p": self.p, "k": self.k, "d_max": self.d_max}
        if self.scheme == "EG":
            return {"n": self.n, "pool_size": self.pool_size, "ring_size": self.ring_size}
        if self.scheme == "CPS":
            return {"n": self.n, "k": self.k}
        return {"n": self.n, "k": self.k, "q": self.resolved_q()}


@dataclass
class KeyAssignment:
    rings: list[np.ndarray]
    key_graph: Graph
    scheme: str
    meta: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.rings)

    def shared_keys(self, u: int, v: int) -> set[int]:
        return shared_keys(self, u, v)


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    if q % 2 == 0:
        return q == 2
    return all(q % d for d in range(3, math.isqrt(q) + 1, 2))


def smallest_prime_square_at_least(n: int) -> int:
    q = math.isqrt(n)
    if q * q < n:
        q += 1
    q = max(q, 2)
    while not is_prime(q):
        q += 1
    return q


def _pairwise(n: int, a: np.ndarray, b: np.ndarray, scheme: str, meta: dict) -> KeyAssignment:
    """Key assignment with one fresh key per (already distinct) pair."""
    keys = np.arange(a.size, dtype=np.int64)
    holders = np.concatenate([a, b])
    owned = np.concatenate([keys, keys])
    order = np.lexsort((owned, holders))
    bounds = np.searchsorted(holders[order], np.arange(n + 1))
    sorted_keys = owned[order]
    rings = [sorted_keys[bounds[i]:bounds[i + 1]] for i in range(n)]
    g = Graph(n)
    g.add_edges(a, b)
    return KeyAssignment(rings, g, scheme, meta)


def key_graph_from_rings(rings: list[np.ndarray]) -> Graph:
    """Key graph via an inverted index from key id to holders.

    Edges come out as ``u < v`` pairs in ascending order, one per sharing pair.
    """
    n = len(rings)
    g = Graph(n)
    if n == 0:
        return g
    sizes = np.array([r.size for r in rings])
    keys = np.concatenate(rings) if sizes.sum() else np.zeros(0, dtype=np.int64)
    nodes = np.repeat(np.arange(n, dtype=np.int64), sizes)
    order = np.lexsort((nodes, keys))
    keys, nodes = keys[order], nodes[order]
    if keys.size == 0:
        return g
    starts = np.flatnonzero(np.r_[True, keys[1:] != keys[:-1]])
    ends = np.r_[starts[1:], keys.size]
    multi = np.flatnonzero(ends - starts >= 2)
    us, vs = [], []
    for gi in multi:
        h = nodes[starts[gi]:ends[gi]]
        i, j = np.triu_indices(h.size, 1)
        us.append(h[i])
        vs.append(h[j])
    if us:
        codes = np.unique(np.concatenate(us) * n + np.concatenate(vs))
        g.add_edges(codes // n, codes % n)
    return g


def assign_padb_keys(g: Graph) -> KeyAssignment:
    """One fresh pairwise key per loop-free neighbour pair of ``g``."""
    a, b = g.simple_edges()
    return _pairwise(g.node_count, a, b, "PADB", dict(g.meta))


def generate_padb_scheme(cfg: SchemeConfig, seed: int) -> KeyAssignment:
    g = generate_padb(GenParams(cfg.n, cfg.p, cfg.k, cfg.d_max, seed))
    ka = assign_padb_keys(g)
    ka.meta["seed"] = seed
    return ka


def generate_eg(cfg: SchemeConfig, seed: int) -> KeyAssignment:
    """Uniform random key rings drawn independently from a shared pool."""
    rng = np.random.default_rng(seed)
    rings = [
        np.sort(rng.choice(cfg.pool_size, size=cfg.ring_size, replace=False)).astype(np.int64)
        for _ in range(cfg.n)
    ]
    meta = {"scheme": "EG", **cfg.describe(), "seed": seed, "degenerate": False}
    return KeyAssignment(rings, key_graph_from_rings(rings), "EG", meta)


def generate_cps(cfg: SchemeConfig, seed: int) -> KeyAssignment:
    """k-out pairwise scheme; mutual picks share a single key."""
    rng = np.random.default_rng(seed)
    n, k = cfg.n, cfg.k
    picks = np.empty((n, k), dtype=np.int64)
    for v in range(n):
        others = rng.choice(n - 1, size=k, replace=False)
        picks[v] = others + (others >= v)
    src = np.repeat(np.arange(n, dtype=np.int64), k)
    dst = picks.ravel()
    codes = np.unique(np.minimum(src, dst) * n + np.maximum(src, dst))
    meta = {"scheme": "CPS", **cfg.describe(), "seed": seed, "degenerate": False}
    return _pairwise(n, codes // n, codes % n, "CPS", meta)


def ls_coordinates(i: int, q: int) -> tuple[int, int]:
    return divmod(i, q)


def ls_ring(a: int, b: int, k: int, q: int) -> np.ndarray:
    x = np.arange(k, dtype=np.int64)
    return x * q + (a * x + b) % q


def generate_ls(cfg: SchemeConfig, seed: int | None = None) -> KeyAssignment:
    """Transversal-design scheme; deterministic, ``seed`` is accepted and ignored."""
    q = cfg.resolved_q()
    rings = [ls_ring(*ls_coordinates(i, q), cfg.k, q) for i in range(cfg.n)]
    meta = {"scheme": "LS", **cfg.describe(), "seed": seed, "degenerate": False}
    return KeyAssignment(rings, key_graph_from_rings(rings), "LS", meta)


def build_scheme(cfg: SchemeConfig, seed: int) -> KeyAssignment:
    if cfg.scheme == "PADB":
        return generate_padb_scheme(cfg, seed)
    if cfg.scheme == "EG":
        return generate_eg(cfg, seed)
    if cfg.scheme == "CPS":
        return generate_cps(cfg, seed)
    return generate_ls(cfg, seed)


def shared_keys(ka: KeyAssignment, u: int, v: int) -> set[int]:
    return set(np.intersect1d(ka.rings[u], ka.rings[v], assume_unique=True).tolist())


def write_rings(ka: KeyAssignment, out: TextIO | str | Path) -> None:
    """One ``node_id: k1 k2 ...`` line per node, keys ascending."""
    lines = []
    for i, ring in enumerate(ka.rings):
        keys = " ".join(str(x) for x in np.sort(ring).tolist())
        lines.append(f"{i}: {keys}" if keys else f"{i}:")
    text = "\n".join(lines) + "\n"
    if isinstance(out, (str, Path)):
        Path(out).write_text(text)
    else:
        out.write(text)
