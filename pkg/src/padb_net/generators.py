"""Preferential attachment generators, with and without a degree bound.

Both models grow from ``k`` seed nodes that each carry one self-loop. Every
later node flips one coin: with probability ``p`` it picks its ``k``
neighbours uniformly from the eligible nodes, otherwise proportionally to
degree. Picks are distinct within a node's batch. Under a degree bound a
node is eligible only while its degree is at most ``d_max - 1``; the
eligible set is fixed when the new node arrives and degrees are updated
after all of its picks.
"""

from __future__ import annotations

import math
import random
import warnings
from dataclasses import asdict, dataclass

import numpy as np

from .graph import Graph


@dataclass(frozen=True)
class GenParams:
    n: int
    p: float
    k: int
    d_max: int | None = None
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        if self.n < self.k:
            raise ValueError(f"n must be >= k, got n={self.n}, k={self.k}")
        if self.d_max is not None and self.d_max < self.k:
            raise ValueError(f"d_max < k ({self.d_max} < {self.k})")


class WeightedIndex:
    """Fenwick tree over non-negative integer weights.

    Supports O(log n) point updates and O(log n) draws proportional to
    weight.
    """

    def __init__(self, size: int):
        self._n = size
        self._tree = [0] * (size + 1)
        self._w = [0] * size
        self._total = 0
        self._top = 1 << (size.bit_length() - 1) if size else 0

    @classmethod
    def from_weights(cls, weights) -> "WeightedIndex":
        weights = [int(w) for w in weights]
        idx = cls(len(weights))
        for i, w in enumerate(weights):
            if w:
                idx.set(i, w)
        return idx

    def __len__(self) -> int:
        return self._n

    @property
    def total(self) -> int:
        return self._total

    def weight(self, i: int) -> int:
        return self._w[i]

    def set(self, i: int, w: int) -> None:
        if w < 0:
            raise ValueError("weights must be non-negative")
        delta = w - self._w[i]
        if not delta:
            return
        self._w[i] = w
        self._total += delta
        tree = self._tree
        j = i + 1
        while j <= self._n:
            tree[j] += delta
            j += j & -j

    def find(self, r: int) -> int:
        """Index whose cumulative weight interval contains ``r`` (0 <= r < total)."""
        tree = self._tree
        pos = 0
        step = self._top
        while step:
            nxt = pos + step
            if nxt <= self._n and tree[nxt] <= r:
                pos = nxt
                r -= tree[nxt]
            step >>= 1
        return pos

    def draw(self, rng: random.Random) -> int:
        return self.find(rng.randrange(self._total))


def sample_without_replacement(idx: WeightedIndex, k: int, rng: random.Random) -> list[int]:
    """Up to ``k`` distinct indices, each draw proportional to the remaining weight.

    Drawn weights are zeroed for the rest of the batch and restored before
    returning. Fewer than ``k`` results (possibly none) means fewer than
    ``k`` positive weights were available.
    """
    picked: list[int] = []
    saved: list[int] = []
    while len(picked) < k and idx.total > 0:
        i = idx.draw(rng)
        picked.append(i)
        saved.append(idx.weight(i))
        idx.set(i, 0)
    for i, w in zip(picked, saved):
        idx.set(i, w)
    return picked


def _grow(params: GenParams, model: str) -> Graph:
    n, p, k, cap = params.n, params.p, params.k, params.d_max
    if cap is not None and cap < 2 * k:
        warnings.warn(
            f"d_max={cap} < 2k={2 * k}: saturation of the eligible set is likely",
            RuntimeWarning,
            stacklevel=3,
        )
    limit = math.inf if cap is None else cap
    rng = random.Random(params.seed)

    deg = [0] * n
    pref = WeightedIndex(n)
    eligible: list[int] = []
    slot = [-1] * n

    def admit(v: int) -> None:
        slot[v] = len(eligible)
        eligible.append(v)

    def retire(v: int) -> None:
        i = slot[v]
        last = eligible.pop()
        if last != v:
            eligible[i] = last
            slot[last] = i
        slot[v] = -1
        pref.set(v, 0)

    us: list[int] = []
    vs: list[int] = []
    for v in range(k):
        us.append(v)
        vs.append(v)
        deg[v] = 1
        if deg[v] < limit:
            admit(v)
            pref.set(v, 1)

    degenerate = False
    for t in range(k, n):
        if rng.random() < p:
            picks = rng.sample(eligible, min(k, len(eligible)))
        else:
            picks = sample_without_replacement(pref, k, rng)
        if len(picks) < k:
            degenerate = True
        for u in picks:
            us.append(t)
            vs.append(u)
            deg[u] += 1
        for u in picks:
            if deg[u] >= limit:
                if slot[u] >= 0:
                    retire(u)
            else:
                pref.set(u, deg[u])
        deg[t] = len(picks)
        if deg[t] < limit:
            admit(t)
            pref.set(t, deg[t])

    g = Graph(n)
    g.add_edges(us, vs)
    g.meta = {"model": model, **asdict(params), "degenerate": degenerate}
    return g


def generate_pa(params: GenParams) -> Graph:
    """Classical mixed uniform/preferential attachment, ``k`` edges per node."""
    if params.d_max is not None:
        raise ValueError("generate_pa takes no degree bound; use generate_padb")
    return _grow(params, "pa")


def generate_padb(params: GenParams) -> Graph:
    """Preferential attachment with every degree capped at ``d_max``."""
    if params.d_max is None:
        raise ValueError("generate_padb requires d_max")
    return _grow(params, "padb")


def theoretical_alpha(p: float) -> float:
    """Power-law exponent ``1 + 1/(1 - p)`` quoted for the unbounded model."""
    if not 0.0 <= p < 1.0:
        raise ValueError(f"alpha is undefined for p={p}; need 0 <= p < 1")
    return 1.0 + 1.0 / (1.0 - p)


@dataclass
class DegreeHistogram:
    counts: dict[int, int]
    fitted_alpha: float | None
    theoretical_alpha: float | None

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def max_degree(self) -> int:
        return max(self.counts) if self.counts else 0

    def count(self, d: int) -> int:
        return self.counts.get(d, 0)


def fit_power_law(counts: dict[int, int], min_count: int = 5) -> float | None:
    """Least-squares exponent on log-log counts; diagnostic only."""
    pts = [(d, c) for d, c in sorted(counts.items()) if d > 0 and c >= min_count]
    if len(pts) < 2:
        return None
    x = np.log([d for d, _ in pts])
    y = np.log([c for _, c in pts])
    slope = np.polyfit(x, y, 1)[0]
    return float(-slope)


def degree_histogram(g: Graph, *more: Graph) -> DegreeHistogram:
    """Degree counts over all nodes, pooled across every graph passed."""
    degs = np.concatenate([h.degree for h in (g, *more)])
    values, freq = np.unique(degs, return_counts=True)
    counts = {int(d): int(c) for d, c in zip(values, freq)}
    p = g.meta.get("p")
    alpha = theoretical_alpha(p) if p is not None and p < 1 else None
    return DegreeHistogram(counts, fit_power_law(counts), alpha)
