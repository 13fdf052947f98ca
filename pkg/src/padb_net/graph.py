"""Undirected multigraph snapshot and the structural metrics built on it.

Self-loops are stored once in the adjacency list and add exactly 1 to the
degree of their node. Distances ignore self-loops and parallel edges, so
every metric here is computed on the simple graph underneath.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple, TextIO

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components, shortest_path

# Above this node count path metrics switch to sampled sources by default.
EXACT_APL_LIMIT = 2000
APL_SAMPLE_SOURCES = 1000

# Dense matrix BFS pays off for heavy graphs small enough to hold densely.
DENSE_BFS_MAX_NODES = 5000
DENSE_BFS_MIN_DEGREE = 64

# Cap on the dense distance block held in memory at once (cells).
_BLOCK_CELLS = 1 << 22


class Graph:
    """Undirected multigraph on nodes ``0..node_count-1``.

    Edges are kept in insertion order. The graph is built by calling
    :meth:`add_edge` / :meth:`add_edges`; once handed to metric functions it
    is treated as read-only, and derived views (adjacency, CSR) are cached.
    """

    def __init__(self, node_count: int):
        if node_count < 0:
            raise ValueError(f"node count must be non-negative, got {node_count}")
        self._n = int(node_count)
        self._degree = np.zeros(self._n, dtype=np.int64)
        self._chunks: list[tuple[np.ndarray, np.ndarray]] = []
        self._pending_u: list[int] = []
        self._pending_v: list[int] = []
        self._cache: dict[str, object] = {}
        self.meta: dict = {}
        # set by remove_nodes: original id of each node in the parent graph
        self.parent_ids: np.ndarray | None = None

    # construction -------------------------------------------------------

    def _check(self, u: int, v: int) -> None:
        if not (0 <= u < self._n and 0 <= v < self._n):
            raise ValueError(f"edge ({u}, {v}) out of range for {self._n}-node graph")

    def add_edge(self, u: int, v: int) -> "Graph":
        u, v = int(u), int(v)
        self._check(u, v)
        self._pending_u.append(u)
        self._pending_v.append(v)
        self._degree[u] += 1
        if u != v:
            self._degree[v] += 1
        self._cache.clear()
        return self

    def add_edges(self, us: Iterable[int], vs: Iterable[int]) -> "Graph":
        """Bulk insert; ``us[i]``--``vs[i]`` for every i, in order."""
        us = np.asarray(us, dtype=np.int64).ravel()
        vs = np.asarray(vs, dtype=np.int64).ravel()
        if us.shape != vs.shape:
            raise ValueError("endpoint arrays differ in length")
        if us.size == 0:
            return self
        lo = min(us.min(), vs.min())
        hi = max(us.max(), vs.max())
        if lo < 0 or hi >= self._n:
            raise ValueError(f"edge endpoint out of range for {self._n}-node graph")
        self._flush()
        self._chunks.append((us.copy(), vs.copy()))
        self._degree += np.bincount(us, minlength=self._n)
        self._degree += np.bincount(vs[us != vs], minlength=self._n)
        self._cache.clear()
        return self

    def _flush(self) -> None:
        if self._pending_u:
            self._chunks.append(
                (np.array(self._pending_u, dtype=np.int64), np.array(self._pending_v, dtype=np.int64))
            )
            self._pending_u = []
            self._pending_v = []

    # views --------------------------------------------------------------

    @property
    def node_count(self) -> int:
        return self._n

    @property
    def degree(self) -> np.ndarray:
        return self._degree

    @property
    def edge_count(self) -> int:
        return sum(len(c[0]) for c in self._chunks) + len(self._pending_u)

    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        """Endpoint arrays ``(u, v)`` in insertion order."""
        if "edges" not in self._cache:
            self._flush()
            if self._chunks:
                u = np.concatenate([c[0] for c in self._chunks])
                v = np.concatenate([c[1] for c in self._chunks])
            else:
                u = np.zeros(0, dtype=np.int64)
                v = np.zeros(0, dtype=np.int64)
            self._cache["edges"] = (u, v)
        return self._cache["edges"]  # type: ignore[return-value]

    @property
    def adjacency(self) -> list[list[int]]:
        if "adj" not in self._cache:
            adj: list[list[int]] = [[] for _ in range(self._n)]
            u, v = self.edges()
            for a, b in zip(u.tolist(), v.tolist()):
                adj[a].append(b)
                if a != b:
                    adj[b].append(a)
            self._cache["adj"] = adj
        return self._cache["adj"]  # type: ignore[return-value]

    def neighbors(self, v: int) -> list[int]:
        """Distinct neighbours of ``v`` other than itself, ascending."""
        return sorted({w for w in self.adjacency[v] if w != v})

    def simple_edges(self) -> tuple[np.ndarray, np.ndarray]:
        """Loop-free edges with parallel copies merged, as ``u < v`` pairs sorted."""
        if "simple" not in self._cache:
            u, v = self.edges()
            keep = u != v
            a = np.minimum(u[keep], v[keep])
            b = np.maximum(u[keep], v[keep])
            codes = np.unique(a * max(self._n, 1) + b)
            n = max(self._n, 1)
            self._cache["simple"] = (codes // n, codes % n)
        return self._cache["simple"]  # type: ignore[return-value]

    def csr(self) -> sparse.csr_matrix:
        """Symmetric 0/1 adjacency matrix of the underlying simple graph."""
        if "csr" not in self._cache:
            a, b = self.simple_edges()
            rows = np.concatenate([a, b])
            cols = np.concatenate([b, a])
            data = np.ones(rows.size, dtype=np.int8)
            self._cache["csr"] = sparse.csr_matrix((data, (rows, cols)), shape=(self._n, self._n))
        return self._cache["csr"]  # type: ignore[return-value]

    def __repr__(self) -> str:
        return f"Graph(node_count={self._n}, edges={self.edge_count})"


def new_graph(n: int) -> Graph:
    return Graph(n)


def add_edge(g: Graph, u: int, v: int) -> Graph:
    return g.add_edge(u, v)


# metrics ----------------------------------------------------------------


class Components(NamedTuple):
    labels: np.ndarray
    sizes: np.ndarray

    @property
    def largest(self) -> int:
        return int(self.sizes.max()) if self.sizes.size else 0


@dataclass(frozen=True)
class PathStats:
    average_path_length: float
    diameter: int
    reachable_pairs: int
    sources: int
    exact: bool


@dataclass(frozen=True)
class MetricReport:
    average_path_length: float
    diameter: int
    largest_component_fraction: float
    isolated_fraction: float
    component_sizes: list[int] = field(default_factory=list)
    apl_sources: int = 0
    apl_exact: bool = True


def components(g: Graph) -> Components:
    """Connected components, labelled in order of their smallest node id."""
    n = g.node_count
    if n == 0:
        return Components(np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64))
    _, raw = connected_components(g.csr(), directed=False)
    # relabel by first appearance so labels do not depend on scipy internals
    _, first = np.unique(raw, return_index=True)
    order = np.argsort(first)
    remap = np.empty_like(order)
    remap[order] = np.arange(order.size)
    labels = remap[raw].astype(np.int64)
    return Components(labels, np.bincount(labels).astype(np.int64))


def largest_component_fraction(g: Graph) -> float:
    if g.node_count == 0:
        return 0.0
    return components(g).largest / g.node_count


def isolated_count(g: Graph) -> int:
    """Nodes with no neighbour other than themselves."""
    if g.node_count == 0:
        return 0
    return int(np.count_nonzero(np.diff(g.csr().indptr) == 0))


def path_stats(
    g: Graph,
    *,
    exact: bool | None = None,
    samples: int = APL_SAMPLE_SOURCES,
    rng: np.random.Generator | int | None = None,
) -> PathStats:
    """BFS distance summary over mutually reachable unordered pairs.

    With ``exact=None`` all sources are used when the graph has at most
    ``EXACT_APL_LIMIT`` nodes; otherwise ``samples`` sources are drawn
    uniformly without replacement and the diameter becomes a lower bound.
    """
    n = g.node_count
    if exact is None:
        exact = n <= EXACT_APL_LIMIT
    if n < 2:
        return PathStats(0.0, 0, 0, n, True)
    if exact or samples >= n:
        sources = np.arange(n)
        exact = True
    else:
        rng = np.random.default_rng(0 if rng is None else rng)
        sources = np.sort(rng.choice(n, size=samples, replace=False))

    A = g.csr()
    if n <= DENSE_BFS_MAX_NODES and A.nnz >= DENSE_BFS_MIN_DEGREE * n:
        total, count, far = _dense_bfs(A, sources)
    else:
        total, count, far = _sparse_bfs(A, sources)
    # ordered pairs when exact, so halve to unordered; the mean is unchanged
    pairs = count // 2 if exact else count
    apl = total / count if count else 0.0
    return PathStats(apl, far, pairs, int(sources.size), bool(exact))


def _sparse_bfs(A, sources: np.ndarray) -> tuple[int, int, int]:
    n = A.shape[0]
    total = count = far = 0
    step = max(1, _BLOCK_CELLS // n)
    for lo in range(0, sources.size, step):
        d = shortest_path(A, method="D", unweighted=True, indices=sources[lo:lo + step])
        finite = d[np.isfinite(d) & (d > 0)]
        if finite.size:
            total += int(finite.sum())
            count += finite.size
            far = max(far, int(finite.max()))
    return total, count, far


def _dense_bfs(A, sources: np.ndarray) -> tuple[int, int, int]:
    """Level-synchronous BFS from a block of sources using dense matrix products."""
    n = A.shape[0]
    dense = A.toarray().astype(np.float32)
    total = count = far = 0
    step = max(1, _BLOCK_CELLS // n)
    for lo in range(0, sources.size, step):
        src = sources[lo:lo + step]
        reached = np.zeros((src.size, n), dtype=bool)
        reached[np.arange(src.size), src] = True
        frontier = reached.copy()
        level = 0
        while True:
            level += 1
            nxt = (frontier.astype(np.float32) @ dense) > 0
            nxt &= ~reached
            hits = int(np.count_nonzero(nxt))
            if not hits:
                break
            total += level * hits
            count += hits
            far = max(far, level)
            reached |= nxt
            frontier = nxt
    return total, count, far


def average_path_length(g: Graph, **kwargs) -> float:
    return path_stats(g, **kwargs).average_path_length


def diameter(g: Graph, **kwargs) -> int:
    return path_stats(g, **kwargs).diameter


def metric_report(g: Graph, **kwargs) -> MetricReport:
    n = g.node_count
    ps = path_stats(g, **kwargs)
    comp = components(g)
    return MetricReport(
        average_path_length=ps.average_path_length,
        diameter=ps.diameter,
        largest_component_fraction=comp.largest / n if n else 0.0,
        isolated_fraction=isolated_count(g) / n if n else 0.0,
        component_sizes=sorted(comp.sizes.tolist(), reverse=True),
        apl_sources=ps.sources,
        apl_exact=ps.exact,
    )


def remove_nodes(g: Graph, victims: Iterable[int]) -> Graph:
    """Induced subgraph on the survivors, ids remapped contiguously.

    The result carries ``parent_ids`` (new id -> old id) and
    ``meta["id_map"]`` (old id -> new id, -1 for removed nodes).
    """
    n = g.node_count
    alive = np.ones(n, dtype=bool)
    victims = np.fromiter((int(x) for x in victims), dtype=np.int64)
    if victims.size and (victims.min() < 0 or victims.max() >= n):
        raise ValueError("victim id out of range")
    alive[victims] = False
    id_map = np.full(n, -1, dtype=np.int64)
    id_map[alive] = np.arange(int(alive.sum()))

    u, v = g.edges()
    keep = alive[u] & alive[v]
    h = Graph(int(alive.sum()))
    h.add_edges(id_map[u[keep]], id_map[v[keep]])
    h.parent_ids = np.flatnonzero(alive)
    h.meta = {"id_map": id_map}
    return h


# dump format ------------------------------------------------------------


def write_dump(g: Graph, out: TextIO | str | Path) -> None:
    """``n m`` header, then one ``u v`` line per edge in insertion order."""
    u, v = g.edges()
    lines = [f"{g.node_count} {u.size}"]
    lines.extend(f"{a} {b}" for a, b in zip(u.tolist(), v.tolist()))
    text = "\n".join(lines) + "\n"
    if isinstance(out, (str, Path)):
        Path(out).write_text(text)
    else:
        out.write(text)


def read_dump(src: TextIO | str | Path) -> Graph:
    text = Path(src).read_text() if isinstance(src, (str, Path)) else src.read()
    rows = text.split("\n")
    n, m = (int(x) for x in rows[0].split())
    pairs = [r.split() for r in rows[1:1 + m]]
    g = Graph(n)
    if pairs:
        arr = np.array(pairs, dtype=np.int64)
        g.add_edges(arr[:, 0], arr[:, 1])
    return g
