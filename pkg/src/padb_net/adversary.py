"""Random node compromise and the resilience metrics computed after it.

For a key graph on ``n`` nodes with ``s`` nodes captured uniformly at random:

* ``V``: isolated survivors divided by ``n``
* ``E``: removed key-graph edges divided by the original (loop-free) edge count
* ``C``: largest surviving component divided by ``n``
* ``P``: average path length over reachable survivor pairs

By default a link disappears only when one of its endpoints is captured.
With ``exposure=True`` the captured nodes' keys are treated as public, so a
link between two survivors also disappears once every key they share is held
by some captured node.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, isolated_count, components, path_stats, remove_nodes
from .schemes import KeyAssignment, SchemeConfig, build_scheme, key_graph_from_rings
from .seeding import derive_seed

METRICS = ("V", "E", "C", "P")
DEFAULT_FS_GRID = (0.0, 0.1, 0.2, 0.3, 0.4, 0.5)
DEFAULT_TRIALS = 20


@dataclass(frozen=True)
class CompromiseOutcome:
    s: int
    fs: float
    V: float
    E: float
    C: float
    P: float

    def metric(self, name: str) -> float:
        return getattr(self, name)


def compromised_count(fs: float, n: int) -> int:
    return int(math.floor(fs * n + 0.5))


def surviving_graph(
    key_graph: Graph,
    victims: np.ndarray,
    rings: list[np.ndarray] | None = None,
) -> Graph:
    """Graph left on the survivors, ids remapped as in :func:`remove_nodes`."""
    h = remove_nodes(key_graph, victims)
    if rings is None:
        return h
    exposed = np.unique(np.concatenate([rings[v] for v in victims])) if len(victims) else np.zeros(0, np.int64)
    kept = [np.setdiff1d(rings[old], exposed, assume_unique=True) for old in h.parent_ids.tolist()]
    secure = key_graph_from_rings(kept)
    secure.parent_ids = h.parent_ids
    secure.meta = h.meta
    return secure


def measure(
    key_graph: Graph,
    victims,
    *,
    rings: list[np.ndarray] | None = None,
    apl_exact: bool | None = None,
    rng: np.random.Generator | int | None = None,
) -> CompromiseOutcome:
    """Metrics after capturing exactly ``victims``."""
    n = key_graph.node_count
    victims = np.unique(np.asarray(list(victims), dtype=np.int64))
    s = int(victims.size)
    h = surviving_graph(key_graph, victims, rings)
    m = key_graph.simple_edges()[0].size
    kept = h.simple_edges()[0].size
    ps = path_stats(h, exact=apl_exact, rng=rng)
    return CompromiseOutcome(
        s=s,
        fs=s / n if n else 0.0,
        V=isolated_count(h) / n if n else 0.0,
        E=(m - kept) / m if m else 0.0,
        C=components(h).largest / n if n else 0.0,
        P=ps.average_path_length,
    )


def compromise(
    key_graph: Graph,
    s: int,
    rng: np.random.Generator | int | None = None,
    *,
    rings: list[np.ndarray] | None = None,
    apl_exact: bool | None = None,
) -> CompromiseOutcome:
    """Capture ``s`` uniformly random nodes and measure what is left.

    Passing ``rings`` switches on key exposure (see module docstring).
    """
    n = key_graph.node_count
    if not 0 <= s <= n:
        raise ValueError(f"cannot compromise {s} of {n} nodes")
    rng = np.random.default_rng(rng)
    victims = rng.choice(n, size=s, replace=False) if s else []
    return measure(key_graph, victims, rings=rings, apl_exact=apl_exact, rng=rng)


@dataclass
class ResilienceCurve:
    scheme: str
    fs_grid: list[float]
    trials: int
    base_seed: int
    outcomes: list[list[CompromiseOutcome]]
    seeds: list[list[int]]
    config: SchemeConfig | None = None
    meta: dict = field(default_factory=dict)

    def values(self, metric: str) -> np.ndarray:
        """Array of shape (len(fs_grid), trials)."""
        return np.array([[o.metric(metric) for o in row] for row in self.outcomes], dtype=float)

    def mean(self, metric: str) -> np.ndarray:
        return self.values(metric).mean(axis=1)

    def sd(self, metric: str) -> np.ndarray:
        vals = self.values(metric)
        if self.trials < 2:
            return np.zeros(len(self.fs_grid))
        return vals.std(axis=1, ddof=1)

    def at(self, fs: float, metric: str) -> float:
        i = min(range(len(self.fs_grid)), key=lambda j: abs(self.fs_grid[j] - fs))
        return float(self.mean(metric)[i])


def _run_cell(args) -> CompromiseOutcome:
    cfg, fs, seed, exposure, apl_exact = args
    ka: KeyAssignment = build_scheme(cfg, seed)
    s = compromised_count(fs, cfg.n)
    return compromise(
        ka.key_graph,
        s,
        np.random.default_rng(derive_seed(seed, 1)),
        rings=ka.rings if exposure else None,
        apl_exact=apl_exact,
    )


def worker_count(requested: int | None = None) -> int:
    cap = os.environ.get("PADB_NET_THREADS")
    n = requested or os.cpu_count() or 1
    if cap:
        n = min(n, max(1, int(cap)))
    return max(1, n)


def resilience_curve(
    cfg: SchemeConfig,
    fs_grid=DEFAULT_FS_GRID,
    trials: int = DEFAULT_TRIALS,
    base_seed: int = 0,
    *,
    exposure: bool = False,
    apl_exact: bool | None = None,
    workers: int = 1,
) -> ResilienceCurve:
    """Fresh scheme instance plus fresh victim set for every (fs, trial) cell.

    Cell seeds are ``derive_seed(base_seed, fs_index, trial_index)``, so the
    result does not depend on how cells are scheduled across workers.
    """
    fs_grid = [float(f) for f in fs_grid]
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if any(b <= a for a, b in zip(fs_grid, fs_grid[1:])):
        raise ValueError("fs grid must be strictly increasing")
    if any(not 0.0 <= f <= 1.0 for f in fs_grid):
        raise ValueError("fs values must lie in [0, 1]")

    seeds = [[derive_seed(base_seed, i, j) for j in range(trials)] for i in range(len(fs_grid))]
    cells = [(cfg, fs, seeds[i][j], exposure, apl_exact) for i, fs in enumerate(fs_grid) for j in range(trials)]
    workers = worker_count(workers)
    if workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            flat = list(pool.map(_run_cell, cells))
    else:
        flat = [_run_cell(c) for c in cells]
    outcomes = [flat[i * trials:(i + 1) * trials] for i in range(len(fs_grid))]
    return ResilienceCurve(
        scheme=cfg.scheme,
        fs_grid=[compromised_count(f, cfg.n) / cfg.n for f in fs_grid],
        trials=trials,
        base_seed=base_seed,
        outcomes=outcomes,
        seeds=seeds,
        config=cfg,
        meta={"exposure": exposure, "largest_component_only": False},
    )
