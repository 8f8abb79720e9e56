"""Shared test utilities: random instances and independent oracles.

The oracles here deliberately avoid the library's DP code paths: they work
by explicit path enumeration plus dense numpy arithmetic, so agreement is
evidence rather than tautology.
"""

from __future__ import annotations

import numpy as np

from pathpca import Dag, count_paths, enumerate_paths, validate


def random_psd(p: int, rng, scale: float = 1.0) -> np.ndarray:
    a = rng.standard_normal((p, p))
    s = a @ a.T / p * scale
    return (s + s.T) * 0.5


def forward_reachable(dag: Dag) -> np.ndarray:
    mask = np.zeros(dag.vertex_count, dtype=bool)
    mask[dag.source] = True
    frontier = [dag.source]
    while frontier:
        nxt = []
        for v in frontier:
            for u in dag.out_neighbors(v).tolist():
                if not mask[u]:
                    mask[u] = True
                    nxt.append(u)
        frontier = nxt
    return mask


def random_dag(rng, max_interior: int = 38, max_paths: int = 5000) -> Dag:
    """Random valid S-T DAG with <= max_paths paths, some vertices possibly
    unbound, and at least one bound vertex on an S-T path."""
    while True:
        n_int = int(rng.integers(2, max_interior + 1))
        n = n_int + 2
        levels = int(rng.integers(1, min(6, n_int) + 1))
        rank = np.sort(rng.integers(1, levels + 1, size=n_int))
        edges = []
        for i in range(n_int):
            v = 1 + i
            cands = [0] + [1 + j for j in range(n_int) if rank[j] < rank[i]]
            edges.append((int(rng.choice(cands)), v))
            cands = [n - 1] + [1 + j for j in range(n_int) if rank[j] > rank[i]]
            edges.append((v, int(rng.choice(cands))))
        prob = float(rng.uniform(0.05, 0.3))
        for i in range(n_int):
            for j in range(i + 1, n_int):
                if rank[j] > rank[i] and rng.random() < prob:
                    edges.append((1 + i, 1 + j))
        if rng.random() < 0.2:
            edges.append((0, n - 1))

        bound = [v for v in range(n) if rng.random() < 0.85]
        if not bound:
            continue
        perm = rng.permutation(len(bound))
        binding = {v: int(perm[i]) for i, v in enumerate(bound)}
        dag = Dag(n, edges, 0, n - 1, binding=binding, dim=len(bound))
        if not validate(dag).ok:
            continue
        if count_paths(dag) > max_paths:
            continue
        fwd = forward_reachable(dag)
        bwd = dag._reach_terminal()
        on_path = [v for v in bound if fwd[v] and bwd[v]]
        if not on_path:
            continue
        return dag


def support_indicator(dag: Dag, paths) -> np.ndarray:
    m = np.zeros((len(paths), dag.dim))
    for i, path in enumerate(paths):
        sup = path.sorted_support()
        if sup.size:
            m[i, sup] = 1.0
    return m


def oracle_best_objective(dag: Dag, w: np.ndarray, paths=None) -> float:
    """max over S-T paths of ||w restricted to the path's support||_2,
    the optimum of w^T x over path-supported unit vectors."""
    if paths is None:
        paths = enumerate_paths(dag, cap=10**9)
    ind = support_indicator(dag, paths)
    return float(np.sqrt((ind @ (w * w)).max()))


def oracle_best_rayleigh(dag: Dag, sigma: np.ndarray, paths=None) -> float:
    """max over paths of the leading eigenvalue of sigma restricted to the
    path support: the exact optimum of x^T sigma x over the feasible set."""
    if paths is None:
        paths = enumerate_paths(dag, cap=10**9)
    best = -np.inf
    for path in paths:
        sup = path.sorted_support()
        if sup.size == 0:
            continue
        best = max(best, float(np.linalg.eigvalsh(sigma[np.ix_(sup, sup)])[-1]))
    return best


def assert_feasible(dag: Dag, x: np.ndarray, path, norm_tol: float = 1e-12):
    """Exact feasibility: unit norm, support inside a genuine S-T path."""
    from pathpca import is_st_path

    assert is_st_path(dag, path.vertices), f"not an S-T path: {path.vertices}"
    assert abs(np.linalg.norm(x) - 1.0) <= norm_tol
    nz = set(np.flatnonzero(x != 0.0).tolist())
    assert nz <= path.support, f"support {nz} leaves path support {path.support}"
    outside = np.ones(dag.dim, dtype=bool)
    sup = path.sorted_support()
    outside[sup] = False
    assert np.all(x[outside] == 0.0), "entries off the path must be exactly zero"
