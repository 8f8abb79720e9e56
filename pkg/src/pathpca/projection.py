"""Exact Euclidean projection onto unit vectors supported on an S-T path.

For a weight vector w, the nearest unit vector whose support is contained in
some S-T path of the graph is found in closed form: square the weights, pick
the S-T path maximizing the summed squared weight of its bound vertices, and
normalize w restricted to that path. Minimizing ||x - w||^2 over unit vectors
with path support is the same as maximizing w^T x, and on a fixed path the
best unit vector is the normalized restriction of w, with value ||w[path]||_2,
so the winning path is the one with the largest restricted norm.

The path search is a single longest-path pass over the DAG, linear in
|V| + |E|.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Dag, GraphStructureError, Path, make_path


@dataclass(frozen=True)
class WeightedPathResult:
    """Maximizing S-T path and its total vertex weight."""

    path: Path
    weight: float


@dataclass(frozen=True)
class ProjectedVector:
    """Unit vector supported on ``path``; degenerate when the input weight
    vanished on every path and a uniform fallback loading was used."""

    x: np.ndarray
    path: Path
    degenerate: bool = False


def _vertex_weights(dag: Dag, w: np.ndarray) -> np.ndarray:
    vw = np.zeros(dag.vertex_count)
    vw[dag._bound_vertices] = w[dag._bound_vars]
    return vw


def _best_to_terminal(dag: Dag, vw: np.ndarray) -> np.ndarray:
    """best[v] = max over S-T-suffix paths starting at v of the summed vertex
    weight, -inf where the terminal is unreachable."""
    best = np.full(dag.vertex_count, -np.inf)
    best[dag.terminal] = vw[dag.terminal]
    for ed, offs, src in dag._projection_plan():
        m = np.maximum.reduceat(best[ed], offs)
        best[src] = vw[src] + m
    return best


def _walk(dag: Dag, best: np.ndarray) -> list[int]:
    # Greedy descent through stored DP values. Taking the smallest successor
    # that attains the max yields the lexicographically smallest maximizer.
    v = dag.source
    out = [v]
    while v != dag.terminal:
        nbrs = dag.out_neighbors(v)
        if nbrs.size == 0:
            raise GraphStructureError("terminal unreachable from source")
        vals = best[nbrs]
        top = vals.max()
        if top == -np.inf:
            raise GraphStructureError("terminal unreachable from source")
        v = int(nbrs[np.flatnonzero(vals == top)[0]])
        out.append(v)
    return out


def longest_weighted_path(dag: Dag, vertex_weights: np.ndarray) -> WeightedPathResult:
    """S-T path maximizing the sum of nonnegative per-variable weights.

    Parameters
    ----------
    dag : Dag
    vertex_weights : array of length ``dag.dim``
        Nonnegative weight per data variable; a vertex contributes the weight
        of its bound variable, unbound vertices contribute zero.

    Returns
    -------
    WeightedPathResult
        Among maximizing paths, the lexicographically smallest vertex
        sequence. The reported weight is the direct sum over the path's
        support, recomputed outside the DP.
    """
    w = np.asarray(vertex_weights, dtype=float)
    if w.shape != (dag.dim,):
        raise ValueError(f"expected {dag.dim} weights, got shape {w.shape}")
    if not np.all(np.isfinite(w)):
        raise ValueError("weights must be finite")
    if w.size and w.min() < 0:
        raise ValueError("weights must be nonnegative")
    vw = _vertex_weights(dag, w)
    best = _best_to_terminal(dag, vw)
    path = make_path(dag, _walk(dag, best))
    weight = float(w[path.sorted_support()].sum()) if path.support else 0.0
    return WeightedPathResult(path=path, weight=weight)


def project(dag: Dag, w: np.ndarray) -> ProjectedVector:
    """Euclidean projection of w onto the unit vectors with S-T path support.

    Returns the unit vector x maximizing w^T x subject to supp(x) lying
    within a single S-T path: w restricted to the best path (largest
    restricted 2-norm, squared weights fed to the path DP) and normalized.

    If w vanishes on every bound vertex of every path, the result is flagged
    degenerate: a uniform loading on the bound vertices of the tie-break path
    (the lexicographically smallest one). ValueError if that path binds no
    variables at all, since no unit vector exists there.
    """
    w = np.asarray(w, dtype=float)
    if w.shape != (dag.dim,):
        raise ValueError(f"expected a vector of length {dag.dim}, got shape {w.shape}")
    if not np.all(np.isfinite(w)):
        raise ValueError("input vector must be finite")
    res = longest_weighted_path(dag, w * w)
    sup = res.path.sorted_support()
    x = np.zeros(dag.dim)
    if sup.size == 0:
        raise ValueError("winning path binds no variables; no unit vector on it")
    nrm = float(np.linalg.norm(w[sup]))
    if nrm == 0.0:
        x[sup] = 1.0 / np.sqrt(sup.size)
        return ProjectedVector(x=x, path=res.path, degenerate=True)
    x[sup] = w[sup] / nrm
    return ProjectedVector(x=x, path=res.path)
