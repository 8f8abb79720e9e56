"""Pick one representative series per sector with a group graph.

A grouping (here, tickers bucketed into sectors) turns into a chain-of-groups
DAG: each sector is a layer, consecutive layers are fully connected, and an
unbound source and terminal cap the ends. Every source-terminal path selects
exactly one variable per sector, so the path-constrained leading component is
forced to name one representative for each sector.
"""

import numpy as np

from pathpca import build_group_graph, count_paths, empirical_covariance
from pathpca.solvers import graph_truncated_power

rng = np.random.default_rng(42)

sectors = {
    "energy": [0, 1, 2, 3],
    "tech": [4, 5, 6, 7, 8],
    "retail": [9, 10, 11],
    "utilities": [12, 13, 14, 15],
}
p = 16
dag = build_group_graph(list(sectors.values()))
print(f"{len(sectors)} sectors, {p} series, {count_paths(dag)} candidate "
      "representative sets (4*5*3*4)")

# Synthetic return panel: one secretly chosen representative per sector loads
# a common market factor; everything else is idiosyncratic noise.
chosen = {name: rng.choice(members) for name, members in sectors.items()}
loadings = np.zeros(p)
for name, var in chosen.items():
    loadings[var] = rng.uniform(1.0, 2.0)
n = 500
factor = rng.standard_normal(n)
returns = np.outer(loadings, factor) + rng.standard_normal((p, n))

res = graph_truncated_power(empirical_covariance(returns), dag)
picks = np.flatnonzero(res.x)
print(f"\nleading component objective {res.objective:.3f} "
      f"after {res.iterations} iterations")
for name, members in sectors.items():
    pick = next(v for v in picks if v in members)
    marker = "correct" if pick == chosen[name] else f"planted was {chosen[name]}"
    print(f"  {name:>9}: picked series {pick:2d} ({marker})")

# One nonzero per sector is guaranteed by the graph; picking the planted
# representatives is the statistics working on top of the guarantee.
assert all(len(set(picks) & set(m)) == 1 for m in sectors.values())
print("\nexactly one representative per sector, by construction")
