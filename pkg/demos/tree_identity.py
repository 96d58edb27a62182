#!/usr/bin/env python3
"""The tree-decomposition identity, and what regulator choices do and don't change.

The rational function 1/prod_k (q_k - i n_k), restricted to summation
variables satisfying the vertex constraints, splits into one term per
spanning tree. That identity is checked here numerically to machine
precision on random constrained tuples.

The second half shows a structural subtlety: the per-tree closed-form
contributions depend on the chosen regulator hierarchy (which fixes a sign
per non-tree line). For two-vertex graphs every choice collapses to the
same canonical expression; for the five-line, four-vertex graph different
hierarchies give genuinely different (equally valid) canonical forms whose
values agree to machine precision.
"""

import numpy as np

from matsum import engine, fixtures, oracles
from matsum import expressions as ex
from matsum import graph as gr

g = fixtures.g4()
rng = np.random.default_rng(0)

print("== identity residuals on random constrained tuples ==")
sol = engine.solve_tree(g, gr.enumerate_spanning_trees(g)[0])
free = sorted(set(g.line_ids) - set(sol.tree))
for _ in range(5):
    q = {lid: float(rng.uniform(0.3, 3.0)) for lid in g.line_ids}
    n = {v: int(rng.integers(-3, 4)) for v in g.vertices[:-1]}
    tup = {l: int(rng.integers(-5, 6)) for l in free}
    for j in sol.tree:
        om = sol.omega[j]
        tup[j] = sum(a * n[v] for v, a in om.n_part) + sum(
            b * tup[l] for l, b in om.line_part
        )
    residual = oracles.check_gaudin_identity(g, q, tup, claimed_n=n)
    print(f"  n = {tup}   residual = {residual:.2e}")

print()
print("== hierarchy (in)dependence of the canonical closed form ==")
q = {i: 0.4 + 0.3 * i for i in range(1, 6)}
n = {"a": 1, "b": -2, "c": 1}
base = engine.matsubara_integral(g)
print(f"default hierarchy: {len(base)} canonical terms, "
      f"I = {ex.eval_numeric(base, q, n).real:.12g}")
for h in ([5, 4, 3, 2, 1], [2, 4, 1, 5, 3]):
    other = engine.matsubara_integral(g, hierarchy=h)
    print(f"hierarchy {h}: {len(other)} terms, identical form: {other == base}, "
          f"I = {ex.eval_numeric(other, q, n).real:.12g}")

g2 = fixtures.g2()
base2 = engine.matsubara_integral(g2)
print(f"\ntwo-line graph, hierarchy [2, 1] identical form: "
      f"{engine.matsubara_integral(g2, hierarchy=[2, 1]) == base2}")
