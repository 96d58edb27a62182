#!/usr/bin/env python3
"""Walk through the whole pipeline on the two-line graph.

Two vertices a, b joined by two lines oriented b -> a. Line i carries a
positive weight q_i and an integer summation variable n_i; vertex a carries
the integer N (vertex b gets -N). The lattice sum

    S = sum_n 1 / ((n^2 + q1^2) ((N - n)^2 + q2^2))

and its integral companion I (sum replaced by an integral over the real
line) both have exact closed forms, and S is obtained from I by a small
operator built from reflections R_i: q_i -> -q_i and Bose-Einstein kernel
factors nbe(q) = 1/(e^{2 pi q} - 1).
"""

import math

from matsum import engine, fixtures
from matsum import expressions as ex
from matsum import graph as gr

g = fixtures.g2()
print("vertices:", g.vertices, " root:", g.root)
print("lines:   ", [(ln.id, f"{ln.tail}->{ln.head}") for ln in g.lines])
print("cycle rank:", gr.cycle_rank(g))
print()

# Every spanning tree solves the vertex constraints for its own lines in
# terms of the remaining free ones.
for tree in gr.enumerate_spanning_trees(g):
    sol = engine.solve_tree(g, tree)
    for j, om in sol.omega.items():
        lhs = f"n{j}"
        rhs = " + ".join([f"{c}*N_{v}" for v, c in om.n_part]
                         + [f"{b}*n{l}" for l, b in om.line_part])
        print(f"tree {tree}: {lhs} = {rhs};  regulator signs {sol.epsilon}")
print()

integral = engine.matsubara_integral(g)
print("I =", ex.render(integral))
value = ex.eval_numeric(integral, {1: 1.0, 2: 1.0}, {"a": 1})
print("I(N=1, q=(1,1)) =", value.real, " (exact: 2*pi/5 =", 2 * math.pi / 5, ")")
print()

spec = engine.operator_reduced(g)
print("thermal operator:", engine.render_operator(spec))
print()

s = engine.apply_operator(spec, integral)
print("S =", ex.render(s))
print()
print("latex:")
print(ex.render(s, "latex"))
