#!/usr/bin/env python3
"""Check the closed forms against independent numeric oracles.

Sums are checked against truncated lattice sums over the independent
summation variables (with a cutoff-halving convergence estimate); integrals
against adaptive quadrature on tangent-substituted axes. Each trial draws
random weights q in [0.3, 3] and random integers N in [-3, 3].
"""

from matsum import fixtures, oracles

print("== two-line graph: sum vs brute force (cutoff 10^4) ==")
for r in oracles.verify_sum(fixtures.g2(), 6, 10_000, 1e-6, seed=42):
    print(f"  N={r.n_values}  q={ {k: round(v, 3) for k, v in r.q_values.items()} }")
    print(f"    symbolic {r.symbolic:.12g}   oracle {r.oracle:.12g}   "
          f"rel {r.rel_error:.2e}   converged to {r.convergence:.1e}   "
          f"pass={r.passed}")

print()
print("== two-line graph: integral vs quadrature ==")
for r in oracles.verify_integral(fixtures.g2(), 4, 1e-9, seed=42):
    print(f"  rel {r.rel_error:.2e}  pass={r.passed}")

print()
print("== five-line graph: sum vs brute force (cutoff 200) ==")
for r in oracles.verify_sum(fixtures.g4(), 4, 200, 1e-3, seed=42):
    print(f"  rel {r.rel_error:.2e}  convergence {r.convergence:.1e}  "
          f"pass={r.passed}")

print()
print("JSON-lines form of one report:")
print(oracles.verify_sum(fixtures.g3(), 1, 300, 1e-3, seed=1)[0].to_json())
