"""Closed-form evaluation pipeline for graph-indexed Matsubara sums.

Stages, per graph G with V vertices, I lines and cycle rank L = I - V + 1:

  1. For each spanning tree, solve the vertex constraints for the tree-line
     variables: n_j = sum_v a_v N_v + sum_l b_l n_l over the non-tree lines l
     (solve_tree), and fix a regulator sign eps_l = +-1 per non-tree line from
     the fundamental cycle and a hierarchy of regulator magnitudes
     (epsilon_signs).
  2. Each tree contributes (2 pi)^L * prod_k 1/(2 q_k) times the product over
     tree lines j of the reflection-difference pair of
     1/(q_j + sum_l eps_l b_l q_l - i sum_v a_v N_v)       (tree_integral);
     summing over trees gives the integral evaluation (matsubara_integral).
  3. The sum evaluation follows either by applying the thermal operator
     sum over non-cutset line subsets S of prod_{i in S} nbe_i (1 - R_i)
     to the integral (operator route), or tree by tree with the operator
     restricted to non-tree lines (direct route). Both canonicalize to the
     same expression (matsubara_sum).

Cutset subsets of reflection-differences annihilate the integral
(annihilator_check), which is what collapses the full 2^I-term operator to
the reduced one.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from . import expressions as ex
from . import graph as gr
from .expressions import Expression
from .graph import LineSubset, MatsubaraGraph


class OmegaForm(NamedTuple):
    """n_j = sum_v n_part[v] * N_v + sum_l line_part[l] * n_l (root eliminated)."""

    n_part: tuple[tuple[str, int], ...]
    line_part: tuple[tuple[int, int], ...]


class TreeSolution(NamedTuple):
    tree: LineSubset
    omega: dict[int, OmegaForm]
    epsilon: dict[int, int]


class OperatorSpec(NamedTuple):
    """Thermal operator as a list of line subsets; subset S stands for the
    summand prod_{i in S} nbe_i (1 - R_i), the empty subset for 1."""

    subsets: tuple[LineSubset, ...]

    def __len__(self) -> int:
        return len(self.subsets)


def epsilon_signs(
    graph: MatsubaraGraph, tree: Iterable[int], hierarchy: Sequence[int] | None = None
) -> dict[int, int]:
    """Regulator sign for every non-tree line.

    The regulated summand attaches e^{i n_l T_l} to each independent variable,
    where T_l is the signed sum of the regulator parameters tau_k over the
    fundamental cycle of l. With the hierarchy tau_{h_1} >> tau_{h_2} >> ... > 0
    (default: ascending line id), the sign of T_l is the cycle sign of the
    highest-ranked line present in the cycle.
    """
    tree_ids = set(tree)
    if hierarchy is None:
        hierarchy = sorted(graph.line_ids)
    else:
        if sorted(hierarchy) != sorted(graph.line_ids):
            raise gr.GraphError("hierarchy must be a permutation of the line ids")
    rank = {lid: pos for pos, lid in enumerate(hierarchy)}
    eps: dict[int, int] = {}
    for lid in sorted(graph.line_ids):
        if lid in tree_ids:
            continue
        cycle = gr.fundamental_cycle(graph, tree_ids, lid)
        top_line, top_sign = min(cycle, key=lambda member: rank[member[0]])
        eps[lid] = top_sign
    return eps


def solve_tree(
    graph: MatsubaraGraph, tree: Iterable[int], hierarchy: Sequence[int] | None = None
) -> TreeSolution:
    """Solve the vertex constraints along a spanning tree.

    For tree line j, summing the constraints over the side of its fundamental
    cut gives n_j = sum_{v in side} N_v - sum_{crossing l != j} sign_l n_l;
    the root N is eliminated through sum_v N_v = 0.
    """
    tree_ids = tuple(sorted(tree))
    non_root = graph.vertices[:-1]
    omega: dict[int, OmegaForm] = {}
    for j in tree_ids:
        side, crossing = gr.fundamental_cutset(graph, tree_ids, j)
        root_in = graph.root in side
        n_part = tuple(
            (v, (1 if v in side else 0) - (1 if root_in else 0)) for v in non_root
        )
        line_part = tuple(
            sorted((l, -sign) for l, sign in crossing.items() if l != j)
        )
        omega[j] = OmegaForm(
            tuple((v, c) for v, c in n_part if c != 0), line_part
        )
    return TreeSolution(tree_ids, omega, epsilon_signs(graph, tree_ids, hierarchy))


def _folded_prefactor_term(graph: MatsubaraGraph, denominators) -> ex.Term:
    """(2 pi)^L / prod_k (2 q_k) with the given denominator forms."""
    nlines = graph.num_lines
    return ex.make_term(
        Fraction(1, 2**nlines),
        pi_power=gr.cycle_rank(graph),
        q_exponents={lid: -1 for lid in graph.line_ids},
        denominators=denominators,
    )


def tree_integral(graph: MatsubaraGraph, solution: TreeSolution) -> Expression:
    """Contribution of one spanning tree to the integral evaluation.

    Each tree line j supplies the denominator
    q_j + sum_l eps_l b_l q_l - i sum_v a_v N_v, substituting the regulated
    saddle i eps_l q_l for each independent variable; the reflection pair
    (1 + R_j) on the folded terms realizes the bare difference
    1/(q_j - i Omega_j) - 1/(-q_j - i Omega_j).
    """
    coeff_sign = 1
    dens = []
    for j in solution.tree:
        om = solution.omega[j]
        q_pairs = [(j, 1)] + [
            (l, solution.epsilon[l] * b) for l, b in om.line_part if b != 0
        ]
        n_pairs = [(v, -a) for v, a in om.n_part]
        form, sign = ex.normalize_form(n_pairs, q_pairs)
        coeff_sign *= sign
        dens.append(form)
    base = _folded_prefactor_term(graph, dens)
    e = Expression.from_terms([base._replace(coeff=base.coeff * coeff_sign)])
    for j in solution.tree:
        e = ex.reflection_pair(e, j)
    return e


def matsubara_integral(
    graph: MatsubaraGraph, hierarchy: Sequence[int] | None = None
) -> Expression:
    """Closed-form evaluation of the Matsubara integral: sum over all trees."""
    total = ex.EMPTY
    for tree in gr.enumerate_spanning_trees(graph):
        total = ex.add(total, tree_integral(graph, solve_tree(graph, tree, hierarchy)))
    return total


def operator_full(graph: MatsubaraGraph) -> OperatorSpec:
    """The full thermal operator: one summand per subset of lines (2^I)."""
    if graph.num_lines > gr.MAX_LINES:
        raise gr.GraphTooLarge(f"operator expansion capped at {gr.MAX_LINES} lines")
    import itertools

    ids = sorted(graph.line_ids)
    subsets = []
    for size in range(len(ids) + 1):
        subsets.extend(itertools.combinations(ids, size))
    return OperatorSpec(tuple(subsets))


def operator_reduced(graph: MatsubaraGraph) -> OperatorSpec:
    """Reduced thermal operator: subsets up to the cycle rank, cutsets excluded."""
    return OperatorSpec(tuple(gr.non_cutset_subsets(graph, gr.cycle_rank(graph))))


def _kernel_factor(e: Expression, line_id: int) -> Expression:
    """nbe_i (1 - R_i) applied to e, in a single canonicalization pass."""
    def emit():
        for t in e.terms:
            kern = tuple(sorted(t.kernels + (line_id,)))
            yield t._replace(kernels=kern)
            rt = ex.reflect_term(t, line_id)
            yield rt._replace(coeff=-rt.coeff, kernels=kern)

    return Expression.from_terms(emit())


def apply_operator(spec: OperatorSpec, e: Expression) -> Expression:
    """Apply a thermal operator to a kernel-free expression.

    Factors for distinct lines commute; within each subset they are applied
    in ascending line order for determinism, and subsets sharing a prefix
    share the intermediate expression (depth-first over the prefix trie).
    An empty subset list gives the empty expression.
    """
    trie: dict = {}
    TERMINAL = None
    for subset in spec.subsets:
        node = trie
        for lid in sorted(subset):
            node = node.setdefault(lid, {})
        node[TERMINAL] = True

    collected: list[ex.Term] = []

    def walk(expr: Expression, node: dict) -> None:
        if TERMINAL in node:
            collected.extend(expr.terms)
        if expr.is_empty():
            return
        for lid, child in node.items():
            if lid is TERMINAL:
                continue
            walk(_kernel_factor(expr, lid), child)

    walk(e, trie)
    return Expression.from_terms(collected)


def matsubara_sum(
    graph: MatsubaraGraph,
    method: str = "operator",
    hierarchy: Sequence[int] | None = None,
) -> Expression:
    """Closed-form evaluation of the Matsubara sum.

    method="operator": reduced thermal operator applied to the integral.
    method="direct":   per-tree operators over the non-tree lines applied to
                       each tree contribution, then summed.
    The two canonicalize identically.
    """
    if method == "operator":
        return apply_operator(operator_reduced(graph), matsubara_integral(graph, hierarchy))
    if method == "direct":
        total = ex.EMPTY
        tree_ids_all = set(graph.line_ids)
        for tree in gr.enumerate_spanning_trees(graph):
            sol = solve_tree(graph, tree, hierarchy)
            contrib = tree_integral(graph, sol)
            for lid in sorted(tree_ids_all - set(tree)):
                contrib = ex.add(contrib, _kernel_factor(contrib, lid))
            total = ex.add(total, contrib)
        return total
    raise ValueError(f"unknown method {method!r}")


def annihilator_check(
    graph: MatsubaraGraph, subset: Iterable[int], e: Expression
) -> bool:
    """True iff prod_{i in subset} (1 - R_i) maps e to the empty expression.

    For any cutset of the graph this holds on the integral evaluation; for
    non-cutsets it generally does not.
    """
    out = e
    for lid in sorted(set(subset)):
        graph.line(lid)  # id check
        out = ex.reflection_difference(out, lid)
        if out.is_empty():
            return True
    return out.is_empty()


def render_operator(spec: OperatorSpec, fmt: str = "text") -> str:
    """Render an operator listing in text, latex, or json."""
    if fmt == "json":
        import json

        return json.dumps({"subsets": [list(s) for s in spec.subsets]})
    chunks = []
    for subset in spec.subsets:
        if not subset:
            chunks.append("1")
            continue
        if fmt == "text":
            chunks.append("·".join(f"nbe(q{l})(1 - R{l})" for l in subset))
        else:
            chunks.append(
                " ".join(f"n_B(q_{{{l}}})\\big(1 - \\hat{{R}}_{{{l}}}\\big)" for l in subset)
            )
    return " + ".join(chunks) if chunks else "0"
