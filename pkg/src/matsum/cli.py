"""Command-line front end.

Subcommands
-----------
validate      check a graph description and report its shape
trees         list the spanning trees
cutsets       list the cutset line subsets up to a size bound
operator      print the reduced thermal operator (or the full one)
integral      closed form of the Matsubara integral
sum           closed form of the Matsubara sum
eval          numeric value of the closed form at given q / N values
verify        compare closed forms against the numeric oracles (JSON lines)
gaudin-check  residuals of the tree-decomposition identity on random tuples

Exit codes: 0 success, 1 graph validation failure, 2 verification failure,
64 usage error. Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import engine, expressions, graph, oracles

DEFAULT_SEED = 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(64)


def _load_graph(path: str) -> graph.MatsubaraGraph:
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    return graph.validate_graph(raw)


def _parse_hierarchy(text: str | None):
    if text is None:
        return None
    return [int(x) for x in text.split(",") if x.strip()]


def _parse_q(text: str) -> dict[int, float]:
    # "1:0.7,2:1.1" -> {1: 0.7, 2: 1.1}
    out = {}
    for item in text.split(","):
        key, val = item.split(":")
        out[int(key)] = float(val)
    return out


def _parse_n(text: str) -> dict[str, int]:
    # "a:1,b:-2" -> {"a": 1, "b": -2}
    out = {}
    for item in text.split(","):
        key, val = item.split(":")
        out[key.strip()] = int(val)
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="matsum", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt=False, numeric=False):
        p.add_argument("--graph", required=True, help="graph JSON file")
        if fmt:
            p.add_argument("--format", choices=["text", "latex", "json"], default="text")
            p.add_argument("--hierarchy", default=None,
                           help="regulator hierarchy, comma-separated line ids")
        if numeric:
            p.add_argument("--trials", type=int, default=10)
            p.add_argument("--tol", type=float, default=1e-6)
            p.add_argument("--seed", type=int, default=DEFAULT_SEED)

    common(sub.add_parser("validate", help="validate a graph description"))

    common(sub.add_parser("trees", help="list spanning trees"))

    p = sub.add_parser("cutsets", help="list cutset subsets")
    common(p)
    p.add_argument("--max-size", type=int, default=None,
                   help="largest subset size (default: cycle rank)")

    p = sub.add_parser("operator", help="print the thermal operator")
    common(p, fmt=True)
    p.add_argument("--full", action="store_true", help="all 2^I subsets")

    p = sub.add_parser("integral", help="closed form of the integral")
    common(p, fmt=True)

    p = sub.add_parser("sum", help="closed form of the sum")
    common(p, fmt=True)
    p.add_argument("--method", choices=["operator", "direct"], default="operator")

    p = sub.add_parser("eval", help="evaluate a closed form numerically")
    common(p)
    p.add_argument("--target", choices=["sum", "integral"], default="sum")
    p.add_argument("--q", required=True, help="line values, e.g. 1:0.7,2:1.1")
    p.add_argument("--n", required=True, help="non-root vertex values, e.g. a:1")

    p = sub.add_parser("verify", help="oracle verification, JSON lines")
    common(p, numeric=True)
    p.add_argument("--target", choices=["sum", "integral"], default="sum")
    p.add_argument("--cutoff", type=int, default=10_000,
                   help="lattice cutoff for the sum oracle")

    p = sub.add_parser("gaudin-check", help="tree-identity residuals")
    common(p, numeric=True)
    p.set_defaults(tol=1e-12)

    return parser


def _emit_expression(expr, fmt: str) -> None:
    print(expressions.render(expr, fmt))


def run(argv: list[str]) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        g = _load_graph(args.graph)
    except graph.GraphError as exc:
        print(f"invalid graph: {exc}", file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        print(f"cannot read graph: {exc}", file=sys.stderr)
        return 1

    if args.command == "validate":
        print(f"valid Matsubara graph: V={g.num_vertices} I={g.num_lines} "
              f"L={graph.cycle_rank(g)} root={g.root}")
        return 0

    if args.command == "trees":
        trees = graph.enumerate_spanning_trees(g)
        for t in trees:
            print("{" + ",".join(str(x) for x in t) + "}")
        print(f"count: {len(trees)}")
        return 0

    if args.command == "cutsets":
        max_size = args.max_size if args.max_size is not None else graph.cycle_rank(g)
        import itertools

        found = []
        ids = sorted(g.line_ids)
        for size in range(1, max_size + 1):
            for combo in itertools.combinations(ids, size):
                if graph.is_cutset(g, combo):
                    found.append(combo)
        for c in found:
            print("{" + ",".join(str(x) for x in c) + "}")
        print(f"count: {len(found)} (sizes 1..{max_size})")
        return 0

    hierarchy = _parse_hierarchy(getattr(args, "hierarchy", None))

    if args.command == "operator":
        spec = engine.operator_full(g) if args.full else engine.operator_reduced(g)
        print(engine.render_operator(spec, args.format))
        return 0

    if args.command == "integral":
        _emit_expression(engine.matsubara_integral(g, hierarchy), args.format)
        return 0

    if args.command == "sum":
        _emit_expression(engine.matsubara_sum(g, args.method, hierarchy), args.format)
        return 0

    if args.command == "eval":
        expr = (engine.matsubara_sum(g) if args.target == "sum"
                else engine.matsubara_integral(g))
        try:
            value = expressions.eval_numeric(expr, _parse_q(args.q), _parse_n(args.n))
        except expressions.ZeroDenominator as exc:
            print(f"degenerate evaluation point: {exc}", file=sys.stderr)
            return 1
        print(f"{value.real!r}")
        if abs(value.imag) > 1e-9 * (abs(value.real) + 1):
            print(f"warning: nonvanishing imaginary part {value.imag!r}",
                  file=sys.stderr)
        return 0

    if args.command == "verify":
        header = {"seed": args.seed, "target": args.target, "trials": args.trials,
                  "tolerance": args.tol}
        if args.target == "sum":
            header["cutoff"] = args.cutoff
            reports = oracles.verify_sum(g, args.trials, args.cutoff, args.tol,
                                         seed=args.seed)
        else:
            try:
                reports = oracles.verify_integral(g, args.trials, args.tol,
                                                  seed=args.seed)
            except oracles.RankTooHigh as exc:
                print(f"cannot verify integral: {exc}", file=sys.stderr)
                return 1
        print(json.dumps(header))
        for r in reports:
            print(r.to_json())
        return 0 if all(r.passed for r in reports) else 2

    if args.command == "gaudin-check":
        rng = np.random.default_rng(args.seed)
        sol, free = oracles._independent_layout(g)
        print(json.dumps({"seed": args.seed, "trials": args.trials,
                          "tolerance": args.tol}))
        worst = 0.0
        for _ in range(args.trials):
            q_values = {lid: float(rng.uniform(0.3, 3.0)) for lid in sorted(g.line_ids)}
            n_values = {v: int(rng.integers(-3, 4)) for v in g.vertices[:-1]}
            n_tuple = {lid: int(rng.integers(-5, 6)) for lid in free}
            for j in sol.tree:
                om = sol.omega[j]
                n_tuple[j] = sum(a * n_values[v] for v, a in om.n_part) + sum(
                    b * n_tuple[l] for l, b in om.line_part
                )
            residual = oracles.check_gaudin_identity(g, q_values, n_tuple)
            worst = max(worst, residual)
            print(json.dumps({"n": {str(k): v for k, v in sorted(n_tuple.items())},
                              "residual": residual,
                              "pass": residual < args.tol}))
        return 0 if worst < args.tol else 2

    parser.error(f"unknown command {args.command!r}")
    return 64


def entry_point() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    entry_point()
