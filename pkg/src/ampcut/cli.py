"""Command-line entry point: ``ampcut <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys

from ampcut.decomp import boundary_edges, level_components, low_depth_decomp, validate_decomposition
from ampcut.graph import (
    MODELS,
    Graph,
    GraphError,
    OrderedGraph,
    SpanningTree,
    assign_contraction_order,
    generate,
    kruskal_mst,
    read_graph,
    require_connected,
)
from ampcut.kcut import SOLVERS, apx_split
from ampcut.mincut import MODES, ampc_min_cut
from ampcut.runtime import make_runtime
from ampcut.seeding import derive_seed
from ampcut.singleton import analyze

VERIFY_MAX_N = 12


def _ordered(g: Graph, seed: int, keys: str | None) -> OrderedGraph:
    if keys:
        return OrderedGraph(g, [int(k) for k in keys.split(",")])
    return assign_contraction_order(g, derive_seed(seed, "keys"), "uniform" if g.is_unit else "capacity_biased")


def _tree(g: Graph, seed: int) -> SpanningTree:
    require_connected(g)
    return kruskal_mst(_ordered(g, seed, None))


def cmd_gen(args) -> int:
    g = generate(args.model, args.n, p=args.p, size=args.size, seed=args.seed, max_capacity=args.max_capacity)
    text = g.to_text()
    if args.out:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_mincut(args) -> int:
    g = read_graph(args.input)
    res = ampc_min_cut(g, args.epsilon, args.seed, args.trials, args.mode)
    st = res.stats
    if args.json:
        record = {
            "value": res.value,
            "side": res.side,
            "source": res.source,
            "trials": res.trials_used,
            "rounds": st.rounds,
            "peak_task_words": st.peak_task_words,
            "total_table_words": st.total_table_words,
            "adaptive_queries": st.adaptive_queries,
            "seed": args.seed,
        }
        print(json.dumps(record, separators=(",", ":")))
    else:
        print(f"value {res.value}")
        print(f"side_size {len(res.side)}")
        print(f"source {res.source}")
        print(f"trials {res.trials_used}")
        for key, val in st.as_dict().items():
            print(f"{key} {val}")
        print(f"budget_violations {st.budget_violations}")
    return 0


def cmd_kcut(args) -> int:
    g = read_graph(args.input)
    res = apx_split(g, args.k, args.solver, epsilon=args.epsilon, trials=args.trials, seed=args.seed)
    sys.stdout.write(res.dump())
    return 0


def cmd_decomp(args) -> int:
    g = read_graph(args.input)
    t = _tree(g, args.seed)
    rt = make_runtime(args.epsilon, g.n, g.m)
    lab = low_depth_decomp(t, rt)
    sys.stdout.write(lab.dump())
    report = validate_decomposition(t, lab)
    print(f"rounds {rt.stats().rounds}")
    print("verdict ok" if report.ok else "verdict invalid")
    for line in report.violations:
        print(f"violation {line}")
    return 0 if report.ok else 1


def cmd_singleton(args) -> int:
    g = read_graph(args.input)
    require_connected(g)
    rt = make_runtime(args.epsilon, g.n, g.m)
    w = analyze(_ordered(g, args.seed, args.keys), rt).witness
    sys.stdout.write(w.dump())
    print(f"rounds {rt.stats().rounds}")
    return 0


def verify_checks(g: Graph, seed: int = 0, key_seeds: int = 5) -> list[tuple[str, bool | None]]:
    """Run every algorithm on ``g`` against the brute-force oracles; ``None`` marks a skipped check."""
    from ampcut import oracles
    from ampcut.mincut import stoer_wagner

    if g.n > VERIFY_MAX_N:
        raise GraphError(f"verify is capped at n <= {VERIFY_MAX_N}")
    require_connected(g)
    checks: list[tuple[str, bool | None]] = []
    t = _tree(g, seed)
    lab = low_depth_decomp(t)
    checks.append(("decomposition", validate_decomposition(t, lab).ok))
    checks.append(("decomposition-naive", oracles.naive_decomp_validate(t, lab.level, lab.h)))
    ok = True
    for i in range(1, lab.h + 1):
        for comp in level_components(t, lab, i):
            ok &= len(boundary_edges(t, lab, comp, i, strict=False)) <= 2
    checks.append(("boundary-edges", ok))
    single_ok = interval_ok = path_ok = True
    for j in range(key_seeds):
        og = _ordered(g, derive_seed(seed, "verify", j), None)
        an = analyze(og)
        trace = oracles.simulate_contraction(og, an.labeling.level)
        w = an.witness
        single_ok &= w.value == trace.min_value == g.crossing_capacity(w.side) and 0 < len(w.side) < g.n
        single_ok &= an.leader_times.ldr_time == trace.ldr_time
        ivs = [iv for owners in an.intervals.values() for found in owners.values() for iv in found]
        interval_ok &= not oracles.interval_mismatches(ivs, an.leader_times.ldr_time, trace)
        for u in range(g.n):
            a = u
            while a >= 0:
                path_ok &= an.index.path_max_key(u, a) == oracles.naive_path_scan(an.tree, u, a)
                a = an.tree.parent[a]
    checks.append(("singleton", single_ok))
    checks.append(("intervals", interval_ok))
    checks.append(("path-queries", path_ok))
    brute = oracles.brute_min_cut(g)
    exact, side = stoer_wagner(g)
    checks.append(("exact-mincut", exact == brute.value == g.crossing_capacity(side)))
    res = ampc_min_cut(g, 0.5, seed, base=4)
    checks.append(("ampc-mincut", res.value >= brute.value and g.crossing_capacity(res.side) == res.value))
    if g.n <= oracles.BRUTE_K_CUT_MAX_N:
        kok = True
        for k in range(2, min(oracles.BRUTE_K_CUT_MAX_K, g.n) + 1):
            kok &= apx_split(g, k).total_value <= (2 - 2 / k) * oracles.brute_k_cut(g, k) + 1e-9
        checks.append(("kcut", kok))
    else:
        checks.append(("kcut", None))
    return checks


def cmd_verify(args) -> int:
    g = read_graph(args.input)
    checks = verify_checks(g, args.seed)
    for name, ok in checks:
        print(f"check {name} {'skip' if ok is None else 'pass' if ok else 'fail'}")
    return 0 if all(ok is not False for _, ok in checks) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ampcut", description="Approximate minimum cuts on a simulated AMPC runtime.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a generated graph")
    p.add_argument("--model", choices=MODELS, required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=float, default=0.5, help="edge probability for gnp")
    p.add_argument("--size", type=int, help="clique size for two_cliques_bridge")
    p.add_argument("--max-capacity", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("mincut", help="(2+eps)-approximate minimum cut")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--epsilon", type=float, default=0.5)
    p.add_argument("--trials", type=int, help="default ceil(4 log2(n)^2)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=MODES, default="boosted")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_mincut)

    p = sub.add_parser("kcut", help="greedy splitting k-cut")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--solver", choices=SOLVERS, default="exact")
    p.add_argument("--epsilon", type=float, default=0.5)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_kcut)

    p = sub.add_parser("decomp", help="level labeling of a spanning tree")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--epsilon", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0, help="contraction keys when the input is not a tree")
    p.set_defaults(func=cmd_decomp)

    p = sub.add_parser("singleton", help="smallest singleton cut of one contraction order")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--epsilon", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--keys", help="comma-separated contraction keys, one per edge in file order")
    p.set_defaults(func=cmd_singleton)

    p = sub.add_parser("verify", help=f"check every algorithm against brute force (n <= {VERIFY_MAX_N})")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GraphError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

