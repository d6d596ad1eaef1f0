#!/usr/bin/env python3
"""Benchmark the pure-Python kernels against the compiled extension.

Usage:  python benchmarks/bench_kernels.py [--repeat N]

Each workload is prepared once (outside the timed region) and solved by both
backends; results are checked for equality before timings are reported.
"""

import argparse
import random
import time

from twlab.harness import gen_graph, gen_partitioned, mix
from twlab.kernels import _pykernels
from twlab.problems import degeneracy_order
from twlab.reductions import clique_to_gensat, pc_to_chosen_outdegree, pc_to_list_coloring

try:
    from twlab.kernels import _ckernels
except ImportError:
    _ckernels = None


def orient_workload():
    calls = []
    for case in range(40):
        pg = gen_partitioned(3, 2, 0.5, case % 2 == 0, mix(11, case))
        out = pc_to_chosen_outdegree(pg)
        if "gadget" not in out.meta:
            continue
        g = out.instance.graph
        w = out.instance.weights.weights
        order = sorted(range(len(g.edges)), key=lambda i: (-w[i], i))
        calls.append(
            (
                g.n,
                [g.edges[i][0] for i in order],
                [g.edges[i][1] for i in order],
                [w[i] for i in order],
                list(out.instance.rho),
            )
        )
    return "orient_search", "selection gadgets k=3 n=2", calls


def coloring_workload():
    calls = []
    for case in range(40):
        pg = gen_partitioned(3, 4, 0.25, False, mix(12, case))
        inst = pc_to_list_coloring(pg).instance
        g = inst.graph
        order = degeneracy_order(g)
        rank = {v: i for i, v in enumerate(order)}
        ao, at, po, pv = [0], [], [0], []
        for v in order:
            at.extend(sorted(rank[u] for u in g.neighbors(v)))
            ao.append(len(at))
            pv.extend(sorted(inst.lists[v]))
            po.append(len(pv))
        calls.append((g.n, ao, at, po, pv))
    return "list_color_search", "pad-coloring instances k=3 n=4", calls


def gensat_workload():
    calls = []
    for case in range(30):
        g = gen_graph(6, 0.4, mix(13, case))
        inst = clique_to_gensat(g, 3).instance
        so, sv, to, tm = [0], [], [0], []
        for c in inst.constraints:
            sv.extend(c.scope)
            so.append(len(sv))
            for t in sorted(c.relation.tuples):
                tm.append(sum(b << p for p, b in enumerate(t)))
            to.append(len(tm))
        calls.append((inst.num_variables, so, sv, to, tm))
    return "gensat_search", "clique encodings n=6 k=3", calls


def treewidth_workload():
    calls = []
    rng = random.Random(14)
    for n in (12, 13, 14):
        masks = [0] * n
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < 0.3:
                    masks[i] |= 1 << j
                    masks[j] |= 1 << i
        calls.append((n, masks))
    return "exact_treewidth", "random graphs n=12..14", calls


def run(impl, name, calls):
    fn = getattr(impl, name)
    t0 = time.perf_counter()
    results = [fn(*args) for args in calls]
    return time.perf_counter() - t0, results


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3, help="timing repetitions")
    args = parser.parse_args()

    if _ckernels is None:
        print("compiled kernel not built; showing pure-Python timings only")

    workloads = [
        orient_workload(),
        coloring_workload(),
        gensat_workload(),
        treewidth_workload(),
    ]
    print(f"{'kernel':<20} {'workload':<32} {'python':>10} {'compiled':>10} {'speedup':>8}")
    for name, label, calls in workloads:
        py_best = min(run(_pykernels, name, calls)[0] for _ in range(args.repeat))
        py_results = run(_pykernels, name, calls)[1]
        if _ckernels is None:
            print(f"{name:<20} {label:<32} {py_best:>9.3f}s {'-':>10} {'-':>8}")
            continue
        c_best = min(run(_ckernels, name, calls)[0] for _ in range(args.repeat))
        c_results = run(_ckernels, name, calls)[1]
        assert py_results == c_results, f"backend mismatch in {name}"
        print(
            f"{name:<20} {label:<32} {py_best:>9.3f}s {c_best:>9.3f}s {py_best / c_best:>7.1f}x"
        )


if __name__ == "__main__":
    main()
