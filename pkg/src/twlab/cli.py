"""Command-line surface: gen, tw, reduce, solve, verify.

Every subcommand is a thin adapter over the library: parse flags, read and
write the documented JSON formats, print results.  Verdicts are printed as
the literal tokens "yes"/"no" on stdout; the fully resolved configuration is
echoed to stderr.  Exit codes: 0 success / all-agree, 1 verification found a
disagreement or failed bound, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys

from twlab import harness as hn
from twlab import problems as pr
from twlab import reductions as rd
from twlab import solvers as sv
from twlab import treewidth as tw
from twlab.errors import InputError
from twlab.graphs import (
    graph_from_json,
    orientation_to_json,
    partitioned_from_json,
    partitioned_to_json,
    graph_to_json,
)


def _echo_config(args: argparse.Namespace) -> None:
    resolved = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    print(f"config: {json.dumps(resolved, sort_keys=True)}", file=sys.stderr)


def _read_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc
    except OSError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _write_json(path: str, obj: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


# --- gen ------------------------------------------------------------------------

def _cmd_gen(args) -> int:
    if args.kind == "kpartite":
        pg = hn.gen_partitioned(args.k, args.n, args.p, args.plant, args.seed)
        _write_json(args.output, partitioned_to_json(pg))
    else:
        g, w = hn.gen_weighted(args.n, args.p, args.max_weight, args.seed)
        obj = graph_to_json(g)
        obj["weights"] = list(w.weights)
        _write_json(args.output, obj)
    print(f"wrote {args.output}")
    return 0


# --- tw -------------------------------------------------------------------------

def _cmd_tw(args) -> int:
    g = graph_from_json(_read_json(args.file))
    if args.method == "exact":
        value, td = tw.exact_treewidth(g, args.limit)
    else:
        method = {"minfill": "min-fill", "mindeg": "min-degree"}[args.method]
        td = tw.heuristic_decomposition(g, method, seed=args.seed)
        value = tw.width(td)
    print(value)
    if args.output:
        _write_json(args.output, tw.decomposition_to_json(td))
    return 0


# --- reduce ---------------------------------------------------------------------

def _cmd_reduce(args) -> int:
    obj = _read_json(args.file)
    if args.pipeline == "pc-lc":
        out = rd.pc_to_list_coloring(partitioned_from_json(obj))
    elif args.pipeline == "lc-pce":
        inst = pr.instance_from_json(obj)
        if not isinstance(inst, pr.ListColoringInstance):
            raise InputError("lc-pce expects a list_coloring instance file")
        out = rd.lc_to_precoloring(inst)
    elif args.pipeline == "clique-gensat":
        if args.k is None:
            raise InputError("clique-gensat requires -k")
        out = rd.clique_to_gensat(graph_from_json(obj), args.k)
    elif args.pipeline == "pc-chosen":
        out = rd.pc_to_chosen_outdegree(partitioned_from_json(obj))
    else:  # chosen-minmax
        inst = pr.instance_from_json(obj)
        if not isinstance(inst, pr.ChosenOutdegreeInstance):
            raise InputError("chosen-minmax expects a chosen_outdegree instance file")
        out = rd.chosen_to_minmax(inst)
    _write_json(args.output, rd.reduction_output_to_json(out))
    if args.witness:
        _write_json(args.witness, tw.decomposition_to_json(out.witness))
    print(f"wrote {args.output} (claimed width bound {out.claimed_width_bound})")
    return 0


# --- solve ----------------------------------------------------------------------

def _load_instance(obj: dict):
    # accept either a bare instance or a reduction output wrapper
    if "instance" in obj and "type" not in obj:
        return pr.instance_from_json(obj["instance"])
    return pr.instance_from_json(obj)


def _cmd_solve(args) -> int:
    inst = _load_instance(_read_json(args.file))
    witness_obj = None
    if args.solver == "bf":
        witness = hn.solve_bf(inst)
        verdict = witness is not None
    elif args.solver == "dp":
        if args.td:
            td = tw.decomposition_from_json(_read_json(args.td))
            ntd = tw.to_nice(td, inst.graph)
        else:
            ntd = None
        witness = hn.solve_dp(inst, ntd)
        verdict = witness is not None
    else:  # flow
        if not isinstance(inst, pr.MinMaxOutdegreeInstance):
            raise InputError("flow expects a minmax_outdegree instance")
        weights = set(inst.weights.weights)
        if len(weights) > 1:
            raise InputError("flow requires a uniform weighting")
        c = weights.pop() if weights else 1
        value = sv.flow_min_max_uniform(inst.graph, c, inst.weights)
        verdict = value <= inst.r
        witness = None
        print("yes" if verdict else "no")
        print(f"minimum max outgoing weight: {value} (instance allows {inst.r})")
        return 0

    print("yes" if verdict else "no")
    if verdict:
        summary, witness_obj = _witness_summary(inst, witness)
        print(summary)
    if args.witness_out and witness_obj is not None:
        _write_json(args.witness_out, witness_obj)
    return 0


def _witness_summary(inst, witness):
    colorings = {
        pr.ListColoringInstance: pr.check_list_coloring,
        pr.PrecoloringExtensionInstance: pr.check_precoloring,
        pr.EquitableColoringInstance: pr.check_equitable,
    }
    if type(inst) in colorings:
        ok = colorings[type(inst)](inst, witness)
        obj = {"coloring": [witness[v] for v in sorted(witness)]}
        return f"witness: proper coloring of {len(witness)} vertices (checked: {ok})", obj
    if isinstance(inst, pr.GeneralFactorInstance):
        ok = pr.check_general_factor(inst, witness)
        obj = {"edges": sorted(list(e) for e in witness)}
        return f"witness: edge subset of size {len(witness)} (checked: {ok})", obj
    if isinstance(inst, pr.GensatInstance):
        ok = pr.check_gensat(inst, witness)
        return f"witness: satisfying assignment (checked: {ok})", {"assignment": list(witness)}
    if isinstance(inst, pr.ChosenOutdegreeInstance):
        ok = pr.check_admissible(inst, witness)
        return f"witness: admissible orientation (checked: {ok})", orientation_to_json(witness)
    if isinstance(inst, pr.MinMaxOutdegreeInstance):
        ok = pr.check_minmax(inst, witness)
        return f"witness: admissible orientation (checked: {ok})", orientation_to_json(witness)
    return "witness: available", None


# --- verify ---------------------------------------------------------------------

def _cmd_verify(args) -> int:
    cfg = hn.ExperimentConfig(
        pipeline=args.pipeline,
        k=args.k,
        n=args.n,
        p=args.p,
        plant=args.plant,
        cases=args.cases,
        seed=args.seed,
        solver=args.solver,
        max_weight=args.max_weight,
        rho_max=args.rho_max,
        unsafe=args.unsafe,
        jobs=args.jobs,
    )
    rep = hn.verify_reduction(cfg)
    if args.report:
        fmt = "csv" if args.report.endswith(".csv") else "json"
        hn.emit_report(rep, args.report, fmt)
    s = rep.summary
    print(
        f"{s['agreements']}/{s['total']} agree, max witness width {s['max_width_seen']}, "
        f"{'pass' if s['pass'] else 'FAIL'}"
    )
    return 0 if s["pass"] else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twlab",
        description="treewidth gadget reductions, solvers, and verification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a seeded instance file")
    g.add_argument("--kind", choices=["kpartite", "weighted"], required=True)
    g.add_argument("-k", type=int, default=2)
    g.add_argument("-n", type=int, default=2)
    g.add_argument("-p", type=float, default=0.5)
    g.add_argument("--plant", action="store_true")
    g.add_argument("--max-weight", type=int, default=4)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output", required=True)
    g.set_defaults(func=_cmd_gen)

    t = sub.add_parser("tw", help="decompose a graph and print its width")
    t.add_argument("--method", choices=["minfill", "mindeg", "exact"], default="minfill")
    t.add_argument("--limit", type=int, default=tw.EXACT_DEFAULT_LIMIT)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("-o", "--output")
    t.add_argument("file")
    t.set_defaults(func=_cmd_tw)

    r = sub.add_parser("reduce", help="apply a reduction to an instance file")
    r.add_argument(
        "--pipeline",
        choices=["pc-lc", "lc-pce", "clique-gensat", "pc-chosen", "chosen-minmax"],
        required=True,
    )
    r.add_argument("-k", type=int, default=None, help="clique size (clique-gensat)")
    r.add_argument("-o", "--output", required=True)
    r.add_argument("--witness", help="also write the witness decomposition here")
    r.add_argument("file")
    r.set_defaults(func=_cmd_reduce)

    s = sub.add_parser("solve", help="solve an instance file and print yes/no")
    s.add_argument("--solver", choices=["bf", "dp", "flow"], required=True)
    s.add_argument("--td", help="decomposition file for the DP solver")
    s.add_argument("--witness-out", help="write the witness here")
    s.add_argument("file")
    s.set_defaults(func=_cmd_solve)

    v = sub.add_parser("verify", help="run a seeded oracle-equivalence sweep")
    v.add_argument("--pipeline", choices=list(hn.PIPELINES), required=True)
    v.add_argument("-k", type=int, default=2)
    v.add_argument("-n", type=int, default=2)
    v.add_argument("-p", type=float, default=0.5)
    v.add_argument("--plant", action="store_true")
    v.add_argument("--cases", type=int, default=10)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--solver", choices=["bf", "dp", "both"], default="bf")
    v.add_argument("--max-weight", type=int, default=4)
    v.add_argument("--rho-max", type=int, default=6)
    v.add_argument("--jobs", type=int, default=1)
    v.add_argument("--unsafe", action="store_true", help="lift size guards")
    v.add_argument("--report", help="write the report here (.json or .csv)")
    v.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    _echo_config(args)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
