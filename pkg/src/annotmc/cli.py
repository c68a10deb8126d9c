"""Command-line entry point.  Machine output is JSON on stdout (exception:
``gen`` prints the graph file format so it can be piped into other
commands); diagnostics go to stderr.  Exit codes: 0 computed verdict
(including false/absent), 1 precondition or contract failure, 2 usage."""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

from . import acceptance, corpus
from .decomp import (find_decomposition, is_regular, is_strongly_unbreakable,
                     parse_decomp, validate)
from .errors import AnnotmcError
from .evaluator import evaluate_witness
from .folio import ext_folio, find_representative, folio, glue
from .graphs import (AnnotatedGraph, BoundariedGraph, generate, parse_graph,
                     print_graph)
from .lab import mini_dp
from .logic import (formula_length, fragment_of, parse_battery, parse_formula,
                    ranks, to_text)
from .minors import find_annotated_minor, find_annotated_topological_minor
from .params import PARAM_KINDS, compute, validate_result
from .rewrite import collapse_rewrite, hardness_reduce, minor_formula

SCHEMA = 1

ENVELOPES = {
    "treewidth_exact": 12,
    "superset_enumeration": 12,
    "minor_search_host": 17,
    "folio_level": 4,
    "folio_boundary": 4,
    "decomposition_search": 7,
}


def _threads():
    raw = os.environ.get("ANNOTMC_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        raise AnnotmcError(f"ANNOTMC_THREADS must be an integer, got {raw!r}")
    if n < 0:
        raise AnnotmcError("ANNOTMC_THREADS must be nonnegative")
    # execution is sequential and deterministic; the value caps, never forces
    return n


def _digest(path):
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()[:16]


def _read(path):
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


class _Run:
    def __init__(self, command):
        self.report = {"schema": SCHEMA, "command": command, "inputs": {},
                       "envelope": dict(ENVELOPES)}
        self.report["envelope"]["threads"] = _threads()
        self.t0 = time.time()

    def input_file(self, role, path):
        self.report["inputs"][role] = {"path": path, "sha256": _digest(path)}
        return _read(path)

    def emit(self, **fields):
        self.report.update(fields)
        self.report["duration_ms"] = round((time.time() - self.t0) * 1000, 2)
        json.dump(self.report, sys.stdout, indent=2, default=_jsonable)
        sys.stdout.write("\n")
        return 0


def _jsonable(obj):
    if isinstance(obj, frozenset):
        return sorted(obj)
    if isinstance(obj, (set, tuple)):
        return list(obj)
    return str(obj)


def _load_graph(run, path, role="graph"):
    return parse_graph(run.input_file(role, path))


def _annot_override(obj, override):
    if override is None:
        return obj
    ids = [int(x) for x in override.split(",") if x != ""]
    if isinstance(obj, BoundariedGraph):
        return BoundariedGraph(obj.graph, ids, obj.boundary)
    return AnnotatedGraph(obj.graph, ids)


def _parse_env(pairs):
    env = {}
    for item in pairs or ():
        if "=" not in item:
            raise AnnotmcError(f"binding {item!r} must look like x=3 or X=1,2")
        var, val = item.split("=", 1)
        if var[:1].isupper():
            env[var] = frozenset(int(x) for x in val.split(",") if x != "")
        else:
            env[var] = int(val)
    return env


# -- subcommand handlers -----------------------------------------------------

def _cmd_check(args):
    run = _Run("check")
    g = _load_graph(run, args.graph)
    text = run.input_file("formula", args.formula)
    env = _parse_env(args.bind)
    f = parse_formula(text, free=env.keys())
    graph = g.graph
    if isinstance(g, BoundariedGraph):
        from .evaluator import boundary_colored
        graph = boundary_colored(g)
    value, witness = evaluate_witness(graph, f, env)
    out = {"verdict": value}
    if witness:
        out["witness"] = witness
    return run.emit(**out)


def _cmd_param(args):
    run = _Run("param")
    g = _load_graph(run, args.graph)
    g = _annot_override(g, args.annot)
    ag = AnnotatedGraph(g.graph, g.annot)
    res = compute(args.kind, ag)
    out = {"kind": res.kind, "value": res.value,
           "witness_valid": validate_result(res, ag)}
    if args.witness and res.witness is not None:
        out["witness"] = _witness_json(res.witness)
    return run.emit(**out)


def _witness_json(w):
    if hasattr(w, "branch"):
        return {str(v): sorted(b) for v, b in w.branch}
    if isinstance(w, dict):
        return {k: _witness_json(v) for k, v in w.items()}
    if hasattr(w, "bag"):
        return {str(x): sorted(w.bag[x]) for x in w.nodes}
    if isinstance(w, frozenset):
        return sorted(w)
    return w


def _cmd_minor(args):
    run = _Run("minor")
    host = _load_graph(run, args.host, "host")
    pattern = _load_graph(run, args.pattern, "pattern")
    if args.topological:
        model = find_annotated_topological_minor(host, pattern)
        witness = None
        if model:
            witness = {"principal": {str(k): v for k, v in model.principal},
                       "paths": {f"{u}-{v}": list(p)
                                 for (u, v), p in model.paths}}
    else:
        model = find_annotated_minor(host, pattern)
        witness = ({str(v): sorted(b) for v, b in model.branch}
                   if model else None)
    out = {"found": model is not None}
    if witness:
        out["witness"] = witness
    return run.emit(**out)


def _cmd_folio(args):
    run = _Run("folio")
    g = _load_graph(run, args.graph)
    if not isinstance(g, BoundariedGraph):
        g = BoundariedGraph(g.graph, g.annot, ())
    if args.extended:
        ext = ext_folio(g, args.level)
        out = {"level": args.level,
               "completions": {"+".join(f"{min(p)}-{max(p)}" for p in sorted(
                   i, key=sorted)) or "none": len(f.members)
                   for i, f in ext.items()}}
    else:
        f = folio(g, args.level)
        out = {"level": args.level, "members": len(f.members),
               "member_graphs": [print_graph(m) for m in f.members]}
    return run.emit(**out)


def _cmd_glue(args):
    run = _Run("glue")
    g1 = _load_graph(run, args.left, "left")
    g2 = _load_graph(run, args.right, "right")
    glued = glue(g1, g2)
    return run.emit(graph_file=print_graph(glued))


def _cmd_rep(args):
    run = _Run("rep")
    g = _load_graph(run, args.graph)
    if not isinstance(g, BoundariedGraph):
        g = BoundariedGraph(g.graph, g.annot, ())
    battery = None
    if args.battery:
        battery = parse_battery(run.input_file("battery", args.battery))
    rep = find_representative(g, args.level, args.max_size, battery)
    out = {"found": rep is not None}
    if rep is not None:
        out["graph_file"] = print_graph(rep)
        out["size"] = rep.graph.n
    return run.emit(**out)


def _cmd_decomp(args):
    run = _Run(f"decomp {args.action}")
    g = _load_graph(run, args.graph)
    if args.action == "find":
        t = find_decomposition(g.graph, args.q, args.k, args.adhesion)
        out = {"found": t is not None}
        if t is not None:
            from .decomp import print_decomp
            out["decomp_file"] = print_decomp(t)
        return run.emit(**out)
    if not args.decomp:
        print(f"error: decomp {args.action} needs --decomp", file=sys.stderr)
        return 2
    t = parse_decomp(run.input_file("decomp", args.decomp))
    if args.action == "validate":
        ok, diags = validate(t, g.graph)
        return run.emit(verdict=ok, diagnostics=diags,
                        width=t.width(), adhesion=t.adhesion())
    if args.action == "regular":
        ok, node = is_regular(t, g.graph)
        return run.emit(verdict=ok, violating_node=node)
    ok, node, sep = is_strongly_unbreakable(t, g.graph, args.q, args.k)
    out = {"verdict": ok, "violating_node": node}
    if sep is not None:
        out["separation"] = {"side_a": sorted(sep.side_a),
                             "side_b": sorted(sep.side_b)}
    return run.emit(**out)


def _cmd_gen(args):
    try:
        params = [int(p) for p in args.params]
    except ValueError:
        print("error: generator parameters must be integers", file=sys.stderr)
        return 2
    try:
        if args.graph:
            base = parse_graph(_read(args.graph))
            result = generate(args.kind, base, *params)
        else:
            result = generate(args.kind, *params)
    except TypeError:
        print(f"error: wrong number of arguments for {args.kind!r} "
              "(leaf_augment and subdivide need --graph)", file=sys.stderr)
        return 2
    sys.stdout.write(print_graph(result))
    return 0


def _cmd_compile_minor(args):
    run = _Run("compile-minor")
    pattern = _load_graph(run, args.pattern, "pattern")
    f = minor_formula(AnnotatedGraph(pattern.graph, pattern.annot))
    out = {"formula": to_text(f), "fragment": fragment_of(f),
           "length": formula_length(f)}
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(to_text(f) + "\n")
        out["written"] = args.out
    return run.emit(**out)


def _cmd_collapse(args):
    run = _Run("collapse")
    f = parse_formula(run.input_file("formula", args.formula))
    rewritten = collapse_rewrite(f, args.q)
    out = {"formula": to_text(rewritten), "fragment": fragment_of(rewritten),
           "ranks": vars(ranks(rewritten))}
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(to_text(rewritten) + "\n")
        out["written"] = args.out
    return run.emit(**out)


def _cmd_reduce(args):
    run = _Run("reduce")
    h = _load_graph(run, args.pattern, "pattern")
    f = parse_formula(run.input_file("formula", args.formula))
    red = hardness_reduce(h.graph, f, args.subdivision)
    out = {"host_vertices": red.host.n,
           "principal_map": {str(k): v for k, v in red.principal_map.items()},
           "fragment": fragment_of(red.formula)}
    if args.out_host:
        with open(args.out_host, "w", encoding="utf-8") as fh:
            fh.write(print_graph(red.host))
        out["host_written"] = args.out_host
    else:
        out["host_file"] = print_graph(red.host)
    if args.out_formula:
        with open(args.out_formula, "w", encoding="utf-8") as fh:
            fh.write(to_text(red.formula) + "\n")
        out["formula_written"] = args.out_formula
    else:
        out["formula"] = to_text(red.formula)
    return run.emit(**out)


def _cmd_minidp(args):
    run = _Run("minidp")
    g = _load_graph(run, args.graph)
    t = parse_decomp(run.input_file("decomp", args.decomp))
    battery = parse_battery(run.input_file("battery", args.battery)) \
        if args.battery else []
    rep = mini_dp(g.graph, t, battery, args.level, args.budget)
    return run.emit(initial_vertices=rep.initial_vertices,
                    final_vertices=rep.final_vertices,
                    replacements=rep.replacements,
                    fallbacks=rep.fallbacks,
                    oracle_ok=rep.oracle_ok,
                    verdicts=list(rep.verdicts_after))


def _cmd_lab(args):
    run = _Run(f"lab {args.experiment}")
    known = {name for name, _ in acceptance.CRITERIA}
    if args.experiment not in known:
        raise AnnotmcError(
            f"unknown experiment {args.experiment!r}; choose from "
            + ", ".join(sorted(known)))
    lines = []
    results = acceptance.run_all(names=[args.experiment], out=lines.append)
    r = results[0]
    return run.emit(verdict=r.ok, detail=r.detail, seconds=round(r.seconds, 2))


def _cmd_corpus(args):
    run = _Run("corpus")
    lines = []
    results = acceptance.run_all(out=lambda s: (lines.append(s),
                                                print(s, file=sys.stderr)))
    table = [{"name": r.name, "ok": r.ok, "seconds": round(r.seconds, 1),
              "detail": r.detail} for r in results]
    ok = all(r.ok for r in results)
    run.emit(verdict=ok, criteria=table,
             passed=sum(r.ok for r in results), total=len(results))
    return 0 if ok else 1


def build_parser():
    ap = argparse.ArgumentParser(
        prog="annotmc",
        description="annotated graph parameters, restricted set "
                    "quantification, folios, and decomposition experiments")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("check", help="evaluate a formula on a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--formula", required=True)
    p.add_argument("--bind", nargs="*", help="free-variable bindings x=3 X=1,2")
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("param", help="compute an annotated parameter")
    p.add_argument("kind", choices=PARAM_KINDS)
    p.add_argument("--graph", required=True)
    p.add_argument("--annot", help="override annotation, e.g. 0,1,2")
    p.add_argument("--witness", action="store_true")
    p.set_defaults(fn=_cmd_param)

    p = sub.add_parser("minor", help="annotated (topological) minor search")
    p.add_argument("--host", required=True)
    p.add_argument("--pattern", required=True)
    p.add_argument("--topological", action="store_true")
    p.set_defaults(fn=_cmd_minor)

    p = sub.add_parser("folio", help="folio of a boundaried graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--extended", action="store_true")
    p.set_defaults(fn=_cmd_folio)

    p = sub.add_parser("glue", help="glue two boundaried graphs")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.set_defaults(fn=_cmd_glue)

    p = sub.add_parser("rep", help="smallest folio/battery representative")
    p.add_argument("--graph", required=True)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--max-size", type=int, required=True)
    p.add_argument("--battery")
    p.set_defaults(fn=_cmd_rep)

    p = sub.add_parser("decomp", help="tree decomposition checks and search")
    p.add_argument("action", choices=["validate", "regular", "unbreakable",
                                      "find"])
    p.add_argument("--graph", required=True)
    p.add_argument("--decomp")
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--adhesion", type=int, default=2)
    p.set_defaults(fn=_cmd_decomp)

    p = sub.add_parser("gen", help="generate a named graph family member")
    p.add_argument("kind")
    p.add_argument("params", nargs="*")
    p.add_argument("--graph", help="input graph for leaf_augment/subdivide")
    p.set_defaults(fn=_cmd_gen)

    p = sub.add_parser("compile-minor",
                       help="containment formula for a pattern")
    p.add_argument("--pattern", required=True)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_compile_minor)

    p = sub.add_parser("collapse", help="rewrite ttw set quantifiers away")
    p.add_argument("--formula", required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_collapse)

    p = sub.add_parser("reduce", help="FO reduction over a leafed subdivision")
    p.add_argument("--pattern", required=True)
    p.add_argument("--formula", required=True)
    p.add_argument("--subdivision", type=int, default=1)
    p.add_argument("--out-host")
    p.add_argument("--out-formula")
    p.set_defaults(fn=_cmd_reduce)

    p = sub.add_parser("minidp", help="folio replacement pipeline with oracle")
    p.add_argument("--graph", required=True)
    p.add_argument("--decomp", required=True)
    p.add_argument("--battery")
    p.add_argument("--level", type=int, default=1)
    p.add_argument("--budget", type=int, default=3)
    p.set_defaults(fn=_cmd_minidp)

    p = sub.add_parser("lab", help="run one named experiment")
    p.add_argument("experiment")
    p.set_defaults(fn=_cmd_lab)

    p = sub.add_parser("corpus", help="run the whole acceptance corpus")
    p.set_defaults(fn=_cmd_corpus)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args) or 0
    except AnnotmcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
