"""The acceptance corpus: every criterion as a callable returning a
verdict, runnable as a whole through run_all (and the command line).

The evaluator checks here run against naive_evaluate, a deliberately
unoptimized reimplementation of the semantics (full subset enumeration,
no narrowing, no fast paths, no memoization).
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass

from . import corpus
from .canonical import canonical_key
from .errors import AnnotmcError
from .evaluator import Evaluator, enumerate_bounded_sets, evaluate
from .folio import BoundariedGraph
from .graphs import (AnnotatedGraph, Graph, clique, cycle, grid, is_unbreakable,
                     outer_grid, path, solve_conn, solve_dp, star,
                     twisted_grid_g, twisted_grid_h)
from .lab import (check_bounded_witness_size, check_composition,
                  check_param_transfer, mini_dp)
from .logic import (And, CardModAtom, ColorAtom, ConnAtom, DpAtom, EdgeAtom,
                    EqAtom, Exists, Forall, Iff, Implies, MemberAtom, Not, Or,
                    SetExists, SetForall, TtwLeAtom, parse_formula, to_prenex)
from .minors import find_annotated_minor, find_annotated_topological_minor, \
    topo_model_search
from .params import compute, torso, treewidth, torso_clique_bound_holds
from .rewrite import collapse_rewrite, hardness_reduce, minor_formula


@dataclass
class Verdict:
    name: str
    ok: bool
    detail: str
    seconds: float


# ---------------------------------------------------------------------------
# the naive oracle evaluator
# ---------------------------------------------------------------------------

def naive_evaluate(g, node, env=None):
    env = dict(env or {})

    def rec(n, e):
        if isinstance(n, EdgeAtom):
            return g.has_edge(e[n.x], e[n.y])
        if isinstance(n, EqAtom):
            return e[n.x] == e[n.y]
        if isinstance(n, MemberAtom):
            return e[n.x] in e[n.setvar]
        if isinstance(n, ColorAtom):
            return e[n.x] in g.colors.get(n.color, frozenset())
        if isinstance(n, CardModAtom):
            return len(e[n.setvar]) % n.modulus == n.residue
        if isinstance(n, DpAtom):
            return solve_dp(g, [(e[s], e[t]) for s, t in n.pairs])
        if isinstance(n, ConnAtom):
            return solve_conn(g, e[n.x], e[n.y], [e[z] for z in n.deleted])
        if isinstance(n, TtwLeAtom):
            s = frozenset(e[v] for v in n.vars)
            return compute("ttw", AnnotatedGraph(g, s)).value <= n.bound
        if isinstance(n, Not):
            return not rec(n.body, e)
        if isinstance(n, And):
            return rec(n.left, e) and rec(n.right, e)
        if isinstance(n, Or):
            return rec(n.left, e) or rec(n.right, e)
        if isinstance(n, Implies):
            return (not rec(n.left, e)) or rec(n.right, e)
        if isinstance(n, Iff):
            return rec(n.left, e) == rec(n.right, e)
        if isinstance(n, Exists):
            return any(rec(n.body, {**e, n.var: v}) for v in g.vertices)
        if isinstance(n, Forall):
            return all(rec(n.body, {**e, n.var: v}) for v in g.vertices)
        if isinstance(n, (SetExists, SetForall)):
            subsets = itertools.chain.from_iterable(
                itertools.combinations(g.vertices, r)
                for r in range(g.n + 1))
            hits = []
            for sub in subsets:
                s = frozenset(sub)
                if compute(n.pkind, AnnotatedGraph(g, s)).value <= n.bound:
                    hits.append(rec(n.body, {**e, n.var: s}))
            return any(hits) if isinstance(n, SetExists) else all(hits)
        raise TypeError(f"not a formula node: {n!r}")

    return rec(node, env)


# ---------------------------------------------------------------------------
# criteria
# ---------------------------------------------------------------------------

def criterion_clique_ttw():
    """ttw on cliques equals the annotation size minus one."""
    for n in range(1, 8):
        g = clique(n).graph
        for r in range(1, n + 1):
            for x in itertools.combinations(range(n), r):
                val = compute("ttw", AnnotatedGraph(g, x)).value
                if val != len(x) - 1:
                    return False, f"clique {n} annot {x}: got {val}"
    return True, "all cliques up to 7, every nonempty annotation"


def criterion_star_example():
    """Torsos and ttw of stars annotated at the leaves."""
    for k in range(3, 7):
        g = star(k).graph
        leaves = frozenset(range(1, k + 1))
        t1 = torso(g, leaves)
        if len(t1.edges) != k * (k - 1) // 2 or treewidth(t1).value != k - 1:
            return False, f"star {k}: torso over leaves is not a clique"
        t2 = torso(g, leaves | {0})
        if set(t2.edges) != set(g.edges) or treewidth(t2).value != 1:
            return False, f"star {k}: torso over leaves+center changed"
        res = compute("ttw", AnnotatedGraph(g, leaves))
        if res.value != 1 or 0 not in res.witness["superset"]:
            return False, f"star {k}: ttw {res.value}"
    return True, "stars with 3..6 leaves"


def criterion_inequality_suite():
    """atw <= ttw <= size, the torso-clique attachment bound, brg <= bog;
    exhaustive to 5 vertices and randomized at 6-7."""
    checked = 0
    for ag in corpus.all_annotated_up_to(5):
        ok, msg = _check_inequalities(ag)
        if not ok:
            return False, msg
        checked += 1
    rnd = random.Random(20250301)
    for n, count in ((6, 30), (7, 15)):
        for _ in range(count):
            ag = corpus.random_annotated(rnd, n, rnd.choice([0.25, 0.4, 0.6]))
            ok, msg = _check_inequalities(ag)
            if not ok:
                return False, msg
            checked += 1
    return True, f"{checked} annotated graphs, zero violations"


def _check_inequalities(ag):
    size = compute("size", ag).value
    ttw = compute("ttw", ag).value
    if ag.graph.n <= 7:
        atw = compute("atw", ag).value
        if not atw <= ttw <= size:
            return False, f"{ag}: atw {atw} ttw {ttw} size {size}"
    elif not ttw <= size:
        return False, f"{ag}: ttw {ttw} size {size}"
    if not torso_clique_bound_holds(ag):
        return False, f"{ag}: attachment bound failed"
    brg = compute("brg", ag).value
    bog = compute("bog", ag).value
    if brg > bog:
        return False, f"{ag}: brg {brg} > bog {bog}"
    return True, ""


def criterion_minor_monotonicity():
    """ttw, brg, bog, adbrg never grow under annotated minors."""
    kinds = ("ttw", "brg", "bog", "adbrg")
    hosts = corpus.all_annotated(4)
    rnd = random.Random(42)
    hosts += [corpus.random_annotated(rnd, 5, 0.5) for _ in range(12)]
    patterns = corpus.all_annotated_up_to(3)
    values = {}

    def val(kind, ag):
        key = (kind, canonical_key(ag.graph, ag.annot))
        if key not in values:
            values[key] = compute(kind, ag).value
        return values[key]

    pairs = 0
    for host in hosts:
        for pat in patterns:
            if pat.graph.n > host.graph.n:
                continue
            model = find_annotated_minor(host, pat)
            if model is None:
                continue
            pairs += 1
            for kind in kinds:
                if val(kind, pat) > val(kind, host):
                    return False, f"{kind} grew on {pat} <= {host}"
    return True, f"{pairs} witnessed pairs, four parameters each"


def criterion_grid_values():
    ag = outer_grid(3)
    got = (compute("brg", ag).value, compute("bog", ag).value,
           compute("adeg", ag).value, compute("ttw", ag).value)
    if got != (2, 3, 4, 3):
        return False, f"outer grid 3 parameters {got}"
    for k in range(1, 5):
        if compute("bog", outer_grid(k)).value != k:
            return False, f"bog of outer grid {k}"
    return True, "outer grid 3 values (2,3,4,3); bog of outer grids 1..4"


def criterion_even_cycle():
    f = corpus.even_cycle_formula()
    for n in range(2, 7):
        if not evaluate(cycle(2 * n).graph, f):
            return False, f"even cycle {2 * n} rejected"
        if evaluate(cycle(2 * n + 1).graph, f):
            return False, f"odd cycle {2 * n + 1} accepted"
    return True, "cycles with 4..13 vertices split by parity"


def _compiler_patterns():
    pats = list(corpus.all_annotated_up_to(3))
    for g in corpus.all_graphs(4):
        pats.append(AnnotatedGraph(g, ()))
        pats.append(AnnotatedGraph(g, g.vertices))
    return pats


def criterion_minor_formula_oracle():
    """Compiled containment formulas agree with the direct search."""
    pats = _compiler_patterns()
    formulas = [(p, minor_formula(p)) for p in pats]
    checked = 0
    hosts = []
    for g in corpus.all_graphs_up_to(6):
        hosts.append(AnnotatedGraph(g, ()))
        hosts.append(AnnotatedGraph(g, g.vertices))
    rnd = random.Random(777)
    for _ in range(500):
        n = rnd.choice([5, 6, 7, 8])
        g = corpus.random_graph(rnd, n, rnd.choice([0.2, 0.35, 0.5]))
        annot = frozenset(v for v in g.vertices if rnd.random() < 0.5)
        hosts.append(AnnotatedGraph(g, annot))
    for host in hosts:
        ev = Evaluator(host.graph)
        env_base = {"X": host.annot}
        for pat, f in formulas:
            if pat.graph.n > host.graph.n:
                continue
            direct = topo_model_search(host, pat) is not None
            via = ev.run(f, dict(env_base))
            checked += 1
            if direct != via:
                return False, (f"pattern {pat} on host {host.graph.name}: "
                               f"search {direct}, formula {via}")
    return True, f"{checked} pattern/host checks, 100% agreement"


def _random_fo_sentence(rnd):
    quantifiers = rnd.randint(1, 3)
    vars_ = [f"x{i}" for i in range(quantifiers)]

    def atom():
        a, b = rnd.choice(vars_), rnd.choice(vars_)
        return EdgeAtom(a, b) if rnd.random() < 0.7 else EqAtom(a, b)

    def boolean(depth):
        if depth == 0 or rnd.random() < 0.4:
            node = atom()
        else:
            op = rnd.choice([And, Or, Implies])
            node = op(boolean(depth - 1), boolean(depth - 1))
        return Not(node) if rnd.random() < 0.3 else node

    body = boolean(2)
    if not any(isinstance(n, EdgeAtom) for n in _walk(body)):
        body = And(body, atom() if rnd.random() < 0.5
                   else EdgeAtom(vars_[0], vars_[-1]))
    for v in reversed(vars_):
        body = Exists(v, body) if rnd.random() < 0.5 else Forall(v, body)
    return body


def _walk(node):
    from .logic import walk
    return walk(node)


def criterion_reduction_pipeline():
    """FO truth transfers through the leafed-subdivision reduction."""
    rnd = random.Random(31337)
    trials = 0
    for _ in range(200):
        n = rnd.randint(1, 5)
        h = corpus.random_graph(rnd, n, rnd.choice([0.25, 0.5, 0.75]))
        phi = _random_fo_sentence(rnd)
        red = hardness_reduce(h, phi, t=1)
        lhs = evaluate(h, phi)
        rhs = evaluate(red.host, red.formula)
        trials += 1
        if lhs != rhs:
            return False, (f"trial {trials}: H has {n} vertices "
                           f"{h.edges}, H gives {lhs}, host gives {rhs}")
        deg3 = {v for v in red.host.vertices if red.host.degree(v) >= 3}
        if deg3 != set(red.principal_map.values()):
            return False, f"trial {trials}: degree-3 vertices drifted"
    return True, f"{trials} random (graph, sentence) trials, 100% agreement"


def _collapse_instances():
    f_edge_in_small = parse_formula(
        "Exists[ttw<=1] X. (exists x. exists y. "
        "(x in X & y in X & E(x,y) & !(x = y)))")
    f_vacuous = parse_formula(
        "Forall[ttw<=1] X. (card(X) % 5 = 4 -> exists x. x in X)")
    f_odd_pair = parse_formula(
        "Exists[ttw<=2] X. (card(X) % 2 = 1 & exists x. exists y. "
        "(x in X & y in X & !(x = y)))")
    even = corpus.even_cycle_formula()
    return [
        ("k7-edge", clique(7).graph, f_edge_in_small, 2, 1),
        ("k7-vacuous", clique(7).graph, f_vacuous, 2, 1),
        ("k9-odd", clique(9).graph, f_odd_pair, 3, 2),
        ("k9-even-cycle", clique(9).graph, even, 3, 2),
    ]


def criterion_collapse_suite():
    """Collapse rewrite agrees on verified unbreakable instances, witness
    sizes stay within the bound, and the breakable control disagrees."""
    for name, g, f, q, w in _collapse_instances():
        ok, _ = is_unbreakable(g, g.vertices, q, w + 1)
        if not ok or g.n < 3 * q:
            return False, f"{name}: instance failed its precondition"
        rewritten = collapse_rewrite(f, q)
        if evaluate(g, f) != evaluate(g, rewritten):
            return False, f"{name}: rewrite disagreed"
    for g, q, k in ((clique(7).graph, 2, 1), (clique(9).graph, 3, 2)):
        rep = check_bounded_witness_size(g, q, k)
        if not rep["applicable"] or rep["violations"]:
            return False, f"witness size bound failed on {g.name}"
    # breakable control: the rewrite must be reported inapplicable and differ
    p9 = path(9).graph
    ok, _ = is_unbreakable(p9, p9.vertices, 2, 3)
    if ok:
        return False, "control instance unexpectedly unbreakable"
    even = corpus.even_cycle_formula()
    if evaluate(p9, even) == evaluate(p9, collapse_rewrite(even, 2)):
        return False, "control instance did not separate the rewrite"
    return True, ("4 unbreakable instances agree; witness bounds hold; "
                  "breakable control separates as expected")


def criterion_prenex_and_oracle():
    """Prenexing preserves evaluation; the evaluator matches the naive
    oracle."""
    formulas = corpus.formula_corpus()
    graphs = corpus.graph_corpus()
    for f in formulas:
        pf = to_prenex(f)
        for g in graphs:
            if evaluate(g, f) != evaluate(g, pf):
                return False, f"prenexing changed {f} on {g.name}"
    small = [g for g in graphs if g.n <= 6]
    for f in formulas:
        for g in small:
            if evaluate(g, f) != naive_evaluate(g, f):
                return False, f"naive oracle disagrees on {f} / {g.name}"
    return True, (f"{len(formulas)} formulas x {len(graphs)} graphs prenex; "
                  f"naive oracle on {len(small)} graphs")


def _transfer_tail(internal, annotate_end):
    verts = list(range(internal + 1))
    edges = [(i, i + 1) for i in range(internal)]
    annot = {internal} if annotate_end and internal else set()
    return BoundariedGraph(Graph(verts, edges, name=f"tail{internal}"),
                           annot, (0,))


def _transfer_contexts(rnd, count):
    out = []
    for _ in range(count):
        extra = rnd.randint(0, 4)
        verts = list(range(extra + 1))
        edges = []
        for v in range(1, extra + 1):
            edges.append((rnd.randint(0, v - 1), v))
        if extra >= 2 and rnd.random() < 0.5:
            edges.append((1, 2))
        annot = {v for v in verts[1:] if rnd.random() < 0.4}
        out.append(BoundariedGraph(Graph(verts, set(edges)), annot, (0,)))
    return out


def _composition_setup():
    def tail_piece(internal):
        verts = list(range(internal + 2))
        edges = [(i, i + 1) for i in range(internal + 1)]
        return BoundariedGraph(Graph(verts, edges), (), (0, internal + 1))

    battery = [
        parse_formula("exists x. exists y. (color(b_1,x) & color(b_2,y) "
                      "& conn(x,y))"),
        parse_formula("Exists[ttw<=2] X. (card(X) % 2 = 0 & forall y. y in X)"),
        corpus.even_cycle_formula(),
    ]
    conclusion = [
        corpus.connected_formula(),
        corpus.even_cycle_formula(),
        parse_formula(corpus.TRIANGLE_TEXT),
    ]
    contexts = []
    for internal in (1, 2, 3):
        c = tail_piece(internal)
        contexts.append((c, ()))
    return tail_piece(2), tail_piece(4), contexts, battery, conclusion


def criterion_composition_lab():
    rnd = random.Random(9090)
    # parameter transfer: equal-folio tails agree at the shipped level
    g1 = _transfer_tail(3, True)
    g2 = _transfer_tail(2, True)
    contexts = _transfer_contexts(rnd, 30)
    rep = check_param_transfer(g1, g2, contexts, level=2, w=1)
    if not rep["precondition_ok"] or rep["counterexample"] is not None:
        return False, f"transfer config failed: {rep}"
    # level-0 control: blind pair must produce a counterexample
    bare = BoundariedGraph(Graph([0]), (), (0,))
    blob = BoundariedGraph(
        Graph(range(4), [(0, 1), (1, 2), (2, 3), (1, 3)]), {1, 2, 3}, (0,))
    rep0 = check_param_transfer(bare, blob, [bare] + contexts, level=0, w=1)
    if not rep0["precondition_ok"] or rep0["counterexample"] is None:
        return False, f"level-0 control produced no counterexample: {rep0}"
    # composition: equal battery types compose
    left, right, comp_contexts, battery, conclusion = _composition_setup()
    repc = check_composition(left, (), right, (), comp_contexts,
                             battery, conclusion)
    if not repc["hypothesis_equal"] or repc["counterexamples"]:
        return False, f"composition config failed: {repc}"
    # degenerate control: empty hypothesis battery, parity-breaking pair
    def tail_piece(internal):
        verts = list(range(internal + 2))
        edges = [(i, i + 1) for i in range(internal + 1)]
        return BoundariedGraph(Graph(verts, edges), (), (0, internal + 1))

    repd = check_composition(tail_piece(1), (), tail_piece(2), (),
                             comp_contexts, [], conclusion)
    if not repd["hypothesis_equal"] or not repd["counterexamples"]:
        return False, "empty-battery control produced no counterexample"
    return True, ("transfer and composition agree at shipped configs; "
                  "both degenerate controls produce counterexamples")


def criterion_minidp():
    shrunk = 0
    total = 0
    for name, g, t, battery, level, budget in corpus.minidp_corpus():
        rep = mini_dp(g, t, list(battery), level, budget)
        total += 1
        if not rep.oracle_ok:
            return False, f"{name}: oracle mismatch"
        if rep.shrank:
            shrunk += 1
    if shrunk * 2 < total:
        return False, f"only {shrunk} of {total} instances shrank"
    return True, f"{total} instances, oracle 100%, {shrunk} shrank"


def criterion_expressiveness():
    # ttw-bounded quantification on cliques ranges over small sets only
    for n in range(2, 8):
        g = clique(n).graph
        for k in (0, 1, 2):
            got = sum(1 for _ in enumerate_bounded_sets(g, "ttw", k))
            want = sum(1 for r in range(min(k + 1, n) + 1)
                       for _ in itertools.combinations(range(n), r))
            if got != want:
                return False, f"clique {n} bound {k}: {got} sets"
    # on bounded-treewidth graphs the quantifier sees every subset
    for ag in (path(5), grid(2), star(4)):
        g = ag.graph
        got = sum(1 for _ in enumerate_bounded_sets(g, "ttw", 3))
        if got != 2 ** g.n:
            return False, f"{g.name}: {got} of {2 ** g.n} subsets"
    # connectivity sentence separates one grid from two
    f = corpus.connected_formula()
    g3 = grid(3).graph
    two = Graph(list(range(18)),
                list(g3.edges) + [(u + 9, v + 9) for u, v in g3.edges])
    if not evaluate(g3, f) or evaluate(two, f):
        return False, "connectivity sentence failed to separate"
    # twisted grids: only the twisted variant holds a Kuratowski graph
    k33 = AnnotatedGraph(Graph(range(6),
                               [(i, j) for i in range(3) for j in range(3, 6)]))
    k5 = clique(5)
    h3 = twisted_grid_h(3)
    g3t = twisted_grid_g(3)
    h3_has = (find_annotated_topological_minor(h3, k33) is not None
              or find_annotated_topological_minor(h3, k5) is not None)
    g3_has = (find_annotated_topological_minor(g3t, k33) is not None
              or find_annotated_topological_minor(g3t, k5) is not None)
    if not h3_has or g3_has:
        return False, f"twisted grids: twisted={h3_has} straight={g3_has}"
    return True, ("clique quantifier counts, full-range counts, "
                  "connectivity separation, twisted-grid containment")


CRITERIA = [
    ("clique-ttw", criterion_clique_ttw),
    ("star-worked-example", criterion_star_example),
    ("parameter-inequalities", criterion_inequality_suite),
    ("minor-monotonicity", criterion_minor_monotonicity),
    ("grid-values", criterion_grid_values),
    ("even-cycle-separation", criterion_even_cycle),
    ("containment-formula-oracle", criterion_minor_formula_oracle),
    ("reduction-pipeline", criterion_reduction_pipeline),
    ("collapse-suite", criterion_collapse_suite),
    ("prenex-and-naive-oracle", criterion_prenex_and_oracle),
    ("composition-lab", criterion_composition_lab),
    ("mini-dp-oracle", criterion_minidp),
    ("expressiveness-demos", criterion_expressiveness),
]


def run_all(names=None, out=print):
    results = []
    for name, fn in CRITERIA:
        if names and name not in names:
            continue
        t0 = time.time()
        try:
            ok, detail = fn()
        except AnnotmcError as exc:
            ok, detail = False, f"error: {exc}"
        dt = time.time() - t0
        results.append(Verdict(name, ok, detail, dt))
        out(f"{'PASS' if ok else 'FAIL'}  {name}  ({dt:.1f}s)  {detail}")
    return results
