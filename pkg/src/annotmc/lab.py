"""Falsification harnesses: parameter transfer across gluing, composition
of battery types, replacement validity inside decompositions, cone
unbreakability bounds, and the miniature folio-replacement pipeline."""

from __future__ import annotations

from dataclasses import dataclass, field

from .decomp import TreeDecomposition, extract_cone, is_regular, \
    validate as validate_decomp
from .errors import AnnotmcError, PreconditionError
from .evaluator import Evaluator, battery_type, ext_battery_type, evaluate
from .folio import (compatible, compatible_tupled, ext_folio_equal,
                    find_representative, glue, glue_tupled)
from .graphs import AnnotatedGraph, BoundariedGraph, Graph, is_unbreakable
from .minors import find_annotated_topological_minor
from .params import compute


class OracleMismatch(AnnotmcError):
    """The shrunken pipeline graph disagreed with direct evaluation."""


def _binom_le(q, ell):
    from math import comb
    return sum(comb(q, i) for i in range(ell + 1))


# ---------------------------------------------------------------------------
# replacement inside a decomposition
# ---------------------------------------------------------------------------

def replace_cone(g, t, node, replacement, folio_level, q=None, k=None):
    """Substitute the cone at a node by a compatible boundaried graph with
    equal extended folio and matching inner connectivity; asserts that
    adhesions, regularity, and strong unbreakability of untouched nodes
    survive the surgery.  Returns (new graph, new decomposition, report)."""
    cone_bg = extract_cone(g, t, node)
    if not compatible(replacement, cone_bg):
        raise PreconditionError("replacement incompatible with the cone")
    if not ext_folio_equal(replacement, cone_bg, folio_level):
        raise PreconditionError("replacement has a different extended folio")
    inner_old = cone_bg.graph.without(cone_bg.boundary)
    inner_new = replacement.graph.without(replacement.boundary)
    if inner_old.is_connected() != inner_new.is_connected():
        raise PreconditionError("replacement changes inner connectivity")

    new_g, mapping = _surgery(g, t.cone(node), sorted(t.adh(node)), replacement)
    keep = [x for x in t.nodes if x == node or node not in _ancestors(t, x)]
    bags = {x: (frozenset(mapping[v] for v in replacement.graph.vertices)
                if x == node else t.bag[x]) for x in keep}
    parent = {x: t.parent[x] for x in keep}
    new_t = TreeDecomposition(bags, parent, name=f"{t.name}-replaced")

    report = {"adhesion_before": t.adhesion(), "adhesion_after": new_t.adhesion()}
    for x in keep:
        if x != node and new_t.adh(x) != t.adh(x):
            raise AssertionError(f"adhesion of node {x} changed")
    if new_t.adhesion() > t.adhesion():
        raise AssertionError("replacement increased the adhesion")
    ok, _ = validate_decomp(new_t, new_g)
    if not ok:
        raise AssertionError("replacement produced an invalid decomposition")
    if is_regular(t, g)[0]:
        if not is_regular(new_t, new_g)[0]:
            raise AssertionError("replacement broke regularity")
        report["regular_preserved"] = True
    if q is not None and k is not None:
        for x in keep:
            if x == node:
                continue
            before = is_unbreakable(g.induced(t.cone(x)), t.bag[x], q, k)[0]
            if before:
                after = is_unbreakable(new_g.induced(new_t.cone(x)),
                                       new_t.bag[x], q, k)[0]
                if not after:
                    raise AssertionError(
                        f"replacement broke unbreakability at node {x}")
        report["unbreakability_preserved"] = True
    return new_g, new_t, report


def _ancestors(t, x):
    out = set()
    p = t.parent[x]
    while p is not None:
        out.add(p)
        p = t.parent[p]
    return out


def _surgery(g, cone_vertices, adhesion, replacement):
    """Remove the cone interior and glue the replacement onto the adhesion
    (its boundary maps to the adhesion in ascending order)."""
    interior = set(cone_vertices) - set(adhesion)
    rest = g.without(interior)
    mapping = {}
    for i, b in enumerate(replacement.boundary):
        mapping[b] = adhesion[i]
    nxt = (max(g.vertices) + 1) if g.vertices else 0
    for v in replacement.graph.vertices:
        if v not in mapping:
            mapping[v] = nxt
            nxt += 1
    verts = set(rest.vertices) | set(mapping.values())
    edges = set(rest.edges)
    edges.update(tuple(sorted((mapping[u], mapping[v])))
                 for u, v in replacement.graph.edges)
    return Graph(verts, edges, name=f"{g.name}^"), mapping


def check_tm_preserved(g, g_hat, pattern, h):
    """Whether exclusion of the pattern (of size at most h) survives the
    replacement."""
    if pattern.graph.n > h:
        raise PreconditionError("pattern larger than the declared size bound")
    before = find_annotated_topological_minor(
        AnnotatedGraph(g), pattern) is not None
    after = find_annotated_topological_minor(
        AnnotatedGraph(g_hat), pattern) is not None
    return {"contains_before": before, "contains_after": after,
            "exclusion_preserved": before or not after}


# ---------------------------------------------------------------------------
# parameter transfer across gluing
# ---------------------------------------------------------------------------

def check_param_transfer(g1, g2, contexts, level, w, kind="ttw"):
    """For folio-equivalent boundaried graphs, gluing the same context must
    not flip whether the parameter stays within w.  Reports agreement or the
    first counterexample context."""
    report = {"level": level, "w": w, "kind": kind,
              "precondition_ok": True, "counterexample": None,
              "contexts": len(contexts), "agreements": 0}
    if not compatible(g1, g2) or not ext_folio_equal(g1, g2, level):
        report["precondition_ok"] = False
        return report
    for idx, c in enumerate(contexts):
        v1 = compute(kind, glue(c, g1)).value <= w
        v2 = compute(kind, glue(c, g2)).value <= w
        if v1 != v2:
            report["counterexample"] = {"context": idx, "left": v1, "right": v2}
            return report
        report["agreements"] += 1
    return report


def param_transfer_sweep(g1, g2, contexts, w_values, levels, kind="ttw"):
    """Least folio level per w for which the trial set shows no
    counterexample; empirical only."""
    out = {}
    for w in w_values:
        out[w] = None
        for level in levels:
            rep = check_param_transfer(g1, g2, contexts, level, w, kind)
            if rep["precondition_ok"] and rep["counterexample"] is None:
                out[w] = level
                break
    return out


# ---------------------------------------------------------------------------
# composition of battery types
# ---------------------------------------------------------------------------

def check_composition(g1, r1, g2, r2, contexts, battery, conclusion_battery):
    """If two tupled boundaried graphs have equal extended battery types,
    gluing any common context should leave every conclusion formula
    unchanged.  A counterexample shows the hypothesis battery was too weak
    for the conclusion, never a refutation of compositionality itself."""
    if not compatible_tupled(g1, r1, g2, r2):
        raise PreconditionError("sides are not compatible")
    entries = [(f, r1) for f in battery]
    entries2 = [(f, r2) for f in battery]
    hyp_equal = (ext_battery_type(g1, entries) == ext_battery_type(g2, entries2))
    report = {"hypothesis_equal": hyp_equal, "contexts": len(contexts),
              "agreements": 0, "counterexamples": [],
              "note": ("a counterexample means the hypothesis battery was too "
                       "weak for the conclusion battery")}
    for idx, (c, qbar) in enumerate(contexts):
        glued1, t1 = glue_tupled(c, qbar, g1, r1)
        glued2, t2 = glue_tupled(c, qbar, g2, r2)
        vec1 = _conclusion_vector(glued1, t1, conclusion_battery)
        vec2 = _conclusion_vector(glued2, t2, conclusion_battery)
        if vec1 == vec2:
            report["agreements"] += 1
        else:
            report["counterexamples"].append(
                {"context": idx, "left": vec1, "right": vec2})
    return report


def _conclusion_vector(ag, tuples, battery):
    out = []
    for f in battery:
        ev = Evaluator(ag.graph)
        if tuples:
            out.append(ev.run_restricted(f, tuples))
        else:
            out.append(ev.run(f))
    return tuple(out)


# ---------------------------------------------------------------------------
# bound-check experiments
# ---------------------------------------------------------------------------

def check_bounded_witness_size(g, q, k):
    """On a verified (q, k+1)-unbreakable graph with at least 3q vertices,
    every superset achieving the torso-treewidth minimum for a set within
    bound k must have at most q vertices.  Returns a report."""
    from .params import torso, treewidth

    ok, _ = is_unbreakable(g, g.vertices, q, k + 1)
    report = {"q": q, "k": k, "n": g.n, "unbreakable": ok,
              "applicable": ok and g.n >= 3 * q, "violations": [],
              "checked": 0}
    if not report["applicable"]:
        return report
    if g.n > 10:
        raise PreconditionError("witness-size check limited to 10 vertices")
    n = g.n
    full = (1 << n) - 1
    torso_tw = [treewidth(torso(g, frozenset(g.ids(m)))).value
                for m in range(1 << n)]
    # minimum torso width over all supersets, per subset
    ttw_of = list(torso_tw)
    for m in range(full, -1, -1):
        rest = full & ~m
        sub = rest
        while sub:
            low = sub & -sub
            ttw_of[m] = min(ttw_of[m], ttw_of[m | low])
            sub ^= low
    for m in range(1 << n):
        if ttw_of[m] > k:
            continue
        report["checked"] += 1
        rest = full & ~m
        sup = rest
        while True:
            cand = m | sup
            if torso_tw[cand] == ttw_of[m] and bin(cand).count("1") > q:
                report["violations"].append(
                    {"set": sorted(g.ids(m)), "superset": sorted(g.ids(cand))})
                break
            if sup == 0:
                break
            sup = (sup - 1) & rest
    return report


def check_cone_unbreakability_bound(g, t, node, q, k, ell, c):
    """When the bag is unbreakable in its cone, children adhesions are
    pairwise distinct, and child cones are small, the whole cone must be
    unbreakable with budget c*(binom(q,<=ell)+k)+q.  The tighter expression
    c*binom(q,<=ell)+k sometimes quoted for this bound differs from the one
    the counting argument actually yields; both are reported."""
    cone = g.induced(t.cone(node))
    bag_ok, _ = is_unbreakable(cone, t.bag[node], q, k)
    kids = t.children(node)
    adhesions = [frozenset(t.adh(z)) for z in kids]
    distinct = len(set(adhesions)) == len(adhesions)
    small = all(len(t.cone(z)) <= c for z in kids)
    premises = bag_ok and distinct and small and t.adhesion() <= ell
    proof_bound = c * (_binom_le(q, ell) + k) + q
    displayed_bound = c * _binom_le(q, ell) + k
    report = {"premises_hold": premises, "proof_bound": proof_bound,
              "displayed_bound": displayed_bound,
              "bounds_differ": proof_bound != displayed_bound,
              "conclusion_holds": None}
    if premises:
        ok, _ = is_unbreakable(cone, cone.vertices, proof_bound, k)
        report["conclusion_holds"] = ok
    return report


# ---------------------------------------------------------------------------
# the miniature replacement pipeline
# ---------------------------------------------------------------------------

@dataclass
class MiniDpReport:
    initial_vertices: int
    final_vertices: int
    replacements: list = field(default_factory=list)
    fallbacks: int = 0
    oracle_ok: bool = True
    verdicts_before: tuple = ()
    verdicts_after: tuple = ()

    @property
    def shrank(self):
        return self.final_vertices < self.initial_vertices


def mini_dp(g, t, battery, level, budget):
    """Post-order folio/battery replacement over a tree decomposition.

    At each node the children are grouped under inclusion-maximal adhesions,
    each grouped union of cones is swapped for a small representative with
    equal extended folio and battery type when one exists (otherwise kept),
    and at the end every battery formula must evaluate exactly as on the
    original graph; a mismatch fails loudly, rerunning with replacements
    disabled to tell a pipeline bug from a too-weak battery."""
    report = _mini_dp_run(g, t, battery, level, budget, enabled=True)
    if not report.oracle_ok:
        control = _mini_dp_run(g, t, battery, level, budget, enabled=False)
        reason = ("replacement granularity too coarse for the battery"
                  if control.oracle_ok else "pipeline bug independent of replacement")
        raise OracleMismatch(
            f"final verdicts {report.verdicts_after} differ from direct "
            f"evaluation {report.verdicts_before}; {reason}")
    return report


def _mini_dp_run(g, t, battery, level, budget, enabled):
    ok, diags = validate_decomp(t, g)
    if not ok:
        raise PreconditionError(f"invalid decomposition: {diags[0]}")
    if not is_regular(t, g)[0]:
        raise PreconditionError("decomposition must be regular")
    before = tuple(evaluate(g, f) for f in battery)

    cur_g = g
    bags = dict(t.bag)
    parent = dict(t.parent)
    removed = set()
    report = MiniDpReport(initial_vertices=g.n, final_vertices=g.n,
                          verdicts_before=before)

    for node in t.postorder():
        if node in removed:
            continue
        cur_t = TreeDecomposition({x: bags[x] for x in bags if x not in removed},
                                  {x: parent[x] for x in bags if x not in removed})
        kids = [z for z in cur_t.children(node)]
        if not kids:
            continue
        groups = _max_adhesion_groups(cur_t, kids)
        for adh_set, members in groups:
            piece_vertices = set()
            subtree_nodes = []
            for y in members:
                piece_vertices |= cur_t.cone(y)
                subtree_nodes.extend(cur_t.subtree(y))
            piece = BoundariedGraph(cur_g.induced(piece_vertices), (),
                                    sorted(adh_set))
            rep = None
            if enabled:
                rep = find_representative(piece, level, budget, battery or None)
            if rep is not None and rep.graph.n < piece.graph.n:
                cur_g, mapping = _surgery(cur_g, piece_vertices,
                                          sorted(adh_set), rep)
                keep_node = members[0]
                for x in subtree_nodes:
                    if x != keep_node:
                        removed.add(x)
                bags[keep_node] = frozenset(mapping[v]
                                            for v in rep.graph.vertices)
                parent[keep_node] = node
                report.replacements.append(
                    {"node": node, "group": sorted(adh_set),
                     "from": piece.graph.n, "to": rep.graph.n})
            else:
                report.fallbacks += 1
    report.final_vertices = cur_g.n
    report.verdicts_after = tuple(evaluate(cur_g, f) for f in battery)
    report.oracle_ok = report.verdicts_after == before
    return report


def _max_adhesion_groups(t, kids):
    """Group children under inclusion-maximal adhesion sets; children with
    equal adhesions share a group."""
    adh = {z: frozenset(t.adh(z)) for z in kids}
    maximal = []
    for z in sorted(kids):
        a = adh[z]
        if not any(a < adh[z2] for z2 in kids if z2 != z):
            if a not in [m for m, _ in maximal]:
                maximal.append((a, []))
    for z in sorted(kids):
        a = adh[z]
        for m, members in maximal:
            if a <= m:
                members.append(z)
                break
    return [(m, members) for m, members in maximal if members]
