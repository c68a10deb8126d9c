"""Formula transformations: the topological-containment formula compiler,
the unbreakable-graph collapse of ttw-bounded set quantifiers to bounded
element tuples, and the FO-to-set-quantifier reduction over leafed
subdivisions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import EnvelopeError, SemanticError
from .graphs import AnnotatedGraph, Graph, leaf_augment, subdivide
from .logic import (And, CardModAtom, DpAtom, EdgeAtom, EqAtom, Exists,
                    Forall, Iff, Implies, MemberAtom, Not, Or, SetExists,
                    SetForall, TtwLeAtom, conj, disj, fragment_of,
                    free_vars, is_prenex, to_prenex, walk)

_PATTERN_LIMIT = 5


class _Names:
    """Fresh lowercase variable names avoiding a reserved set."""

    def __init__(self, avoid):
        self.avoid = set(avoid)
        self.counter = 0

    def fresh(self, stem):
        while True:
            self.counter += 1
            name = f"{stem}{self.counter}"
            if name not in self.avoid:
                self.avoid.add(name)
                return name


# ---------------------------------------------------------------------------
# containment formula compiler
# ---------------------------------------------------------------------------

def minor_formula(pattern, setvar="X"):
    """A dp-logic formula with one free set variable that holds on (G, S)
    exactly when the annotated pattern is a topological minor of (G, S).

    Images of the pattern vertices are quantified existentially and required
    pairwise distinct; every way of splitting the pattern edges into directly
    realized ones and routed ones contributes a disjunct, where routed edges
    leave their endpoints through quantified neighbors joined by disjoint
    paths, and trivial self-paths on all images keep the paths clear of them.
    """
    pg, py = pattern.graph, pattern.annot
    if pg.n > _PATTERN_LIMIT:
        raise EnvelopeError(
            f"pattern for formula compilation limited to {_PATTERN_LIMIT} vertices")
    if pg.n == 0:
        raise SemanticError("pattern must have at least one vertex")
    img = {v: f"h{v}" for v in pg.vertices}
    parts = []
    verts = list(pg.vertices)
    for i, u in enumerate(verts):
        for v in verts[i + 1:]:
            parts.append(Not(EqAtom(img[u], img[v])))
    for v in sorted(py):
        parts.append(MemberAtom(img[v], setvar))
    # necessary degree guards: an image must carry the pattern degree
    for v in verts:
        d = pg.degree(v)
        if d:
            parts.append(_degree_guard(img[v], d, f"n{v}"))
    edges = [tuple(sorted(e)) for e in pg.edges]
    edges.sort()
    if edges:
        self_pairs = tuple((img[v], img[v]) for v in verts)
        disjuncts = []
        for routed_idx in _index_subsets(len(edges)):
            routed = [edges[i] for i in routed_idx]
            direct = [e for i, e in enumerate(edges) if i not in routed_idx]
            lits = [EdgeAtom(img[u], img[v]) for u, v in direct]
            if routed:
                lits.append(_routing_block(routed, img, self_pairs))
            disjuncts.append(conj(lits) if lits
                             else EqAtom(img[verts[0]], img[verts[0]]))
        parts.append(disj(disjuncts))
    body = conj(parts) if parts else EqAtom(img[verts[0]], img[verts[0]])
    for v in reversed(verts):
        body = Exists(img[v], body)
    return body


def _index_subsets(n):
    for r in range(n + 1):
        yield from (set(c) for c in itertools.combinations(range(n), r))


def _degree_guard(x, d, stem):
    """x has at least d distinct neighbors."""
    names = [f"{stem}_{i}" for i in range(d)]
    body = None
    for i in reversed(range(d)):
        lits = [EdgeAtom(x, names[i])]
        lits += [Not(EqAtom(names[i], names[j])) for j in range(i)]
        if body is not None:
            lits.append(body)
        body = Exists(names[i], conj(lits))
    return body


def _routing_block(routed, img, self_pairs):
    """Quantify the path exits of the routed edges innermost-first; each
    level conjoins the disjoint-paths check over the pairs bound so far
    (implied by the full check, so equivalence is untouched, but failing
    prefixes are pruned early)."""
    r = len(routed)
    svars = [f"s{i}" for i in range(r)]
    tvars = [f"t{i}" for i in range(r)]
    block = None
    for i in reversed(range(r)):
        u, v = routed[i]
        prefix = tuple(zip(svars[:i + 1], tvars[:i + 1])) + self_pairs
        check = DpAtom(prefix)
        inner = check if block is None else And(check, block)
        block = Exists(svars[i], And(
            EdgeAtom(img[u], svars[i]),
            Exists(tvars[i], And(EdgeAtom(img[v], tvars[i]), inner))))
    return block


# ---------------------------------------------------------------------------
# collapse of ttw-bounded set quantifiers
# ---------------------------------------------------------------------------

def collapse_rewrite(formula, q):
    """Replace each ttw-bounded set quantifier by q element variables whose
    value set is checked by the semantic ttw atom; membership atoms become
    equality disjunctions and card atoms become distinctness patterns.

    Sound in one direction everywhere (a bounded tuple always yields a
    witness set); equivalence needs every witness set to have between 1 and
    q elements, which the suite verifies on unbreakable instances and
    documents on breakable controls.
    """
    if q < 1:
        raise SemanticError("collapse needs a positive tuple length")
    for n in walk(formula):
        if isinstance(n, (SetExists, SetForall)) and n.pkind != "ttw":
            raise SemanticError(
                f"collapse applies to ttw-bounded quantifiers only, found {n.pkind}")
    if not is_prenex(formula):
        formula = to_prenex(formula)
    names = _Names(free_vars(formula) | {str(v) for n in walk(formula)
                                         if hasattr(n, "var")
                                         for v in [n.var]})
    return _collapse(formula, q, names)


def _collapse(node, q, names):
    if isinstance(node, SetExists):
        xs = [names.fresh("w") for _ in range(q)]
        body = _collapse(_subst_set(node.body, node.var, xs), q, names)
        out = And(TtwLeAtom(node.bound, tuple(xs)), body)
        for x in reversed(xs):
            out = Exists(x, out)
        return out
    if isinstance(node, SetForall):
        xs = [names.fresh("w") for _ in range(q)]
        body = _collapse(_subst_set(node.body, node.var, xs), q, names)
        out = Implies(TtwLeAtom(node.bound, tuple(xs)), body)
        for x in reversed(xs):
            out = Forall(x, out)
        return out
    if isinstance(node, Not):
        return Not(_collapse(node.body, q, names))
    if isinstance(node, (And, Or, Implies, Iff)):
        return type(node)(_collapse(node.left, q, names),
                          _collapse(node.right, q, names))
    if isinstance(node, (Exists, Forall)):
        return type(node)(node.var, _collapse(node.body, q, names))
    return node


def _subst_set(node, setvar, xs):
    if isinstance(node, MemberAtom) and node.setvar == setvar:
        return disj([EqAtom(node.x, x) for x in xs])
    if isinstance(node, CardModAtom) and node.setvar == setvar:
        return _cardinality_pattern(xs, node.modulus, node.residue)
    if isinstance(node, Not):
        return Not(_subst_set(node.body, setvar, xs))
    if isinstance(node, (And, Or, Implies, Iff)):
        return type(node)(_subst_set(node.left, setvar, xs),
                          _subst_set(node.right, setvar, xs))
    if isinstance(node, (Exists, Forall)):
        return type(node)(node.var, _subst_set(node.body, setvar, xs))
    if isinstance(node, (SetExists, SetForall)):
        if node.var == setvar:
            return node
        return type(node)(node.pkind, node.bound, node.var,
                          _subst_set(node.body, setvar, xs))
    return node


def _cardinality_pattern(xs, modulus, residue):
    """The tuple's value set has size congruent to the residue: disjunction
    over representative index sets."""
    q = len(xs)
    options = []
    for r in range(1, q + 1):
        if r % modulus != residue:
            continue
        for reps in itertools.combinations(range(q), r):
            lits = []
            reps_set = set(reps)
            for i, j in itertools.combinations(reps, 2):
                lits.append(Not(EqAtom(xs[i], xs[j])))
            for j in range(q):
                if j not in reps_set:
                    lits.append(disj([EqAtom(xs[j], xs[i]) for i in reps]))
            options.append(conj(lits))
    if not options:
        return Not(EqAtom(xs[0], xs[0]))
    return disj(options)


# ---------------------------------------------------------------------------
# FO reduction over leafed subdivisions
# ---------------------------------------------------------------------------

@dataclass
class ReductionOutput:
    host: Graph
    formula: object
    principal_map: dict
    subdivision: int


def hardness_reduce(h, formula, t=1):
    """Encode FO model checking on an arbitrary small graph into evaluation
    of a ttw-quantified sentence on a leafed subdivision.

    Every vertex of the input gets two private leaves (so original vertices
    are exactly the degree>=3 host vertices), every edge is subdivided t
    times, quantifiers are relativized to degree>=3 vertices, and the edge
    atom becomes adjacency through a quantified set of degree-2 vertices
    closed under neighborhoods.
    """
    if isinstance(h, AnnotatedGraph):
        h = h.graph
    if fragment_of(formula) != "FO":
        raise SemanticError("the reduction input must be a pure FO formula")
    if t < 1:
        raise SemanticError("subdivision length must be at least 1")
    augmented = leaf_augment(h).graph
    # two leaves leave an isolated input vertex at degree 2, below the
    # degree-3 relativization threshold; give those vertices a third leaf
    lonely = [v for v in h.vertices if h.degree(v) == 0]
    if lonely:
        nxt = max(augmented.vertices) + 1
        verts = list(augmented.vertices)
        edges = list(augmented.edges)
        for v in lonely:
            verts.append(nxt)
            edges.append((v, nxt))
            nxt += 1
        augmented = Graph(verts, edges, name=augmented.name)
    host = subdivide(augmented, t).graph
    names = _Names({v for n in walk(formula) if hasattr(n, "var")
                    for v in [n.var]} | free_vars(formula))
    psi = _reduce_formula(formula, names)
    return ReductionOutput(host=host, formula=psi,
                           principal_map={v: v for v in h.vertices},
                           subdivision=t)


def _deg_at_least_3(x, names):
    a, b, c = names.fresh("d"), names.fresh("d"), names.fresh("d")
    return Exists(a, And(EdgeAtom(x, a),
                  Exists(b, And(EdgeAtom(x, b), And(Not(EqAtom(b, a)),
                  Exists(c, conj([EdgeAtom(x, c), Not(EqAtom(c, a)),
                                  Not(EqAtom(c, b))])))))))


def _deg_exactly_2(x, names):
    a, b = names.fresh("d"), names.fresh("d")
    c = names.fresh("d")
    return Exists(a, And(EdgeAtom(x, a),
                  Exists(b, conj([EdgeAtom(x, b), Not(EqAtom(a, b)),
                                  Forall(c, Implies(EdgeAtom(x, c),
                                                    Or(EqAtom(c, a),
                                                       EqAtom(c, b))))]))))


def _path_adjacency(x, y, names):
    """Adjacency through a quantified set of degree-2 vertices that touches
    both endpoints and is closed under neighborhoods up to the endpoints."""
    setvar = "P" + names.fresh("p")[1:]
    a, b = names.fresh("p"), names.fresh("p")
    u, w = names.fresh("p"), names.fresh("p")
    touches_x = Exists(a, And(MemberAtom(a, setvar), EdgeAtom(x, a)))
    touches_y = Exists(b, And(MemberAtom(b, setvar), EdgeAtom(y, b)))
    all_deg2 = Forall(u, Implies(MemberAtom(u, setvar),
                                 _deg_exactly_2(u, names)))
    closed = Forall(w, Implies(
        MemberAtom(w, setvar),
        Forall(u, Implies(EdgeAtom(w, u),
                          disj([MemberAtom(u, setvar),
                                EqAtom(u, x), EqAtom(u, y)])))))
    body = conj([touches_x, touches_y, all_deg2, closed])
    return Or(EdgeAtom(x, y), SetExists("ttw", 2, setvar, body))


def _reduce_formula(node, names):
    if isinstance(node, EdgeAtom):
        return _path_adjacency(node.x, node.y, names)
    if isinstance(node, EqAtom):
        return node
    if isinstance(node, Not):
        return Not(_reduce_formula(node.body, names))
    if isinstance(node, (And, Or, Implies, Iff)):
        return type(node)(_reduce_formula(node.left, names),
                          _reduce_formula(node.right, names))
    if isinstance(node, Exists):
        return Exists(node.var, And(_deg_at_least_3(node.var, names),
                                    _reduce_formula(node.body, names)))
    if isinstance(node, Forall):
        return Forall(node.var, Implies(_deg_at_least_3(node.var, names),
                                        _reduce_formula(node.body, names)))
    raise SemanticError("the reduction input must be a pure FO formula")
