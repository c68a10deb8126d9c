"""Shared corpora: exhaustive small-graph enumeration up to isomorphism,
named instances, random graphs, the formula corpus, and the decomposed
instances for the replacement pipeline."""

from __future__ import annotations

import itertools
import random

from .canonical import canonical_key
from .decomp import TreeDecomposition
from .graphs import (AnnotatedGraph, Graph, clique, cycle, grid, outer_grid,
                     path, rainbow_grid, star)
from .logic import parse_formula

_all_graphs_cache = {}


def all_graphs(n):
    """Every graph on exactly n vertices, one per isomorphism class."""
    if n in _all_graphs_cache:
        return _all_graphs_cache[n]
    seen = {}
    pairs = list(itertools.combinations(range(n), 2))
    for bits in range(1 << len(pairs)):
        edges = [pairs[i] for i in range(len(pairs)) if bits >> i & 1]
        g = Graph(range(n), edges, name=f"g{n}_{bits}")
        key = canonical_key(g)
        if key not in seen:
            seen[key] = g
    out = tuple(seen.values())
    _all_graphs_cache[n] = out
    return out


def all_graphs_up_to(n):
    out = []
    for i in range(1, n + 1):
        out.extend(all_graphs(i))
    return out


def all_annotated(n):
    """Every annotated graph on exactly n vertices up to isomorphism."""
    out = []
    for g in all_graphs(n):
        seen = set()
        for r in range(g.n + 1):
            for annot in itertools.combinations(g.vertices, r):
                key = canonical_key(g, frozenset(annot))
                if key not in seen:
                    seen.add(key)
                    out.append(AnnotatedGraph(g, annot))
    return out


def all_annotated_up_to(n):
    out = []
    for i in range(1, n + 1):
        out.extend(all_annotated(i))
    return out


def random_graph(rnd, n, p):
    edges = [e for e in itertools.combinations(range(n), 2) if rnd.random() < p]
    return Graph(range(n), edges, name=f"rnd{n}")


def random_annotated(rnd, n, p):
    g = random_graph(rnd, n, p)
    annot = [v for v in g.vertices if rnd.random() < 0.5]
    return AnnotatedGraph(g, annot)


def named_graphs():
    """Small named instances used across demos and golden tests."""
    out = {}
    for n in range(3, 9):
        out[f"p{n}"] = path(n)
        out[f"c{n}"] = cycle(n)
    for n in range(2, 8):
        out[f"k{n}"] = clique(n)
    for k in range(2, 6):
        out[f"star{k}"] = star(k)
    out["grid2"] = grid(2)
    out["grid3"] = grid(3)
    out["outer3"] = outer_grid(3)
    out["rainbow3"] = rainbow_grid(3)
    return out


# ---------------------------------------------------------------------------
# formulas
# ---------------------------------------------------------------------------

EVEN_CYCLE_TEXT = ("Exists[ttw<=2] X. forall x. forall y. (E(x,y) -> "
                   "((x in X & !(y in X)) | (!(x in X) & y in X)))")

CONNECTED_TEXT = "exists x. forall y. conn(x,y)"

TRIANGLE_TEXT = ("exists x. exists y. exists z. (E(x,y) & E(y,z) & E(x,z) "
                 "& !(x = y) & !(y = z) & !(x = z))")


def even_cycle_formula():
    return parse_formula(EVEN_CYCLE_TEXT)


def connected_formula():
    return parse_formula(CONNECTED_TEXT)


def formula_corpus():
    """Formulas exercised by the prenex and naive-oracle agreement suites.
    All are soundly prenexable (set quantifiers never sit under an element
    quantifier of opposite polarity)."""
    texts = [
        "exists x. exists y. E(x,y)",
        "forall x. exists y. (E(x,y) | x = y)",
        "(exists x. forall y. (x = y | E(x,y))) & (exists z. exists w. E(z,w))",
        "!(exists x. forall y. E(x,y))",
        "exists x. (forall y. (E(x,y) -> exists z. (E(y,z) & !(z = x))))",
        TRIANGLE_TEXT,
        CONNECTED_TEXT,
        "exists x. exists y. (!(x = y) & !conn(x,y))",
        "exists a. exists b. exists c. exists d. (E(a,b) & E(b,c) & E(c,d)"
        " & E(d,a) & !(a = c) & !(b = d) & dp(a,c; b,d))",
        "exists s. exists t. (!(s = t) & dp(s,t))",
        EVEN_CYCLE_TEXT,
        "Exists[size<=2] X. forall x. (x in X -> exists y. E(x,y))",
        "Exists[ttw<=1] X. (card(X) % 2 = 1 & forall x. (x in X -> "
        "exists y. (y in X & E(x,y))))",
        "Forall[size<=1] X. forall x. forall y. ((x in X & y in X) -> x = y)",
        "Exists[bog<=1] X. exists x. (x in X & forall y. (E(x,y) -> y in X))",
        "Exists[ttw<=2] X. Exists[size<=2] Y. (card(X) % 2 = 0 & "
        "forall x. (x in Y -> x in X))",
        "!(Exists[ttw<=2] X. (card(X) % 3 = 1 & exists x. x in X))",
        "exists u. (ttwle(1; u) & forall w. conn(u,w))",
    ]
    return [parse_formula(t) for t in texts]


def graph_corpus():
    """Evaluation corpus: nonempty graphs with at most 7 vertices."""
    out = [path(1), path(2), path(3), path(4), path(5), path(7),
           cycle(3), cycle(4), cycle(5), cycle(6), cycle(7),
           clique(2), clique(4), clique(5), star(3), star(5), grid(2),
           AnnotatedGraph(Graph(range(2))),
           AnnotatedGraph(Graph(range(6), [(0, 1), (2, 3), (4, 5)])),
           AnnotatedGraph(Graph(range(7), [(0, 1), (1, 2), (0, 2), (2, 3),
                                           (3, 4), (4, 5), (5, 6), (4, 6)]))]
    return [ag.graph for ag in out]


# ---------------------------------------------------------------------------
# decomposed instances for the replacement pipeline
# ---------------------------------------------------------------------------

def path_decomposition(n):
    bags = {i: frozenset([i, i + 1]) for i in range(n - 1)}
    parent = {i: (i + 1 if i < n - 2 else None) for i in range(n - 1)}
    return TreeDecomposition(bags, parent, name=f"p{n}-td")


def cycle_decomposition(n):
    bags = {i: frozenset([i, i + 1, 0]) for i in range(1, n - 1)}
    parent = {i: (i + 1 if i < n - 2 else None) for i in range(1, n - 1)}
    return TreeDecomposition(bags, parent, name=f"c{n}-td")


def clique_with_tails(k, tail):
    """A clique with a path tail hanging from each of two clique vertices."""
    g = clique(k).graph
    verts = list(g.vertices)
    edges = list(g.edges)
    nxt = k
    tails = []
    for anchor in (0, 1):
        prev = anchor
        chain = []
        for _ in range(tail):
            verts.append(nxt)
            edges.append((prev, nxt))
            chain.append(nxt)
            prev = nxt
            nxt += 1
        tails.append(chain)
    graph = Graph(verts, edges, name=f"k{k}tails{tail}")
    bags = {0: frozenset(range(k))}
    parent = {0: None}
    nid = 1
    for anchor, chain in zip((0, 1), tails):
        prev_vertex, prev_node = anchor, 0
        for v in chain:
            bags[nid] = frozenset([prev_vertex, v])
            parent[nid] = prev_node
            prev_vertex, prev_node = v, nid
            nid += 1
    return graph, TreeDecomposition(bags, parent, name=graph.name + "-td")


def grid_decomposition(k):
    """Column-pair bags for the k x k grid."""
    cols = [[r * k + c for r in range(k)] for c in range(k)]
    bags = {i: frozenset(cols[i] + cols[i + 1]) for i in range(k - 1)}
    parent = {i: (i + 1 if i < k - 2 else None) for i in range(k - 1)}
    return TreeDecomposition(bags, parent, name=f"grid{k}-td")


def minidp_corpus():
    """(name, graph, decomposition, battery, level, budget) instances."""
    even = even_cycle_formula()
    connected = connected_formula()
    degree3 = parse_formula(
        "exists x. exists a. exists b. exists c. (E(x,a) & E(x,b) & E(x,c)"
        " & !(a = b) & !(a = c) & !(b = c))")
    k4g, k4t = clique_with_tails(4, 3)
    g3 = grid(3).graph
    return [
        ("path9-conn", path(9).graph, path_decomposition(9),
         (connected,), 1, 3),
        ("path8-empty", path(8).graph, path_decomposition(8), (), 1, 2),
        ("cycle8-even", cycle(8).graph, cycle_decomposition(8),
         (even,), 2, 4),
        ("cycle7-even", cycle(7).graph, cycle_decomposition(7),
         (even,), 2, 4),
        ("clique4-tails", k4g, k4t, (connected, degree3), 1, 3),
        ("grid3", g3, grid_decomposition(3), (connected,), 2, 6),
    ]
