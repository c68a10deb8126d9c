"""Isomorphism-canonical forms for small annotated (boundaried) graphs.

Exhaustive permutation search, restricted to permutations that preserve the
(annotation membership, degree) class of each vertex; boundary vertices are
pinned to their label positions.  Fine for the member sizes produced by the
folio machinery (at most eight or so vertices outside the boundary).
"""

from __future__ import annotations

import itertools

from .errors import EnvelopeError
from .graphs import AnnotatedGraph, BoundariedGraph, Graph

_CANON_LIMIT = 10


def canonical_key(graph, annot=frozenset(), boundary=()):
    """Hashable key identifying (graph, annot, boundary) up to isomorphisms
    that fix each boundary label."""
    annot = frozenset(annot)
    boundary = tuple(boundary)
    rest = [v for v in graph.vertices if v not in set(boundary)]
    if len(rest) > _CANON_LIMIT:
        raise EnvelopeError(
            f"canonical form limited to {_CANON_LIMIT} non-boundary vertices")
    b = len(boundary)
    pos = {v: i for i, v in enumerate(boundary)}

    def vclass(v):
        return (v in annot, graph.degree(v))

    classes = {}
    for v in rest:
        classes.setdefault(vclass(v), []).append(v)
    class_keys = sorted(classes)
    best = None
    for perm_parts in itertools.product(
            *[itertools.permutations(classes[ck]) for ck in class_keys]):
        mapping = dict(pos)
        nxt = b
        for part in perm_parts:
            for v in part:
                mapping[v] = nxt
                nxt += 1
        edges = tuple(sorted(
            tuple(sorted((mapping[u], mapping[v]))) for u, v in graph.edges))
        ann = tuple(sorted(mapping[v] for v in annot))
        key = (edges, ann)
        if best is None or key < best:
            best = key
    if best is None:
        best = ((), ())
    sig = tuple(sorted((graph.degree(v), v in annot) for v in rest))
    return (graph.n, b, sig, best)


def key_of(obj):
    if isinstance(obj, BoundariedGraph):
        return canonical_key(obj.graph, obj.annot, obj.boundary)
    if isinstance(obj, AnnotatedGraph):
        return canonical_key(obj.graph, obj.annot)
    if isinstance(obj, Graph):
        return canonical_key(obj)
    raise TypeError(f"cannot canonicalize {type(obj).__name__}")


def are_isomorphic(a, b):
    """Isomorphism of annotated (boundaried) graphs; boundary labels and
    annotation membership must be preserved."""
    ga, xa, ba = _unpack(a)
    gb, xb, bb = _unpack(b)
    if ga.n != gb.n or len(ga.edges) != len(gb.edges):
        return False
    if len(xa) != len(xb) or len(ba) != len(bb):
        return False
    return key_of(a) == key_of(b)


def _unpack(obj):
    if isinstance(obj, BoundariedGraph):
        return obj.graph, obj.annot, obj.boundary
    if isinstance(obj, AnnotatedGraph):
        return obj.graph, obj.annot, ()
    return obj, frozenset(), ()
