"""Exact search for annotated minors and annotated topological minors,
plus the dissolution operation used by folios.

Branch-and-bound backtracking, complete within the documented size envelope
(hosts up to roughly sixteen vertices).  The minor search returns the
lexicographically least witness under the canonical branch-set ordering, so
repeated runs and reports are stable.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CompatibilityError, EnvelopeError, SemanticError
from .graphs import AnnotatedGraph, BoundariedGraph, Graph

_HOST_LIMIT = 17


@dataclass(frozen=True)
class MinorModel:
    """Branch-set assignment: pattern vertex -> host vertex set."""

    branch: tuple  # tuple of (pattern vertex, frozenset of host vertices)

    def branch_map(self):
        return dict(self.branch)

    def validate(self, host, pattern):
        hg, hx = host.graph, host.annot
        pg, px = pattern.graph, pattern.annot
        bmap = self.branch_map()
        if sorted(bmap) != list(pg.vertices):
            return False
        used = set()
        for v, bset in bmap.items():
            if not bset or not bset <= set(hg.vertices):
                return False
            if used & bset:
                return False
            used |= bset
            if not hg.is_connected_set(bset):
                return False
            if v in px and not (bset & hx):
                return False
        for u, v in pg.edges:
            if not hg.is_connected_set(bmap[u] | bmap[v]):
                return False
        return True


@dataclass(frozen=True)
class TopoModel:
    """Injective principal-vertex map plus one host path per pattern edge."""

    principal: tuple  # tuple of (pattern vertex, host vertex)
    paths: tuple      # tuple of ((u, v), host path as vertex tuple)

    def principal_map(self):
        return dict(self.principal)

    def path_map(self):
        return {e: p for e, p in self.paths}

    def validate(self, host, pattern):
        hg, hx = _graph_annot(host)
        pg, px = _graph_annot(pattern)
        eta = self.principal_map()
        if sorted(eta) != list(pg.vertices):
            return False
        if len(set(eta.values())) != len(eta):
            return False
        for v in px:
            if eta[v] not in hx:
                return False
        pmap = self.path_map()
        if set(pmap) != {tuple(sorted(e)) for e in pg.edges}:
            return False
        principals = set(eta.values())
        used_internal = set()
        for (u, v), p in pmap.items():
            if p[0] != eta[u] or p[-1] != eta[v] or len(set(p)) != len(p):
                return False
            for a, b in zip(p, p[1:]):
                if not hg.has_edge(a, b):
                    return False
            internal = set(p[1:-1])
            if internal & principals or internal & used_internal:
                return False
            used_internal |= internal
        if isinstance(host, BoundariedGraph) and isinstance(pattern, BoundariedGraph):
            for i in range(pattern.t):
                if eta[pattern.boundary[i]] != host.boundary[i]:
                    return False
        return True


def _graph_annot(obj):
    if isinstance(obj, (AnnotatedGraph, BoundariedGraph)):
        return obj.graph, obj.annot
    return obj, frozenset()


# ---------------------------------------------------------------------------
# connected subsets, cached per graph
# ---------------------------------------------------------------------------

_conn_cache = {}


def _connected_subsets(g):
    """All nonempty connected vertex subsets as (sorted tuple, mask,
    open-neighborhood mask), sorted by tuple."""
    hit = _conn_cache.get(g)
    if hit is not None:
        return hit
    if g.n > _HOST_LIMIT:
        raise EnvelopeError(f"minor search limited to {_HOST_LIMIT}-vertex hosts")
    out = []
    for mask in range(1, 1 << g.n):
        if g.connected_mask(mask):
            out.append((g.ids(mask), mask, g.adj_mask(mask)))
    out.sort(key=lambda item: item[0])
    if len(_conn_cache) > 64:
        _conn_cache.clear()
    _conn_cache[g] = out
    return out


# ---------------------------------------------------------------------------
# annotated minors
# ---------------------------------------------------------------------------

def find_annotated_minor(host, pattern):
    """Witnessing MinorModel for pattern <= host, or None.

    The witness is lexicographically least: branch sets are chosen for the
    pattern vertices in ascending id order, each time trying candidate sets
    in ascending sorted-tuple order.
    """
    hg, hx = _graph_annot(host)
    pg, px = _graph_annot(pattern)
    if pg.n == 0:
        return MinorModel(())
    if pg.n > hg.n:
        return None
    xmask = hg.mask(hx)
    candidates = _connected_subsets(hg)
    pverts = list(pg.vertices)
    pneigh = {v: [u for u in pg.neighbors(v) if u < v] for v in pverts}
    pdeg = {v: pg.degree(v) for v in pverts}
    need_annot = [v in px for v in pverts]
    total = hg.n

    assignment = []

    def extend(i, used):
        if i == len(pverts):
            return True
        v = pverts[i]
        remaining = len(pverts) - i - 1
        free = total - bin(used).count("1")
        budget = free - remaining
        if budget <= 0:
            return False
        prev = [assignment[pverts.index(u)] for u in pneigh[v]]
        for ids, mask, nbr in candidates:
            if mask & used or len(ids) > budget:
                continue
            if need_annot[i] and not mask & xmask:
                continue
            if bin(nbr).count("1") < pdeg[v]:
                continue
            ok = True
            for _, pmask, pnbr in prev:
                if not pnbr & mask:
                    ok = False
                    break
            if not ok:
                continue
            assignment.append((ids, mask, nbr))
            if extend(i + 1, used | mask):
                return True
            assignment.pop()
        return False

    if extend(0, 0):
        branch = tuple((v, frozenset(assignment[i][0]))
                       for i, v in enumerate(pverts))
        return MinorModel(branch)
    return None


# ---------------------------------------------------------------------------
# annotated topological minors
# ---------------------------------------------------------------------------

def compatible_boundaried(p, h):
    if p.t != h.t:
        return False
    if p.boundary_annot_labels() != h.boundary_annot_labels():
        return False
    return p.boundary_edge_labels() == h.boundary_edge_labels()


def find_annotated_topological_minor(host, pattern):
    """Witnessing TopoModel for pattern as a topological minor of host.

    Both arguments must be plain annotated graphs, or both boundaried; in the
    boundaried case the boundaries must be compatible and boundary vertices
    are pinned to equally labeled images.
    """
    boundaried = isinstance(host, BoundariedGraph) or isinstance(pattern, BoundariedGraph)
    pinned = {}
    if boundaried:
        if not (isinstance(host, BoundariedGraph) and isinstance(pattern, BoundariedGraph)):
            raise CompatibilityError("incompatible boundaries")
        if not compatible_boundaried(pattern, host):
            raise CompatibilityError("incompatible boundaries")
        pinned = {pattern.boundary[i]: host.boundary[i] for i in range(pattern.t)}
    return topo_model_search(host, pattern, pinned)


def topo_model_search(host, pattern, pinned=None):
    """Core topological-minor model search with optional pinned images.
    Does not require boundary-induced subgraphs to coincide; callers that
    need the full boundaried containment relation check compatibility first.
    """
    hg, hx = _graph_annot(host)
    pg, px = _graph_annot(pattern)
    pinned = dict(pinned or {})
    if pg.n > hg.n:
        return None
    if hg.n > _HOST_LIMIT + 18:
        raise EnvelopeError("topological minor search host too large")

    # principal assignment order: pinned first, then by descending degree
    pverts = sorted(pg.vertices, key=lambda v: (v not in pinned, -pg.degree(v), v))
    hdeg = {v: hg.degree(v) for v in hg.vertices}
    pedges = sorted(tuple(sorted(e)) for e in pg.edges)

    eta = {}

    def assign(i):
        if i == len(pverts):
            return route(0, {}, hg.mask(eta.values()))
        v = pverts[i]
        if v in pinned:
            cands = [pinned[v]]
        else:
            cands = [h for h in hg.vertices if h not in eta.values()
                     and h not in pinned.values()]
            # pinned images not yet assigned stay reserved for their owners
            reserved = {pinned[p] for p in pinned if p not in eta}
            cands = [h for h in cands if h not in reserved]
        for h in cands:
            if hdeg[h] < pg.degree(v):
                continue
            if v in px and h not in hx:
                continue
            if h in eta.values():
                continue
            eta[v] = h
            if assign(i + 1):
                return True
            del eta[v]
        return False

    routed = {}

    def route(j, placed, principal_mask):
        if j == len(pedges):
            return True
        u, v = pedges[j]
        su, sv = eta[u], eta[v]
        used_internal = 0
        for p in placed.values():
            used_internal |= hg.mask(p[1:-1])
        banned = (principal_mask | used_internal) & ~hg.mask([su, sv])
        for p in _simple_paths(hg, su, sv, banned):
            placed[(u, v)] = p
            if route(j + 1, placed, principal_mask):
                routed.update(placed)
                return True
            del placed[(u, v)]
        return False

    if assign(0):
        principal = tuple(sorted(eta.items()))
        paths = tuple(sorted(routed.items()))
        return TopoModel(principal=principal, paths=paths)
    return None


def _simple_paths(g, s, t, banned):
    """All simple s-t paths with internal vertices outside ``banned``,
    neighbors explored in ascending order."""
    smask = g.mask([s])
    if s == t:
        yield (s,)
        return
    tmask = g.mask([t])

    stack = [((s,), smask)]
    while stack:
        p, pmask = stack.pop()
        last = p[-1]
        nbrs = g._adj[g._index[last]] & ~pmask
        if nbrs & tmask:
            yield p + (t,)
        rem = nbrs & ~banned & ~tmask
        pushed = []
        while rem:
            low = rem & -rem
            rem ^= low
            w = g.vertices[low.bit_length() - 1]
            pushed.append((p + (w,), pmask | low))
        stack.extend(reversed(pushed))


# ---------------------------------------------------------------------------
# dissolution
# ---------------------------------------------------------------------------

def dissolve(m, branch_vertices):
    """Dissolve every vertex outside the branch set; each must have degree
    exactly two.  Duplicate edges created by dissolution collapse."""
    t = frozenset(branch_vertices)
    g = m.graph
    for b in m.boundary:
        if b not in t:
            raise SemanticError(f"boundary vertex {b} outside branch set")
    for v in g.vertices:
        if v not in t and g.degree(v) != 2:
            raise SemanticError(
                f"vertex {v} outside branch set has degree {g.degree(v)}, not 2")
    edges = {tuple(sorted(e)) for e in g.edges}
    alive = set(g.vertices)
    changed = True
    while changed:
        changed = False
        for v in sorted(alive - t):
            inc = [e for e in edges if v in e]
            nbrs = sorted({x for e in inc for x in e if x != v})
            if len(nbrs) == 2:
                a, b = nbrs
                for e in inc:
                    edges.discard(e)
                if a != b:
                    edges.add((min(a, b), max(a, b)))
                alive.discard(v)
                changed = True
            elif len(nbrs) == 1:
                # both incident edges go to the same neighbor: cannot happen
                # in a simple graph with degree two
                raise SemanticError(f"degenerate dissolution at vertex {v}")
    new_g = Graph(sorted(alive), sorted(edges), name=g.name)
    return BoundariedGraph(new_g, m.annot & t, m.boundary)
