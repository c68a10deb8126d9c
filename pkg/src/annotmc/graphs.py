"""Graph core: representations, file format, generators, path solvers,
separations, and unbreakability.

All types are immutable after construction.  Every enumeration (vertices,
edges, subsets, separations) follows ascending vertex-id / lexicographic
order so that witnesses and reports are reproducible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import CompatibilityError, FormatError, SemanticError


class Graph:
    """Finite simple undirected graph over nonnegative integer vertex ids,
    with optional named vertex colors."""

    __slots__ = ("name", "vertices", "edges", "colors", "_index", "_adj", "_hash")

    def __init__(self, vertices, edges=(), colors=None, name="g"):
        vs = sorted({int(v) for v in vertices})
        if vs and vs[0] < 0:
            raise SemanticError("vertex ids must be nonnegative")
        vset = set(vs)
        es = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise SemanticError(f"self-loop at vertex {u}")
            if u not in vset:
                raise SemanticError(f"undeclared vertex {u}")
            if v not in vset:
                raise SemanticError(f"undeclared vertex {v}")
            es.add((u, v) if u < v else (v, u))
        cols = {}
        for cname, members in (colors or {}).items():
            mem = frozenset(int(v) for v in members)
            if not mem <= vset:
                raise SemanticError(f"color {cname} mentions undeclared vertices")
            cols[str(cname)] = mem
        self.name = str(name)
        self.vertices = tuple(vs)
        self.edges = tuple(sorted(es))
        self.colors = cols
        self._index = {v: i for i, v in enumerate(vs)}
        adj = [0] * len(vs)
        for u, v in self.edges:
            adj[self._index[u]] |= 1 << self._index[v]
            adj[self._index[v]] |= 1 << self._index[u]
        self._adj = adj
        self._hash = hash((self.vertices, self.edges,
                           tuple(sorted((c, m) for c, m in cols.items()))))

    # -- basics -----------------------------------------------------------

    @property
    def n(self):
        return len(self.vertices)

    def __eq__(self, other):
        return (isinstance(other, Graph)
                and self.vertices == other.vertices
                and self.edges == other.edges
                and self.colors == other.colors)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Graph({self.name!r}, n={self.n}, m={len(self.edges)})"

    def has_vertex(self, v):
        return v in self._index

    def check_vertex(self, v):
        if v not in self._index:
            raise SemanticError(f"vertex {v} not in graph {self.name}")
        return v

    def has_edge(self, u, v):
        if u not in self._index or v not in self._index:
            return False
        return bool(self._adj[self._index[u]] >> self._index[v] & 1)

    def neighbors(self, v):
        self.check_vertex(v)
        return self.ids(self._adj[self._index[v]])

    def degree(self, v):
        self.check_vertex(v)
        return bin(self._adj[self._index[v]]).count("1")

    # -- bitmask helpers ---------------------------------------------------

    def mask(self, ids):
        m = 0
        for v in ids:
            m |= 1 << self._index[self.check_vertex(v)]
        return m

    def ids(self, mask):
        return tuple(v for i, v in enumerate(self.vertices) if mask >> i & 1)

    def adj_mask(self, mask):
        """Open neighborhood of the vertex set given as a mask."""
        out = 0
        rem = mask
        while rem:
            low = rem & -rem
            out |= self._adj[low.bit_length() - 1]
            rem ^= low
        return out & ~mask

    def connected_mask(self, mask):
        if mask == 0:
            return True
        start = mask & -mask
        seen = start
        frontier = start
        while frontier:
            nxt = 0
            rem = frontier
            while rem:
                low = rem & -rem
                nxt |= self._adj[low.bit_length() - 1]
                rem ^= low
            frontier = nxt & mask & ~seen
            seen |= frontier
        return seen == mask

    def component_masks(self, within=None):
        """Connected components (as masks) of the subgraph induced by
        ``within`` (default: all vertices), in ascending order."""
        rem = self.mask(self.vertices) if within is None else within
        comps = []
        while rem:
            start = rem & -rem
            seen = start
            frontier = start
            while frontier:
                nxt = 0
                sub = frontier
                while sub:
                    low = sub & -sub
                    nxt |= self._adj[low.bit_length() - 1]
                    sub ^= low
                frontier = nxt & rem & ~seen
                seen |= frontier
            comps.append(seen)
            rem &= ~seen
        return comps

    def components(self, within=None):
        w = None if within is None else self.mask(within)
        return [frozenset(self.ids(m)) for m in self.component_masks(w)]

    def is_connected(self):
        return self.n <= 1 or len(self.component_masks()) == 1

    def is_connected_set(self, ids):
        return self.connected_mask(self.mask(ids))

    # -- derived graphs ----------------------------------------------------

    def induced(self, ids, name=None):
        keep = set(ids)
        for v in keep:
            self.check_vertex(v)
        edges = [(u, v) for u, v in self.edges if u in keep and v in keep]
        colors = {c: m & frozenset(keep) for c, m in self.colors.items()}
        colors = {c: m for c, m in colors.items() if m}
        return Graph(keep, edges, colors, name or self.name)

    def without(self, ids):
        drop = set(ids)
        return self.induced([v for v in self.vertices if v not in drop])

    def with_edges(self, extra, name=None):
        return Graph(self.vertices, list(self.edges) + list(extra),
                     self.colors, name or self.name)

    def with_colors(self, extra, name=None):
        cols = dict(self.colors)
        for cname, members in extra.items():
            cols[cname] = frozenset(members)
        return Graph(self.vertices, self.edges, cols, name or self.name)

    def relabel(self, mapping, name=None):
        verts = [mapping[v] for v in self.vertices]
        edges = [(mapping[u], mapping[v]) for u, v in self.edges]
        colors = {c: frozenset(mapping[v] for v in m) for c, m in self.colors.items()}
        return Graph(verts, edges, colors, name or self.name)


class AnnotatedGraph:
    """A graph together with a distinguished vertex set."""

    __slots__ = ("graph", "annot")

    def __init__(self, graph, annot=()):
        annot = frozenset(int(v) for v in annot)
        for v in annot:
            graph.check_vertex(v)
        self.graph = graph
        self.annot = annot

    def __eq__(self, other):
        return (isinstance(other, AnnotatedGraph)
                and self.graph == other.graph and self.annot == other.annot)

    def __hash__(self):
        return hash((self.graph, self.annot))

    def __repr__(self):
        return f"AnnotatedGraph({self.graph.name!r}, |X|={len(self.annot)})"


class BoundariedGraph:
    """An annotated graph with an ordered boundary.  The boundary vertex at
    position i carries label i+1."""

    __slots__ = ("graph", "annot", "boundary")

    def __init__(self, graph, annot=(), boundary=()):
        annot = frozenset(int(v) for v in annot)
        boundary = tuple(int(v) for v in boundary)
        for v in annot:
            graph.check_vertex(v)
        seen = set()
        for v in boundary:
            graph.check_vertex(v)
            if v in seen:
                raise SemanticError(f"duplicate boundary id {v}")
            seen.add(v)
        self.graph = graph
        self.annot = annot
        self.boundary = boundary

    @property
    def t(self):
        return len(self.boundary)

    @property
    def detail(self):
        inner = len(self.graph.vertices) - len(self.boundary)
        return max(len(self.graph.edges), inner)

    def label_of(self, v):
        return self.boundary.index(v) + 1

    def vertex_of(self, label):
        return self.boundary[label - 1]

    def boundary_annot_labels(self):
        return frozenset(i + 1 for i, v in enumerate(self.boundary) if v in self.annot)

    def boundary_edge_labels(self):
        out = set()
        for i, u in enumerate(self.boundary):
            for j in range(i + 1, len(self.boundary)):
                if self.graph.has_edge(u, self.boundary[j]):
                    out.add(frozenset((i + 1, j + 1)))
        return frozenset(out)

    def completed(self, label_pairs):
        """Add the boundary edges named by label pairs (duplicates collapse)."""
        extra = []
        for pair in label_pairs:
            i, j = sorted(pair)
            extra.append((self.vertex_of(i), self.vertex_of(j)))
        return BoundariedGraph(self.graph.with_edges(extra), self.annot, self.boundary)

    def __eq__(self, other):
        return (isinstance(other, BoundariedGraph)
                and self.graph == other.graph and self.annot == other.annot
                and self.boundary == other.boundary)

    def __hash__(self):
        return hash((self.graph, self.annot, self.boundary))

    def __repr__(self):
        return (f"BoundariedGraph({self.graph.name!r}, |X|={len(self.annot)}, "
                f"t={self.t})")


@dataclass(frozen=True)
class Separation:
    """A pair of sides covering V(G) with no edge crossing between the
    private parts.  The separator is the intersection of the sides."""

    side_a: frozenset
    side_b: frozenset

    @property
    def separator(self):
        return self.side_a & self.side_b

    @property
    def order(self):
        return len(self.separator)

    def check(self, g):
        if self.side_a | self.side_b != set(g.vertices):
            return False
        only_a = self.side_a - self.side_b
        only_b = self.side_b - self.side_a
        return not any(
            (u in only_a and v in only_b) or (u in only_b and v in only_a)
            for u, v in g.edges)


# ---------------------------------------------------------------------------
# file format
# ---------------------------------------------------------------------------

def parse_graph(text):
    """Parse the line-oriented graph format.  Returns an AnnotatedGraph, or a
    BoundariedGraph when a ``bnd`` line is present."""
    name = "g"
    vertices = []
    declared = set()
    edges = []
    colors = {}
    annot = None
    boundary = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind, args = parts[0], parts[1:]
        if kind == "graph":
            if len(args) != 1:
                raise FormatError("expected: graph <name>", lineno)
            name = args[0]
        elif kind == "v":
            if not args:
                raise FormatError("expected: v <id> [<color> ...]", lineno)
            try:
                v = int(args[0])
            except ValueError:
                raise FormatError(f"bad vertex id {args[0]!r}", lineno) from None
            if v in declared:
                raise SemanticError(f"line {lineno}: duplicate vertex {v}")
            declared.add(v)
            vertices.append(v)
            for cname in args[1:]:
                colors.setdefault(cname, set()).add(v)
        elif kind == "e":
            if len(args) != 2:
                raise FormatError("expected: e <id> <id>", lineno)
            try:
                u, w = int(args[0]), int(args[1])
            except ValueError:
                raise FormatError("edge endpoints must be integers", lineno) from None
            for x in (u, w):
                if x not in declared:
                    raise SemanticError(f"line {lineno}: undeclared vertex {x}")
            edges.append((u, w))
        elif kind == "annot":
            if annot is not None:
                raise SemanticError(f"line {lineno}: duplicate annot line")
            try:
                annot = [int(a) for a in args]
            except ValueError:
                raise FormatError("annot ids must be integers", lineno) from None
            for x in annot:
                if x not in declared:
                    raise SemanticError(f"line {lineno}: undeclared vertex {x}")
        elif kind == "bnd":
            if boundary is not None:
                raise SemanticError(f"line {lineno}: duplicate bnd line")
            try:
                boundary = [int(a) for a in args]
            except ValueError:
                raise FormatError("bnd ids must be integers", lineno) from None
            for x in boundary:
                if x not in declared:
                    raise SemanticError(f"line {lineno}: undeclared vertex {x}")
            if len(set(boundary)) != len(boundary):
                dup = next(x for x in boundary if boundary.count(x) > 1)
                raise SemanticError(f"line {lineno}: duplicate boundary id {dup}")
        else:
            raise FormatError(f"unknown directive {kind!r}", lineno)
    g = Graph(vertices, edges, colors, name)
    if boundary is not None:
        return BoundariedGraph(g, annot or (), boundary)
    return AnnotatedGraph(g, annot or ())


def print_graph(obj):
    """Normalized file form; parse(print(x)) reproduces x exactly."""
    if isinstance(obj, Graph):
        obj = AnnotatedGraph(obj)
    g = obj.graph
    lines = [f"graph {g.name}"]
    color_of = {}
    for cname in sorted(g.colors):
        for v in g.colors[cname]:
            color_of.setdefault(v, []).append(cname)
    for v in g.vertices:
        cols = " ".join(sorted(color_of.get(v, ())))
        lines.append(f"v {v} {cols}".rstrip())
    for u, v in g.edges:
        lines.append(f"e {u} {v}")
    if obj.annot:
        lines.append("annot " + " ".join(str(v) for v in sorted(obj.annot)))
    if isinstance(obj, BoundariedGraph) and obj.boundary:
        lines.append("bnd " + " ".join(str(v) for v in obj.boundary))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

def _grid_graph(k, name):
    if k <= 0:
        raise SemanticError("grid side must be positive")
    verts = range(k * k)
    edges = []
    for i in range(1, k + 1):
        for j in range(1, k + 1):
            vid = (i - 1) * k + (j - 1)
            if j < k:
                edges.append((vid, vid + 1))
            if i < k:
                edges.append((vid, vid + k))
    return Graph(verts, edges, name=name)


def grid_perimeter(k):
    return frozenset((i - 1) * k + (j - 1)
                     for i in range(1, k + 1) for j in range(1, k + 1)
                     if i in (1, k) or j in (1, k))


def grid(k):
    return AnnotatedGraph(_grid_graph(k, f"grid{k}"))


def rainbow_grid(k):
    g = _grid_graph(k, f"rainbow{k}")
    return AnnotatedGraph(g, g.vertices)


def outer_grid(k):
    return AnnotatedGraph(_grid_graph(k, f"outer{k}"), grid_perimeter(k))


def path(n):
    if n <= 0:
        raise SemanticError("path needs at least one vertex")
    return AnnotatedGraph(Graph(range(n), [(i, i + 1) for i in range(n - 1)],
                                name=f"p{n}"))


def cycle(n):
    if n < 3:
        raise SemanticError("cycle needs at least three vertices")
    edges = [(i, (i + 1) % n) for i in range(n)]
    return AnnotatedGraph(Graph(range(n), edges, name=f"c{n}"))


def clique(n):
    if n <= 0:
        raise SemanticError("clique needs at least one vertex")
    return AnnotatedGraph(Graph(range(n), itertools.combinations(range(n), 2),
                                name=f"k{n}"))


def star(k):
    if k < 1:
        raise SemanticError("star needs at least one leaf")
    return AnnotatedGraph(Graph(range(k + 1), [(0, i) for i in range(1, k + 1)],
                                name=f"star{k}"))


def leaf_augment(g):
    """Attach two private leaves to every vertex."""
    if isinstance(g, AnnotatedGraph):
        g = g.graph
    base = max(g.vertices) + 1 if g.vertices else 0
    verts = list(g.vertices)
    edges = list(g.edges)
    for i, v in enumerate(g.vertices):
        a, b = base + 2 * i, base + 2 * i + 1
        verts += [a, b]
        edges += [(v, a), (v, b)]
    return AnnotatedGraph(Graph(verts, edges, name=f"{g.name}+leaves"))


def subdivide(g, t):
    """Replace every edge by a path with t internal vertices."""
    if isinstance(g, AnnotatedGraph):
        g = g.graph
    if t < 1:
        raise SemanticError("subdivision length must be at least 1")
    nxt = max(g.vertices) + 1 if g.vertices else 0
    verts = list(g.vertices)
    edges = []
    for u, v in g.edges:
        chain = [u] + list(range(nxt, nxt + t)) + [v]
        verts.extend(chain[1:-1])
        edges.extend(zip(chain, chain[1:]))
        nxt += t
    return AnnotatedGraph(Graph(verts, edges, name=f"{g.name}-sub{t}"))


def twisted_grid_g(n):
    """n x n grid whose leftmost column is joined straight to the rightmost."""
    g = _grid_graph(n, f"tgridG{n}")
    extra = [((i - 1) * n, (i - 1) * n + (n - 1)) for i in range(1, n + 1)]
    extra = [(u, v) for u, v in extra if u != v and not g.has_edge(u, v)]
    return AnnotatedGraph(g.with_edges(extra))


def twisted_grid_h(n):
    """n x n grid whose leftmost column is joined to the reversed rightmost."""
    g = _grid_graph(n, f"tgridH{n}")
    extra = []
    for i in range(1, n + 1):
        u = (i - 1) * n
        v = (n - i) * n + (n - 1)
        if u != v and not g.has_edge(u, v):
            extra.append((u, v))
    return AnnotatedGraph(g.with_edges(extra))


GENERATORS = {
    "grid": grid,
    "rainbow_grid": rainbow_grid,
    "outer_grid": outer_grid,
    "path": path,
    "cycle": cycle,
    "clique": clique,
    "star": star,
    "leaf_augment": leaf_augment,
    "subdivide": subdivide,
    "twisted_grid_g": twisted_grid_g,
    "twisted_grid_h": twisted_grid_h,
}


def generate(kind, *params):
    if kind not in GENERATORS:
        raise SemanticError(f"unknown family {kind!r}")
    return GENERATORS[kind](*params)


# ---------------------------------------------------------------------------
# path solvers
# ---------------------------------------------------------------------------

_dp_cache = {}


def solve_dp(g, pairs):
    """Pairwise vertex-disjoint linkage: one path per (s, t) pair, no vertex
    shared between two paths.  A pair with s == t is satisfied by the trivial
    one-vertex path, which still consumes that vertex."""
    norm = []
    for s, t in pairs:
        g.check_vertex(s)
        g.check_vertex(t)
        norm.append((s, t) if s <= t else (t, s))
    key = (g, tuple(sorted(norm)))
    hit = _dp_cache.get(key)
    if hit is not None:
        return hit
    ordered = sorted(norm)
    res = _dp_search(g, ordered, 0, 0)
    if len(_dp_cache) > 400000:
        _dp_cache.clear()
    _dp_cache[key] = res
    return res


def _dp_search(g, pairs, idx, used):
    if idx == len(pairs):
        return True
    s, t = pairs[idx]
    smask = g.mask([s])
    tmask = g.mask([t])
    if (used & smask) or (used & tmask):
        return False
    if s == t:
        return _dp_search(g, pairs, idx + 1, used | smask)
    # depth-first over simple s-t paths avoiding already-used vertices
    stack = [(smask, smask)]
    seen_states = set()
    while stack:
        cur, pathmask = stack.pop()
        if cur == tmask:
            if _dp_search(g, pairs, idx + 1, used | pathmask):
                return True
            continue
        nbrs = g._adj[cur.bit_length() - 1] & ~used & ~pathmask
        rem = nbrs
        while rem:
            low = rem & -rem
            rem ^= low
            state = (low, pathmask | low)
            if state not in seen_states:
                seen_states.add(state)
                stack.append(state)
    return False


def solve_conn(g, s, t, deleted=()):
    """Connectivity after vertex deletions; false when s or t is deleted."""
    g.check_vertex(s)
    g.check_vertex(t)
    dmask = g.mask(deleted)
    smask = g.mask([s])
    tmask = g.mask([t])
    if (smask & dmask) or (tmask & dmask):
        return False
    if s == t:
        return True
    alive = g.mask(g.vertices) & ~dmask
    seen = smask
    frontier = smask
    while frontier:
        nxt = 0
        rem = frontier
        while rem:
            low = rem & -rem
            nxt |= g._adj[low.bit_length() - 1]
            rem ^= low
        frontier = nxt & alive & ~seen
        if frontier & tmask:
            return True
        seen |= frontier
    return False


# ---------------------------------------------------------------------------
# separations and unbreakability
# ---------------------------------------------------------------------------

def subsets_by_size(items, max_size):
    items = sorted(items)
    for size in range(max_size + 1):
        yield from itertools.combinations(items, size)


def enumerate_separations(g, k):
    """All separations of order <= k, each exactly once.

    For each separator candidate S the components of G - S are assigned to
    the two sides in every possible way; this is exhaustive because each
    component lies wholly on one side.  Count is exponential: intended for
    graphs with at most a dozen vertices.
    """
    if k < 0:
        raise SemanticError("separation order bound must be nonnegative")
    full = set(g.vertices)
    for sep in subsets_by_size(g.vertices, min(k, g.n)):
        s = set(sep)
        comps = g.components(full - s)
        for bits in range(1 << len(comps)):
            left = set(s)
            right = set(s)
            for i, comp in enumerate(comps):
                (left if bits >> i & 1 else right).update(comp)
            yield Separation(frozenset(left), frozenset(right))


def is_unbreakable(g, annot, q, k):
    """Whether every separation of order <= k leaves at most q annotated
    vertices on one side.  Returns (verdict, violating separation or None).

    Per separator the achievable per-side annotation counts are explored with
    a subset-sum sweep over component counts.
    """
    annot = frozenset(annot)
    for v in annot:
        g.check_vertex(v)
    full = set(g.vertices)
    for sep in subsets_by_size(g.vertices, min(k, g.n)):
        s = set(sep)
        base = len(s & annot)
        comps = g.components(full - s)
        counts = [len(c & annot) for c in comps]
        total = sum(counts)
        # achievable[x] = component index choices reaching annotation count x
        achievable = {0: ()}
        for i, c in enumerate(counts):
            for val, picks in list(achievable.items()):
                nxt = val + c
                if nxt not in achievable:
                    achievable[nxt] = picks + (i,)
        for val, picks in sorted(achievable.items()):
            if base + val > q and base + (total - val) > q:
                chosen = set(picks)
                left = set(s)
                right = set(s)
                for i, comp in enumerate(comps):
                    (left if i in chosen else right).update(comp)
                return False, Separation(frozenset(left), frozenset(right))
    return True, None


def is_unbreakable_graph(g, q, k):
    return is_unbreakable(g, g.vertices, q, k)


# ---------------------------------------------------------------------------
# boundaried helpers shared by folio machinery
# ---------------------------------------------------------------------------

def require_same_boundary_size(g1, g2):
    if g1.t != g2.t:
        raise CompatibilityError("incompatible boundaries")
