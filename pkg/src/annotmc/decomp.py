"""Tree decompositions: node anatomy, validity and regularity checks,
strong unbreakability, cone extraction, file format, and a brute-force
decomposition search for tiny graphs."""

from __future__ import annotations

import itertools

from .errors import EnvelopeError, FormatError, SemanticError
from .graphs import BoundariedGraph, Graph, is_unbreakable, subsets_by_size


class TreeDecomposition:
    """Rooted tree of bags.  Nodes are integer ids; parent maps the root to
    None.  Immutable after construction."""

    __slots__ = ("nodes", "parent", "bag", "root", "_children", "name")

    def __init__(self, bags, parent, name="t"):
        self.bag = {int(x): frozenset(int(v) for v in b) for x, b in bags.items()}
        self.parent = {int(x): (None if p is None else int(p))
                       for x, p in parent.items()}
        if set(self.bag) != set(self.parent):
            raise SemanticError("bag and parent maps disagree on nodes")
        roots = [x for x, p in self.parent.items() if p is None]
        if len(roots) != 1:
            raise SemanticError("decomposition must have exactly one root")
        self.root = roots[0]
        self.nodes = tuple(sorted(self.bag))
        ch = {x: [] for x in self.nodes}
        for x, p in self.parent.items():
            if p is not None:
                if p not in ch:
                    raise SemanticError(f"unknown parent node {p}")
                ch[p].append(x)
        self._children = {x: tuple(sorted(c)) for x, c in ch.items()}
        self.name = name
        # reject parent cycles
        for x in self.nodes:
            seen = set()
            while x is not None:
                if x in seen:
                    raise SemanticError("parent map contains a cycle")
                seen.add(x)
                x = self.parent[x]

    def children(self, x):
        return self._children[x]

    def postorder(self):
        out = []

        def visit(x):
            for c in self._children[x]:
                visit(c)
            out.append(x)

        visit(self.root)
        return out

    def subtree(self, x):
        out = [x]
        for c in self._children[x]:
            out.extend(self.subtree(c))
        return out

    # -- anatomy -----------------------------------------------------------

    def adh(self, x):
        p = self.parent[x]
        return frozenset() if p is None else self.bag[p] & self.bag[x]

    def mrg(self, x):
        return self.bag[x] - self.adh(x)

    def cone(self, x):
        out = set()
        for y in self.subtree(x):
            out |= self.bag[y]
        return frozenset(out)

    def comp(self, x):
        return self.cone(x) - self.adh(x)

    def adhesion(self):
        return max((len(self.adh(x)) for x in self.nodes), default=0)

    def width(self):
        return max((len(self.bag[x]) for x in self.nodes), default=0) - 1

    def __repr__(self):
        return f"TreeDecomposition({self.name!r}, nodes={len(self.nodes)})"


def node_anatomy(t, g, x):
    if x not in t.bag:
        raise SemanticError(f"unknown decomposition node {x}")
    return {"adh": t.adh(x), "mrg": t.mrg(x), "cone": t.cone(x), "comp": t.comp(x)}


def validate(t, g):
    """Both decomposition conditions; returns (ok, diagnostics)."""
    diags = []
    vset = set(g.vertices)
    for x in t.nodes:
        bad = t.bag[x] - vset
        if bad:
            raise SemanticError(
                f"node {x} references unknown vertex {sorted(bad)[0]}")
    for v in g.vertices:
        holding = [x for x in t.nodes if v in t.bag[x]]
        if not holding:
            diags.append(f"vertex {v} appears in no bag")
            continue
        seen = set(holding)
        # connected in the tree: from each holder walk to the root, the
        # holders must form one subtree
        hold = set(holding)
        start = holding[0]
        reach = {start}
        frontier = [start]
        while frontier:
            x = frontier.pop()
            for y in list(t.children(x)) + [t.parent[x]]:
                if y is not None and y in hold and y not in reach:
                    reach.add(y)
                    frontier.append(y)
        if reach != seen:
            diags.append(f"vertex {v} induces a disconnected subtree")
    for u, v in g.edges:
        if not any(u in t.bag[x] and v in t.bag[x] for x in t.nodes):
            diags.append(f"edge ({u}, {v}) not covered by any bag")
    return (not diags), diags


def is_regular(t, g):
    """Nonempty margins, connected components, adhesion vertices with a
    neighbor in the component.  Returns (ok, violating node or None)."""
    for x in t.nodes:
        if x == t.root:
            continue
        comp = t.comp(x)
        if not t.mrg(x):
            return False, x
        if comp and len(g.components(comp)) != 1:
            return False, x
        for a in t.adh(x):
            if not any(w in comp for w in g.neighbors(a)):
                return False, x
    return True, None


def is_strongly_unbreakable(t, g, q, k):
    """Every bag unbreakable in the subgraph induced by its cone.
    Returns (ok, violating node or None, violating separation or None)."""
    for x in t.nodes:
        cone = g.induced(t.cone(x))
        ok, sep = is_unbreakable(cone, t.bag[x], q, k)
        if not ok:
            return False, x, sep
    return True, None, None


def extract_cone(g, t, x):
    """The cone at x as a boundaried graph; boundary = adhesion in ascending
    vertex-id order (the canonical label choice)."""
    cone = g.induced(t.cone(x))
    return BoundariedGraph(cone, (), sorted(t.adh(x)))


# ---------------------------------------------------------------------------
# file format
# ---------------------------------------------------------------------------

def parse_decomp(text):
    name = "t"
    bags = {}
    root = None
    parent_pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind, args = parts[0], parts[1:]
        if kind == "decomp":
            if len(args) != 1:
                raise FormatError("expected: decomp <name>", lineno)
            name = args[0]
        elif kind == "node":
            if len(args) < 2 or args[1] != ":":
                raise FormatError("expected: node <nid> : <vid> ...", lineno)
            try:
                nid = int(args[0])
                vids = [int(a) for a in args[2:]]
            except ValueError:
                raise FormatError("node ids must be integers", lineno) from None
            if nid in bags:
                raise SemanticError(f"line {lineno}: duplicate node {nid}")
            bags[nid] = vids
        elif kind == "root":
            if len(args) != 1:
                raise FormatError("expected: root <nid>", lineno)
            root = int(args[0])
        elif kind == "child":
            if len(args) != 2:
                raise FormatError("expected: child <parent> <child>", lineno)
            parent_pairs.append((int(args[0]), int(args[1])))
        else:
            raise FormatError(f"unknown directive {kind!r}", lineno)
    if root is None:
        raise SemanticError("decomposition file lacks a root line")
    parent = {x: None for x in bags}
    for p, c in parent_pairs:
        if c not in parent or p not in parent:
            raise SemanticError(f"child line references unknown node {p} or {c}")
        parent[c] = p
    return TreeDecomposition(bags, parent, name)


def print_decomp(t):
    lines = [f"decomp {t.name}"]
    for x in t.nodes:
        lines.append(f"node {x} : " + " ".join(str(v) for v in sorted(t.bag[x])))
    lines.append(f"root {t.root}")
    for x in t.nodes:
        for c in t.children(x):
            lines.append(f"child {x} {c}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# brute-force search
# ---------------------------------------------------------------------------

def find_decomposition(g, q, k, adhesion_bound, max_nodes=None):
    """Smallest valid, regular, strongly (q, k)-unbreakable decomposition
    with the given adhesion bound, or None.  Exhaustive over decompositions
    on up to |V| nodes; refuse beyond seven vertices."""
    if g.n > 7:
        raise EnvelopeError("decomposition search limited to 7-vertex graphs")
    if g.n == 0:
        return TreeDecomposition({0: ()}, {0: None})
    nonempty = [frozenset(c) for c in subsets_by_size(g.vertices, g.n) if c]
    limit = max_nodes or g.n
    for m in range(1, limit + 1):
        for parents in itertools.product(*[range(i) for i in range(1, m)]):
            parent = {0: None}
            for i, p in enumerate(parents, start=1):
                parent[i] = p
            found = _assign_bags(g, m, parent, nonempty, q, k, adhesion_bound)
            if found is not None:
                return found
    return None


def _assign_bags(g, m, parent, nonempty, q, k, adhesion_bound):
    bags = {}

    def rec(i):
        if i == m:
            t = TreeDecomposition(bags, parent)
            ok, _ = validate(t, g)
            if not ok:
                return None
            if t.adhesion() > adhesion_bound:
                return None
            if not is_regular(t, g)[0]:
                return None
            if not is_strongly_unbreakable(t, g, q, k)[0]:
                return None
            return t
        ancestors = set()
        p = parent[i]
        while p is not None:
            ancestors.add(p)
            p = parent[p]
        outside = set()
        for j in range(i):
            if j not in ancestors:
                outside |= bags[j]
        for b in nonempty:
            pa = parent[i]
            if pa is not None:
                if len(b & bags[pa]) > adhesion_bound:
                    continue
                # a vertex re-entering after leaving breaks subtree connectivity
                if (b - bags[pa]) & outside:
                    continue
            bags[i] = b
            res = rec(i + 1)
            if res is not None:
                return res
            del bags[i]
        return None

    return rec(0)
