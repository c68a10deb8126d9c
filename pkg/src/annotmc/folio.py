"""Boundaried-graph compatibility, gluing, folios, extended folios, and
brute-force representative search."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .canonical import key_of
from .errors import CompatibilityError, EnvelopeError, SemanticError
from .evaluator import all_label_pair_sets, ext_battery_type
from .graphs import AnnotatedGraph, BoundariedGraph, Graph
from .minors import topo_model_search

_FOLIO_LEVEL_LIMIT = 4
_FOLIO_BOUNDARY_LIMIT = 4


def compatible(g1, g2):
    """Equal boundary sizes, identical boundary-induced edges by label, and
    identical annotated boundary label sets."""
    if not (isinstance(g1, BoundariedGraph) and isinstance(g2, BoundariedGraph)):
        raise SemanticError("compatibility is defined on boundaried graphs")
    return (g1.t == g2.t
            and g1.boundary_edge_labels() == g2.boundary_edge_labels()
            and g1.boundary_annot_labels() == g2.boundary_annot_labels())


def glue_with_map(g1, g2):
    """Glue along equal labels; the first graph's boundary vertices prevail.
    Returns (annotated graph, mapping of second-graph vertices)."""
    if not compatible(g1, g2):
        raise CompatibilityError("incompatible boundaries")
    mapping = {}
    for i in range(g1.t):
        mapping[g2.boundary[i]] = g1.boundary[i]
    nxt = max(g1.graph.vertices) + 1 if g1.graph.vertices else 0
    for v in g2.graph.vertices:
        if v not in mapping:
            mapping[v] = nxt
            nxt += 1
    verts = set(g1.graph.vertices) | {mapping[v] for v in g2.graph.vertices}
    edges = set(g1.graph.edges)
    edges.update(tuple(sorted((mapping[u], mapping[v])))
                 for u, v in g2.graph.edges)
    colors = {c: set(m) for c, m in g1.graph.colors.items()}
    for c, m in g2.graph.colors.items():
        colors.setdefault(c, set()).update(mapping[v] for v in m)
    g = Graph(verts, edges, colors, name=f"{g1.graph.name}+{g2.graph.name}")
    annot = g1.annot | {mapping[v] for v in g2.annot}
    return AnnotatedGraph(g, annot), mapping


def glue(g1, g2):
    return glue_with_map(g1, g2)[0]


def compatible_tupled(g1, r1, g2, r2):
    if not compatible(g1, g2):
        return False
    if len(r1) != len(r2):
        return False
    for a, b in zip(r1, r2):
        la = {g1.label_of(v) for v in a if v in g1.boundary}
        lb = {g2.label_of(v) for v in b if v in g2.boundary}
        if la != lb:
            return False
    return True


def glue_tupled(g1, r1, g2, r2):
    """Gluing of boundaried graphs carrying restriction tuples; tuples are
    identified the same way the vertices are."""
    if not compatible_tupled(g1, r1, g2, r2):
        raise CompatibilityError("incompatible boundaries or tuples")
    glued, mapping = glue_with_map(g1, g2)
    tuples = tuple(frozenset(a) | {mapping[v] for v in b}
                   for a, b in zip(r1, r2))
    return glued, tuples


def boundary_only(bg):
    """The neutral element for gluing against bg: its boundary-induced graph
    with nothing else."""
    b = bg.boundary
    keep = set(b)
    edges = [(u, v) for u, v in bg.graph.edges if u in keep and v in keep]
    g = Graph(b, edges, name="boundary")
    return BoundariedGraph(g, bg.annot & keep, b)


# ---------------------------------------------------------------------------
# folios
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Folio:
    level: int
    keys: frozenset
    members: tuple  # BoundariedGraph canonical representatives

    def __eq__(self, other):
        return (isinstance(other, Folio) and self.level == other.level
                and self.keys == other.keys)

    def __hash__(self):
        return hash((self.level, self.keys))

    def __len__(self):
        return len(self.members)


_folio_cache = {}


def folio(bg, level, max_level=_FOLIO_LEVEL_LIMIT):
    """All compatible annotated boundaried graphs of detail at most level
    that are topological minors of bg, up to isomorphism."""
    if level > max_level or bg.t > _FOLIO_BOUNDARY_LIMIT:
        raise EnvelopeError(
            f"folio computation limited to level {max_level} and "
            f"boundary {_FOLIO_BOUNDARY_LIMIT}")
    cache_key = (key_of(bg), level)
    hit = _folio_cache.get(cache_key)
    if hit is not None:
        return hit
    members = []
    keys = set()
    for cand in _candidate_members(bg, level):
        k = key_of(cand)
        if k in keys:
            continue
        pinned = {cand.boundary[i]: bg.boundary[i] for i in range(bg.t)}
        if topo_model_search(bg, cand, pinned) is not None:
            keys.add(k)
            members.append((k, cand))
    members.sort(key=lambda kv: kv[0])
    out = Folio(level, frozenset(keys), tuple(m for _, m in members))
    if len(_folio_cache) > 4096:
        _folio_cache.clear()
    _folio_cache[cache_key] = out
    return out


def _candidate_members(bg, level):
    """Compatible candidates with detail <= level, canonically labeled:
    boundary label i sits on vertex i-1, extras follow."""
    t = bg.t
    base_edges = [tuple(sorted((i - 1, j - 1)))
                  for i, j in (sorted(p) for p in bg.boundary_edge_labels())]
    base_annot = {i - 1 for i in bg.boundary_annot_labels()}
    annotated_host = bool(bg.annot)
    for extras in range(level + 1):
        verts = list(range(t + extras))
        slots = [(i, j) for i in range(t) for j in range(t, t + extras)]
        slots += list(itertools.combinations(range(t, t + extras), 2))
        budget = level - len(base_edges)
        if budget < 0:
            return
        for r in range(min(budget, len(slots)) + 1):
            for chosen in itertools.combinations(slots, r):
                edges = base_edges + list(chosen)
                if annotated_host:
                    extra_annot_space = [
                        set(c) for k in range(extras + 1)
                        for c in itertools.combinations(range(t, t + extras), k)]
                else:
                    extra_annot_space = [set()]
                for extra_annot in extra_annot_space:
                    g = Graph(verts, edges, name="member")
                    yield BoundariedGraph(g, base_annot | extra_annot,
                                          tuple(range(t)))


def ext_folio(bg, level):
    """Folios of every boundary completion, keyed by added label-pair set."""
    return {i: folio(bg.completed(i), level) for i in all_label_pair_sets(bg.t)}


def ext_folio_equal(g1, g2, level):
    if not compatible(g1, g2):
        return False
    for i in all_label_pair_sets(g1.t):
        if folio(g1.completed(i), level) != folio(g2.completed(i), level):
            return False
    return True


# ---------------------------------------------------------------------------
# representative search
# ---------------------------------------------------------------------------

_rep_cache = {}


def find_representative(bg, level, max_size, battery=None):
    """Smallest compatible boundaried graph (then least canonical form) with
    at most max_size vertices whose extended folio, and extended battery
    type when a battery is supplied, both match bg.  None when the budget
    admits no such graph."""
    battery_key = tuple(battery) if battery else None
    cache_key = (key_of(bg), level, max_size, battery_key)
    if cache_key in _rep_cache:
        return _rep_cache[cache_key]
    target_folio = {i: folio(bg.completed(i), level)
                    for i in all_label_pair_sets(bg.t)}
    target_type = ext_battery_type(bg, battery) if battery else None
    result = None
    for cand in _candidate_replacements(bg, max_size):
        if _ext_folio_matches(cand, target_folio, level) and (
                target_type is None
                or ext_battery_type(cand, battery) == target_type):
            result = cand
            break
    if len(_rep_cache) > 4096:
        _rep_cache.clear()
    _rep_cache[cache_key] = result
    return result


def _ext_folio_matches(cand, target, level):
    for i, want in target.items():
        if folio(cand.completed(i), level) != want:
            return False
    return True


def _candidate_replacements(bg, max_size):
    """Compatible candidates by increasing size then canonical form."""
    t = bg.t
    base_edges = [tuple(sorted((i - 1, j - 1)))
                  for i, j in (sorted(p) for p in bg.boundary_edge_labels())]
    base_annot = frozenset(i - 1 for i in bg.boundary_annot_labels())
    annotated_host = bool(bg.annot)
    for n in range(t, max_size + 1):
        extras = n - t
        slots = [(i, j) for i in range(t) for j in range(t, n)]
        slots += list(itertools.combinations(range(t, n), 2))
        batch = {}
        for bits in range(1 << len(slots)):
            edges = base_edges + [slots[i] for i in range(len(slots))
                                  if bits >> i & 1]
            if annotated_host:
                annot_space = [frozenset(c) for k in range(extras + 1)
                               for c in itertools.combinations(range(t, n), k)]
            else:
                annot_space = [frozenset()]
            for extra_annot in annot_space:
                g = Graph(range(n), edges, name=f"rep{n}")
                cand = BoundariedGraph(g, base_annot | extra_annot,
                                       tuple(range(t)))
                k = key_of(cand)
                if k not in batch:
                    batch[k] = cand
        for k in sorted(batch):
            yield batch[k]
