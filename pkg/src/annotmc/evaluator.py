"""Direct Tarskian evaluation of formulas on (boundaried) graphs.

Set quantifiers enumerate exactly the sets whose parameter value is within
the bound, in lexicographic order, pruning supersets of failing sets (sound
for the minor-monotone kinds, which are the only ones admitted by the
grammar).  Two further sound shortcuts keep larger instances feasible and
are cross-checked against a naive oracle by the test suite:

* size fast paths: a set with at most k+1 vertices always has torso
  treewidth (and annotated treewidth) at most k, a set smaller than the
  vertex count of the next grid cannot contain it, and tw(G) bounds ttw
  from above for every set;
* witness-universe narrowing: conjuncts of the form
  ``forall u. (u in X -> alpha(u))`` with alpha monotone in X confine every
  witness to the fixpoint of the vertices satisfying alpha.
"""

from __future__ import annotations

import math

from .errors import ScopeError, SemanticError
from .graphs import AnnotatedGraph, BoundariedGraph, solve_conn, solve_dp
from .logic import (And, CardModAtom, ColorAtom, ConnAtom, DpAtom, EdgeAtom,
                    EqAtom, Exists, Forall, Iff, Implies, MemberAtom, Not, Or,
                    SetExists, SetForall, TtwLeAtom, free_vars, is_prenex,
                    is_setvar)
from .params import MINOR_MONOTONE_KINDS, compute, tw_upper_greedy


def evaluate(graph, formula, env=None):
    """Truth value of ``formula`` on ``graph`` under the assignment ``env``
    (element variable -> vertex id, set variable -> vertex set)."""
    return Evaluator(graph).run(formula, env)


def evaluate_witness(graph, formula, env=None):
    """Like evaluate, but also reports the outermost existential witnesses
    (element and set) when the formula holds."""
    ev = Evaluator(graph)
    env = ev.check_env(formula, env)
    witness = {}
    node = formula
    while True:
        if isinstance(node, Exists):
            found = None
            for v in graph.vertices:
                if ev.run_unchecked(node.body, {**env, node.var: v}):
                    found = v
                    break
            if found is None:
                return False, None
            witness[node.var] = found
            env[node.var] = found
            node = node.body
        elif isinstance(node, SetExists):
            found = None
            for s in ev.bounded_subsets(node, env):
                if ev.run_unchecked(node.body, {**env, node.var: s}):
                    found = s
                    break
            if found is None:
                return False, None
            witness[node.var] = sorted(found)
            env[node.var] = found
            node = node.body
        else:
            val = ev.run_unchecked(node, env)
            return (val, witness if val else None)


_MISSING = object()
_FREES = {}


class Evaluator:
    def __init__(self, graph):
        if isinstance(graph, (AnnotatedGraph, BoundariedGraph)):
            graph = graph.graph
        self.g = graph
        self._memo = {}
        self._frees = {}
        self._param_memo = {}
        self._duals = {}
        self._tw_ub = None
        self._restrict = ()

    # -- public -----------------------------------------------------------

    def run(self, formula, env=None):
        env = self.check_env(formula, env)
        return self.run_unchecked(formula, env)

    def check_env(self, formula, env):
        env = dict(env or {})
        for var, val in env.items():
            if is_setvar(var):
                env[var] = frozenset(val)
                for v in env[var]:
                    self.g.check_vertex(v)
            else:
                self.g.check_vertex(val)
        missing = free_vars(formula) - set(env)
        if missing:
            raise ScopeError(
                f"unassigned free variable {sorted(missing)[0]!r}")
        return env

    def run_restricted(self, formula, restrictions, env=None):
        """Evaluate a prenex formula whose i-th quantifier ranges inside the
        i-th restriction set (set variables over subsets of it)."""
        if not is_prenex(formula):
            raise SemanticError("restricted evaluation needs a prenex formula")
        self._restrict = tuple(frozenset(r) for r in restrictions)
        try:
            return self.run(formula, env)
        finally:
            self._restrict = ()
            self._memo.clear()

    # -- core recursion ----------------------------------------------------

    def run_unchecked(self, node, env, depth=0):
        t = type(node)
        if t is EdgeAtom:
            return self.g.has_edge(env[node.x], env[node.y])
        if t is EqAtom:
            return env[node.x] == env[node.y]
        if t is MemberAtom:
            return env[node.x] in env[node.setvar]
        if t is ColorAtom:
            return env[node.x] in self.g.colors.get(node.color, frozenset())
        if t is CardModAtom:
            return len(env[node.setvar]) % node.modulus == node.residue
        if t is DpAtom:
            return solve_dp(self.g, [(env[s], env[t2]) for s, t2 in node.pairs])
        if t is ConnAtom:
            return solve_conn(self.g, env[node.x], env[node.y],
                              [env[z] for z in node.deleted])
        if t is TtwLeAtom:
            return self.p_le("ttw", frozenset(env[v] for v in node.vars),
                             node.bound)
        if t is Not:
            return not self.run_unchecked(node.body, env, depth)
        if t is And:
            return (self.run_unchecked(node.left, env, depth)
                    and self.run_unchecked(node.right, env, depth))
        if t is Or:
            return (self.run_unchecked(node.left, env, depth)
                    or self.run_unchecked(node.right, env, depth))
        if t is Implies:
            return (not self.run_unchecked(node.left, env, depth)
                    or self.run_unchecked(node.right, env, depth))
        if t is Iff:
            return (self.run_unchecked(node.left, env, depth)
                    == self.run_unchecked(node.right, env, depth))
        # quantifiers: memoized on the relevant environment when it is small
        # (high-arity keys churn without reuse)
        key = None
        if not self._restrict:
            rel = self._relevant(node)
            if len(rel) <= 3:
                key = (id(node), tuple(env[v] for v in rel))
                hit = self._memo.get(key)
                if hit is not None:
                    return hit
        val = self._quantifier(node, env, depth)
        if key is not None:
            self._memo[key] = val
        return val

    def _relevant(self, node):
        hit = _FREES.get(id(node))
        if hit is not None and hit[0] is node:
            return hit[1]
        rel = tuple(sorted(free_vars(node)))
        if len(_FREES) > 200000:
            _FREES.clear()
        _FREES[id(node)] = (node, rel)
        return rel

    def _quantifier(self, node, env, depth):
        t = type(node)
        var = node.var
        shadow = env.get(var, _MISSING)
        try:
            if t is Exists or t is Forall:
                if depth < len(self._restrict):
                    domain = sorted(self._restrict[depth])
                else:
                    domain = self.g.vertices
                want = t is Forall
                for v in domain:
                    env[var] = v
                    if self.run_unchecked(node.body, env, depth + 1) != want:
                        return not want
                return want
            if t is SetForall:
                flipped = self._duals.get(id(node))
                if flipped is None:
                    flipped = SetExists(node.pkind, node.bound, node.var,
                                        Not(node.body))
                    self._duals[id(node)] = flipped
                return not self.run_unchecked(flipped, env, depth)
            if t is SetExists:
                within = None
                if depth < len(self._restrict):
                    within = self._restrict[depth]
                for s in self.bounded_subsets(node, env, within):
                    env[var] = s
                    if self.run_unchecked(node.body, env, depth + 1):
                        return True
                return False
            raise TypeError(f"not a formula node: {node!r}")
        finally:
            if shadow is _MISSING:
                env.pop(var, None)
            else:
                env[var] = shadow

    # -- set quantification -------------------------------------------------

    def bounded_subsets(self, node, env, within=None):
        """Candidate witness sets for a SetExists node, lexicographically,
        restricted to the narrowed universe."""
        kind, k = node.pkind, node.bound
        universe = self.narrowed_universe(node, env)
        if within is not None:
            universe = [v for v in universe if v in within]
        yield from self._bounded_dfs(kind, k, sorted(universe))

    def _bounded_dfs(self, kind, k, univ):
        empty = frozenset()
        if not self.p_le(kind, empty, k):
            return
        stack = [(empty, 0)]
        while stack:
            cur, start = stack.pop()
            yield cur
            pushed = []
            for i in range(start, len(univ)):
                s2 = cur | {univ[i]}
                if self.p_le(kind, frozenset(s2), k):
                    pushed.append((frozenset(s2), i + 1))
            stack.extend(reversed(pushed))

    def narrowed_universe(self, node, env):
        """Fixpoint of the vertices that can appear in a witness for this
        set quantifier, derived from monotone membership guards."""
        guards = _membership_guards(node.body, node.var)
        universe = list(self.g.vertices)
        if not guards:
            return universe
        changed = True
        while changed:
            changed = False
            over = frozenset(universe)
            kept = []
            for v in universe:
                ok = True
                for uvar, alpha in guards:
                    if not self.run_unchecked(alpha,
                                              {**env, node.var: over, uvar: v}):
                        ok = False
                        break
                if ok:
                    kept.append(v)
            if len(kept) != len(universe):
                universe = kept
                changed = True
        return universe

    # -- parameter bound checks with sound fast paths -----------------------

    def p_le(self, kind, s, k):
        if kind == "size":
            return len(s) <= k
        if kind in ("ttw", "atw"):
            if len(s) <= k + 1:
                return True
            if self._tw_upper() <= k:
                return True
        elif kind == "brg":
            if len(s) < (k + 1) * (k + 1):
                return True
        elif kind == "bog":
            if len(s) < _perimeter_size(k + 1):
                return True
        elif kind == "adbrg":
            if max(math.isqrt(len(s)),
                   compute("adeg", AnnotatedGraph(self.g, s)).value) <= k:
                return True
        key = (kind, s)
        hit = self._param_memo.get(key)
        if hit is None:
            hit = compute(kind, AnnotatedGraph(self.g, s)).value
            self._param_memo[key] = hit
        return hit <= k

    def _tw_upper(self):
        if self._tw_ub is None:
            self._tw_ub = tw_upper_greedy(self.g)
        return self._tw_ub


def _perimeter_size(j):
    return 1 if j == 1 else 4 * j - 4


def _membership_guards(body, setvar):
    """Conjuncts ``forall u. (u in X -> alpha)`` (or the Or form) whose alpha
    is monotone in X; returns list of (u, alpha)."""
    guards = []
    stack = [body]
    while stack:
        n = stack.pop()
        if isinstance(n, And):
            stack.extend((n.left, n.right))
            continue
        if not isinstance(n, Forall):
            continue
        inner = n.body
        cond = None
        if isinstance(inner, Implies) and _is_member(inner.left, n.var, setvar):
            cond = inner.right
        elif isinstance(inner, Or) and isinstance(inner.left, Not) \
                and _is_member(inner.left.body, n.var, setvar):
            cond = inner.right
        if cond is not None and _monotone_in(cond, setvar, True):
            guards.append((n.var, cond))
    return guards


def _is_member(node, var, setvar):
    return isinstance(node, MemberAtom) and node.x == var and node.setvar == setvar


def _monotone_in(node, setvar, sign):
    """Truth nondecreasing in the extension of ``setvar`` (for sign=True)."""
    if isinstance(node, MemberAtom):
        return sign if node.setvar == setvar else True
    if isinstance(node, CardModAtom):
        return node.setvar != setvar
    if isinstance(node, (EdgeAtom, EqAtom, ColorAtom, DpAtom, ConnAtom,
                         TtwLeAtom)):
        return True
    if isinstance(node, Not):
        return _monotone_in(node.body, setvar, not sign)
    if isinstance(node, (And, Or)):
        return (_monotone_in(node.left, setvar, sign)
                and _monotone_in(node.right, setvar, sign))
    if isinstance(node, Implies):
        return (_monotone_in(node.left, setvar, not sign)
                and _monotone_in(node.right, setvar, sign))
    if isinstance(node, Iff):
        return setvar not in free_vars(node)
    if isinstance(node, (Exists, Forall)):
        return _monotone_in(node.body, setvar, sign)
    if isinstance(node, (SetExists, SetForall)):
        if node.var == setvar:
            return True
        return _monotone_in(node.body, setvar, sign)
    raise TypeError(f"not a formula node: {node!r}")


# ---------------------------------------------------------------------------
# bounded-set enumeration (public operation)
# ---------------------------------------------------------------------------

def enumerate_bounded_sets(graph, kind, k):
    """Exactly the vertex sets whose parameter value is at most k, in
    lexicographic order.  Only minor-monotone kinds are admissible: the
    enumeration prunes all supersets of a failing set."""
    if kind not in MINOR_MONOTONE_KINDS:
        raise SemanticError(
            f"parameter kind {kind!r} is not minor-monotone; "
            "bounded-set enumeration would be unsound")
    if isinstance(graph, (AnnotatedGraph, BoundariedGraph)):
        graph = graph.graph
    ev = Evaluator(graph)
    yield from ev._bounded_dfs(kind, k, list(graph.vertices))


# ---------------------------------------------------------------------------
# batteries and boundary colors
# ---------------------------------------------------------------------------

def boundary_colored(bg):
    """The underlying graph with reserved color b_i on the boundary vertex
    labeled i, so closed battery formulas can reference the boundary."""
    extra = {f"b_{i + 1}": {v} for i, v in enumerate(bg.boundary)}
    return bg.graph.with_colors(extra)


def _battery_entries(battery):
    for entry in battery:
        if isinstance(entry, tuple):
            yield entry
        else:
            yield entry, None


def battery_type(bg, battery):
    """Evaluation bit vector of the battery formulas on the boundaried
    graph under the boundary-color convention."""
    g = boundary_colored(bg)
    out = []
    for formula, restrictions in _battery_entries(battery):
        if free_vars(formula):
            raise ScopeError("battery formulas must be closed")
        ev = Evaluator(g)
        if restrictions:
            out.append(ev.run_restricted(formula, restrictions))
        else:
            out.append(ev.run(formula))
    return tuple(out)


def all_label_pair_sets(t):
    """Every set of boundary label pairs, smallest first, deterministically."""
    import itertools
    pairs = [frozenset(p) for p in itertools.combinations(range(1, t + 1), 2)]
    out = []
    for r in range(len(pairs) + 1):
        for combo in itertools.combinations(pairs, r):
            out.append(frozenset(combo))
    return out


def ext_battery_type(bg, battery):
    """Battery bit vector of every boundary completion, keyed by the added
    label-pair set."""
    return {i: battery_type(bg.completed(i), battery)
            for i in all_label_pair_sets(bg.t)}
