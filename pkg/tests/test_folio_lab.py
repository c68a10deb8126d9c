import random

import pytest

from annotmc.canonical import are_isomorphic
from annotmc.corpus import (connected_formula, even_cycle_formula,
                            minidp_corpus, path_decomposition)
from annotmc.decomp import extract_cone
from annotmc.errors import CompatibilityError, PreconditionError
from annotmc.folio import (boundary_only, compatible, ext_folio,
                           ext_folio_equal, find_representative, folio, glue,
                           glue_tupled)
from annotmc.graphs import AnnotatedGraph, BoundariedGraph, Graph, clique, path
from annotmc.lab import (check_composition, check_param_transfer,
                         check_tm_preserved, mini_dp, param_transfer_sweep,
                         replace_cone)
from annotmc.logic import parse_formula
from annotmc.minors import topo_model_search


def tail(internal, annotate_end=False, boundary_both=False):
    n = internal + (2 if boundary_both else 1)
    verts = list(range(n))
    edges = [(i, i + 1) for i in range(n - 1)]
    annot = {n - 1} if annotate_end else set()
    b = (0, n - 1) if boundary_both else (0,)
    return BoundariedGraph(Graph(verts, edges), annot, b)


# -- compatibility and gluing ---------------------------------------------------

def test_compatible_with_itself():
    g = tail(2, boundary_both=True)
    assert compatible(g, g)


def test_boundary_sizes_must_match():
    assert not compatible(tail(1), tail(1, boundary_both=True))


def test_annotated_boundary_labels_must_match():
    a = BoundariedGraph(Graph([0, 1]), {0}, (0, 1))
    b = BoundariedGraph(Graph([0, 1]), {1}, (0, 1))
    assert not compatible(a, b)


def test_glue_two_paths_gives_a_cycle():
    a = tail(1, boundary_both=True)
    b = tail(1, boundary_both=True)
    glued = glue(a, b)
    assert glued.graph.n == 4
    assert all(glued.graph.degree(v) == 2 for v in glued.graph.vertices)


def test_glue_boundary_only_is_identity():
    g = tail(3, boundary_both=True)
    glued = glue(g, boundary_only(g))
    assert are_isomorphic(glued, AnnotatedGraph(g.graph, g.annot))


def test_glue_collapses_duplicate_edges():
    edge = BoundariedGraph(Graph([0, 1], [(0, 1)]), (), (0, 1))
    glued = glue(edge, edge)
    assert glued.graph.edges == ((0, 1),)


def test_glue_is_commutative_up_to_isomorphism():
    a = tail(2, boundary_both=True)
    b = tail(4, boundary_both=True)
    assert are_isomorphic(glue(a, b), glue(b, a))


def test_tupled_glue_unions_restrictions():
    a = tail(1, boundary_both=True)
    b = tail(2, boundary_both=True)
    glued, tuples = glue_tupled(a, ({0, 1},), b, ({0},))
    assert len(tuples) == 1
    assert 0 in tuples[0] and 1 in tuples[0]


def test_incompatible_glue_is_an_error():
    with pytest.raises(CompatibilityError):
        glue(tail(1), tail(1, boundary_both=True))


# -- folios ------------------------------------------------------------------------

def test_folio_of_short_path():
    f = folio(tail(1, boundary_both=True), 1)
    assert len(f.members) == 4  # bare boundary, isolated extra, two pendants


def test_detail_accounting():
    triangle = BoundariedGraph(clique(3).graph, (), (0,))
    assert triangle.detail == 3


def test_folio_zero_of_bare_vertex():
    bare = BoundariedGraph(Graph([0]), (), (0,))
    f = folio(bare, 0)
    assert len(f.members) == 1


def test_completion_reveals_the_boundary_edge():
    bare = BoundariedGraph(Graph([0, 1]), (), (0, 1))
    ext = ext_folio(bare, 1)
    plain = ext[frozenset()]
    completed = ext[frozenset({frozenset({1, 2})})]
    assert all(len(m.graph.edges) == 0 or (0, 1) not in m.graph.edges
               for m in plain.members)
    assert any((0, 1) in m.graph.edges for m in completed.members)


def test_completion_only_adds_containments():
    bg = tail(2, boundary_both=True)
    base = folio(bg, 2)
    for i in (frozenset({frozenset({1, 2})}),):
        completed = bg.completed(i)
        for member in base.members:
            pinned = dict(zip(member.boundary, completed.boundary))
            assert topo_model_search(completed, member, pinned) is not None


def test_folio_equality_is_an_equivalence_on_isomorphs():
    a = tail(3, boundary_both=True)
    b = BoundariedGraph(Graph([0, 5, 6, 7, 9],
                              [(0, 5), (5, 6), (6, 7), (7, 9)]), (), (0, 9))
    assert ext_folio_equal(a, b, 2)


# -- representatives ------------------------------------------------------------------

def test_long_tail_shrinks_to_short_tail():
    rep = find_representative(tail(2, boundary_both=True), 1, 3)
    assert rep is not None and rep.graph.n == 3
    assert ext_folio_equal(rep, tail(2, boundary_both=True), 1)


def test_representative_of_self_minimal_graph():
    edge = BoundariedGraph(Graph([0, 1], [(0, 1)]), (), (0, 1))
    rep = find_representative(edge, 1, 2)
    assert rep is not None and rep.graph.n == 2


def test_unreplaceable_clique_within_budget():
    k5 = BoundariedGraph(clique(5).graph, (), ())
    assert find_representative(k5, 4, 3) is None


def test_battery_constraint_blocks_parity_change():
    parity = parse_formula(
        "Exists[ttw<=2] X. (card(X) % 2 = 0 & forall y. y in X)")
    piece = tail(3, boundary_both=True)  # five vertices, odd
    rep_plain = find_representative(piece, 1, 3)
    assert rep_plain is not None and rep_plain.graph.n == 3
    rep_parity = find_representative(piece, 1, 4, [parity])
    assert rep_parity is not None
    assert rep_parity.graph.n % 2 == piece.graph.n % 2


# -- replacement inside decompositions --------------------------------------------------

def test_identity_replacement_is_isomorphic():
    g = path(5).graph
    t = path_decomposition(5)
    cone = extract_cone(g, t, 1)
    new_g, new_t, report = replace_cone(g, t, 1, cone, folio_level=1)
    assert new_g.n == g.n
    assert report["adhesion_after"] <= report["adhesion_before"]


def test_tail_replacement_shrinks_path():
    g = path(5).graph
    t = path_decomposition(5)
    cone = extract_cone(g, t, 1)
    rep = find_representative(cone, 1, 2)
    new_g, new_t, report = replace_cone(g, t, 1, rep, folio_level=1, q=2, k=1)
    assert new_g.n == 4
    assert report.get("regular_preserved")
    assert report.get("unbreakability_preserved")


def test_replacement_precondition_failures_are_named():
    g = path(5).graph
    t = path_decomposition(5)
    wrong_boundary = BoundariedGraph(Graph([0, 1], [(0, 1)]), (), (0, 1))
    with pytest.raises(PreconditionError, match="incompatible"):
        replace_cone(g, t, 1, wrong_boundary, folio_level=1)
    different_folio = BoundariedGraph(Graph([0, 1, 2], [(1, 2)]), (), (0,))
    with pytest.raises(PreconditionError, match="folio"):
        replace_cone(g, t, 1, different_folio, folio_level=1)
    # level 0 is blind to everything but the boundary, so only the inner
    # connectivity check can reject this one
    disconnected = BoundariedGraph(Graph([0, 1, 2]), (), (0,))
    with pytest.raises(PreconditionError, match="connectivity"):
        replace_cone(g, t, 1, disconnected, folio_level=0)


def test_exclusion_preserved_on_folio_equal_replacement():
    g = path(7).graph
    t = path_decomposition(7)
    cone = extract_cone(g, t, 2)  # first four vertices, boundary one vertex
    rep = find_representative(cone, 2, 3)
    new_g, _, _ = replace_cone(g, t, 2, rep, folio_level=2)
    verdict = check_tm_preserved(g, new_g, clique(4), 4)
    assert verdict["exclusion_preserved"]


def test_control_replacement_that_adds_a_clique_is_flagged():
    g = path(5).graph
    g_hat = Graph(range(5), list(path(5).graph.edges) +
                  [(0, 2), (0, 3), (1, 3)])
    verdict = check_tm_preserved(g, g_hat, clique(4), 4)
    assert verdict["contains_after"]
    assert not verdict["exclusion_preserved"]


# -- transfer and composition -------------------------------------------------------------

def contexts_for_single_boundary(rnd, count):
    out = []
    for _ in range(count):
        extra = rnd.randint(0, 3)
        verts = list(range(extra + 1))
        edges = [(rnd.randint(0, v - 1), v) for v in range(1, extra + 1)]
        annot = {v for v in verts[1:] if rnd.random() < 0.5}
        out.append(BoundariedGraph(Graph(verts, set(edges)), annot, (0,)))
    return out


def test_param_transfer_on_folio_equal_tails():
    rnd = random.Random(1)
    g1 = tail(3, annotate_end=True)
    g2 = tail(2, annotate_end=True)
    rep = check_param_transfer(g1, g2, contexts_for_single_boundary(rnd, 20),
                               level=2, w=1)
    assert rep["precondition_ok"]
    assert rep["counterexample"] is None


def test_param_transfer_blind_level_finds_counterexample():
    bare = BoundariedGraph(Graph([0]), (), (0,))
    blob = BoundariedGraph(Graph(range(4), [(0, 1), (1, 2), (2, 3), (1, 3)]),
                           {1, 2, 3}, (0,))
    rep = check_param_transfer(bare, blob, [bare], level=0, w=1)
    assert rep["precondition_ok"]
    assert rep["counterexample"] is not None


def test_param_transfer_reports_folio_mismatch_as_precondition():
    bare = BoundariedGraph(Graph([0]), (), (0,))
    blob = BoundariedGraph(Graph(range(4), [(0, 1), (1, 2), (2, 3), (1, 3)]),
                           {1, 2, 3}, (0,))
    rep = check_param_transfer(bare, blob, [bare], level=1, w=1)
    assert not rep["precondition_ok"]


def test_param_transfer_sweep_reports_least_level():
    rnd = random.Random(2)
    g1 = tail(3, annotate_end=True)
    g2 = tail(2, annotate_end=True)
    sweep = param_transfer_sweep(g1, g2, contexts_for_single_boundary(rnd, 10),
                                 w_values=(1,), levels=(0, 1, 2))
    assert sweep[1] is not None


def test_composition_with_matching_types():
    battery = [parse_formula("exists x. exists y. (color(b_1,x) & "
                             "color(b_2,y) & conn(x,y))"),
               even_cycle_formula()]
    conclusion = [connected_formula(), even_cycle_formula()]
    ctxs = [(tail(i, boundary_both=True), ()) for i in (1, 2)]
    rep = check_composition(tail(2, boundary_both=True), (),
                            tail(4, boundary_both=True), (),
                            ctxs, battery, conclusion)
    assert rep["hypothesis_equal"]
    assert not rep["counterexamples"]


def test_composition_empty_battery_control_finds_counterexamples():
    conclusion = [even_cycle_formula()]
    ctxs = [(tail(i, boundary_both=True), ()) for i in (1, 2)]
    rep = check_composition(tail(1, boundary_both=True), (),
                            tail(2, boundary_both=True), (),
                            ctxs, [], conclusion)
    assert rep["hypothesis_equal"]  # vacuously
    assert rep["counterexamples"]


def test_identical_sides_always_agree():
    conclusion = [connected_formula()]
    ctxs = [(tail(2, boundary_both=True), ())]
    rep = check_composition(tail(2, boundary_both=True), (),
                            tail(2, boundary_both=True), (),
                            ctxs, [], conclusion)
    assert rep["agreements"] == 1


# -- the replacement pipeline ----------------------------------------------------------------

def test_minidp_corpus_runs_clean():
    for name, g, t, battery, level, budget in minidp_corpus():
        rep = mini_dp(g, t, list(battery), level, budget)
        assert rep.oracle_ok, name
        assert rep.final_vertices <= rep.initial_vertices


def test_minidp_empty_battery_shrinks_hard():
    g = path(9).graph
    rep = mini_dp(g, path_decomposition(9), [], 1, 3)
    assert rep.oracle_ok and rep.final_vertices < g.n


def test_minidp_fails_loudly_when_the_battery_cannot_see_the_property():
    # six pairwise distinct vertices exist globally but not in any piece,
    # so piece types agree, the graph shrinks, and the oracle must trip
    from annotmc.lab import OracleMismatch

    names = ["a", "b", "c", "d", "e", "f"]
    lits = []
    for i, u in enumerate(names):
        for v in names[i + 1:]:
            lits.append(f"!({u} = {v})")
    text = " & ".join(lits)
    for v in reversed(names):
        text = f"exists {v}. ({text})"
    six = parse_formula(text)
    g = path(9).graph
    with pytest.raises(OracleMismatch, match="too"):
        mini_dp(g, path_decomposition(9), [six], 1, 3)


def test_minidp_preserves_even_cycle_verdicts():
    from annotmc.corpus import cycle_decomposition
    from annotmc.graphs import cycle
    for n in (7, 8):
        g = cycle(n).graph
        rep = mini_dp(g, cycle_decomposition(n), [even_cycle_formula()], 2, 4)
        assert rep.oracle_ok
        assert rep.verdicts_after == ((n % 2 == 0),)
