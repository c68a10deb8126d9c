import pytest

from annotmc.corpus import (clique_with_tails, cycle_decomposition,
                            grid_decomposition, path_decomposition)
from annotmc.decomp import (TreeDecomposition, extract_cone,
                            find_decomposition, is_regular,
                            is_strongly_unbreakable, node_anatomy,
                            parse_decomp, print_decomp, validate)
from annotmc.errors import EnvelopeError, SemanticError
from annotmc.graphs import Graph, clique, cycle, grid, path, star
from annotmc.lab import (check_bounded_witness_size,
                         check_cone_unbreakability_bound)


def two_bag_path():
    bags = {0: {0, 1}, 1: {1, 2}}
    parent = {1: None, 0: 1}
    return TreeDecomposition(bags, parent)


def test_single_bag_is_valid_with_full_width():
    g = clique(4).graph
    t = TreeDecomposition({0: g.vertices}, {0: None})
    ok, diags = validate(t, g)
    assert ok and not diags
    assert t.width() == 3


def test_two_bag_path_decomposition():
    g = path(3).graph
    t = two_bag_path()
    ok, _ = validate(t, g)
    assert ok and t.width() == 1


def test_uncovered_edge_is_diagnosed():
    g = path(3).graph
    t = TreeDecomposition({0: {0}, 1: {2}}, {1: None, 0: 1})
    ok, diags = validate(t, g)
    assert not ok
    assert any("edge (0, 1)" in d for d in diags)


def test_unknown_vertex_in_bag_is_an_error():
    t = TreeDecomposition({0: {7}}, {0: None})
    with pytest.raises(SemanticError, match="unknown vertex"):
        validate(t, path(3).graph)


def test_node_anatomy():
    g = path(3).graph
    t = two_bag_path()
    root = node_anatomy(t, g, 1)
    assert root["adh"] == frozenset() and root["cone"] == {0, 1, 2}
    child = node_anatomy(t, g, 0)
    assert child["adh"] == {1}
    assert child["mrg"] == {0}
    assert child["cone"] == {0, 1}
    assert child["comp"] == {0}


def test_anatomy_rejects_unknown_node():
    with pytest.raises(SemanticError):
        node_anatomy(two_bag_path(), path(3).graph, 9)


def test_regularity_of_small_decompositions():
    g = path(3).graph
    assert is_regular(two_bag_path(), g)[0]
    single = TreeDecomposition({0: {0, 1, 2}}, {0: None})
    assert is_regular(single, g)[0]


def test_disconnected_component_is_irregular():
    g = Graph(range(4), [(0, 1), (2, 3)])
    t = TreeDecomposition({0: {0, 2}, 1: {0, 1, 2, 3}}, {0: None, 1: 0})
    ok, node = is_regular(t, g)
    assert not ok and node == 1


def test_margin_partition_on_regular_decompositions():
    cases = [(path(9).graph, path_decomposition(9)),
             (cycle(8).graph, cycle_decomposition(8)),
             (grid(3).graph, grid_decomposition(3))]
    g, t = clique_with_tails(4, 2)
    cases.append((g, t))
    for g, t in cases:
        assert validate(t, g)[0]
        assert is_regular(t, g)[0]
        margins = [t.mrg(x) for x in t.nodes]
        assert sum(len(m) for m in margins) == g.n
        assert set().union(*margins) == set(g.vertices)


def test_strong_unbreakability_checks_every_cone():
    g = clique(6).graph
    single = TreeDecomposition({0: g.vertices}, {0: None})
    assert is_strongly_unbreakable(single, g, 2, 2)[0]
    p5 = path(5).graph
    single5 = TreeDecomposition({0: p5.vertices}, {0: None})
    ok, node, sep = is_strongly_unbreakable(single5, p5, 1, 1)
    assert not ok and node == 0 and sep is not None


def test_trivial_budget_is_always_unbreakable():
    g = path(5).graph
    t = path_decomposition(5)
    assert is_strongly_unbreakable(t, g, g.n, 3)[0]


def test_extract_cone_shapes():
    g = path(3).graph
    t = two_bag_path()
    whole = extract_cone(g, t, 1)
    assert whole.boundary == () and whole.graph.n == 3
    piece = extract_cone(g, t, 0)
    assert piece.boundary == (1,)
    assert set(piece.graph.vertices) == {0, 1}


def test_extract_cone_of_star_leaves():
    g = star(3).graph
    bags = {0: {0}, 1: {0, 1}, 2: {0, 2}, 3: {0, 3}}
    parent = {0: None, 1: 0, 2: 0, 3: 0}
    t = TreeDecomposition(bags, parent)
    for i in (1, 2, 3):
        piece = extract_cone(g, t, i)
        assert piece.boundary == (0,)
        assert set(piece.graph.vertices) == {0, i}


# -- file format -----------------------------------------------------------------

def test_decomp_file_round_trip():
    t = path_decomposition(5)
    text = print_decomp(t)
    again = parse_decomp(text)
    assert print_decomp(again) == text
    assert again.bag == t.bag


def test_decomp_file_needs_root():
    with pytest.raises(SemanticError, match="root"):
        parse_decomp("decomp t\nnode 0 : 1 2\n")


# -- search -----------------------------------------------------------------------

def test_clique_search_finds_single_bag():
    t = find_decomposition(clique(4).graph, 4, 4, 4)
    assert t is not None and len(t.nodes) == 1


def test_path_search_succeeds():
    t = find_decomposition(path(4).graph, 2, 1, 1)
    g = path(4).graph
    assert t is not None
    assert validate(t, g)[0]
    assert is_regular(t, g)[0]
    assert is_strongly_unbreakable(t, g, 2, 1)[0]
    assert t.adhesion() <= 1


def test_two_disjoint_edges_need_two_bags():
    g = Graph(range(4), [(0, 1), (2, 3)])
    t = find_decomposition(g, 1, 0, 0)
    assert t is not None and len(t.nodes) == 2


def test_search_refuses_large_graphs():
    with pytest.raises(EnvelopeError):
        find_decomposition(path(8).graph, 2, 1, 1)


# -- bound-check experiments -------------------------------------------------------

def test_witness_size_bound_on_cliques():
    rep = check_bounded_witness_size(clique(7).graph, 2, 1)
    assert rep["applicable"] and not rep["violations"]
    assert rep["checked"] > 0


def test_witness_size_bound_skips_breakable_instances():
    rep = check_bounded_witness_size(path(9).graph, 2, 1)
    assert not rep["applicable"]


def test_cone_unbreakability_bound():
    g, t = clique_with_tails(4, 2)
    rep = check_cone_unbreakability_bound(g, t, 0, q=4, k=1, ell=1, c=3)
    assert rep["premises_hold"]
    assert rep["conclusion_holds"]
    assert rep["bounds_differ"]
    assert rep["proof_bound"] > rep["displayed_bound"]
