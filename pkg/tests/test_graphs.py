import pytest
from hypothesis import given, settings, strategies as st

from annotmc.errors import FormatError, SemanticError
from annotmc.graphs import (AnnotatedGraph, BoundariedGraph, Graph,
                            enumerate_separations, generate, is_unbreakable,
                            leaf_augment, outer_grid, parse_graph, path,
                            print_graph, solve_conn, solve_dp, subdivide)
from oracles import dp_by_enumeration, separations_by_bipartition


def small_graphs():
    return st.integers(2, 8).flatmap(
        lambda n: st.builds(
            lambda edges: Graph(range(n), edges),
            st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))
                    .filter(lambda e: e[0] != e[1]), max_size=12)))


# -- file format -------------------------------------------------------------

SAMPLE = """# a square
graph c4
v 0
v 1 red
v 2
v 3 red
e 0 1
e 1 2
e 2 3
e 3 0
annot 0 2
"""


def test_parse_graph_reads_the_square():
    ag = parse_graph(SAMPLE)
    assert isinstance(ag, AnnotatedGraph)
    assert ag.graph.n == 4
    assert len(ag.graph.edges) == 4
    assert ag.annot == {0, 2}
    assert ag.graph.colors["red"] == {1, 3}


def test_print_parse_round_trip():
    for obj in (parse_graph(SAMPLE), path(5), outer_grid(3),
                BoundariedGraph(Graph([0, 1, 2], [(0, 1), (1, 2)]), {1}, (0, 2))):
        text = print_graph(obj)
        again = parse_graph(text)
        assert print_graph(again) == text
        assert again.annot == obj.annot


def test_every_shipped_corpus_file_round_trips():
    from importlib import resources

    folder = resources.files("annotmc") / "corpus"
    count = 0
    for entry in sorted(folder.iterdir(), key=lambda e: e.name):
        if not entry.name.endswith(".g"):
            continue
        normalized = print_graph(parse_graph(entry.read_text()))
        assert print_graph(parse_graph(normalized)) == normalized
        count += 1
    assert count >= 10


def test_undeclared_edge_endpoint_is_an_error():
    with pytest.raises(SemanticError, match="undeclared vertex 5"):
        parse_graph("graph g\nv 0\ne 0 5\n")


def test_duplicate_boundary_id_is_an_error():
    with pytest.raises(SemanticError, match="duplicate boundary id"):
        parse_graph("graph g\nv 0\nv 1\nbnd 0 0\n")


def test_malformed_line_reports_its_number():
    with pytest.raises(FormatError, match="line 2"):
        parse_graph("graph g\nwhat 1 2\n")


# -- generators --------------------------------------------------------------

def test_outer_grid_2_is_fully_annotated_square():
    ag = outer_grid(2)
    assert ag.annot == set(ag.graph.vertices)
    assert len(ag.graph.edges) == 4


def test_outer_grid_3_leaves_center_out():
    ag = outer_grid(3)
    assert sorted(ag.annot) == [0, 1, 2, 3, 5, 6, 7, 8]
    assert 4 not in ag.annot


def test_leaf_augment_triangle():
    h0 = leaf_augment(Graph(range(3), [(0, 1), (1, 2), (0, 2)]))
    assert h0.graph.n == 9
    for v in range(3):
        assert h0.graph.degree(v) == 4


def test_subdivide_replaces_each_edge():
    s = subdivide(Graph(range(3), [(0, 1), (1, 2)]), 2)
    assert s.graph.n == 3 + 2 * 2
    assert all(s.graph.degree(v) == 2
               for v in s.graph.vertices if v >= 3)


def test_generator_rejects_bad_parameters():
    with pytest.raises(SemanticError):
        generate("grid", 0)
    with pytest.raises(SemanticError):
        subdivide(Graph(range(2), [(0, 1)]), 0)


def test_twisted_grids_shapes():
    g = generate("twisted_grid_g", 3)
    h = generate("twisted_grid_h", 3)
    assert g.graph.n == h.graph.n == 9
    assert g.graph.has_edge(0, 2) and g.graph.has_edge(3, 5)
    assert h.graph.has_edge(0, 8) and h.graph.has_edge(2, 6)


# -- path solvers ------------------------------------------------------------

def test_dp_trivial_paths_consume_their_vertex():
    g = path(3).graph
    assert solve_dp(g, [(0, 0), (2, 2)])
    assert not solve_dp(g, [(1, 1), (0, 2)])


def test_dp_examples():
    g = path(3).graph
    assert not solve_dp(g, [(0, 1), (1, 2)])
    c4 = generate("cycle", 4).graph
    assert not solve_dp(c4, [(0, 2), (1, 3)])
    assert solve_dp(c4, [(0, 1), (2, 3)])


def test_conn_examples():
    g = path(3).graph
    assert solve_conn(g, 0, 0)
    assert solve_conn(g, 0, 2)
    assert not solve_conn(g, 0, 2, [1])
    assert not solve_conn(g, 0, 2, [0])


@settings(max_examples=60, deadline=None)
@given(small_graphs(), st.data())
def test_dp_matches_brute_force(g, data):
    k = data.draw(st.integers(1, 2))
    pairs = [(data.draw(st.sampled_from(g.vertices)),
              data.draw(st.sampled_from(g.vertices))) for _ in range(k)]
    assert solve_dp(g, pairs) == dp_by_enumeration(g, pairs)


@settings(max_examples=60, deadline=None)
@given(small_graphs(), st.data())
def test_single_pair_dp_is_connectivity(g, data):
    s = data.draw(st.sampled_from(g.vertices))
    t = data.draw(st.sampled_from(g.vertices))
    assert solve_dp(g, [(s, t)]) == solve_conn(g, s, t)


# -- separations -------------------------------------------------------------

def test_separations_of_path():
    g = path(3).graph
    seps = list(enumerate_separations(g, 1))
    pairs = {(s.side_a, s.side_b) for s in seps}
    assert (frozenset({0, 1}), frozenset({1, 2})) in pairs
    assert len(pairs) == len(seps), "duplicates produced"
    assert all(s.check(g) for s in seps)


def test_clique_only_has_trivial_low_order_separations():
    g = generate("clique", 3).graph
    for s in enumerate_separations(g, 0):
        assert s.side_a == set(g.vertices) or s.side_b == set(g.vertices)


def test_disconnected_pair_splits_with_empty_separator():
    g = Graph([0, 1])
    pairs = {(s.side_a, s.side_b) for s in enumerate_separations(g, 0)}
    assert (frozenset({0}), frozenset({1})) in pairs


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 5), st.data())
def test_separations_match_direct_bipartitions(n, data):
    edges = data.draw(st.sets(
        st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))
        .filter(lambda e: e[0] != e[1]), max_size=6))
    g = Graph(range(n), edges)
    k = data.draw(st.integers(0, 2))
    mine = {(s.side_a, s.side_b) for s in enumerate_separations(g, k)}
    assert mine == separations_by_bipartition(g, k)


# -- unbreakability ----------------------------------------------------------

def test_unbreakable_when_budget_is_everything():
    g = path(4).graph
    ok, _ = is_unbreakable(g, g.vertices, g.n, 2)
    assert ok


def test_path5_breaks_at_one():
    g = path(5).graph
    ok, sep = is_unbreakable(g, g.vertices, 1, 1)
    assert not ok
    assert len(sep.separator) == 1
    assert len(sep.side_a & set(g.vertices)) > 1
    assert len(sep.side_b & set(g.vertices)) > 1


def test_cliques_are_unbreakable():
    for n in range(2, 9):
        g = generate("clique", n).graph
        for k in range(0, 4):
            ok, _ = is_unbreakable(g, g.vertices, k, k)
            assert ok, (n, k)


def test_unbreakability_monotone_in_q_and_antitone_in_k():
    from annotmc.corpus import all_graphs_up_to

    for g in all_graphs_up_to(6):
        for annot in (g.vertices, g.vertices[::2]):
            table = {(q, k): is_unbreakable(g, annot, q, k)[0]
                     for q in range(4) for k in range(4)}
            for q in range(3):
                for k in range(4):
                    assert not (table[(q, k)] and not table[(q + 1, k)])
            for q in range(4):
                for k in range(3):
                    assert not (table[(q, k + 1)] and not table[(q, k)])
