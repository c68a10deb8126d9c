import pytest

from annotmc.corpus import all_annotated_up_to, all_graphs_up_to
from annotmc.errors import CompatibilityError, SemanticError
from annotmc.graphs import (AnnotatedGraph, BoundariedGraph, Graph, clique,
                            grid, outer_grid, path, rainbow_grid)
from annotmc.minors import (dissolve, find_annotated_minor,
                            find_annotated_topological_minor)
from oracles import minor_by_partitions


def test_reflexivity_gives_identity_model():
    ag = outer_grid(2)
    m = find_annotated_minor(ag, ag)
    assert m is not None
    assert all(b == frozenset({v}) for v, b in m.branch)


def test_triangle_inside_fully_annotated_square():
    host = rainbow_grid(2)
    pattern = AnnotatedGraph(clique(3).graph, range(3))
    m = find_annotated_minor(host, pattern)
    assert m is not None and m.validate(host, pattern)


def test_rainbow_grid_needs_nine_annotated_vertices():
    host = outer_grid(3)  # only eight annotated vertices
    assert find_annotated_minor(host, rainbow_grid(3)) is None


def test_minor_witness_is_lexicographically_least():
    host = AnnotatedGraph(path(4).graph)
    pattern = AnnotatedGraph(path(2).graph)
    m = find_annotated_minor(host, pattern)
    assert [sorted(b) for _, b in m.branch] == [[0], [1]]


def test_minor_search_agrees_with_partition_oracle():
    hosts = [AnnotatedGraph(g, ()) for g in all_graphs_up_to(5)]
    hosts += [AnnotatedGraph(g, g.vertices) for g in all_graphs_up_to(5)]
    patterns = all_annotated_up_to(3)
    for host in hosts:
        for pat in patterns:
            if pat.graph.n > host.graph.n:
                continue
            got = find_annotated_minor(host, pat)
            want = minor_by_partitions(host, pat)
            assert (got is not None) == want, (host, pat)
            if got is not None:
                assert got.validate(host, pat)


def test_topological_examples():
    assert find_annotated_topological_minor(grid(3), clique(4)) is not None
    assert find_annotated_topological_minor(grid(3), clique(5)) is None
    ag = outer_grid(2)
    m = find_annotated_topological_minor(ag, ag)
    assert m is not None and m.validate(ag, ag)


def test_topological_implies_minor_on_small_corpus():
    hosts = [AnnotatedGraph(g, g.vertices) for g in all_graphs_up_to(4)]
    patterns = all_annotated_up_to(3)
    for host in hosts:
        for pat in patterns:
            if pat.graph.n > host.graph.n:
                continue
            topo = find_annotated_topological_minor(host, pat)
            if topo is not None:
                assert topo.validate(host, pat)
                assert find_annotated_minor(host, pat) is not None


def test_low_degree_patterns_make_the_relations_coincide():
    hosts = [AnnotatedGraph(g, g.vertices) for g in all_graphs_up_to(5)]
    patterns = [p for p in all_annotated_up_to(3)
                if max((p.graph.degree(v) for v in p.graph.vertices),
                       default=0) <= 3]
    for host in hosts:
        for pat in patterns:
            if pat.graph.n > host.graph.n:
                continue
            as_minor = find_annotated_minor(host, pat) is not None
            as_topo = find_annotated_topological_minor(host, pat) is not None
            assert as_minor == as_topo, (host, pat)


def test_transitivity_on_witnessed_chains():
    a = AnnotatedGraph(path(2).graph, range(2))
    b = AnnotatedGraph(path(3).graph, range(3))
    c = AnnotatedGraph(path(5).graph, range(5))
    assert find_annotated_minor(b, a) is not None
    assert find_annotated_minor(c, b) is not None
    assert find_annotated_minor(c, a) is not None


def test_boundaried_topological_search_pins_labels():
    pattern = BoundariedGraph(Graph([0, 1], [(0, 1)]), (), (0, 1))
    host = BoundariedGraph(Graph([0, 1, 2], [(0, 2), (2, 1)]), (), (0, 1))
    with pytest.raises(CompatibilityError):
        # boundary-induced graphs differ: direct edge vs none
        find_annotated_topological_minor(
            BoundariedGraph(Graph([0, 1], [(0, 1)]), (), (0, 1)),
            BoundariedGraph(Graph([0, 1]), (), (0, 1)))
    m = find_annotated_topological_minor(host, pattern) \
        if pattern.boundary_edge_labels() == host.boundary_edge_labels() else None
    assert m is None  # host boundary not directly adjacent


def test_boundaried_size_mismatch_is_an_error():
    a = BoundariedGraph(Graph([0]), (), (0,))
    b = BoundariedGraph(Graph([0, 1]), (), (0, 1))
    with pytest.raises(CompatibilityError, match="incompatible boundaries"):
        find_annotated_topological_minor(a, b)


# -- dissolution ---------------------------------------------------------------

def test_dissolve_nothing():
    bg = BoundariedGraph(path(3).graph, (), (0, 2))
    out = dissolve(bg, bg.graph.vertices)
    assert out.graph.edges == bg.graph.edges


def test_dissolve_middle_of_path():
    bg = BoundariedGraph(path(3).graph, (), (0, 2))
    out = dissolve(bg, [0, 2])
    assert out.graph.edges == ((0, 2),)
    assert out.boundary == (0, 2)


def test_dissolve_square_collapses_parallel_arcs():
    c4 = Graph(range(4), [(0, 1), (1, 2), (2, 3), (0, 3)])
    out = dissolve(BoundariedGraph(c4, (), ()), [0, 2])
    assert out.graph.vertices == (0, 2)
    assert out.graph.edges == ((0, 2),)


def test_dissolve_keeps_annotation_trace():
    bg = BoundariedGraph(path(3).graph, {1, 2}, (0, 2))
    out = dissolve(bg, [0, 2])
    assert out.annot == {2}


def test_dissolve_rejects_high_degree_leftovers():
    star = Graph(range(4), [(0, 1), (0, 2), (0, 3)])
    with pytest.raises(SemanticError, match="degree"):
        dissolve(BoundariedGraph(star, (), (1,)), [1, 2, 3])


def test_dissolve_rejects_boundary_outside_branch_set():
    bg = BoundariedGraph(path(3).graph, (), (1,))
    with pytest.raises(SemanticError, match="boundary"):
        dissolve(bg, [0, 2])
