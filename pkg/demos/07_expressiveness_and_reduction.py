#!/usr/bin/env python3
"""What the restricted set quantifier can and cannot see, and the reduction
showing why evaluation cannot stay easy on classes that encode every
topological minor.
"""

import itertools

from annotmc import clique, cycle, evaluate, grid
from annotmc.evaluator import enumerate_bounded_sets
from annotmc.graphs import Graph, twisted_grid_g, twisted_grid_h, AnnotatedGraph
from annotmc.logic import parse_formula
from annotmc.minors import find_annotated_topological_minor
from annotmc.rewrite import hardness_reduce

print("=== on cliques the quantifier only sees small sets ===")
for n in (5, 7):
    for k in (1, 2):
        count = sum(1 for _ in enumerate_bounded_sets(clique(n).graph,
                                                      "ttw", k))
        print(f"  K{n}, bound {k}: {count} sets "
              f"(all subsets of size <= {k + 1})")

print("\n=== on low-treewidth graphs it sees everything ===")
g = grid(2).graph
count = sum(1 for _ in enumerate_bounded_sets(g, "ttw", 3))
print(f"  2x2 grid, bound 3: {count} of {2 ** g.n} subsets")

print("\n=== connectivity separates one grid from two ===")
f = parse_formula("exists x. forall y. conn(x,y)")
g3 = grid(3).graph
two = Graph(range(18), list(g3.edges) + [(u + 9, v + 9) for u, v in g3.edges])
print(f"  one grid: {evaluate(g3, f)}, two grids: {evaluate(two, f)}")

print("\n=== a twist is invisible to local eyes but not to containment ===")
k33 = AnnotatedGraph(Graph(range(6),
                           [(i, j) for i in range(3) for j in range(3, 6)]))
straight, twisted = twisted_grid_g(3), twisted_grid_h(3)
print("  straight-wrapped grid contains K33 topologically:",
      find_annotated_topological_minor(straight, k33) is not None)
print("  twist-wrapped grid contains K33 topologically:",
      find_annotated_topological_minor(twisted, k33) is not None)

print("\n=== encoding FO model checking into subdivisions ===")
tri = parse_formula("exists x. exists y. exists z. (E(x,y) & E(y,z) & E(x,z)"
                    " & !(x = y) & !(y = z) & !(x = z))")
for name, h in (("K3", clique(3).graph), ("C5", cycle(5).graph)):
    red = hardness_reduce(h, tri, t=1)
    print(f"  {name}: {h.n} vertices become a {red.host.n}-vertex host; "
          f"triangle truth {evaluate(h, tri)} -> {evaluate(red.host, red.formula)}")
