#!/usr/bin/env python3
"""Minor search, topological minor search, and the compiler that turns a
pattern into a disjoint-paths formula deciding its containment."""

from annotmc import (AnnotatedGraph, clique, evaluate, find_annotated_minor,
                     find_annotated_topological_minor, grid, outer_grid,
                     path, rainbow_grid)
from annotmc.rewrite import minor_formula
from annotmc.logic import to_text, formula_length

print("=== searches ===")
host = outer_grid(3)
m = find_annotated_minor(host, AnnotatedGraph(clique(3).graph, range(3)))
print("fully annotated triangle inside the outer-annotated grid:")
for v, block in m.branch:
    print(f"  pattern vertex {v} -> host block {sorted(block)}")

print("K4 is a topological minor of the 3x3 grid:",
      find_annotated_topological_minor(grid(3), clique(4)) is not None)
print("K5 is not (the grid is planar):",
      find_annotated_topological_minor(grid(3), clique(5)) is None)

print()
print("=== the containment formula compiler ===")
pattern = AnnotatedGraph(clique(3).graph, ())
f = minor_formula(pattern)
print(f"triangle containment compiles to {formula_length(f)} formula tokens")
for name, g in (("3x3 grid", grid(3).graph), ("path", path(7).graph),
                ("K6", clique(6).graph)):
    print(f"  evaluates on {name}: "
          f"{evaluate(g, f, {'X': frozenset()})}")

print()
print("the annotated single-vertex pattern just asks the set to be inhabited:")
dot = minor_formula(AnnotatedGraph(clique(1).graph, {0}))
print(" ", to_text(dot))
