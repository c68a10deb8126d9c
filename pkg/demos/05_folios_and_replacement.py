#!/usr/bin/env python3
"""Boundaried graphs, folios, and type-preserving replacement.

A folio lists the small topological minors of a boundaried graph; the
extended folio repeats the question for every completion of the boundary.
Two pieces with the same extended folio (and, when a battery is supplied,
the same extended battery type) are interchangeable inside a larger graph.
"""

from annotmc import BoundariedGraph, Graph, print_graph
from annotmc.folio import ext_folio, find_representative, folio, glue
from annotmc.evaluator import ext_battery_type
from annotmc.logic import parse_formula

long_tail = BoundariedGraph(Graph(range(6), [(i, i + 1) for i in range(5)]),
                            (), (0, 5))
print("a path with both ends on the boundary:")
print(print_graph(long_tail))

f = folio(long_tail, 1)
print(f"its level-1 folio has {len(f.members)} members:")
for m in f.members:
    print(f"  {m.graph.n} vertices, edges {m.graph.edges}")

rep = find_representative(long_tail, 1, 3)
print(f"\nsmallest level-1 equivalent piece has {rep.graph.n} vertices:")
print(print_graph(rep))

print("gluing two copies of it closes a cycle:")
print(print_graph(glue(rep, rep)))

parity = parse_formula(
    "Exists[ttw<=2] X. (card(X) % 2 = 0 & forall y. y in X)")
print("a parity battery blocks replacements that change the vertex count")
print("modulo two:")
rep2 = find_representative(long_tail, 1, 4, [parity])
print(f"  with the battery the representative keeps {rep2.graph.n} vertices "
      f"(same parity as {long_tail.graph.n})")

print("\nextended battery types see boundary completions:")
bare = BoundariedGraph(Graph([0, 1]), (), (0, 1))
edge_somewhere = parse_formula("exists x. exists y. E(x,y)")
for completion, vector in ext_battery_type(bare, [edge_somewhere]).items():
    label = sorted(tuple(sorted(p)) for p in completion) or "none"
    print(f"  completion {label}: {vector}")
