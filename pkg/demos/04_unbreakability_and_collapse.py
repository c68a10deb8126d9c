#!/usr/bin/env python3
"""Unbreakable graphs collapse set quantification to bounded tuples.

On a graph where every small-order separation leaves few vertices on one
side, any set of bounded torso treewidth is small, so an existential set
quantifier can be replaced by finitely many element variables plus the
semantic ttw atom.  The rewrite provably implies the original everywhere;
the converse needs the unbreakability, and a path shows it failing.
"""

from annotmc import clique, evaluate, is_unbreakable, path
from annotmc.logic import parse_formula, to_text
from annotmc.rewrite import collapse_rewrite
from annotmc.lab import check_bounded_witness_size

f = parse_formula("Exists[ttw<=1] X. (exists x. exists y. "
                  "(x in X & y in X & E(x,y) & !(x = y)))")
print("sentence:", to_text(f))
rw = collapse_rewrite(f, q=2)
print("rewrite: ", to_text(rw)[:100], "...")
print()

k7 = clique(7).graph
ok, _ = is_unbreakable(k7, k7.vertices, 2, 2)
print(f"K7 is (2,2)-unbreakable: {ok}, and has >= 6 vertices: {k7.n >= 6}")
print(f"  original on K7: {evaluate(k7, f)}")
print(f"  rewrite  on K7: {evaluate(k7, rw)}")

rep = check_bounded_witness_size(k7, 2, 1)
print(f"  every optimal superset for a ttw<=1 set has <= 2 vertices: "
      f"{not rep['violations']} ({rep['checked']} sets checked)")
print()

even_cycle = parse_formula(
    "Exists[ttw<=2] X. forall x. forall y. (E(x,y) -> "
    "((x in X & !(y in X)) | (!(x in X) & y in X)))")
p9 = path(9).graph
ok, sep = is_unbreakable(p9, p9.vertices, 2, 3)
print(f"the 9-vertex path is (2,3)-unbreakable: {ok}")
print(f"  a violating separation: {sorted(sep.side_a)} / {sorted(sep.side_b)}")
rw2 = collapse_rewrite(even_cycle, q=2)
print(f"  original says {evaluate(p9, even_cycle)} (the path is bipartite)")
print(f"  rewrite says {evaluate(p9, rw2)}: two vertices cannot cover the cut,")
print("  which is exactly why the unbreakability precondition matters")
