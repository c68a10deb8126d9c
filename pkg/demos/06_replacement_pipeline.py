#!/usr/bin/env python3
"""The miniature dynamic-programming pipeline.

Walk a tree decomposition bottom-up, grouping children under inclusion-
maximal adhesions and swapping each grouped piece for its smallest
representative with equal extended folio and battery type.  At the end the
battery must evaluate exactly as on the original graph.
"""

from annotmc.corpus import (cycle_decomposition, even_cycle_formula,
                            minidp_corpus, path_decomposition)
from annotmc.graphs import cycle, path
from annotmc.lab import mini_dp

print("the 9-vertex path with a connectivity battery:")
from annotmc.corpus import connected_formula
rep = mini_dp(path(9).graph, path_decomposition(9),
              [connected_formula()], level=1, budget=3)
print(f"  {rep.initial_vertices} vertices -> {rep.final_vertices}, "
      f"{len(rep.replacements)} replacements, oracle ok: {rep.oracle_ok}")

print("\nthe 8-cycle with the even-cycle battery (parity must survive):")
rep = mini_dp(cycle(8).graph, cycle_decomposition(8),
              [even_cycle_formula()], level=2, budget=4)
print(f"  {rep.initial_vertices} -> {rep.final_vertices}, verdicts "
      f"{rep.verdicts_before} before and {rep.verdicts_after} after")

print("\nthe whole shipped corpus:")
for name, g, t, battery, level, budget in minidp_corpus():
    rep = mini_dp(g, t, list(battery), level, budget)
    arrow = f"{rep.initial_vertices:>2} -> {rep.final_vertices:<2}"
    print(f"  {name:15} {arrow}  oracle {'ok' if rep.oracle_ok else 'FAIL'} "
          f"({len(rep.replacements)} replacements, {rep.fallbacks} kept)")
