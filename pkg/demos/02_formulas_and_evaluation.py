#!/usr/bin/env python3
"""Parsing, printing, prenexing, and evaluating formulas.

The running example is the even-cycle sentence: a set quantifier bounded
by torso treewidth asks for a proper cut, which exists exactly on even
cycles.
"""

from annotmc import cycle, evaluate, evaluate_witness
from annotmc.logic import (fragment_of, parse_formula, ranks, to_prenex,
                           to_text)

even_cycle = parse_formula(
    "Exists[ttw<=2] X. forall x. forall y. (E(x,y) -> "
    "((x in X & !(y in X)) | (!(x in X) & y in X)))")

print("formula:", to_text(even_cycle))
print("fragment:", fragment_of(even_cycle))
print("ranks:", ranks(even_cycle))
print()

for n in range(4, 9):
    value, witness = evaluate_witness(cycle(n).graph, even_cycle)
    mark = f"witness X = {witness['X']}" if value else "no cut exists"
    print(f"C_{n}: {str(value):5}  {mark}")

print()
print("prenexing hoists quantifiers out of boolean structure:")
f = parse_formula("(exists x. forall y. (x = y | E(x,y))) & (exists z. z = z)")
print(" ", to_text(f))
print("  ->", to_text(to_prenex(f)))

print()
print("the disjoint-paths atom on the square: the two diagonals cannot be")
print("linked disjointly,", evaluate(
    cycle(4).graph, parse_formula("dp(a,c; b,d)", free={"a", "b", "c", "d"}),
    {"a": 0, "b": 1, "c": 2, "d": 3}))
