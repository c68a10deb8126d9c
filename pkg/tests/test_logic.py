import pytest
from hypothesis import given, settings, strategies as st

from annotmc.errors import FormatError, ScopeError, SemanticError
from annotmc.logic import (And, ConnAtom, DpAtom, EdgeAtom,
                           EqAtom, Exists, Forall, Iff, Implies, MemberAtom,
                           Not, Or, SetExists, SetForall, TtwLeAtom,
                           formula_length, fragment_of, free_vars, is_prenex,
                           parse_battery, parse_formula, ranks, to_prenex,
                           to_text, walk)

EVEN_CYCLE = ("Exists[ttw<=2] X. forall x. forall y. (E(x,y) -> "
              "((x in X & !(y in X)) | (!(x in X) & y in X)))")


# -- parsing -------------------------------------------------------------------

def test_parse_simple_fo():
    f = parse_formula("exists x. exists y. E(x,y)")
    assert isinstance(f, Exists) and isinstance(f.body, Exists)
    assert f.body.body == EdgeAtom("x", "y")


def test_parse_even_cycle_formula():
    f = parse_formula(EVEN_CYCLE)
    assert isinstance(f, SetExists)
    assert f.pkind == "ttw" and f.bound == 2


def test_residue_must_be_below_modulus():
    with pytest.raises(SemanticError, match="residue"):
        parse_formula("Exists[size<=1] X. card(X) % 2 = 3")


def test_large_modulus_warns_but_parses():
    with pytest.warns(UserWarning):
        parse_formula("Exists[size<=1] X. card(X) % 9 = 1")


def test_unbound_variable_is_a_scope_error():
    with pytest.raises(ScopeError, match="unbound"):
        parse_formula("exists x. E(x,y)")
    parse_formula("exists x. E(x,y)", free={"y"})


def test_position_in_syntax_errors():
    with pytest.raises(FormatError, match="position"):
        parse_formula("exists x. E(x,,y)")


def test_conn_and_dp_atoms():
    f = parse_formula("exists x. exists y. exists z. "
                      "(conn(x,y | z) & dp(x,y; y,z))")
    atoms = [n for n in walk(f) if isinstance(n, (ConnAtom, DpAtom))]
    assert len(atoms) == 2


def test_ttwle_atom():
    f = parse_formula("exists u. exists v. ttwle(3; u,v)")
    atom = next(n for n in walk(f) if isinstance(n, TtwLeAtom))
    assert atom.bound == 3 and atom.vars == ("u", "v")


def test_battery_parsing_skips_comments():
    battery = parse_battery("# two formulas\nexists x. x = x\n\n"
                            "forall x. x = x\n")
    assert len(battery) == 2


# -- printing ------------------------------------------------------------------

CORPUS = [
    "exists x. exists y. E(x,y)",
    EVEN_CYCLE,
    "forall x. (E(x,x) -> x = x)",
    "exists x. exists y. exists z. (conn(x,y | z) | dp(x,z))",
    "Forall[size<=1] X. forall x. (x in X -> E(x,x))",
    "exists a. (a = a <-> !(a = a))",
    "Exists[bog<=2] Y. card(Y) % 3 = 2",
]


@pytest.mark.parametrize("text", CORPUS)
def test_print_parse_round_trip(text):
    f = parse_formula(text)
    assert parse_formula(to_text(f)) == f


def element_vars():
    return st.sampled_from(["x", "y", "z", "u"])


def formulas(depth=3):
    atom = st.one_of(
        st.builds(EdgeAtom, element_vars(), element_vars()),
        st.builds(EqAtom, element_vars(), element_vars()),
        st.builds(MemberAtom, element_vars(), st.just("W")),
    )
    return st.recursive(
        atom,
        lambda sub: st.one_of(
            st.builds(Not, sub),
            st.builds(And, sub, sub),
            st.builds(Or, sub, sub),
            st.builds(Implies, sub, sub),
            st.builds(Iff, sub, sub),
            st.builds(Exists, element_vars(), sub),
            st.builds(Forall, element_vars(), sub),
            st.builds(lambda k, v, b: SetExists("ttw", k, v, b),
                      st.integers(0, 3), st.just("W"), sub),
        ),
        max_leaves=8)


@settings(max_examples=120, deadline=None)
@given(formulas())
def test_random_ast_round_trips(f):
    assert parse_formula(to_text(f), free=free_vars(f)) == f


# -- prenexing -----------------------------------------------------------------

def test_already_prenex_is_unchanged():
    f = parse_formula(EVEN_CYCLE)
    assert to_prenex(f) == f


def test_hoisting_conjunction():
    f = parse_formula("(exists x. x = x) & (exists y. y = y)")
    p = to_prenex(f)
    assert is_prenex(p)
    assert isinstance(p, Exists) and isinstance(p.body, Exists)


def test_negated_set_quantifier_dualizes():
    f = parse_formula("!(Exists[ttw<=2] X. exists x. x in X)")
    p = to_prenex(f)
    assert isinstance(p, SetForall)
    assert isinstance(p.body, Forall)


def test_unsound_interchange_is_refused():
    f = parse_formula("exists x. Forall[ttw<=1] X. (x in X | x = x)")
    with pytest.raises(SemanticError, match="cannot soundly"):
        to_prenex(f)


def test_prenexing_keeps_dp_and_p_ranks():
    f = parse_formula("!(Exists[ttw<=2] X. exists a. exists b. "
                      "(a in X & dp(a,b; b,a)))")
    before, after = ranks(f), ranks(to_prenex(f))
    assert before.dp_rank == after.dp_rank == 2
    assert before.p_rank == after.p_rank == 2


# -- ranks and fragments ---------------------------------------------------------

def test_ranks_of_quantifier_free_formula():
    f = parse_formula("x = y", free={"x", "y"})
    assert ranks(f) == (0, 0, 0) or vars(ranks(f)) == {
        "quantifier_rank": 0, "dp_rank": 0, "p_rank": 0}


def test_ranks_of_even_cycle_formula():
    r = ranks(parse_formula(EVEN_CYCLE))
    assert (r.quantifier_rank, r.dp_rank, r.p_rank) == (3, 0, 2)


def test_dp_rank_counts_pair_arity():
    f = parse_formula("exists a. exists b. exists c. exists d. dp(a,b; c,d)")
    assert ranks(f).dp_rank == 2


def test_fragment_classification():
    assert fragment_of(parse_formula("exists x. E(x,x)")) == "FO"
    assert fragment_of(parse_formula("exists x. exists y. conn(x,y)")) == "FO+conn"
    assert fragment_of(parse_formula("exists x. exists y. dp(x,y)")) == "FO+dp"
    assert fragment_of(parse_formula(EVEN_CYCLE)) == "CMSO/p"
    assert fragment_of(parse_formula(
        "Exists[ttw<=1] X. exists x. (x in X & dp(x,x))")) == "CMSO/p+dp"


def test_fragment_drops_when_dp_removed():
    with_dp = parse_formula("Exists[ttw<=1] X. exists x. (x in X & dp(x,x))")
    without = parse_formula("Exists[ttw<=1] X. exists x. x in X")
    assert fragment_of(with_dp) == "CMSO/p+dp"
    assert fragment_of(without) == "CMSO/p"


def test_formula_length_counts_constants():
    short = parse_formula("Exists[ttw<=1] X. card(X) % 2 = 1")
    long = parse_formula("Exists[ttw<=100] X. card(X) % 2 = 1")
    assert formula_length(long) == formula_length(short) + 2
