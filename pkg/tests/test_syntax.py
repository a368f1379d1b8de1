import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from itypes import parse_term, parse_type, print_term, print_type
from itypes.parser import ParseError
from itypes.syntax import (
    ALPHA,
    BOOL_TYPE,
    ENT_TYPE,
    ID_TYPE,
    O,
    App,
    Arrow,
    Const,
    Forall,
    Lam,
    TVar,
    Var,
    church,
    circ,
    conj,
    free_type_vars,
    free_vars,
    ibar,
    id_term,
    is_lambda_I,
    one,
    pair,
    replace_at,
    subst_term,
    subst_type,
    tuple_term,
    type_size,
    zero,
)
from itypes.reduction import contract_beta
from oracles import db_step, to_db
from strategies import closed_types, open_terms, open_types


def test_alpha_equivalence_of_terms():
    assert parse_term(r"\x. x") == parse_term(r"\y. y")
    assert parse_term(r"\x. \y. x") != parse_term(r"\x. \y. y")
    assert hash(parse_term(r"\x. x z")) == hash(parse_term(r"\w. w z"))


def test_alpha_equivalence_of_types():
    assert parse_type("forall X. X -> X") == parse_type("forall Y. Y -> Y")
    assert parse_type("forall X. X -> Y") != parse_type("forall X. X -> Z")


def test_free_variables():
    assert free_vars(parse_term(r"\x. x y (\z. z w)")) == {"y", "w"}
    assert free_type_vars(parse_type("forall X. X -> Y")) == {"Y"}


def test_substitution_avoids_capture():
    t = subst_term(parse_term(r"\y. x y"), Var("y"), "x")
    assert t == parse_term(r"\z. y z")
    a = subst_type(parse_type("forall Y. X -> Y"), TVar("Y"), "X")
    assert a == parse_type("forall Z. Y -> Z")


def test_substitution_stops_at_shadowing_binder():
    t = parse_term(r"\x. x")
    assert subst_term(t, Var("y"), "x") == t


@given(open_terms(), open_terms())
def test_substitution_matches_de_bruijn_beta(u, v):
    # (\x. u) v reduced by the package equals one de Bruijn step
    mine = contract_beta(App(Lam("x", u), v))
    assert to_db(mine) == db_step(to_db(App(Lam("x", u), v)))


def test_builders():
    assert print_term(id_term()) == r"\x. x"
    assert zero() == parse_term(r"\x. \y. y")
    assert one() == parse_term(r"\x. \y. x")
    assert ibar(0) == parse_term(r"\x. \f. x id id f")
    assert church(2) == parse_term(r"\x. \f. f (f x)")
    assert tuple_term([Var("x"), Var("y")]) == parse_term(r"\z. z x y")
    assert pair(Var("x"), Var("z")) == parse_term(r"\y. y x z")
    assert conj([TVar("A"), TVar("B")]) == parse_type("forall X. (A -> B -> X) -> X")
    assert circ(TVar("G")) == Arrow(O, conj([TVar("G"), O]))


def test_tuple_binder_is_fresh_for_components():
    t = tuple_term([Var("x"), Var("z")])
    assert t.binder not in {"x", "z"}
    assert t.free_vars == {"x", "z"}


def test_sugar_types():
    assert ID_TYPE == parse_type("forall X. X -> X")
    assert BOOL_TYPE == parse_type("forall X. X -> X -> X")
    assert ENT_TYPE == parse_type("forall X. X -> (X -> X) -> X")


def test_lambda_I_examples():
    assert is_lambda_I(id_term())
    assert not is_lambda_I(one())
    assert not is_lambda_I(zero())
    assert is_lambda_I(parse_term(r"\x. x alpha"))


def test_lambda_I_numerals():
    for n in range(6):
        assert is_lambda_I(ibar(n))
    # the Church numeral 0 drops f; the others use both binders
    assert not is_lambda_I(church(0))
    assert all(is_lambda_I(church(n)) for n in range(1, 6))


def test_type_size_counts_connectives():
    assert type_size(TVar("X")) == 0
    assert type_size(ID_TYPE) == 2
    assert type_size(parse_type("forall X. forall Y. (X -> Y) -> X")) == 4


def test_replace_at_is_a_literal_graft():
    t = parse_term(r"\x. y")
    assert replace_at(t, ("b",), Var("x")) == parse_term(r"\x. x")
    with pytest.raises(ValueError):
        replace_at(t, ("f",), Var("x"))


def test_constants_parse_and_print():
    t = parse_term("U[X -> X, X] (V[Y, X] z) alpha @c")
    assert print_term(t) == "U[X -> X, X] (V[Y, X] z) alpha @c"
    assert Const(ALPHA) == parse_term("alpha")


@pytest.mark.parametrize("bad", [r"\x x", "(x", "forall. X", "U[X X] y", ""])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_term(bad)


def test_unicode_syntax():
    assert parse_term("λx. x") == id_term()
    assert parse_type("∀X. X → X") == ID_TYPE


@settings(max_examples=200)
@given(open_terms(12))
def test_term_print_parse_roundtrip(t):
    assert parse_term(print_term(t)) == t


@settings(max_examples=200)
@given(st.one_of(closed_types(), open_types()))
def test_type_print_parse_roundtrip(a):
    assert parse_type(print_type(a)) == a


@given(closed_types())
def test_generated_types_are_proper_and_closed(a):
    from itypes.polarity import is_proper

    assert is_proper(a)
    assert not a.free_vars
    assert isinstance(a, (Forall, Arrow))
