import random

from hypothesis import given, settings
from hypothesis import strategies as st

from itypes import parse_term, parse_type
from itypes.generators import random_good_term, to_lambda_I
from itypes.reduction import (
    beta_eta_normalize,
    beta_normalize,
    beta_reachable,
    beta_reducts,
    eta_normalize,
    eta_step,
    head_reduce,
    is_beta_normal,
)
from itypes.syntax import (
    App,
    Const,
    Lam,
    Opaque,
    TVar,
    UConst,
    Var,
    VConst,
    ibar,
    id_term,
    is_lambda_I,
    subst_term,
)
from itypes.uv import (
    count_uv,
    e_inactive_variable_occurrences,
    hat,
    is_e_good,
    is_good,
    measure_N,
    uv_contract_at,
    uv_normalize,
    uv_redexes,
    uv_step,
)
from oracles import brute_e_inactive, db_normalize, to_db
from strategies import any_uv_terms, closed_terms, open_terms

OMEGA = parse_term(r"(\x. x x) (\x. x x)")


def U(annot, x="X"):
    return Const(UConst(parse_type(annot), x))


def V(annot, x="X"):
    return Const(VConst(parse_type(annot), x))


def test_single_beta_step():
    r = beta_normalize(parse_term(r"(\x. x) y"))
    assert r.result == Var("y")
    assert r.steps == 1 and r.normal


def test_lambda_I_numeral_normalizes():
    t = App(App(ibar(0), id_term()), id_term())
    r = beta_normalize(t)
    assert r.normal
    assert to_db(r.result) == db_normalize(to_db(t))


def test_omega_exhausts_fuel():
    for fuel in (1, 10, 500):
        r = beta_normalize(OMEGA, fuel)
        assert r.exhausted and r.steps == fuel


def test_eta_and_head():
    assert eta_normalize(parse_term(r"\x. y x")).result == Var("y")
    assert eta_normalize(parse_term(r"\x. x x")).result == parse_term(r"\x. x x")
    assert beta_eta_normalize(parse_term(r"\x. (\y. z y) x")).result == Var("z")
    # the head normal form leaves the argument unreduced
    h = head_reduce(parse_term(r"(\x. x) (y ((\z. z) w))"))
    assert h.normal and h.result == parse_term(r"y ((\z. z) w)")
    assert head_reduce(OMEGA, 50).exhausted


@settings(max_examples=300)
@given(closed_terms(12))
def test_beta_matches_de_bruijn_oracle(t):
    mine = beta_normalize(t, 300)
    ref = db_normalize(to_db(t), 300)
    if mine.normal and ref is not None:
        assert to_db(mine.result) == ref
        assert is_beta_normal(mine.result)


@settings(max_examples=200)
@given(open_terms(10))
def test_single_steps_confluent(t):
    # any two one-step reducts still reach the same normal form
    reducts = list(beta_reducts(t))[:2]
    outs = [beta_normalize(r, 200) for r in reducts]
    if len(outs) == 2 and all(o.normal for o in outs):
        assert outs[0].result == outs[1].result


@settings(max_examples=500)
@given(open_terms(10).map(to_lambda_I))
def test_lambda_I_and_free_variables_preserved(t):
    if not beta_eta_normalize(t, 300).normal:
        return
    reducts = list(beta_reducts(t))
    e = eta_step(t)
    if e is not None:
        reducts.append(e)
    for r in reducts:
        assert is_lambda_I(r)
        assert r.free_vars == t.free_vars


# -- the calculus with U and V ------------------------------------------------


def test_unfolding_rules():
    z = Var("z")
    assert uv_step(App(U("Y"), z)) == z
    assert uv_step(App(U("Y -> Z"), z)) == parse_term(r"\y. U[Z, X] (z (V[Y, X] y))")
    assert uv_step(App(V("forall Y. Y -> X"), z)) == App(V("Y -> X"), z)
    assert uv_step(App(U("X"), z)) is None
    assert uv_step(App(U("O"), z)) == z


def test_forall_unfolding_renames_apart():
    t = uv_step(App(U("forall X. Z -> X", "X"), Var("z")))
    tag = t.fun.tag
    assert tag.var == "X" and tag.annot != parse_type("Z -> X")
    assert "X" not in tag.annot.free_vars


def test_uv_normalize_terminates_on_arrow_annotation():
    t = App(U("(X -> X) -> X"), Var("z"))
    r = uv_normalize(t)
    assert r.normal
    assert not list(uv_redexes(r.result))


def test_measure():
    assert measure_N(Var("x")) == 0
    assert measure_N(U("X -> X")) == 1
    assert measure_N(App(U("Y"), App(V("Y"), Var("z")))) == 0
    assert measure_N(U("forall Y. Y -> X")) == 2


def test_measure_counterexample_on_atomic_unfolding():
    # N stays put when an atomic annotation unfolds; the constant count drops
    t = App(U("Y"), Var("z"))
    s = uv_step(t)
    assert measure_N(s) == measure_N(t)
    assert count_uv(s) < count_uv(t)


@settings(max_examples=500)
@given(any_uv_terms(8))
def test_unfolding_decreases_lexicographic_measure(t):
    for p, kind in uv_redexes(t):
        if kind == "beta":
            continue
        s = uv_contract_at(t, p)
        assert measure_N(s) <= measure_N(t)
        assert (measure_N(s), count_uv(s)) < (measure_N(t), count_uv(t))


def test_hat_examples():
    assert hat(U("X")) == Const(Opaque("U"))
    assert hat(V("X")) == Const(Opaque("V"))
    assert hat(U("Y")) == id_term()
    assert hat(parse_term(r"\z. V[Y, X] z")) == Lam("z", App(id_term(), Var("z")))


@settings(max_examples=500)
@given(any_uv_terms(8), any_uv_terms(5))
def test_hat_commutes_with_substitution(u, v):
    assert hat(subst_term(u, v, "x")) == subst_term(hat(u), hat(v), "x")


@settings(max_examples=500)
@given(any_uv_terms(8))
def test_hat_simulates_each_step(u):
    for p, _ in uv_redexes(u):
        assert beta_reachable(hat(u), hat(uv_contract_at(u, p)), max_steps=2)


# -- E-inactive, E-passive, E-good --------------------------------------------


def test_e_inactive_examples():
    t = parse_term(r"y (\x. x x)")
    occ = e_inactive_variable_occurrences(t, {"y"})
    assert occ == {("f",), ("a", "b", "f"), ("a", "b", "a")}
    assert e_inactive_variable_occurrences(parse_term(r"\x. x x"), set()) == frozenset()
    assert e_inactive_variable_occurrences(parse_term("y z"), {"y", "z"}) == {("f",), ("a",)}


def test_e_inactive_admits_leading_binders_and_trailing_arguments():
    # m = 1 leading binder and one argument after the abstraction
    t = parse_term(r"y (\w. \x. x w) z")
    occ = e_inactive_variable_occurrences(t, {"y"})
    assert ("f", "a", "b", "b", "f") in occ
    assert ("f", "a", "b", "b", "a") in occ


@settings(max_examples=500)
@given(open_terms(10), st.sets(st.sampled_from(["x", "y"])))
def test_e_inactive_matches_brute_closure(t, E):
    assert e_inactive_variable_occurrences(t, E) == brute_e_inactive(t, E)


@settings(max_examples=300)
@given(any_uv_terms(8), st.sets(st.sampled_from(["x", "y"])))
def test_e_inactive_matches_brute_closure_with_constants(t, E):
    assert e_inactive_variable_occurrences(t, E) == brute_e_inactive(t, E)


def test_e_good_examples():
    E = {"x"}
    assert is_e_good(parse_term("V[B, X] (x u)"), E)
    assert not is_e_good(U("B"), E)
    assert not is_e_good(parse_term(r"\x. V[B, X] (x y)"), {"y"})
    assert is_e_good(parse_term("x (U[B, X] u)"), E)
    assert not is_e_good(parse_term("U[B, X] u"), E)
    assert is_good(parse_term("x (U[B, X] u)"))


def test_e_good_lambda_clause():
    body = parse_term("V[B, X] (x y)")
    for E in ({"x"}, {"x", "y"}, {"y"}):
        assert is_e_good(Lam("x", body), E) == is_e_good(body, set(E) - {"x"})


def test_e_good_preserved_along_random_traces():
    rng = random.Random(7)
    E = ("x", "y")
    for _ in range(500):
        t = random_good_term(rng, rng.randint(1, 8), E)
        assert is_e_good(t, E)
        for _ in range(20):
            reds = list(uv_redexes(t))
            if not reds:
                break
            t = uv_contract_at(t, rng.choice(reds)[0])
            assert is_e_good(t, E)


def test_tvar_annotation_other_than_distinguished_variable():
    # an annotation mentioning only another variable behaves like the identity
    assert hat(Const(UConst(TVar("Z"), "X"))) == id_term()
