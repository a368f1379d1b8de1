import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from itypes import parse_term, parse_type
from itypes.derivation import check_derivation, classify_forall_elims, find_error, forall_e
from itypes.generators import random_good_term
from itypes.polarity import drop_vacuous_quantifiers
from itypes.reduction import beta_normalize, is_beta_normal
from itypes.search import search_F_derivation
from itypes.selftest import E_TYPE, F_TYPE
from itypes.syntax import (
    ALPHA,
    App,
    Const,
    Lam,
    Opaque,
    TVar,
    UConst,
    Var,
    VConst,
    contains_const,
    id_term,
    is_lambda_I,
    subst_const,
)
from itypes.uv import hat, is_good
from itypes.witness import (
    build_I,
    build_I_prime,
    build_J,
    build_J_prime,
    check_IJ_typing,
    ij_derivations,
    k_witness,
    rewrite_forall_e2,
    u_term,
    v_term,
)
from strategies import closed_types, open_types

X, Y = TVar("X"), TVar("Y")
OU, OV = Const(Opaque("U")), Const(Opaque("V"))


def test_primed_terms():
    assert build_I_prime(Y, "X") == id_term()
    assert build_I_prime(X, "X") == OU
    assert build_J_prime(X, "X") == OV
    assert build_I_prime(parse_type("X -> X"), "X") == Lam("x", Lam("y", App(OU, App(Var("x"), App(OV, Var("y"))))))


def test_concrete_terms():
    assert build_I(X, "X") == parse_term(r"\x. \d. <x, alpha>")
    assert build_J(X, "X") == parse_term(r"\x. x alpha K1")
    assert build_I(Y, "X") == id_term()
    assert u_term() == build_I(X, "X") and v_term() == build_J(X, "X")


@pytest.mark.parametrize("a", ["X", "Y", "X -> X"])
def test_coercion_typing_hand_cases(a):
    assert check_IJ_typing(parse_type(a), "X")


def test_coercion_derivation_for_the_atom():
    d_i, _ = ij_derivations(X, "X")
    assert d_i.subject == u_term()
    assert d_i.type == parse_type("forall Y. Y -> O -> (Y /\\ O)")


@settings(max_examples=200)
@given(st.one_of(closed_types(8), open_types(8)))
def test_coercion_typing_on_random_types(a):
    assert check_IJ_typing(a, "X")


@settings(max_examples=200)
@given(st.one_of(closed_types(8), open_types(8)))
def test_primed_terms_are_lambda_I(a):
    assert is_lambda_I(build_I_prime(a, "X"))
    assert is_lambda_I(build_J_prime(a, "X"))


def drop_vac(text):
    return drop_vacuous_quantifiers(parse_type(text))


@pytest.mark.parametrize("ty", [E_TYPE, F_TYPE])
def test_rewrite_second_kind_elimination(ty):
    d = search_F_derivation(None, parse_term(r"\x. x id"), drop_vac(ty))
    node = next(p for p, v in classify_forall_elims(d) if v == 2)
    t2, d2 = rewrite_forall_e2(d, node)
    assert contains_const(t2, ALPHA)
    assert is_beta_normal(t2)
    assert d2.subject == t2
    assert find_error(d2) is None


def test_rewrite_rejects_other_nodes():
    d = search_F_derivation(None, parse_term("id"), parse_type("Id"))
    inst = forall_e(d, parse_type("Y -> Y"))
    with pytest.raises(ValueError):
        rewrite_forall_e2(inst, ())


@pytest.mark.parametrize("ty", [E_TYPE, F_TYPE])
def test_k_witness_on_worked_examples(ty):
    D = drop_vac(ty)
    tr = k_witness(parse_type(ty), parse_term(r"\x. x id"))
    assert tr is not None
    assert not tr.final.free_vars
    assert is_beta_normal(tr.final)
    assert not is_lambda_I(tr.final)
    assert contains_const(tr.rewritten, ALPHA)
    assert not contains_const(tr.final, ALPHA)
    for d in (tr.before, tr.after, tr.final_derivation):
        assert check_derivation(d)
    assert tr.final_derivation.type == D
    # the certificate is independently re-checkable by search
    assert search_F_derivation(None, tr.final, D)


def test_no_witness_for_identity():
    assert k_witness(parse_type("Id"), id_term()) is None


def test_trace_serializes():
    tr = k_witness(parse_type(E_TYPE), parse_term(r"\x. x id"))
    doc = tr.to_json()
    assert set(doc) == {"original", "rewritten", "final", "used_node", "derivations"}
    assert parse_term(doc["original"]) == parse_term(r"\x. x id")


def _atomic_annotations(t):
    if isinstance(t, App):
        return App(_atomic_annotations(t.fun), _atomic_annotations(t.arg))
    if isinstance(t, Lam):
        return Lam(t.binder, _atomic_annotations(t.body))
    if isinstance(t, Const) and isinstance(t.tag, (UConst, VConst)):
        return Const(type(t.tag)(X, "X"))
    return t


def test_good_normal_terms_release_alpha():
    rng = random.Random(3)
    checked = 0
    for _ in range(400):
        uv = _atomic_annotations(random_good_term(rng, rng.randint(2, 8), ("x", "y")))
        if not is_good(uv):
            continue
        t = hat(uv)
        if not (contains_const(t, Opaque("U")) or contains_const(t, Opaque("V"))):
            continue
        assert is_beta_normal(t)
        r = beta_normalize(subst_const(t, {Opaque("U"): u_term(), Opaque("V"): v_term()}))
        assert r.normal
        assert contains_const(r.result, ALPHA)
        checked += 1
    assert checked > 50
