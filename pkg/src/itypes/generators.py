"""Random terms and types for self-checks (stdlib ``random`` only)."""

from __future__ import annotations

import random
from typing import Sequence

from itypes.syntax import (
    App,
    Arrow,
    Const,
    Forall,
    Lam,
    Term,
    TVar,
    TypeExpr,
    UConst,
    Var,
    VConst,
)

TERM_VARS = ("x", "y", "z", "u", "v", "w")
TYPE_VARS = ("X", "Y", "Z")


def random_type(rng: random.Random, size: int, bound: Sequence[str] = (), allow_free: bool = False) -> TypeExpr:
    """A proper type with at most ``size`` connectives; closed unless
    ``allow_free``."""
    atoms = list(bound) + ([v for v in TYPE_VARS if v not in bound] if allow_free else [])
    if size <= 0 or (atoms and rng.random() < 0.15):
        if atoms:
            return TVar(rng.choice(atoms))
        size = max(size, 1)
    if size >= 1 and (not atoms or rng.random() < 0.3):
        name = next((v for v in TYPE_VARS if v not in bound), None)
        if name is not None:
            body = random_type(rng, size - 1, tuple(bound) + (name,), allow_free)
            if name in body.free_vars:
                return Forall(name, body)
            return body
    if not atoms:
        return random_type(rng, size, bound, True) if allow_free else Forall("X", Arrow(TVar("X"), TVar("X")))
    left = rng.randint(0, size - 1)
    return Arrow(random_type(rng, left, bound, allow_free), random_type(rng, size - 1 - left, bound, allow_free))


def random_term(rng: random.Random, size: int, scope: Sequence[str] = ()) -> Term:
    """A plain term with about ``size`` nodes over ``scope`` and fresh
    binders."""
    if size <= 1 and scope:
        return Var(rng.choice(scope))
    r = rng.random()
    if not scope or r < 0.35:
        x = TERM_VARS[len(scope) % len(TERM_VARS)] if rng.random() < 0.7 else rng.choice(TERM_VARS)
        return Lam(x, random_term(rng, size - 1, tuple(scope) + (x,)))
    left = rng.randint(1, max(1, size - 2))
    return App(random_term(rng, left, scope), random_term(rng, max(1, size - 1 - left), scope))


def to_lambda_I(t: Term) -> Term:
    """Make every abstraction use its variable by applying the body to it."""
    if isinstance(t, Lam):
        body = to_lambda_I(t.body)
        if t.binder not in body.free_vars:
            body = App(body, Var(t.binder))
        return Lam(t.binder, body)
    if isinstance(t, App):
        return App(to_lambda_I(t.fun), to_lambda_I(t.arg))
    return t


def random_uv_type(rng: random.Random, size: int) -> TypeExpr:
    """Annotation for U / V constants: may mention X free."""
    return random_type(rng, size, (), allow_free=True)


def random_uv_term(rng: random.Random, size: int, scope: Sequence[str] = ("x", "y")) -> Term:
    """Terms mixing variables, abstractions and U/V constants."""
    if size <= 1:
        if scope and rng.random() < 0.7:
            return Var(rng.choice(scope))
        kind = rng.choice((UConst, VConst))
        return Const(kind(random_uv_type(rng, rng.randint(0, 3)), "X"))
    r = rng.random()
    if r < 0.25:
        x = rng.choice(TERM_VARS)
        return Lam(x, random_uv_term(rng, size - 1, tuple(scope) + (x,)))
    if r < 0.45:
        kind = rng.choice((UConst, VConst))
        c = Const(kind(random_uv_type(rng, rng.randint(0, 3)), "X"))
        return App(c, random_uv_term(rng, size - 1, scope))
    left = rng.randint(1, max(1, size - 2))
    return App(random_uv_term(rng, left, scope), random_uv_term(rng, max(1, size - 1 - left), scope))


def random_good_term(rng: random.Random, size: int, E: Sequence[str], local: Sequence[str] = ()) -> Term:
    """A term that is E-good by construction.

    Spines headed by a variable of E (or by a variable bound in an argument
    of such a spine) make their arguments passive; U wraps passive
    arguments and V is applied to such spines.
    """
    inactive = tuple(E) + tuple(local)

    def spine(n):
        head: Term = Var(rng.choice(inactive))
        k = rng.randint(0, 2) if n > 1 else 0
        for _ in range(k):
            head = App(head, passive_arg(max(1, (n - 1) // max(k, 1))))
        return head

    def passive_arg(n):
        if rng.random() < 0.3:
            # U takes the whole argument, so it introduces no binders here
            u = Const(UConst(random_uv_type(rng, rng.randint(0, 3)), "X"))
            return App(u, random_good_term(rng, n, E, local))
        free = [v for v in TERM_VARS if v not in E]
        binders = rng.sample(free, rng.randint(0, 2))
        body = random_good_term(rng, n, E, tuple(local) + tuple(binders))
        # a binder only becomes inactive if it is used
        for b in binders:
            if b not in body.free_vars:
                body = App(body, Var(b))
        for b in reversed(binders):
            body = Lam(b, body)
        return body

    if not inactive:
        return Lam("x", Var("x"))
    r = rng.random()
    if size <= 1 or r < 0.5:
        return spine(size)
    if r < 0.75:
        return App(Const(VConst(random_uv_type(rng, rng.randint(0, 3)), "X")), spine(size - 1))
    t = spine(size - 1)
    return App(t, passive_arg(max(1, size // 2))) if isinstance(t, (Var, App)) else t
