"""Simple types (rules ax, ->i, ->e only) by first-order unification."""

from __future__ import annotations

import itertools
from typing import Optional

from itypes.syntax import Arrow, Const, Forall, Lam, Term, TVar, TypeExpr, Var, fresh_type_name


class _Unifier:
    """Flexible variables are ``TVar`` objects whose name starts with '?';
    every other variable is rigid."""

    def __init__(self):
        self.sol: dict = {}
        self.ids = itertools.count()

    def fresh(self) -> TVar:
        return TVar(f"?{next(self.ids)}")

    def resolve(self, t: TypeExpr) -> TypeExpr:
        while isinstance(t, TVar) and t.name in self.sol:
            t = self.sol[t.name]
        return t

    def zonk(self, t: TypeExpr) -> TypeExpr:
        t = self.resolve(t)
        if isinstance(t, Arrow):
            return Arrow(self.zonk(t.dom), self.zonk(t.cod))
        return t

    def occurs(self, name: str, t: TypeExpr) -> bool:
        t = self.resolve(t)
        if isinstance(t, TVar):
            return t.name == name
        if isinstance(t, Arrow):
            return self.occurs(name, t.dom) or self.occurs(name, t.cod)
        return False

    def unify(self, a: TypeExpr, b: TypeExpr) -> bool:
        a, b = self.resolve(a), self.resolve(b)
        if isinstance(a, TVar) and isinstance(b, TVar) and a.name == b.name:
            return True
        if isinstance(a, TVar) and a.name.startswith("?"):
            if self.occurs(a.name, b):
                return False
            self.sol[a.name] = b
            return True
        if isinstance(b, TVar) and b.name.startswith("?"):
            return self.unify(b, a)
        if isinstance(a, Arrow) and isinstance(b, Arrow):
            return self.unify(a.dom, b.dom) and self.unify(a.cod, b.cod)
        if isinstance(a, Forall) or isinstance(b, Forall):
            raise ValueError("simple types have no quantifiers")
        return a == b

    def infer(self, t: Term, env: dict) -> Optional[TypeExpr]:
        if isinstance(t, Var):
            if t.name not in env:
                env[t.name] = self.fresh()
            return env[t.name]
        if isinstance(t, Const):
            raise ValueError("simple typing is for plain terms")
        if isinstance(t, Lam):
            a = self.fresh()
            inner = dict(env)
            inner[t.binder] = a
            b = self.infer(t.body, inner)
            if b is None:
                return None
            # free variables discovered under the binder belong to the outer context
            for k, v in inner.items():
                if k != t.binder and k not in env:
                    env[k] = v
            return Arrow(a, b)
        f = self.infer(t.fun, env)
        if f is None:
            return None
        x = self.infer(t.arg, env)
        if x is None:
            return None
        r = self.fresh()
        return r if self.unify(f, Arrow(x, r)) else None


def _canonical(types: list) -> list:
    """Rename flexible variables to X, Y, Z, ... in order of first occurrence."""
    names: dict = {}

    def go(t):
        if isinstance(t, Arrow):
            return Arrow(go(t.dom), go(t.cod))
        if isinstance(t, TVar) and t.name.startswith("?"):
            if t.name not in names:
                names[t.name] = TVar(fresh_type_name(set(n.name for n in names.values())))
            return names[t.name]
        return t

    return [go(t) for t in types]


def infer_simple(t: Term) -> Optional[tuple[dict, TypeExpr]]:
    """Principal simple typing ``(context, type)`` of a plain term, or None."""
    u = _Unifier()
    env: dict = {}
    a = u.infer(t, env)
    if a is None:
        return None
    keys = sorted(env)
    out = _canonical([u.zonk(a)] + [u.zonk(env[k]) for k in keys])
    return dict(zip(keys, out[1:])), out[0]


def check_simple(ctx: dict, t: Term, a: TypeExpr) -> bool:
    """Whether ``ctx |- t : a`` in the simple system (variables of the given
    types are rigid)."""
    u = _Unifier()
    env = {k: v for k, v in dict(ctx).items()}
    try:
        b = u.infer(t, env)
        if b is None:
            return False
        for k in t.free_vars:
            if k not in dict(ctx):
                return False
        return u.unify(b, a)
    except ValueError:
        return False
