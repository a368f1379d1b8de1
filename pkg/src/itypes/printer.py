"""Canonical text form of terms and types (inverse of :mod:`itypes.parser`)."""

from __future__ import annotations

from itypes.syntax import (
    RESERVED_TERM_NAMES,
    Alpha,
    App,
    Arrow,
    Const,
    Forall,
    Lam,
    OConst,
    Opaque,
    Term,
    TVar,
    TypeExpr,
    UConst,
    Var,
    VConst,
    fresh_name,
    spine,
    subst_term,
)

RESERVED_TYPE_NAMES = frozenset({"O", "Id", "Bool", "Ent", "forall"})


def print_type(a: TypeExpr) -> str:
    if isinstance(a, TVar):
        return a.name
    if isinstance(a, OConst):
        return "O"
    if isinstance(a, Forall):
        return f"forall {a.binder}. {print_type(a.body)}"
    if isinstance(a, Arrow):
        dom = print_type(a.dom)
        if isinstance(a.dom, (Arrow, Forall)):
            dom = f"({dom})"
        return f"{dom} -> {print_type(a.cod)}"
    # search-time metavariables print through their own __str__
    return repr(a)


def print_const(tag) -> str:
    if isinstance(tag, Alpha):
        return "alpha"
    if isinstance(tag, UConst):
        return f"U[{print_type(tag.annot)}, {tag.var}]"
    if isinstance(tag, VConst):
        return f"V[{print_type(tag.annot)}, {tag.var}]"
    if isinstance(tag, Opaque):
        return f"@{tag.name}"
    raise TypeError(f"unknown constant {tag!r}")


def print_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Const):
        return print_const(t.tag)
    if isinstance(t, Lam):
        if t.binder in RESERVED_TERM_NAMES:
            new = fresh_name(t.body.free_vars | {t.binder}, "v")
            t = Lam(new, subst_term(t.body, Var(new), t.binder))
        return f"\\{t.binder}. {print_term(t.body)}"
    head, args = spine(t)
    parts = [_atomic(head)] + [_atomic(a) for a in args]
    return " ".join(parts)


def _atomic(t: Term) -> str:
    s = print_term(t)
    if isinstance(t, (App, Lam)):
        return f"({s})"
    return s
