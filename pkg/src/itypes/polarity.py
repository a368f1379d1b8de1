"""Quantifier polarity, properness and quantifier erasure."""

from __future__ import annotations

from dataclasses import dataclass

from itypes.syntax import Arrow, Forall, TVar, TypeExpr, fresh_type_name, subst_type


@dataclass(frozen=True)
class PolarityReport:
    in_pos: bool
    in_neg: bool
    negative_quantifier_paths: tuple = ()


def _pos(a: TypeExpr) -> bool:
    if isinstance(a, Arrow):
        return _neg(a.dom) and _pos(a.cod)
    if isinstance(a, Forall):
        return a.binder in a.body.free_vars and _pos(a.body)
    return True


def _neg(a: TypeExpr) -> bool:
    if isinstance(a, Arrow):
        return _pos(a.dom) and _neg(a.cod)
    if isinstance(a, Forall):
        return False
    return True


def quantifier_positions(a: TypeExpr, path: tuple = (), positive: bool = True):
    """Yield ``(path, positive)`` for every quantifier; steps are 'd', 'c', 'b'."""
    if isinstance(a, Arrow):
        yield from quantifier_positions(a.dom, path + ("d",), not positive)
        yield from quantifier_positions(a.cod, path + ("c",), positive)
    elif isinstance(a, Forall):
        yield path, positive
        yield from quantifier_positions(a.body, path + ("b",), positive)


def polarity(a: TypeExpr) -> PolarityReport:
    negative = tuple(p for p, pos in quantifier_positions(a) if not pos)
    return PolarityReport(_pos(a), _neg(a), negative)


def is_proper(a: TypeExpr) -> bool:
    """Every quantifier binds a variable free in its body."""
    if isinstance(a, Arrow):
        return is_proper(a.dom) and is_proper(a.cod)
    if isinstance(a, Forall):
        return a.binder in a.body.free_vars and is_proper(a.body)
    return True


def erase_quantifiers(a: TypeExpr) -> TypeExpr:
    """Rename bound variables apart (keeping names that are already unique),
    then drop every quantifier."""
    taken = set(a.free_vars)

    def go(t: TypeExpr) -> TypeExpr:
        if isinstance(t, Arrow):
            return Arrow(go(t.dom), go(t.cod))
        if isinstance(t, Forall):
            name = t.binder
            body = t.body
            if name in taken:
                name = fresh_type_name(taken | _names(body), name)
                body = subst_type(body, TVar(name), t.binder)
            taken.add(name)
            return go(body)
        return t

    return go(a)


def _names(a: TypeExpr) -> set:
    if isinstance(a, Arrow):
        return _names(a.dom) | _names(a.cod)
    if isinstance(a, Forall):
        return {a.binder} | _names(a.body)
    if isinstance(a, TVar):
        return {a.name}
    return set()


def drop_vacuous_quantifiers(a: TypeExpr) -> TypeExpr:
    """Remove every quantifier whose variable does not occur in its body."""
    if isinstance(a, Arrow):
        return Arrow(drop_vacuous_quantifiers(a.dom), drop_vacuous_quantifiers(a.cod))
    if isinstance(a, Forall):
        body = drop_vacuous_quantifiers(a.body)
        return Forall(a.binder, body) if a.binder in body.free_vars else body
    return a
