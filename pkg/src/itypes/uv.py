"""The calculus with unfolding constants U[A, X] and V[A, X].

Besides beta, a constant applied to an argument unfolds along the
structure of its type annotation:

    U[Y, X] t         ~>  t                           (Y an atom other than X)
    U[B -> C, X] t    ~>  \\y. U[C, X] (t (V[B, X] y))
    U[forall Y. B, X] t  ~>  U[B, X] t

and symmetrically for V.  ``U[X, X]`` and ``V[X, X]`` never unfold.

This module also holds the termination measure, the translation into
plain terms over two opaque constants, and the E-inactive / E-passive /
E-good analysis on occurrence paths.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Optional

from itypes.reduction import DEFAULT_FUEL, ReductionOutcome, contract_beta
from itypes.syntax import (
    App,
    Arrow,
    Const,
    Forall,
    Lam,
    Path,
    Term,
    TVar,
    TypeExpr,
    UConst,
    Var,
    VConst,
    all_names,
    fresh_name,
    rename_apart,
    type_size,
)


def _unfold(kind: type, annot: TypeExpr, x: str, t: Term) -> Optional[Term]:
    dual = VConst if kind is UConst else UConst
    if isinstance(annot, Arrow):
        y = fresh_name(all_names(t), "y")
        inner = App(t, App(Const(dual(annot.dom, x)), Var(y)))
        return Lam(y, App(Const(kind(annot.cod, x)), inner))
    if isinstance(annot, Forall):
        # the binder is kept distinct from the distinguished variable
        return App(Const(kind(rename_apart(annot, x).body, x)), t)
    if isinstance(annot, TVar) and annot.name == x:
        return None
    # any other atom (a different variable, or the constant O)
    return t


def uv_redex_kind(t: Term) -> Optional[str]:
    """'beta', 'u' or 'v' when ``t`` itself is a redex."""
    if not isinstance(t, App):
        return None
    f = t.fun
    if isinstance(f, Lam):
        return "beta"
    if isinstance(f, Const) and isinstance(f.tag, (UConst, VConst)):
        if _unfold(type(f.tag), f.tag.annot, f.tag.var, t.arg) is not None:
            return "u" if isinstance(f.tag, UConst) else "v"
    return None


def contract_uv(t: Term) -> Term:
    kind = uv_redex_kind(t)
    if kind is None:
        raise ValueError("not a redex")
    if kind == "beta":
        return contract_beta(t)
    tag = t.fun.tag
    return _unfold(type(tag), tag.annot, tag.var, t.arg)


def uv_redexes(t: Term, prefix: Path = ()) -> Iterator[tuple[Path, str]]:
    """All redex positions with their kind, leftmost-outermost first."""
    kind = uv_redex_kind(t)
    if kind is not None:
        yield prefix, kind
    if isinstance(t, App):
        yield from uv_redexes(t.fun, prefix + ("f",))
        yield from uv_redexes(t.arg, prefix + ("a",))
    elif isinstance(t, Lam):
        yield from uv_redexes(t.body, prefix + ("b",))


def uv_contract_at(t: Term, path: Path) -> Term:
    if not path:
        return contract_uv(t)
    step, rest = path[0], path[1:]
    if step == "f":
        return App(uv_contract_at(t.fun, rest), t.arg)
    if step == "a":
        return App(t.fun, uv_contract_at(t.arg, rest))
    return Lam(t.binder, uv_contract_at(t.body, rest))


def uv_step(t: Term) -> Optional[Term]:
    """One leftmost-outermost step of beta, u or v reduction."""
    if uv_redex_kind(t) is not None:
        return contract_uv(t)
    if isinstance(t, App):
        f = uv_step(t.fun)
        if f is not None:
            return App(f, t.arg)
        a = uv_step(t.arg)
        return None if a is None else App(t.fun, a)
    if isinstance(t, Lam):
        b = uv_step(t.body)
        return None if b is None else Lam(t.binder, b)
    return None


def uv_normalize(t: Term, fuel: int = DEFAULT_FUEL) -> ReductionOutcome:
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    n = 0
    while True:
        nxt = uv_step(t)
        if nxt is None:
            return ReductionOutcome(t, n, False)
        if n >= fuel:
            return ReductionOutcome(t, n, True)
        t = nxt
        n += 1


def measure_N(t: Term) -> int:
    """Sum over constants of the number of connectives of their annotation."""
    if isinstance(t, App):
        return measure_N(t.fun) + measure_N(t.arg)
    if isinstance(t, Lam):
        return measure_N(t.body)
    if isinstance(t, Const) and isinstance(t.tag, (UConst, VConst)):
        return type_size(t.tag.annot)
    return 0


def count_uv(t: Term) -> int:
    if isinstance(t, App):
        return count_uv(t.fun) + count_uv(t.arg)
    if isinstance(t, Lam):
        return count_uv(t.body)
    return int(isinstance(t, Const) and isinstance(t.tag, (UConst, VConst)))


def hat(t: Term) -> Term:
    """Replace every U[A, X] / V[A, X] by the term built from opaque U / V."""
    from itypes.witness import build_I_prime, build_J_prime

    if isinstance(t, App):
        return App(hat(t.fun), hat(t.arg))
    if isinstance(t, Lam):
        return Lam(t.binder, hat(t.body))
    if isinstance(t, Const):
        if isinstance(t.tag, UConst):
            return build_I_prime(t.tag.annot, t.tag.var)
        if isinstance(t.tag, VConst):
            return build_J_prime(t.tag.annot, t.tag.var)
    return t


# ---------------------------------------------------------------------------
# E-inactive occurrences, E-passive subterms, E-good terms
# ---------------------------------------------------------------------------


def _binding(t: Term) -> tuple[dict, dict]:
    """Map each variable occurrence to the path of its binder (None if free),
    and each abstraction to the paths of the occurrences it binds."""
    binder_of: dict = {}
    bound: dict = {}

    def walk(u: Term, path: Path, env: dict):
        if isinstance(u, Var):
            b = env.get(u.name)
            binder_of[path] = b
            if b is not None:
                bound[b].append(path)
        elif isinstance(u, App):
            walk(u.fun, path + ("f",), env)
            walk(u.arg, path + ("a",), env)
        elif isinstance(u, Lam):
            bound[path] = []
            walk(u.body, path + ("b",), {**env, u.binder: path})

    walk(t, (), {})
    return binder_of, bound


def _spines(t: Term) -> Iterator[tuple[Path, Path, list[Path]]]:
    """Every maximal application spine: (spine path, head path, argument paths)."""

    def walk(u: Term, path: Path, maximal: bool):
        if isinstance(u, App):
            if maximal:
                head, args = path, []
                cur = u
                while isinstance(cur, App):
                    args.append(head + ("a",))
                    head = head + ("f",)
                    cur = cur.fun
                args.reverse()
                yield path, head, args
            yield from walk(u.fun, path + ("f",), False)
            yield from walk(u.arg, path + ("a",), True)
        elif isinstance(u, Lam):
            yield from walk(u.body, path + ("b",), True)

    yield from walk(t, (), True)


def _subterm(t: Term, path: Path) -> Term:
    for step in path:
        t = t.fun if step == "f" else t.arg if step == "a" else t.body
    return t


def e_inactive_variable_occurrences(t: Term, E: Iterable[str]) -> frozenset:
    """Least set of variable-occurrence paths closed under both clauses.

    Seeds are the free occurrences of variables in ``E``.  An occurrence of
    x becomes inactive when x is bound by one of the leading abstractions
    of an argument of a spine whose head occurrence is inactive, and x
    occurs in the rest of that argument.  Both the number of leading
    abstractions before the binder and the number of arguments after it
    may be zero.
    """
    E = set(E)
    binder_of, bound = _binding(t)
    inactive = {p for p, b in binder_of.items() if b is None and _subterm(t, p).name in E}
    spines = list(_spines(t))
    changed = True
    while changed:
        changed = False
        for _, head, args in spines:
            if head not in inactive:
                continue
            for ap in args:
                cur, path = _subterm(t, ap), ap
                while isinstance(cur, Lam):
                    if cur.binder in cur.body.free_vars:
                        for occ in bound[path]:
                            if occ not in inactive:
                                inactive.add(occ)
                                changed = True
                    cur, path = cur.body, path + ("b",)
    return frozenset(inactive)


def _analysis(t: Term, E: Iterable[str]) -> tuple[frozenset, set, set]:
    inactive = e_inactive_variable_occurrences(t, E)
    inactive_terms: set = set()
    passive: set = set()
    for _, head, args in _spines(t):
        # every prefix (x)u1...uk of an inactive spine is an inactive subterm
        if head not in inactive:
            continue
        p = head
        inactive_terms.add(p)
        while p:
            p = p[:-1]
            inactive_terms.add(p)
            if len(p) == len(head) - len(args):
                break
        for ap in args:
            cur, path = _subterm(t, ap), ap
            passive.add(path)
            while isinstance(cur, Lam):
                cur, path = cur.body, path + ("b",)
                passive.add(path)
    # a bare variable occurrence that is inactive is itself an inactive subterm
    inactive_terms |= set(inactive)
    return inactive, inactive_terms, passive


def e_inactive_subterms(t: Term, E: Iterable[str]) -> set:
    return _analysis(t, E)[1]


def e_passive_subterms(t: Term, E: Iterable[str]) -> set:
    return _analysis(t, E)[2]


def is_e_good(t: Term, E: Iterable[str]) -> bool:
    """Every U heads an application to exactly one argument that is E-passive,
    and every V is applied to an E-inactive subterm."""
    _, inactive_terms, passive = _analysis(t, E)

    def walk(u: Term, path: Path, parent_is_app_fun: bool) -> bool:
        if isinstance(u, App):
            f = u.fun
            if isinstance(f, Const) and isinstance(f.tag, UConst):
                if parent_is_app_fun or path not in passive:
                    return False
            if isinstance(f, Const) and isinstance(f.tag, VConst):
                if path + ("a",) not in inactive_terms:
                    return False
            return walk(f, path + ("f",), True) and walk(u.arg, path + ("a",), False)
        if isinstance(u, Lam):
            return walk(u.body, path + ("b",), False)
        if isinstance(u, Const) and isinstance(u.tag, (UConst, VConst)):
            # an unapplied U or V
            return parent_is_app_fun
        return True

    return walk(t, (), False)


def is_good(t: Term) -> bool:
    return is_e_good(t, t.free_vars)
