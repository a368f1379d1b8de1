"""Terms and types of the untyped lambda calculus and System F.

Terms are Curry-style: no type annotations, application is left-nested.
Both terms and types keep their binder names for printing, but equality
and hashing are alpha-equivalence (structural equality of the nameless
form).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence, Union

# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------


class TypeExpr:
    """Base class for System F types."""

    __slots__ = ()

    def _nameless(self, env: tuple) -> tuple:
        raise NotImplementedError

    @cached_property
    def key(self) -> tuple:
        return self._nameless(())

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, TypeExpr):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __str__(self) -> str:
        from itypes.printer import print_type

        return print_type(self)

    @cached_property
    def free_vars(self) -> frozenset:
        return frozenset(self._free())

    def _free(self) -> Iterator[str]:
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class TVar(TypeExpr):
    name: str

    def _nameless(self, env):
        for i, n in enumerate(reversed(env)):
            if n == self.name:
                return ("b", i)
        return ("v", self.name)

    def _free(self):
        yield self.name

    def __repr__(self):
        return f"TVar({self.name!r})"


@dataclass(frozen=True, eq=False)
class Arrow(TypeExpr):
    dom: TypeExpr
    cod: TypeExpr

    def _nameless(self, env):
        return ("->", self.dom._nameless(env), self.cod._nameless(env))

    def _free(self):
        yield from self.dom.free_vars
        yield from self.cod.free_vars

    def __repr__(self):
        return f"Arrow({self.dom!r}, {self.cod!r})"


@dataclass(frozen=True, eq=False)
class Forall(TypeExpr):
    binder: str
    body: TypeExpr

    def _nameless(self, env):
        return ("A", self.body._nameless(env + (self.binder,)))

    def _free(self):
        return (v for v in self.body.free_vars if v != self.binder)

    def __repr__(self):
        return f"Forall({self.binder!r}, {self.body!r})"


@dataclass(frozen=True, eq=False)
class OConst(TypeExpr):
    """The type constant O given to the constant alpha."""

    def _nameless(self, env):
        return ("O",)

    def _free(self):
        return iter(())

    def __repr__(self):
        return "OConst()"


O = OConst()


def arrows(*types: TypeExpr) -> TypeExpr:
    """``arrows(A1, ..., An, B)`` is ``A1 -> ... -> An -> B``."""
    result = types[-1]
    for t in reversed(types[:-1]):
        result = Arrow(t, result)
    return result


def foralls(binders: Iterable[str], body: TypeExpr) -> TypeExpr:
    for b in reversed(list(binders)):
        body = Forall(b, body)
    return body


def type_size(a: TypeExpr) -> int:
    """Number of connectives (arrows and quantifiers)."""
    if isinstance(a, Arrow):
        return 1 + type_size(a.dom) + type_size(a.cod)
    if isinstance(a, Forall):
        return 1 + type_size(a.body)
    return 0


def bound_type_vars(a: TypeExpr) -> set[str]:
    if isinstance(a, Arrow):
        return bound_type_vars(a.dom) | bound_type_vars(a.cod)
    if isinstance(a, Forall):
        return {a.binder} | bound_type_vars(a.body)
    return set()


def all_type_names(a: TypeExpr) -> set[str]:
    return set(a.free_vars) | bound_type_vars(a)


def free_type_vars(a: TypeExpr) -> frozenset:
    return a.free_vars


_TYPE_NAMES = ("X", "Y", "Z", "W")


def fresh_type_name(avoid: Iterable[str], base: str | None = None) -> str:
    """First name of the fixed sequence X, Y, Z, W, X1, Y1, ... not in ``avoid``.

    With ``base`` the sequence is base, base1, base2, ...
    """
    avoid = set(avoid)
    if base is not None:
        stem = base.rstrip("0123456789'") or base
        if base not in avoid:
            return base
        for i in itertools.count(1):
            cand = f"{stem}{i}"
            if cand not in avoid:
                return cand
    for i in itertools.count():
        for n in _TYPE_NAMES:
            cand = n if i == 0 else f"{n}{i}"
            if cand not in avoid:
                return cand
    raise AssertionError("unreachable")


def subst_type(a: TypeExpr, g: TypeExpr, x: str) -> TypeExpr:
    """Capture-avoiding ``a[g/x]``."""
    return subst_types(a, {x: g})


def subst_types(a: TypeExpr, mapping: dict) -> TypeExpr:
    """Simultaneous capture-avoiding substitution of type variables."""
    mapping = {k: v for k, v in mapping.items() if k in a.free_vars}
    if not mapping:
        return a
    if isinstance(a, TVar):
        return mapping.get(a.name, a)
    if isinstance(a, Arrow):
        return Arrow(subst_types(a.dom, mapping), subst_types(a.cod, mapping))
    if isinstance(a, Forall):
        incoming = set()
        for v in mapping.values():
            incoming |= v.free_vars
        if a.binder in incoming:
            new = fresh_type_name(incoming | all_type_names(a.body) | set(mapping), a.binder)
            body = subst_types(a.body, {a.binder: TVar(new)})
            return Forall(new, subst_types(body, mapping))
        return Forall(a.binder, subst_types(a.body, mapping))
    return a


def rename_apart(a: "Forall", x: str) -> "Forall":
    """Rename the binder of ``a`` if it is ``x``."""
    if a.binder != x:
        return a
    new = fresh_type_name(all_type_names(a) | {x}, a.binder)
    return Forall(new, subst_type(a.body, TVar(new), a.binder))


def rename_bound_type(a: Forall, new: str) -> Forall:
    """Alpha-rename the outer binder of ``a`` to ``new``."""
    if new == a.binder:
        return a
    return Forall(new, subst_type(a.body, TVar(new), a.binder))


# ---------------------------------------------------------------------------
# Constant tags
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Alpha:
    def __str__(self):
        return "alpha"


@dataclass(frozen=True)
class UConst:
    annot: TypeExpr
    var: str

    def __str__(self):
        return f"U[{self.annot}, {self.var}]"


@dataclass(frozen=True)
class VConst:
    annot: TypeExpr
    var: str

    def __str__(self):
        return f"V[{self.annot}, {self.var}]"


@dataclass(frozen=True)
class Opaque:
    name: str

    def __str__(self):
        return f"@{self.name}"


ConstTag = Union[Alpha, UConst, VConst, Opaque]
ALPHA = Alpha()


# ---------------------------------------------------------------------------
# Terms
# ---------------------------------------------------------------------------


class Term:
    """Base class for lambda terms (possibly with constants)."""

    __slots__ = ()

    def _nameless(self, env: tuple) -> tuple:
        raise NotImplementedError

    @cached_property
    def key(self) -> tuple:
        return self._nameless(())

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Term):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __str__(self) -> str:
        from itypes.printer import print_term

        return print_term(self)

    @cached_property
    def free_vars(self) -> frozenset:
        return frozenset(self._free())

    @cached_property
    def size(self) -> int:
        """Number of nodes (variables, constants, applications, abstractions)."""
        return self._size()


@dataclass(frozen=True, eq=False)
class Var(Term):
    name: str

    def _nameless(self, env):
        for i, n in enumerate(reversed(env)):
            if n == self.name:
                return ("b", i)
        return ("v", self.name)

    def _free(self):
        yield self.name

    def _size(self):
        return 1

    def __repr__(self):
        return f"Var({self.name!r})"


@dataclass(frozen=True, eq=False)
class App(Term):
    fun: Term
    arg: Term

    def _nameless(self, env):
        return ("@", self.fun._nameless(env), self.arg._nameless(env))

    def _free(self):
        yield from self.fun.free_vars
        yield from self.arg.free_vars

    def _size(self):
        return 1 + self.fun.size + self.arg.size

    def __repr__(self):
        return f"App({self.fun!r}, {self.arg!r})"


@dataclass(frozen=True, eq=False)
class Lam(Term):
    binder: str
    body: Term

    def _nameless(self, env):
        return ("L", self.body._nameless(env + (self.binder,)))

    def _free(self):
        return (v for v in self.body.free_vars if v != self.binder)

    def _size(self):
        return 1 + self.body.size

    def __repr__(self):
        return f"Lam({self.binder!r}, {self.body!r})"


@dataclass(frozen=True, eq=False)
class Const(Term):
    tag: ConstTag = field(default=ALPHA)

    def _nameless(self, env):
        t = self.tag
        if isinstance(t, (UConst, VConst)):
            return ("c", type(t).__name__, t.annot.key, t.var)
        return ("c", t)

    def _free(self):
        return iter(())

    def _size(self):
        return 1

    def __repr__(self):
        return f"Const({self.tag!r})"


def app(head: Term, *args: Term) -> Term:
    """``app(t, u1, ..., un)`` is ``(t)u1...un``."""
    for a in args:
        head = App(head, a)
    return head


def lams(binders: Iterable[str], body: Term) -> Term:
    for b in reversed(list(binders)):
        body = Lam(b, body)
    return body


def spine(t: Term) -> tuple[Term, list[Term]]:
    """Split ``(h)u1...un`` into ``h`` and ``[u1, ..., un]``."""
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, args


def strip_lams(t: Term) -> tuple[list[str], Term]:
    binders = []
    while isinstance(t, Lam):
        binders.append(t.binder)
        t = t.body
    return binders, t


def free_vars(t: Term) -> frozenset:
    return t.free_vars


def bound_vars(t: Term) -> set[str]:
    if isinstance(t, Lam):
        return {t.binder} | bound_vars(t.body)
    if isinstance(t, App):
        return bound_vars(t.fun) | bound_vars(t.arg)
    return set()


def all_names(t: Term) -> set[str]:
    return set(t.free_vars) | bound_vars(t)


_TERM_NAMES = ("x", "y", "z")


def fresh_name(avoid: Iterable[str], base: str | None = None) -> str:
    """First name of the fixed sequence x, y, z, x1, y1, z1, ... not in ``avoid``.

    With ``base`` the sequence is base, base1, base2, ... (trailing digits
    of ``base`` are dropped first).
    """
    avoid = set(avoid)
    if base is not None:
        if base not in avoid and base not in RESERVED_TERM_NAMES:
            return base
        stem = base.rstrip("0123456789") or base
        for i in itertools.count(1):
            cand = f"{stem}{i}"
            if cand not in avoid:
                return cand
    for i in itertools.count():
        for n in _TERM_NAMES:
            cand = n if i == 0 else f"{n}{i}"
            if cand not in avoid:
                return cand
    raise AssertionError("unreachable")


RESERVED_TERM_NAMES = frozenset({"alpha", "id", "K0", "K1", "U", "V"})


def subst_term(u: Term, v: Term, x: str) -> Term:
    """Capture-avoiding ``u[v/x]``."""
    if x not in u.free_vars:
        return u
    return _subst(u, v, x, v.free_vars)


def _subst(u: Term, v: Term, x: str, fv: frozenset) -> Term:
    if x not in u.free_vars:
        return u
    if isinstance(u, Var):
        return v
    if isinstance(u, App):
        return App(_subst(u.fun, v, x, fv), _subst(u.arg, v, x, fv))
    if isinstance(u, Lam):
        if u.binder in fv:
            new = fresh_name(fv | u.body.free_vars | {x}, u.binder)
            body = _subst(u.body, Var(new), u.binder, frozenset({new}))
            return Lam(new, _subst(body, v, x, fv))
        return Lam(u.binder, _subst(u.body, v, x, fv))
    return u


def subst_const(t: Term, mapping: dict) -> Term:
    """Replace constants by closed terms (tags compared with ``==``)."""
    if isinstance(t, Const):
        for tag, repl in mapping.items():
            if t.tag == tag:
                return repl
        return t
    if isinstance(t, App):
        return App(subst_const(t.fun, mapping), subst_const(t.arg, mapping))
    if isinstance(t, Lam):
        return Lam(t.binder, subst_const(t.body, mapping))
    return t


def constants(t: Term) -> Iterator[ConstTag]:
    if isinstance(t, Const):
        yield t.tag
    elif isinstance(t, App):
        yield from constants(t.fun)
        yield from constants(t.arg)
    elif isinstance(t, Lam):
        yield from constants(t.body)


def contains_const(t: Term, tag: ConstTag) -> bool:
    return any(c == tag for c in constants(t))


def is_plain(t: Term) -> bool:
    """True when ``t`` has no U/V constants."""
    return not any(isinstance(c, (UConst, VConst)) for c in constants(t))


def is_lambda_I(t: Term) -> bool:
    """Every abstraction binds a variable that occurs free in its body.

    Constants (alpha, opaque) count as non-variables.
    """
    if not is_plain(t):
        raise ValueError("is_lambda_I expects a term without U/V constants")
    return _is_li(t)


def _is_li(t: Term) -> bool:
    if isinstance(t, Lam):
        return t.binder in t.body.free_vars and _is_li(t.body)
    if isinstance(t, App):
        return _is_li(t.fun) and _is_li(t.arg)
    return True


# ---------------------------------------------------------------------------
# Positions
# ---------------------------------------------------------------------------

# A path is a tuple of steps: "f" (function of an application), "a"
# (argument of an application) and "b" (body of an abstraction).
Path = tuple


def subterm_at(t: Term, path: Sequence[str]) -> Term:
    for step in path:
        if step == "f" and isinstance(t, App):
            t = t.fun
        elif step == "a" and isinstance(t, App):
            t = t.arg
        elif step == "b" and isinstance(t, Lam):
            t = t.body
        else:
            raise ValueError(f"bad path {''.join(path)!r}")
    return t


def replace_at(t: Term, path: Sequence[str], new: Term) -> Term:
    """Literal graft of ``new`` at ``path``; binders of ``t`` may capture."""
    if not path:
        return new
    step, rest = path[0], path[1:]
    if step == "f" and isinstance(t, App):
        return App(replace_at(t.fun, rest, new), t.arg)
    if step == "a" and isinstance(t, App):
        return App(t.fun, replace_at(t.arg, rest, new))
    if step == "b" and isinstance(t, Lam):
        return Lam(t.binder, replace_at(t.body, rest, new))
    raise ValueError(f"bad path {''.join(path)!r}")


def positions(t: Term, prefix: Path = ()) -> Iterator[tuple[Path, Term]]:
    """Pre-order (leftmost-outermost) enumeration of subterm positions."""
    yield prefix, t
    if isinstance(t, App):
        yield from positions(t.fun, prefix + ("f",))
        yield from positions(t.arg, prefix + ("a",))
    elif isinstance(t, Lam):
        yield from positions(t.body, prefix + ("b",))


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------


def id_term() -> Term:
    return Lam("x", Var("x"))


def zero() -> Term:
    """The boolean 0 = \\x. \\y. y."""
    return Lam("x", Lam("y", Var("y")))


def one() -> Term:
    """The boolean 1 = \\x. \\y. x."""
    return Lam("x", Lam("y", Var("x")))


def church(n: int) -> Term:
    """Church numeral \\x. \\f. (f)...(f)x with ``n`` applications of f."""
    if n < 0:
        raise ValueError("church numerals need n >= 0")
    body: Term = Var("x")
    for _ in range(n):
        body = App(Var("f"), body)
    return Lam("x", Lam("f", body))


def ibar(n: int) -> Term:
    """Lambda-I numerals: 0 is \\x. \\f. (((x)id)id)f, n > 0 is the Church numeral."""
    if n < 0:
        raise ValueError("numerals need n >= 0")
    if n == 0:
        return Lam("x", Lam("f", app(Var("x"), id_term(), id_term(), Var("f"))))
    return church(n)


def tuple_term(ts: Sequence[Term]) -> Term:
    """``<t1, ..., tn>`` = \\x. (x)t1...tn with x absent from every ti."""
    if not ts:
        raise ValueError("tuple needs at least one component")
    avoid: set[str] = set()
    for t in ts:
        avoid |= all_names(t)
    x = fresh_name(avoid)
    return Lam(x, app(Var(x), *ts))


def pair(u: Term, v: Term) -> Term:
    return tuple_term([u, v])


def conj(types: Sequence[TypeExpr]) -> TypeExpr:
    """``A1 /\\ ... /\\ An`` = forall X. (A1 -> ... -> An -> X) -> X, X absent from every Ai."""
    if not types:
        raise ValueError("conjunction needs at least one component")
    avoid: set[str] = set()
    for a in types:
        avoid |= all_type_names(a)
    x = fresh_type_name(avoid)
    return Forall(x, Arrow(arrows(*types, TVar(x)), TVar(x)))


def circ(g: TypeExpr) -> TypeExpr:
    """The lifted type O -> (g /\\ O)."""
    return Arrow(O, conj([g, O]))


ID_TYPE = Forall("X", Arrow(TVar("X"), TVar("X")))
BOOL_TYPE = Forall("X", arrows(TVar("X"), TVar("X"), TVar("X")))
ENT_TYPE = Forall("X", arrows(TVar("X"), Arrow(TVar("X"), TVar("X")), TVar("X")))
