"""Explicit System F derivations and their checker.

Rules (restricted to proper types)::

    ax    G |- x : G(x)
    ->i   G, x:A |- t : B            =>  G |- \\x. t : A -> B
    ->e   G |- u : A -> B, G |- v : A  =>  G |- (u)v : B
    Ai    G |- t : A, X not free in G  =>  G |- t : forall X. A
    Ae    G |- t : forall X. A         =>  G |- t : A[C/X]   (X free in A)

A ``forall`` elimination is classified by the shape of its subject:
variant 1 for an abstraction, 2 for ``(x)t1...tn`` (including a bare
variable or constant head), 3 for ``(\\x. u)v t1...tn``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Callable, Iterator, Optional, Union

from itypes.parser import parse_term, parse_type
from itypes.polarity import is_proper
from itypes.printer import print_const, print_term, print_type
from itypes.syntax import (
    ALPHA,
    Alpha,
    App,
    Arrow,
    Const,
    Forall,
    Lam,
    Opaque,
    Path,
    Term,
    TVar,
    TypeExpr,
    Var,
    all_names,
    all_type_names,
    fresh_name,
    fresh_type_name,
    one,
    replace_at,
    spine,
    subst_type,
    zero,
)

AX, ARROW_I, ARROW_E, FORALL_I, FORALL_E = "ax", "->i", "->e", "Ai", "Ae"
RULES = (AX, ARROW_I, ARROW_E, FORALL_I, FORALL_E)

Key = Union[str, Alpha, Opaque]


def term_key(t: Term) -> Optional[Key]:
    """Context key of a variable or typable constant."""
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Const) and isinstance(t.tag, (Alpha, Opaque)):
        return t.tag
    return None


@dataclass(frozen=True)
class Context:
    """Ordered map from variables (and the constant alpha) to types.

    Extending with a key that is already present drops the older binding.
    """

    entries: tuple = ()

    @classmethod
    def of(cls, *pairs) -> "Context":
        ctx = cls()
        for k, a in pairs:
            ctx = ctx.extend(k, a)
        return ctx

    def lookup(self, key: Key) -> Optional[TypeExpr]:
        for k, a in reversed(self.entries):
            if k == key:
                return a
        return None

    def extend(self, key: Key, a: TypeExpr) -> "Context":
        return Context(tuple((k, b) for k, b in self.entries if k != key) + ((key, a),))

    def keys(self) -> list:
        return [k for k, _ in self.entries]

    def free_type_vars(self) -> set:
        out: set = set()
        for _, a in self.entries:
            out |= a.free_vars
        return out

    def map_types(self, f: Callable[[TypeExpr], TypeExpr]) -> "Context":
        return Context(tuple((k, f(a)) for k, a in self.entries))

    def without(self, key: Key) -> "Context":
        return Context(tuple((k, a) for k, a in self.entries if k != key))

    def same_as(self, other: "Context") -> bool:
        return dict(self.entries) == dict(other.entries)

    def __str__(self) -> str:
        return ", ".join(f"{_key_str(k)} : {print_type(a)}" for k, a in self.entries)


def _key_str(k: Key) -> str:
    return k if isinstance(k, str) else print_const(k)


def _key_parse(s: str) -> Key:
    if s == "alpha":
        return ALPHA
    if s.startswith("@"):
        return Opaque(s[1:])
    return s


def forall_e_variant(subject: Term) -> int:
    if isinstance(subject, Lam):
        return 1
    head, _ = spine(subject)
    return 3 if isinstance(head, Lam) else 2


@dataclass(frozen=True)
class Derivation:
    rule: str
    context: Context
    subject: Term
    type: TypeExpr
    premises: tuple = ()
    instantiated_with: Optional[TypeExpr] = None

    @property
    def variant(self) -> Optional[int]:
        return forall_e_variant(self.subject) if self.rule == FORALL_E else None

    def nodes(self, path: tuple = ()) -> Iterator[tuple[tuple, "Derivation"]]:
        """Pre-order traversal; a node path is the tuple of premise indices."""
        yield path, self
        for i, p in enumerate(self.premises):
            yield from p.nodes(path + (i,))

    def at(self, path: tuple) -> "Derivation":
        d = self
        for i in path:
            d = d.premises[i]
        return d

    @property
    def size(self) -> int:
        return 1 + sum(p.size for p in self.premises)

    @property
    def depth(self) -> int:
        return 1 + max((p.depth for p in self.premises), default=0)

    def __str__(self) -> str:
        return "\n".join(self._lines(0))

    def _lines(self, indent: int):
        pad = "  " * indent
        extra = ""
        if self.rule == FORALL_E:
            extra = f" [{self.variant}; {print_type(self.instantiated_with)}]"
        yield f"{pad}({self.rule}{extra}) {self.context} |- {print_term(self.subject)} : {print_type(self.type)}"
        for p in self.premises:
            yield from p._lines(indent + 1)


# -- construction helpers ---------------------------------------------------


def ax(ctx: Context, subject: Term) -> Derivation:
    a = ctx.lookup(term_key(subject))
    if a is None:
        raise ValueError(f"{print_term(subject)} is not declared in the context")
    return Derivation(AX, ctx, subject, a)


def arrow_i(ctx: Context, binder: str, dom: TypeExpr, body: Derivation) -> Derivation:
    return Derivation(ARROW_I, ctx, Lam(binder, body.subject), Arrow(dom, body.type), (body,))


def arrow_e(fun: Derivation, arg: Derivation) -> Derivation:
    if not isinstance(fun.type, Arrow):
        raise ValueError("function premise does not have an arrow type")
    return Derivation(ARROW_E, fun.context, App(fun.subject, arg.subject), fun.type.cod, (fun, arg))


def forall_i(d: Derivation, x: str) -> Derivation:
    return Derivation(FORALL_I, d.context, d.subject, Forall(x, d.type), (d,))


def forall_e(d: Derivation, g: TypeExpr) -> Derivation:
    a = d.type
    if not isinstance(a, Forall):
        raise ValueError("premise does not have a quantified type")
    return Derivation(FORALL_E, d.context, d.subject, subst_type(a.body, g, a.binder), (d,), g)


# -- checking ---------------------------------------------------------------


@dataclass(frozen=True)
class CheckError:
    path: tuple
    message: str

    def __str__(self):
        return f"node {list(self.path)}: {self.message}"


def find_error(d: Derivation) -> Optional[CheckError]:
    """First node (pre-order) that does not instantiate its rule, or None."""
    for path, node in d.nodes():
        msg = _local_error(node)
        if msg is not None:
            return CheckError(path, msg)
    return None


def check_derivation(d: Derivation) -> bool:
    return find_error(d) is None


def _local_error(n: Derivation) -> Optional[str]:
    if n.rule not in RULES:
        return f"unknown rule {n.rule!r}"
    if not is_proper(n.type):
        return "type is not proper"
    prem = n.premises
    if n.rule == AX:
        if prem:
            return "axiom with premises"
        key = term_key(n.subject)
        if key is None:
            return "axiom subject is not a variable"
        a = n.context.lookup(key)
        if a is None:
            return "variable not in context"
        if a != n.type:
            return "type differs from the context declaration"
        return None
    if n.rule == ARROW_I:
        if len(prem) != 1 or not isinstance(n.subject, Lam) or not isinstance(n.type, Arrow):
            return "malformed ->i"
        p = prem[0]
        if not p.context.same_as(n.context.extend(n.subject.binder, n.type.dom)):
            return "->i premise context mismatch"
        if p.subject != n.subject.body or p.type != n.type.cod:
            return "->i premise does not match"
        return None
    if n.rule == ARROW_E:
        if len(prem) != 2 or not isinstance(n.subject, App):
            return "malformed ->e"
        f, a = prem
        if not (f.context.same_as(n.context) and a.context.same_as(n.context)):
            return "->e context mismatch"
        if f.subject != n.subject.fun or a.subject != n.subject.arg:
            return "->e subjects do not match"
        if not isinstance(f.type, Arrow) or f.type.dom != a.type or f.type.cod != n.type:
            return "->e types do not match"
        return None
    if n.rule == FORALL_I:
        if len(prem) != 1 or not isinstance(n.type, Forall):
            return "malformed Ai"
        p = prem[0]
        if not p.context.same_as(n.context) or p.subject != n.subject:
            return "Ai premise does not match"
        # exact binder name: the premise is typed with that variable free
        if p.type != n.type.body:
            return "Ai premise type does not match"
        if n.type.binder in n.context.free_type_vars():
            return f"Ai: {n.type.binder} is free in the context"
        return None
    # FORALL_E
    if len(prem) != 1 or n.instantiated_with is None:
        return "malformed Ae"
    p = prem[0]
    if not p.context.same_as(n.context) or p.subject != n.subject:
        return "Ae premise does not match"
    if not isinstance(p.type, Forall):
        return "Ae premise is not quantified"
    if p.type.binder not in p.type.body.free_vars:
        return "Ae: quantified variable not free in the body"
    if not is_proper(n.instantiated_with):
        return "Ae: instantiation is not proper"
    if subst_type(p.type.body, n.instantiated_with, p.type.binder) != n.type:
        return "Ae conclusion is not the instance"
    return None


# -- queries ----------------------------------------------------------------


def classify_forall_elims(d: Derivation) -> list[tuple[tuple, int]]:
    return [(path, n.variant) for path, n in d.nodes() if n.rule == FORALL_E]


def uses_forall_elim(d: Derivation) -> bool:
    return any(n.rule == FORALL_E for _, n in d.nodes())


def term_paths(d: Derivation) -> dict:
    """Map each node path to the position of its subject inside the root subject."""
    out = {}

    def walk(n: Derivation, path: tuple, tpath: Path):
        out[path] = tpath
        if n.rule == ARROW_I:
            walk(n.premises[0], path + (0,), tpath + ("b",))
        elif n.rule == ARROW_E:
            walk(n.premises[0], path + (0,), tpath + ("f",))
            walk(n.premises[1], path + (1,), tpath + ("a",))
        else:
            for i, p in enumerate(n.premises):
                walk(p, path + (i,), tpath)

    walk(d, (), ())
    return out


# -- structural transformations ----------------------------------------------


def map_derivation_types(d: Derivation, f: Callable[[TypeExpr], TypeExpr]) -> Derivation:
    return Derivation(
        d.rule,
        d.context.map_types(f),
        d.subject,
        f(d.type),
        tuple(map_derivation_types(p, f) for p in d.premises),
        None if d.instantiated_with is None else f(d.instantiated_with),
    )


def weaken(d: Derivation, key: Key, a: TypeExpr) -> Derivation:
    """Add ``key : a`` to every context (``key`` must not be rebound inside)."""
    return Derivation(
        d.rule,
        d.context.extend(key, a) if d.context.lookup(key) is None else d.context,
        d.subject,
        d.type,
        tuple(weaken(p, key, a) for p in d.premises),
        d.instantiated_with,
    )


def weaken_context(d: Derivation, delta: Context) -> Derivation:
    """Put ``delta`` underneath every context; bindings already present win."""
    def extend(ctx: Context) -> Context:
        mine = set(ctx.keys())
        return Context(tuple((k, a) for k, a in delta.entries if k not in mine) + ctx.entries)

    return Derivation(
        d.rule,
        extend(d.context),
        d.subject,
        d.type,
        tuple(weaken_context(p, delta) for p in d.premises),
        d.instantiated_with,
    )


def pair_derivation(du: Derivation, dv: Derivation) -> Derivation:
    """``G |- <u, v> : A /\\ B`` from ``G |- u : A`` and ``G |- v : B``."""
    if not du.context.same_as(dv.context):
        raise ValueError("premises have different contexts")
    ctx, a, b = du.context, du.type, dv.type
    x = fresh_type_name(all_type_names(a) | all_type_names(b) | ctx.free_type_vars())
    z = fresh_name(all_names(du.subject) | all_names(dv.subject) | {k for k in ctx.keys() if isinstance(k, str)})
    sel = Arrow(a, Arrow(b, TVar(x)))
    inner = ctx.extend(z, sel)
    body = arrow_e(arrow_e(ax(inner, Var(z)), weaken(du, z, sel)), weaken(dv, z, sel))
    return forall_i(arrow_i(ctx, z, sel, body), x)


def project_derivation(d: Derivation, first: bool) -> Derivation:
    """``G |- (t)K1 : A`` (first) or ``G |- (t)K0 : B`` from ``G |- t : A /\\ B``."""
    q = d.type
    if not isinstance(q, Forall) or not isinstance(q.body, Arrow) or not isinstance(q.body.dom, Arrow):
        raise ValueError("premise is not a conjunction")
    sel = q.body.dom
    a, b = sel.dom, sel.cod.dom
    ctx = d.context
    c1 = ctx.extend("x", a)
    c2 = c1.extend("y", b)
    chosen = ax(c2, Var("x" if first else "y"))
    k = arrow_i(ctx, "x", a, arrow_i(c1, "y", b, chosen))
    assert k.subject == (one() if first else zero())
    return arrow_e(forall_e(d, a if first else b), k)


def replace_in_context_hole(big: Term, hole_path, v: Term) -> Term:
    """Literal graft of ``v`` at ``hole_path``; binders of ``big`` may capture
    free variables of ``v`` (the context-replacement discipline)."""
    return replace_at(big, tuple(hole_path), v)


def rebuild(d: Derivation) -> Derivation:
    """Recompute subjects bottom-up from the premises (after a graft)."""
    prem = tuple(rebuild(p) for p in d.premises)
    if d.rule == ARROW_I:
        subject: Term = Lam(d.subject.binder, prem[0].subject)
    elif d.rule == ARROW_E:
        subject = App(prem[0].subject, prem[1].subject)
    elif d.rule == AX:
        subject = d.subject
    else:
        subject = prem[0].subject
    return replace(d, subject=subject, premises=prem)


def replace_node(d: Derivation, path: tuple, new: Derivation) -> Derivation:
    if not path:
        return new
    i = path[0]
    prem = list(d.premises)
    prem[i] = replace_node(prem[i], path[1:], new)
    return replace(d, premises=tuple(prem))


# -- JSON -------------------------------------------------------------------


def to_json(d: Derivation) -> dict:
    out = {
        "rule": d.rule,
        "context": [[_key_str(k), print_type(a)] for k, a in d.context.entries],
        "subject": print_term(d.subject),
        "type": print_type(d.type),
    }
    if d.rule == FORALL_E:
        out["instantiated_with"] = print_type(d.instantiated_with)
        out["variant"] = d.variant
    out["premises"] = [to_json(p) for p in d.premises]
    return out


def from_json(obj: dict) -> Derivation:
    ctx = Context(tuple((_key_parse(k), parse_type(a)) for k, a in obj["context"]))
    inst = obj.get("instantiated_with")
    return Derivation(
        obj["rule"],
        ctx,
        parse_term(obj["subject"]),
        parse_type(obj["type"]),
        tuple(from_json(p) for p in obj["premises"]),
        None if inst is None else parse_type(inst),
    )


def dumps(d: Derivation) -> str:
    return json.dumps(to_json(d), sort_keys=True)
