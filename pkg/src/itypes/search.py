"""Bounded derivation search for System F.

Type instantiations at (Ae) are represented by unification variables
("metas") that are refined lazily: a meta standing for an unknown
argument type is split into an arrow, a quantifier or an atom only when
the search needs to know.  All bindings go on a trail so that
backtracking is a matter of undoing the trail to a mark.

Two modes share the same machinery:

* checking: the term is given, the search is directed by its syntax
  (``search_F_derivation``, ``eta_expand``);
* generation: the term is built, only eta-long beta-normal terms are
  produced (``generate_derivations``, used to enumerate inhabitants).

Every instantiation meta remembers the rigid type variables it may
mention (its scope), which keeps (Ai) eigenvariables fresh.  The
refinement of a meta is bounded by ``max_instantiation_size``
connectives; whenever a branch is cut by a budget the search records
that it was truncated, and a failed search then answers ``UNKNOWN``
instead of ``None``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional, Union

from itypes.derivation import (
    ARROW_E,
    ARROW_I,
    AX,
    FORALL_E,
    FORALL_I,
    Context,
    Derivation,
    check_derivation,
    dumps,
    term_key,
)
from itypes.syntax import (
    ID_TYPE,
    App,
    Arrow,
    Forall,
    Lam,
    OConst,
    Term,
    TVar,
    TypeExpr,
    Var,
    fresh_name,
    fresh_type_name,
    spine,
    subst_type,
    type_size,
)

INF = 10**9


@dataclass(frozen=True)
class SearchBudget:
    max_instantiation_size: int = 8
    max_depth: int = 200
    max_candidates_per_node: int = 20_000
    max_steps: int = 2_000_000


class _Unknown:
    """Answer of a search that was cut short by its budget."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNKNOWN"

    def __bool__(self):
        return False


UNKNOWN = _Unknown()


@dataclass(frozen=True, eq=False)
class Meta(TypeExpr):
    id: int

    def _nameless(self, env):
        return ("?", self.id)

    def _free(self):
        return iter(())

    def __repr__(self):
        return f"?{self.id}"


def as_context(ctx) -> Context:
    if ctx is None:
        return Context()
    if isinstance(ctx, Context):
        return ctx
    if isinstance(ctx, dict):
        return Context.of(*ctx.items())
    return Context.of(*ctx)


class _Engine:
    def __init__(self, budget: SearchBudget, used: set):
        self.budget = budget
        self.sol: dict = {}
        self.scope: dict = {}
        self.root: dict = {}
        self.trail: list = []
        self.used = set(used)
        self.ref_binders: set = set()
        self.truncated = False
        self.steps = 0
        self.ids = itertools.count()
        self.memo: dict = {}
        # finalized derivations by identity; they hold no metas and are skipped later
        self.ground: dict = {}
        # types and contexts known to hold no metas, kept alive by the maps
        self.meta_free: dict = {}
        self.meta_free_ctx: dict = {}

    # -- trail -----------------------------------------------------------

    def mark(self) -> int:
        return len(self.trail)

    def undo(self, m: int) -> None:
        while len(self.trail) > m:
            self.trail.pop()()

    def new_meta(self, scope: frozenset, root: Optional[int] = None) -> Meta:
        m = Meta(next(self.ids))
        self.scope[m.id] = frozenset(scope)
        self.root[m.id] = m.id if root is None else root
        return m

    def _bind(self, m: Meta, t: TypeExpr) -> None:
        self.sol[m.id] = t
        self.trail.append(lambda: self.sol.pop(m.id))

    def _set_scope(self, m: Meta, s: frozenset) -> None:
        old = self.scope[m.id]
        self.scope[m.id] = s
        self.trail.append(lambda: self.scope.__setitem__(m.id, old))

    def fresh_rigid(self, base: Optional[str] = None, ref: bool = False) -> str:
        name = fresh_type_name(self.used, base)
        self.used.add(name)
        self.trail.append(lambda: self.used.discard(name))
        if ref:
            self.ref_binders.add(name)
            self.trail.append(lambda: self.ref_binders.discard(name))
        return name

    # -- metas -----------------------------------------------------------

    def resolve(self, t: TypeExpr) -> TypeExpr:
        while isinstance(t, Meta) and t.id in self.sol:
            t = self.sol[t.id]
        return t

    def zonk(self, t: TypeExpr) -> TypeExpr:
        t = self.resolve(t)
        if isinstance(t, Arrow):
            d, c = self.zonk(t.dom), self.zonk(t.cod)
            return t if d is t.dom and c is t.cod else Arrow(d, c)
        if isinstance(t, Forall):
            if t.binder not in self.ref_binders and t.binder in self._meta_fv(t.body):
                # a meta was solved with an eigenvariable of the same name
                new = fresh_type_name(self.used | self._meta_fv(t.body) | _names(t.body), t.binder)
                return Forall(new, self.zonk(subst_type(t.body, TVar(new), t.binder)))
            b = self.zonk(t.body)
            return t if b is t.body else Forall(t.binder, b)
        return t

    def _meta_fv(self, t: TypeExpr) -> set:
        out: set = set()
        for m in _metas(t):
            r = self.resolve(m)
            if not isinstance(r, Meta):
                out |= self.zonk(r).free_vars
        return out

    def metas_in(self, t: TypeExpr) -> list:
        return [m for m in _metas(self.zonk(t))]

    def has_meta(self, t: TypeExpr) -> bool:
        return bool(self.metas_in(t))

    def root_size(self, m: Meta) -> int:
        return _size_with_metas(self.zonk(Meta(self.root[m.id])))

    def can_refine(self, m: Meta) -> bool:
        if self.root_size(m) + 1 > self.budget.max_instantiation_size:
            self.truncated = True
            return False
        return True

    def unify(self, a: TypeExpr, b: TypeExpr) -> bool:
        a, b = self.resolve(a), self.resolve(b)
        if a is b:
            return True
        if isinstance(a, Meta):
            return self._bind_meta(a, b)
        if isinstance(b, Meta):
            return self._bind_meta(b, a)
        if isinstance(a, TVar):
            return isinstance(b, TVar) and a.name == b.name
        if isinstance(a, OConst):
            return isinstance(b, OConst)
        if isinstance(a, Arrow):
            return isinstance(b, Arrow) and self.unify(a.dom, b.dom) and self.unify(a.cod, b.cod)
        if isinstance(a, Forall):
            if not isinstance(b, Forall):
                return False
            if a.binder in self.ref_binders and a.binder not in self.zonk(b).free_vars:
                return self.unify(a.body, subst_type(b.body, TVar(a.binder), b.binder))
            if b.binder in self.ref_binders and b.binder not in self.zonk(a).free_vars:
                return self.unify(subst_type(a.body, TVar(b.binder), a.binder), b.body)
            r = self.fresh_rigid(a.binder)
            return self.unify(subst_type(a.body, TVar(r), a.binder), subst_type(b.body, TVar(r), b.binder))
        return False

    def _bind_meta(self, m: Meta, t: TypeExpr) -> bool:
        t = self.zonk(t)
        inner = list(_metas(t))
        if any(n.id == m.id for n in inner):
            return False
        s = self.scope[m.id]
        if not t.free_vars <= s:
            return False
        for n in inner:
            if not self.scope[n.id] <= s:
                self._set_scope(n, self.scope[n.id] & s)
        self._bind(m, t)
        return True

    def instantiate(self, f: Forall, scope: frozenset, root: Optional[int] = None):
        """``(meta, body[meta/X])`` or None when the body still waits on a
        meta that may mention X (the refinement of a quantified meta)."""
        body = self.zonk(f.body) if f.binder in self.ref_binders else f.body
        if f.binder in self.ref_binders:
            for n in _metas(body):
                if f.binder in self.scope[n.id]:
                    self.truncated = True
                    return None
        g = self.new_meta(scope, root)
        return g, subst_type(body, g, f.binder)

    # -- finishing -------------------------------------------------------

    def finalize(self, d: Derivation) -> Derivation:
        """Zonk every type, grounding unconstrained metas to a default."""
        m0 = self.mark()
        seen: set = set()
        for node in self._open_nodes(d):
            if self._ctx_meta_free(node.context):
                types = (node.type, node.instantiated_with)
            else:
                types = _node_types(node)
            for t in types:
                if t is None or id(t) in seen or self._meta_free(t):
                    continue
                seen.add(id(t))
                for k in _metas(self.zonk(t)):
                    if self.resolve(k) is k:
                        s = sorted(self.scope[k.id])
                        self._bind(k, TVar(s[0]) if s else ID_TYPE)
        # the solution is frozen while mapping, so results can be shared by identity
        zonked: dict = {}
        ctxs: dict = {}
        nodes: dict = {}

        def zt(t):
            if self._meta_free(t):
                return t
            hit = zonked.get(id(t))
            if hit is None:
                hit = (t, self.zonk(t))
                zonked[id(t)] = hit
            return hit[1]

        def zc(c: Context) -> Context:
            if self._ctx_meta_free(c):
                return c
            hit = ctxs.get(id(c))
            if hit is None:
                hit = (c, c.map_types(zt))
                ctxs[id(c)] = hit
            return hit[1]

        def walk(n: Derivation) -> Derivation:
            if id(n) in self.ground:
                return n
            hit = nodes.get(id(n))
            if hit is not None:
                return hit[1]
            out = Derivation(n.rule, zc(n.context), n.subject, zt(n.type), tuple(walk(p) for p in n.premises),
                             None if n.instantiated_with is None else zt(n.instantiated_with))
            nodes[id(n)] = (n, out)
            return out

        out = walk(d)
        self.undo(m0)
        self.ground[id(out)] = out
        return out

    def _meta_free(self, t: TypeExpr) -> bool:
        if id(t) in self.meta_free:
            return True
        if next(_metas(t), None) is not None:
            return False
        self.meta_free[id(t)] = t
        return True

    def _ctx_meta_free(self, c: Context) -> bool:
        if id(c) in self.meta_free_ctx:
            return True
        if not all(self._meta_free(a) for _, a in c.entries):
            return False
        self.meta_free_ctx[id(c)] = c
        return True

    def _open_nodes(self, d: Derivation):
        stack = [d]
        while stack:
            n = stack.pop()
            if id(n) in self.ground:
                continue
            yield n
            stack.extend(n.premises)

    # -- search ----------------------------------------------------------

    def tick(self) -> bool:
        self.steps += 1
        if self.steps > self.budget.max_steps:
            self.truncated = True
            return False
        return True

    def prove(self, ctx: Context, scope: frozenset, goal: TypeExpr, term: Optional[Term],
              budget: int, depth: int, long: bool) -> Iterator[tuple[Derivation, int]]:
        """Derivations of ``ctx |- term : goal`` (``term=None`` generates one)
        with their size, each valid until the generator is resumed."""
        if not self.tick():
            return
        if depth > self.budget.max_depth:
            self.truncated = True
            return
        if budget < 1:
            return
        g = self.resolve(goal)
        if term is None and not isinstance(g, Meta):
            memo = self._memo_key(ctx, scope, g)
            if memo is not None:
                yield from self._memoized(memo, ctx, scope, g, budget, depth)
                return
        yield from self._prove(ctx, scope, g, term, budget, depth, long)

    def _prove(self, ctx, scope, g, term, budget, depth, long):
        if isinstance(g, Forall):
            yield from self._forall_i(ctx, scope, g, term, budget, depth, long)
        elif isinstance(g, Arrow):
            if term is None or isinstance(term, Lam):
                yield from self._arrow_i(ctx, scope, g, term, budget, depth, long)
            elif long:
                z = fresh_name(set(term.free_vars) | {k for k in ctx.keys() if isinstance(k, str)}, "z")
                yield from self._arrow_i(ctx, scope, g, Lam(z, App(term, Var(z))), budget, depth, long)
            else:
                yield from self._spine_check(ctx, scope, g, term, depth, long)
        elif isinstance(g, Meta):
            yield from self._meta_goal(ctx, scope, g, term, budget, depth, long)
        elif term is None:
            yield from self._spine_gen(ctx, scope, g, budget, depth)
        elif not isinstance(term, Lam):
            yield from self._spine_check(ctx, scope, g, term, depth, long)

    def _forall_i(self, ctx, scope, g: Forall, term, budget, depth, long):
        m0 = self.mark()
        x = g.binder
        if x in self.ref_binders or x not in self.used:
            if x not in self.used:
                self.used.add(x)
                self.trail.append(lambda: self.used.discard(x))
            body = g.body
        else:
            x = self.fresh_rigid(g.binder)
            body = subst_type(g.body, TVar(x), g.binder)
        for d, s in self.prove(ctx, scope | {x}, body, term, budget - 1, depth + 1, long):
            yield Derivation(FORALL_I, ctx, d.subject, Forall(x, body), (d,)), s + 1
        self.undo(m0)

    def _arrow_i(self, ctx, scope, g: Arrow, term, budget, depth, long):
        if term is None:
            x = fresh_name({k for k in ctx.keys() if isinstance(k, str)})
            body = None
        else:
            x, body = term.binder, term.body
        inner = ctx.extend(x, g.dom)
        for d, s in self.prove(inner, scope, g.cod, body, budget - 1, depth + 1, long):
            yield Derivation(ARROW_I, ctx, Lam(x, d.subject), g, (d,)), s + 1

    def _meta_goal(self, ctx, scope, m: Meta, term, budget, depth, long):
        ms = self.scope[m.id]
        lam = isinstance(term, Lam)
        atoms = term is None or (long and not lam)
        if term is not None and not long and not lam:
            yield from self._spine_check(ctx, scope, m, term, depth, long)
        if atoms:
            cands = [TVar(v) for v in sorted(ms)]
            if any(_mentions_o(a) for _, a in ctx.entries):
                cands.append(OConst())
            for p in cands:
                m0 = self.mark()
                self._bind(m, p)
                yield from self.prove(ctx, scope, p, term, budget, depth, long)
                self.undo(m0)
        if term is None or lam or long:
            if self.can_refine(m):
                m0 = self.mark()
                a = self.new_meta(ms, self.root[m.id])
                b = self.new_meta(ms, self.root[m.id])
                self._bind(m, Arrow(a, b))
                yield from self.prove(ctx, scope, m, term, budget, depth, long)
                self.undo(m0)
        if self.can_refine(m):
            m0 = self.mark()
            z = self.fresh_rigid("Z", ref=True)
            c = self.new_meta(ms | {z}, self.root[m.id])
            self._bind(m, Forall(z, c))
            yield from self.prove(ctx, scope, m, term, budget, depth, long)
            self.undo(m0)

    # spines ---------------------------------------------------------------

    def _head(self, ctx, scope, head: Term):
        if isinstance(head, Lam):
            t = self.new_meta(scope)
            return t, None
        key = term_key(head)
        t = None if key is None else ctx.lookup(key)
        if t is None:
            return None, None
        return t, Derivation(AX, ctx, head, t)

    def _spine_check(self, ctx, scope, goal, term, depth, long):
        head, args = spine(term)
        t, hd = self._head(ctx, scope, head)
        if t is None:
            return
        m0 = self.mark()
        steps = []
        cur = t
        ok = True
        for _ in args:
            cur = self.resolve(cur)
            while isinstance(cur, Forall):
                inst = self.instantiate(cur, scope)
                if inst is None:
                    ok = False
                    break
                steps.append(("e", inst[0], inst[1]))
                cur = self.resolve(inst[1])
            if not ok:
                break
            if isinstance(cur, Meta):
                if not self.can_refine(cur):
                    ok = False
                    break
                a = self.new_meta(self.scope[cur.id], self.root[cur.id])
                b = self.new_meta(self.scope[cur.id], self.root[cur.id])
                self._bind(cur, Arrow(a, b))
                cur = self.resolve(cur)
            if not isinstance(cur, Arrow):
                ok = False
                break
            steps.append(("a", cur))
            cur = cur.cod
        if ok:
            for extra in self._match_result(cur, goal, scope):
                all_steps = steps + extra
                yield from self._finish_check(ctx, scope, head, t, hd, args, all_steps, depth, long)
        self.undo(m0)

    def _match_result(self, cur, goal, scope):
        """Eliminate leading quantifiers of ``cur`` and unify with the goal;
        yields the elimination steps, leaving the bindings in place."""
        g = self.resolve(goal)
        free_count = isinstance(g, Meta)
        extra = []
        m0 = self.mark()
        while True:
            cur = self.resolve(cur)
            if free_count or not isinstance(cur, Forall):
                m1 = self.mark()
                if self.unify(cur, g):
                    yield list(extra)
                self.undo(m1)
            if not isinstance(cur, Forall):
                break
            inst = self.instantiate(cur, scope)
            if inst is None:
                break
            extra.append(("e", inst[0], inst[1]))
            cur = inst[1]
        self.undo(m0)

    def _finish_check(self, ctx, scope, head, t, hd, args, steps, depth, long):
        def heads():
            if hd is not None:
                yield hd, 1
            else:
                yield from self.prove(ctx, scope, t, head, INF, depth + 1, long)

        arg_types = [s[1].dom for s in steps if s[0] == "a"]
        for h, _ in heads():
            for ads in self._args(ctx, scope, arg_types, args, INF, depth, long):
                yield _build_spine(ctx, h, steps, [d for d, _ in ads]), 0

    def _args(self, ctx, scope, types, terms, budget, depth, long):
        if not types:
            yield []
            return
        rest_lb = sum(self.lower_bound(a) for a in types[1:]) if terms is None else 0
        term = None if terms is None else terms[0]
        for d, s in self.prove(ctx, scope, types[0], term, budget - rest_lb, depth + 1, long):
            tail_terms = None if terms is None else terms[1:]
            for rest in self._args(ctx, scope, types[1:], tail_terms, budget - s, depth, long):
                yield [(d, s)] + rest

    def lower_bound(self, a: TypeExpr) -> int:
        a = self.resolve(a)
        if isinstance(a, Forall):
            return 1 + self.lower_bound(a.body)
        if isinstance(a, Arrow):
            return 1 + self.lower_bound(a.cod)
        return 1

    def _spine_gen(self, ctx, scope, goal, budget, depth):
        count = 0
        for key, t in ctx.entries:
            head = Var(key) if isinstance(key, str) else _const(key)
            hd = Derivation(AX, ctx, head, t)
            for steps, fixed in self._plans(t, goal, scope, [], 1, budget):
                arg_types = [s[1].dom for s in steps if s[0] == "a"]
                for ads in self._args(ctx, scope, arg_types, None, budget - fixed, depth, True):
                    size = fixed + sum(s for _, s in ads)
                    count += 1
                    if count > self.budget.max_candidates_per_node:
                        self.truncated = True
                        return
                    yield _build_spine(ctx, hd, steps, [d for d, _ in ads]), size

    def _plans(self, cur, goal, scope, steps, fixed, budget):
        """Ways to use a head of type ``cur`` to reach the atom ``goal``."""
        cur = self.resolve(cur)
        if isinstance(cur, Forall):
            if fixed + 1 > budget:
                return
            m0 = self.mark()
            inst = self.instantiate(cur, scope)
            if inst is not None:
                yield from self._plans(inst[1], goal, scope, steps + [("e", inst[0], inst[1])], fixed + 1, budget)
            self.undo(m0)
        elif isinstance(cur, Arrow):
            need = fixed + 1 + self.lower_bound(cur.dom)
            if need > budget:
                return
            yield from self._plans(cur.cod, goal, scope, steps + [("a", cur)], fixed + 1, budget - self.lower_bound(cur.dom))
        else:
            m0 = self.mark()
            if self.unify(cur, goal):
                yield steps, fixed
            self.undo(m0)
            if isinstance(cur, Meta) and fixed + 2 <= budget and self.can_refine(cur):
                a = self.new_meta(self.scope[cur.id], self.root[cur.id])
                b = self.new_meta(self.scope[cur.id], self.root[cur.id])
                self._bind(cur, Arrow(a, b))
                yield from self._plans(cur, goal, scope, steps, fixed, budget)
                self.undo(m0)

    # memo for meta-free generation goals ------------------------------------

    def _memo_key(self, ctx, scope, g):
        if self.has_meta(g):
            return None
        entries = []
        for k, a in ctx.entries:
            z = self.zonk(a)
            if _metas_list(z):
                return None
            entries.append((k, z.key, str(z)))
        return (tuple(entries), g.key, str(g), frozenset(scope), frozenset(self.used), frozenset(self.ref_binders))

    def _memoized(self, key, ctx, scope, g, budget, depth):
        hit = self.memo.get(key)
        if hit is None or hit[0] < budget:
            saved = self.truncated
            self.truncated = False
            results = []
            for d, s in self._prove(ctx, scope, g, None, budget, depth, True):
                results.append((self.finalize(d), s))
            hit = (budget, results, self.truncated)
            self.memo[key] = hit
            self.truncated = saved
        if hit[2]:
            self.truncated = True
        for d, s in hit[1]:
            if s <= budget:
                yield d, s


def _build_spine(ctx: Context, hd: Derivation, steps, arg_derivs) -> Derivation:
    d = hd
    it = iter(arg_derivs)
    for step in steps:
        if step[0] == "e":
            d = Derivation(FORALL_E, ctx, d.subject, step[2], (d,), step[1])
        else:
            a = next(it)
            fn = Derivation(d.rule, d.context, d.subject, step[1], d.premises, d.instantiated_with)
            d = Derivation(ARROW_E, ctx, App(d.subject, a.subject), step[1].cod, (fn, a))
    return d


def _const(tag):
    from itypes.syntax import Const

    return Const(tag)


def _names(a: TypeExpr) -> set:
    if isinstance(a, Arrow):
        return _names(a.dom) | _names(a.cod)
    if isinstance(a, Forall):
        return {a.binder} | _names(a.body)
    if isinstance(a, TVar):
        return {a.name}
    return set()


def _metas(t: TypeExpr) -> Iterator[Meta]:
    if isinstance(t, Meta):
        yield t
    elif isinstance(t, Arrow):
        yield from _metas(t.dom)
        yield from _metas(t.cod)
    elif isinstance(t, Forall):
        yield from _metas(t.body)


def _metas_list(t):
    return list(_metas(t))


def _size_with_metas(t: TypeExpr) -> int:
    return type_size(t)


def _mentions_o(a: TypeExpr) -> bool:
    if isinstance(a, OConst):
        return True
    if isinstance(a, Arrow):
        return _mentions_o(a.dom) or _mentions_o(a.cod)
    if isinstance(a, Forall):
        return _mentions_o(a.body)
    return False


def _node_types(n: Derivation):
    yield n.type
    for _, a in n.context.entries:
        yield a
    if n.instantiated_with is not None:
        yield n.instantiated_with


def _used_names(ctx: Context, goal: TypeExpr) -> set:
    return set(ctx.free_type_vars()) | set(goal.free_vars)


# ---------------------------------------------------------------------------
# Public entry points
# ---------------------------------------------------------------------------


def search_F_derivation(ctx, t: Term, a: TypeExpr,
                        budget: Optional[SearchBudget] = None) -> Union[Derivation, None, _Unknown]:
    """A checked derivation of ``ctx |- t : a``; None when the bounded search
    space was exhausted without truncation, UNKNOWN otherwise."""
    ctx = as_context(ctx)
    eng = _Engine(budget or SearchBudget(), _used_names(ctx, a))
    scope = frozenset(eng.used)
    for d, _ in eng.prove(ctx, scope, a, t, INF, 0, False):
        fin = eng.finalize(d)
        if check_derivation(fin):
            return fin
    return UNKNOWN if eng.truncated else None


def iter_F_derivations(ctx, t: Term, a: TypeExpr, budget: Optional[SearchBudget] = None,
                       limit: int = 64) -> Iterator[Derivation]:
    """Distinct checked derivations of ``ctx |- t : a`` in search order."""
    ctx = as_context(ctx)
    eng = _Engine(budget or SearchBudget(), _used_names(ctx, a))
    scope = frozenset(eng.used)
    seen = set()
    for d, _ in eng.prove(ctx, scope, a, t, INF, 0, False):
        fin = eng.finalize(d)
        key = dumps(fin)
        if key in seen or not check_derivation(fin):
            continue
        seen.add(key)
        yield fin
        if len(seen) >= limit:
            return


class TypingError(ValueError):
    pass


def eta_long_derivation(ctx, t: Term, a: TypeExpr, budget: Optional[SearchBudget] = None):
    """``(t', d)`` with t' an eta-long form of ``t`` at type ``a`` and d its
    derivation; None or UNKNOWN as for :func:`search_F_derivation`."""
    ctx = as_context(ctx)
    eng = _Engine(budget or SearchBudget(), _used_names(ctx, a))
    scope = frozenset(eng.used)
    for d, _ in eng.prove(ctx, scope, a, t, INF, 0, True):
        fin = eng.finalize(d)
        if check_derivation(fin):
            return fin.subject, fin
    return UNKNOWN if eng.truncated else None


def eta_expand(t: Term, ctx, a: TypeExpr, budget: Optional[SearchBudget] = None) -> Term:
    """An eta-long form of ``t`` at ``a``; it eta-reduces back to ``t``.

    Raises TypingError when no derivation is found within the budget.
    """
    r = eta_long_derivation(ctx, t, a, budget)
    if not isinstance(r, tuple):
        reason = "budget exhausted" if r is UNKNOWN else "not typable"
        raise TypingError(f"cannot eta-expand at this type: {reason}")
    return r[0]


class DerivationStream:
    """Lazy generation of eta-long derivations of ``ctx |- ? : a`` with at
    most ``size_bound`` nodes; ``truncated`` is meaningful once exhausted."""

    def __init__(self, ctx, a: TypeExpr, size_bound: int, budget: Optional[SearchBudget] = None):
        self.ctx = as_context(ctx)
        self.goal = a
        self.size_bound = size_bound
        self._eng = _Engine(budget or SearchBudget(), _used_names(self.ctx, a))

    @property
    def truncated(self) -> bool:
        return self._eng.truncated

    def __iter__(self) -> Iterator[Derivation]:
        eng = self._eng
        scope = frozenset(eng.used)
        for d, _ in eng.prove(self.ctx, scope, self.goal, None, self.size_bound, 0, True):
            fin = eng.finalize(d)
            if check_derivation(fin):
                yield fin


@dataclass
class Generation:
    derivations: list
    truncated: bool


def generate_derivations(ctx, a: TypeExpr, size_bound: int,
                         budget: Optional[SearchBudget] = None) -> Generation:
    """All eta-long beta-normal derivations of ``ctx |- ? : a`` with at most
    ``size_bound`` nodes (up to the choice of unconstrained instantiations)."""
    stream = DerivationStream(ctx, a, size_bound, budget)
    out = list(stream)
    return Generation(out, stream.truncated)
