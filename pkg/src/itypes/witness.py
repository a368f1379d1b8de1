"""The I/J coercion terms and the extraction of lambda-K witnesses.

``I'[A, X]`` and ``J'[A, X]`` are built over two opaque constants @U, @V
by recursion on A.  Substituting the concrete terms

    U = \\x. \\d. <x, alpha>        V = \\x. x alpha K1

gives ``I[A, X]`` and ``J[A, X]``, which under ``alpha : O`` convert
between ``A[Y/X]`` and ``A[Y°/X]`` where ``Y° = O -> (Y /\\ O)``.

A (Ae) node of shape ``(x)u1...un`` instantiating ``forall X. A`` at G
can be re-instantiated at G° and wrapped in ``J[A, X]``; the normal form
of the wrapped spine contains alpha, and replacing alpha by K1 yields a
lambda-K inhabitant of the original type.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from itypes.derivation import (
    ARROW_E,
    AX,
    FORALL_E,
    FORALL_I,
    Context,
    Derivation,
    arrow_e,
    arrow_i,
    ax,
    check_derivation,
    classify_forall_elims,
    forall_e,
    forall_i,
    map_derivation_types,
    rebuild,
    replace_in_context_hole,
    replace_node,
    term_paths,
    to_json,
    weaken_context,
)
from itypes.polarity import drop_vacuous_quantifiers
from itypes.printer import print_term
from itypes.reduction import DEFAULT_FUEL, beta_normalize, is_beta_normal
from itypes.search import SearchBudget, iter_F_derivations, search_F_derivation
from itypes.syntax import (
    ALPHA,
    BOOL_TYPE,
    App,
    Arrow,
    Const,
    Forall,
    Lam,
    O,
    OConst,
    Opaque,
    Term,
    TVar,
    TypeExpr,
    Var,
    all_type_names,
    app,
    circ,
    contains_const,
    fresh_type_name,
    rename_apart,
    id_term,
    is_lambda_I,
    one,
    pair,
    subst_const,
    subst_type,
    type_size,
)

OPAQUE_U = Opaque("U")
OPAQUE_V = Opaque("V")
ALPHA_TERM = Const(ALPHA)


def u_term() -> Term:
    return Lam("x", Lam("d", pair(Var("x"), ALPHA_TERM)))


def v_term() -> Term:
    return Lam("x", app(Var("x"), ALPHA_TERM, one()))


def _coercion(a: TypeExpr, x: str, forward: bool, u: Term, v: Term) -> Term:
    if isinstance(a, TVar) and a.name == x:
        return u if forward else v
    if isinstance(a, Arrow):
        cod = _coercion(a.cod, x, forward, u, v)
        dom = _coercion(a.dom, x, not forward, u, v)
        return Lam("x", Lam("y", App(cod, App(Var("x"), App(dom, Var("y"))))))
    if isinstance(a, Forall):
        a = rename_apart(a, x)
        return Lam("x", App(_coercion(a.body, x, forward, u, v), Var("x")))
    return id_term()


def build_I_prime(a: TypeExpr, x: str) -> Term:
    return _coercion(a, x, True, Const(OPAQUE_U), Const(OPAQUE_V))


def build_J_prime(a: TypeExpr, x: str) -> Term:
    return _coercion(a, x, False, Const(OPAQUE_U), Const(OPAQUE_V))


def _concrete(t: Term) -> Term:
    return subst_const(t, {OPAQUE_U: u_term(), OPAQUE_V: v_term()})


def build_I(a: TypeExpr, x: str) -> Term:
    return _concrete(build_I_prime(a, x))


def build_J(a: TypeExpr, x: str) -> Term:
    return _concrete(build_J_prime(a, x))


# ---------------------------------------------------------------------------
# Typing of I and J
# ---------------------------------------------------------------------------


class _IJTyper:
    """Derivations of ``ctx |- I[A, X] : A[Y/X] -> A[Y°/X]`` (and the
    converse for J) at a fixed rigid Y, mirroring the term construction."""

    def __init__(self, x: str, y: str, avoid: set):
        self.x = x
        self.y = y
        self.lifted = circ(TVar(y))
        self.avoid = set(avoid) | {x, y} | all_type_names(self.lifted)

    def fresh(self, ctx: Context, base: str) -> str:
        name = fresh_type_name(self.avoid | ctx.free_type_vars(), base)
        self.avoid.add(name)
        return name

    def low(self, a: TypeExpr) -> TypeExpr:
        return subst_type(a, TVar(self.y), self.x)

    def high(self, a: TypeExpr) -> TypeExpr:
        return subst_type(a, self.lifted, self.x)

    def derive(self, a: TypeExpr, forward: bool, ctx: Context) -> Derivation:
        if isinstance(a, TVar) and a.name == self.x:
            return self._u(ctx) if forward else self._v(ctx)
        if isinstance(a, Arrow):
            return self._arrow(a, forward, ctx)
        if isinstance(a, Forall):
            return self._forall(rename_apart(a, self.x), forward, ctx)
        return arrow_i(ctx, "x", a, ax(ctx.extend("x", a), Var("x")))

    def _u(self, ctx: Context) -> Derivation:
        # x : Y, d : O |- <x, alpha> : Y /\ O
        y = TVar(self.y)
        c1 = ctx.extend("x", y).extend("d", O)
        body = pair(Var("x"), ALPHA_TERM)
        w = self.fresh(c1, "W")
        c2 = c1.extend(body.binder, Arrow(y, Arrow(O, TVar(w))))
        p = ax(c2, Var(body.binder))
        inner = arrow_e(arrow_e(p, ax(c2, Var("x"))), ax(c2, ALPHA_TERM))
        d_pair = forall_i(arrow_i(c1, body.binder, c2.lookup(body.binder), inner), w)
        return arrow_i(ctx, "x", y, arrow_i(ctx.extend("x", y), "d", O, d_pair))

    def _v(self, ctx: Context) -> Derivation:
        # x : Y° |- (x) alpha K1 : Y
        y = TVar(self.y)
        c1 = ctx.extend("x", self.lifted)
        xa = arrow_e(ax(c1, Var("x")), ax(c1, ALPHA_TERM))
        inst = forall_e(xa, y)
        k = one()
        c2 = c1.extend(k.binder, y)
        c3 = c2.extend(k.body.binder, O)
        dk = arrow_i(c1, k.binder, y, arrow_i(c2, k.body.binder, O, ax(c3, Var(k.body.body.name))))
        return arrow_i(ctx, "x", self.lifted, arrow_e(inst, dk))

    def _arrow(self, a: Arrow, forward: bool, ctx: Context) -> Derivation:
        if forward:
            xt = Arrow(self.low(a.dom), self.low(a.cod))
            yt = self.high(a.dom)
        else:
            xt = Arrow(self.high(a.dom), self.high(a.cod))
            yt = self.low(a.dom)
        c1 = ctx.extend("x", xt)
        c2 = c1.extend("y", yt)
        d_dom = self.derive(a.dom, not forward, c2)
        inner = arrow_e(ax(c2, Var("x")), arrow_e(d_dom, ax(c2, Var("y"))))
        d_cod = self.derive(a.cod, forward, c2)
        body = arrow_e(d_cod, inner)
        return arrow_i(ctx, "x", xt, arrow_i(c1, "y", yt, body))

    def _forall(self, a: Forall, forward: bool, ctx: Context) -> Derivation:
        z = self.fresh(ctx, a.binder)
        b = subst_type(a.body, TVar(z), a.binder)
        src = self.low(b) if forward else self.high(b)
        c1 = ctx.extend("x", Forall(z, src))
        inst = forall_e(ax(c1, Var("x")), TVar(z))
        body = arrow_e(self.derive(b, forward, c1), inst)
        return arrow_i(ctx, "x", Forall(z, src), forall_i(body, z))


def ij_derivations(a: TypeExpr, x: str, ctx: Optional[Context] = None,
                   avoid: frozenset = frozenset()) -> tuple[Derivation, Derivation]:
    """``alpha : O |- I : forall Y. A[Y/X] -> A[Y°/X]`` and the J counterpart.

    When X does not occur in A the two sides coincide and the vacuous
    quantifier is left out.
    """
    ctx = Context.of((ALPHA, O)) if ctx is None else ctx
    y = fresh_type_name(all_type_names(a) | {x} | set(avoid) | ctx.free_type_vars(), "Y")
    typer = _IJTyper(x, y, all_type_names(a) | set(avoid) | ctx.free_type_vars())
    out = []
    for forward in (True, False):
        d = typer.derive(a, forward, ctx)
        if x in a.free_vars:
            d = forall_i(d, y)
        out.append(d)
    return out[0], out[1]


def expected_IJ_types(a: TypeExpr, x: str) -> tuple[TypeExpr, TypeExpr]:
    y = fresh_type_name(all_type_names(a) | {x}, "Y")
    lo, hi = subst_type(a, TVar(y), x), subst_type(a, circ(TVar(y)), x)
    if x not in a.free_vars:
        return Arrow(lo, hi), Arrow(hi, lo)
    return Forall(y, Arrow(lo, hi)), Forall(y, Arrow(hi, lo))


def check_IJ_typing(a: TypeExpr, x: str, budget: Optional[SearchBudget] = None) -> bool:
    """Build and check both coercion derivations (no search involved)."""
    d_i, d_j = ij_derivations(a, x)
    t_i, t_j = expected_IJ_types(a, x)
    return (
        check_derivation(d_i)
        and check_derivation(d_j)
        and d_i.subject == build_I(a, x)
        and d_j.subject == build_J(a, x)
        and d_i.type == t_i
        and d_j.type == t_j
    )


# ---------------------------------------------------------------------------
# Rewriting a (Ae) node of the second kind
# ---------------------------------------------------------------------------


def _spine_top(d: Derivation, node: tuple) -> tuple:
    top = node
    while top:
        parent = d.at(top[:-1])
        if parent.rule in (FORALL_I, FORALL_E) or (parent.rule == ARROW_E and top[-1] == 0):
            top = top[:-1]
        else:
            break
    return top


def _witness_budget(budget: Optional[SearchBudget], g: TypeExpr) -> SearchBudget:
    b = budget or SearchBudget()
    need = type_size(circ(g)) + 2
    if b.max_instantiation_size >= need:
        return b
    return SearchBudget(need, b.max_depth, b.max_candidates_per_node, b.max_steps)


def rewrite_forall_e2(d: Derivation, node: tuple, budget: Optional[SearchBudget] = None,
                      fuel: int = DEFAULT_FUEL) -> tuple[Term, Derivation]:
    """Re-instantiate the node at G°, wrap its subject in J, normalize the
    enclosing spine and graft it back.  Returns ``(t', derivation)`` with
    ``alpha : O`` added to every context."""
    n = d.at(tuple(node))
    if n.rule != FORALL_E or n.variant != 2:
        raise ValueError("not an elimination of the second kind")
    node = tuple(node)
    prem = n.premises[0]
    quant = prem.type
    x, a, g = quant.binder, quant.body, n.instantiated_with
    if x not in a.free_vars:
        raise AssertionError("instantiated quantifier does not bind a free variable")
    alpha_ctx = Context.of((ALPHA, O))
    top = _spine_top(d, node)

    def lift(sub: Derivation) -> Derivation:
        return weaken_context(sub, alpha_ctx)

    p2 = lift(prem)
    ctx = p2.context
    reinst = forall_e(p2, circ(g))
    avoid = frozenset(ctx.free_type_vars() | g.free_vars | all_type_names(a))
    _, d_j = ij_derivations(a, x, ctx, avoid)
    # d_j : forall Y. A[Y°/X] -> A[Y/X], instantiate Y := G
    d_j = forall_e(d_j, g)
    cur = arrow_e(d_j, reinst)
    # replay the rules between the node and the top of its spine
    path = node
    while path != top:
        parent_path = path[:-1]
        parent = d.at(parent_path)
        if parent.rule == ARROW_E:
            arg = lift(parent.premises[1])
            cur = Derivation(ARROW_E, cur.context, App(cur.subject, arg.subject), parent.type, (cur, arg))
        elif parent.rule == FORALL_I:
            cur = Derivation(FORALL_I, cur.context, cur.subject, parent.type, (cur,))
        else:
            cur = Derivation(FORALL_E, cur.context, cur.subject, parent.type, (cur,), parent.instantiated_with)
        path = parent_path
    if not check_derivation(cur):
        raise AssertionError("wrapped spine does not type-check")
    nf = beta_normalize(cur.subject, fuel)
    if nf.exhausted:
        raise RuntimeError("normalization of the wrapped spine ran out of fuel")
    du = search_F_derivation(cur.context, nf.result, cur.type, _witness_budget(budget, g))
    if not isinstance(du, Derivation):
        raise RuntimeError("no derivation found for the normalized spine")
    whole = rebuild(replace_node(lift(d), top, du))
    hole = term_paths(d)[top]
    t_new = replace_in_context_hole(d.subject, hole, nf.result)
    assert whole.subject == t_new
    return t_new, whole


def _replace_o(a: TypeExpr) -> TypeExpr:
    if isinstance(a, OConst):
        return BOOL_TYPE
    if isinstance(a, Arrow):
        return Arrow(_replace_o(a.dom), _replace_o(a.cod))
    if isinstance(a, Forall):
        return Forall(a.binder, _replace_o(a.body))
    return a


def _all_type_names_in(d: Derivation) -> set:
    out: set = set()
    for _, n in d.nodes():
        out |= all_type_names(n.type)
        for _, a in n.context.entries:
            out |= all_type_names(a)
    return out


def substitute_alpha(d: Derivation) -> Derivation:
    """From ``alpha : O`` to a closed derivation: O becomes Bool and every
    use of alpha becomes K1 typed at Bool."""
    d = map_derivation_types(d, _replace_o)
    w = fresh_type_name(_all_type_names_in(d) | {"X", "Y"}, "W")
    k = one()

    def k1(ctx: Context) -> Derivation:
        c1 = ctx.extend(k.binder, TVar(w))
        c2 = c1.extend(k.body.binder, TVar(w))
        body = arrow_i(c1, k.body.binder, TVar(w), ax(c2, Var(k.binder)))
        return forall_i(arrow_i(ctx, k.binder, TVar(w), body), w)

    def go(n: Derivation) -> Derivation:
        ctx = n.context.without(ALPHA)
        if n.rule == AX and isinstance(n.subject, Const) and n.subject.tag == ALPHA:
            return k1(ctx)
        prem = tuple(go(p) for p in n.premises)
        return Derivation(n.rule, ctx, n.subject, n.type, prem, n.instantiated_with)

    return rebuild(go(d))


@dataclass
class WitnessTrace:
    original: Term
    rewritten: Term
    final: Term
    before: Derivation
    after: Derivation
    final_derivation: Derivation
    used_node: tuple

    def to_json(self) -> dict:
        return {
            "original": print_term(self.original),
            "rewritten": print_term(self.rewritten),
            "final": print_term(self.final),
            "used_node": list(self.used_node),
            "derivations": {
                "before": to_json(self.before),
                "after": to_json(self.after),
                "final": to_json(self.final_derivation),
            },
        }


def k_witness(D: TypeExpr, t: Term, budget: Optional[SearchBudget] = None,
              max_derivations: int = 16) -> Optional[WitnessTrace]:
    """A lambda-K inhabitant of D obtained from a derivation of ``t`` that
    uses an elimination of the second kind; None if no such derivation is
    found under the budget."""
    D = drop_vacuous_quantifiers(D)
    for d in iter_F_derivations(None, t, D, budget, limit=max_derivations):
        nodes = [p for p, v in classify_forall_elims(d) if v == 2]
        nodes.sort(key=lambda p: (len(p), p))
        for node in nodes:
            try:
                t_new, d_new = rewrite_forall_e2(d, node, budget)
            except (RuntimeError, AssertionError):
                continue
            if not contains_const(t_new, ALPHA):
                continue
            final = subst_const(t_new, {ALPHA: one()})
            if final.free_vars or not is_beta_normal(final) or is_lambda_I(final):
                continue
            d_final = substitute_alpha(d_new)
            if d_final.subject != final or d_final.type != D or not check_derivation(d_final):
                continue
            return WitnessTrace(t, t_new, final, d, d_new, d_final, node)
    return None
