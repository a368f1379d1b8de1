"""Closed normal inhabitants, I-type classification and small-type sweeps."""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Union

from itypes.derivation import Derivation, to_json
from itypes.polarity import drop_vacuous_quantifiers, polarity
from itypes.printer import print_term, print_type
from itypes.reduction import beta_eta_normalize
from itypes.search import DerivationStream, SearchBudget, search_F_derivation
from itypes.syntax import (
    App,
    Arrow,
    Forall,
    Lam,
    all_type_names,
    fresh_type_name,
    rename_bound_type,
    Term,
    TVar,
    TypeExpr,
    Var,
    arrows,
    conj,
    foralls,
    is_lambda_I,
    lams,
    tuple_term,
    type_size,
)

DEFAULT_SIZE_BOUND = 24
# the inhabitant set must be unchanged between bound - window and bound for
# the order to be reported as exact
STABILITY_WINDOW = 4


@dataclass(frozen=True)
class Inhabitant:
    term: Term
    derivation: Derivation
    is_lambda_I: bool
    derivation_size: int
    # False when the eta-normal form could not be re-typed and the
    # derivation is that of the eta-long form
    retyped: bool = True


@dataclass(frozen=True)
class NotIType:
    witness: Term
    name = "NotIType"


@dataclass(frozen=True)
class ITypeUpToBound:
    name = "ITypeUpToBound"


@dataclass(frozen=True)
class NotITypeByPolarity:
    obstruction: tuple
    name = "NotITypeByPolarity"


@dataclass(frozen=True)
class NotDemonstrableUpToBound:
    name = "NotDemonstrableUpToBound"


ITypeVerdict = Union[NotIType, ITypeUpToBound, NotITypeByPolarity, NotDemonstrableUpToBound]


@dataclass
class ClassificationReport:
    type: TypeExpr
    bound: int
    inhabitants: list
    demonstrable: Optional[bool]
    order: Union[int, str]
    verdict: ITypeVerdict
    truncated: bool = False
    witness_trace: object = None

    @property
    def is_itype(self) -> bool:
        return isinstance(self.verdict, ITypeUpToBound)

    def to_json(self, derivations: bool = False) -> dict:
        v = self.verdict
        verdict: dict = {"kind": v.name}
        if isinstance(v, NotIType):
            verdict["witness"] = print_term(v.witness)
        if isinstance(v, NotITypeByPolarity):
            verdict["obstruction"] = "".join(v.obstruction)
        out = {
            "type": print_type(self.type),
            "bound": self.bound,
            "demonstrable": "unknown" if self.demonstrable is None else self.demonstrable,
            "order": self.order,
            "verdict": verdict,
            "truncated": self.truncated,
            "inhabitants": [
                {"term": print_term(i.term), "lambda_I": i.is_lambda_I, "size": i.derivation_size}
                | ({"derivation": to_json(i.derivation)} if derivations else {})
                for i in self.inhabitants
            ],
        }
        if self.witness_trace is not None:
            out["witness_trace"] = self.witness_trace.to_json()
        return out


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


def _closed(D: TypeExpr) -> TypeExpr:
    if D.free_vars:
        raise ValueError("inhabitants are only defined for closed types")
    return drop_vacuous_quantifiers(D)


def _sort_key(t: Term):
    return (t.size, print_term(t))


def enumerate_inhabitants_full(D: TypeExpr, size_bound: int = DEFAULT_SIZE_BOUND,
                               budget: Optional[SearchBudget] = None,
                               stop_at_lambda_K: bool = False) -> tuple[list, bool]:
    """Inhabitants with their flags, and whether the search was truncated."""
    D = _closed(D)
    stream = DerivationStream(None, D, size_bound, budget)
    found: dict = {}
    for d in stream:
        nf = beta_eta_normalize(d.subject).result
        prev = found.get(nf)
        if prev is None or d.size < prev[1]:
            found[nf] = (d, d.size if prev is None else min(d.size, prev[1]))
        if stop_at_lambda_K and not is_lambda_I(nf):
            break
    out = []
    for t, (d, size) in found.items():
        retyped = True
        if d.subject != t:
            r = search_F_derivation(None, t, D, budget)
            if isinstance(r, Derivation):
                d = r
            else:
                retyped = False
        out.append(Inhabitant(t, d, is_lambda_I(t), size, retyped))
    out.sort(key=lambda i: _sort_key(i.term))
    return out, stream.truncated


def enumerate_inhabitants(D: TypeExpr, size_bound: int = DEFAULT_SIZE_BOUND,
                          budget: Optional[SearchBudget] = None) -> list[tuple[Term, Derivation]]:
    """Closed beta-eta-normal inhabitants whose eta-long derivation has at
    most ``size_bound`` nodes, ordered by (term size, printed form)."""
    inhabitants, _ = enumerate_inhabitants_full(D, size_bound, budget)
    return [(i.term, i.derivation) for i in inhabitants]


_MAX_EIGENVARIABLES = 6


class _Prover:
    """Backward search for provability at positive types. Loop checking
    makes failure final unless the eigenvariable cap was hit (``cut``)."""

    def __init__(self):
        self.proved: set = set()
        self.cut = False

    def provable(self, ctx: frozenset, goal: TypeExpr, path: frozenset, eigen: int) -> bool:
        while True:
            if isinstance(goal, Arrow):
                ctx = ctx | {goal.dom}
                goal = goal.cod
            elif isinstance(goal, Forall):
                if eigen >= _MAX_EIGENVARIABLES:
                    self.cut = True
                    return False
                eigen += 1
                # any fresh eigenvariable will do; picking it canonically
                # lets repeated sequents be recognised
                used = set(goal.free_vars).union(*(h.free_vars for h in ctx))
                goal = rename_bound_type(goal, fresh_type_name(used, "E")).body
            else:
                break
        key = (ctx, goal)
        if key in self.proved:
            return True
        if key in path:
            return False
        path = path | {key}
        for h in ctx:
            args = []
            while isinstance(h, Arrow):
                args.append(h.dom)
                h = h.cod
            if isinstance(h, Forall):
                raise ValueError("hypothesis needs a quantifier elimination")
            if h == goal and all(self.provable(ctx, a, path, eigen) for a in args):
                self.proved.add(key)
                return True
        return False


def positive_inhabited(D: TypeExpr) -> Optional[bool]:
    """Decide whether a closed positive type has an inhabitant.

    Derivations at such types never eliminate a quantifier, so inhabitation
    is propositional provability with eigenvariables, decided here by
    backward search with loop checking. None for other types, or when too
    many eigenvariables pile up on one branch.
    """
    if not polarity(D).in_pos:
        return None
    prover = _Prover()
    try:
        found = prover.provable(frozenset(), D, frozenset(), 0)
    except ValueError:
        return None
    if not found and prover.cut:
        return None
    return found


def classify_itype(D: TypeExpr, size_bound: int = DEFAULT_SIZE_BOUND,
                   budget: Optional[SearchBudget] = None, use_witness: bool = True) -> ClassificationReport:
    """Classify D from its inhabitants up to ``size_bound``.

    The bound is deepened in steps of two and the search stops at the first
    bound exposing a lambda-K inhabitant, so refuted types stay cheap even
    when their inhabitants grow exponentially. Vacuous quantifiers are
    dropped first (they do not change the inhabitants).
    """
    D = _closed(D)
    if positive_inhabited(D) is False:
        return ClassificationReport(D, size_bound, [], False, 0, NotDemonstrableUpToBound())
    bound = min(size_bound, 2 + size_bound % 2)
    while True:
        inhabitants, truncated = enumerate_inhabitants_full(D, bound, budget)
        if bound >= size_bound or any(not i.is_lambda_I for i in inhabitants):
            break
        bound += 2
    demonstrable: Optional[bool] = True if inhabitants else None
    count = len(inhabitants)
    stable = (bound == size_bound and not truncated
              and all(i.derivation_size <= size_bound - STABILITY_WINDOW for i in inhabitants))
    order: Union[int, str] = count if stable else f">={count}"
    trace = None
    lambda_k = [i for i in inhabitants if not i.is_lambda_I]
    pol = polarity(D)
    if lambda_k:
        verdict: ITypeVerdict = NotIType(lambda_k[0].term)
    elif demonstrable:
        trace = _try_witness(D, inhabitants, budget) if use_witness else None
        if trace is not None:
            verdict = NotIType(beta_eta_normalize(trace.final).result)
        elif not pol.in_pos:
            verdict = NotITypeByPolarity(_obstruction(D, pol))
        else:
            verdict = ITypeUpToBound()
    else:
        verdict = NotDemonstrableUpToBound()
    return ClassificationReport(D, bound, inhabitants, demonstrable, order, verdict, truncated, trace)


def _obstruction(D: TypeExpr, pol) -> tuple:
    if pol.negative_quantifier_paths:
        return pol.negative_quantifier_paths[0]
    return ()


def _try_witness(D: TypeExpr, inhabitants: list, budget):
    from itypes.witness import k_witness

    for inh in inhabitants:
        tr = k_witness(D, inh.term, budget)
        if tr is not None:
            return tr
    return None


# ---------------------------------------------------------------------------
# The B_n and B_infinity families
# ---------------------------------------------------------------------------


def build_Bn(n: int) -> TypeExpr:
    if n < 2:
        raise ValueError("B_n needs n >= 2")
    x = TVar("X")
    ys = [TVar(f"Y{k}") for k in range(1, n + 1)]
    hyps = [Arrow(y, x) for y in ys]
    first = arrows(*ys, conj([x] + ys))
    return foralls(["X"] + [y.name for y in ys], arrows(*hyps, conj([first] + hyps)))


def build_Ti(n: int, i: int) -> Term:
    if n < 2 or not 1 <= i <= n:
        raise ValueError("need n >= 2 and 1 <= i <= n")
    xs = [Var(f"x{k}") for k in range(1, n + 1)]
    ys = [Var(f"y{k}") for k in range(1, n + 1)]
    inner = lams([y.name for y in ys], tuple_term([App(xs[i - 1], ys[i - 1])] + ys))
    return lams([x.name for x in xs], tuple_term([inner] + xs))


def build_Binf() -> TypeExpr:
    x, y = TVar("X"), TVar("Y")
    return foralls(["X", "Y"], arrows(Arrow(x, y), Arrow(y, x), conj([Arrow(x, y), Arrow(y, x)])))


def _iterate(first: Var, second: Var, n: int) -> Term:
    # beta-eta-normal form of \u. (first)(second)...(first)(second)(first)u
    body: Term = App(first, Var("u"))
    for _ in range(n):
        body = App(first, App(second, body))
    return beta_eta_normalize(Lam("u", body)).result


def build_Tij(i: int, j: int) -> Term:
    if i < 0 or j < 0:
        raise ValueError("indices must be non-negative")
    x, y = Var("x"), Var("y")
    return Lam("x", Lam("y", tuple_term([_iterate(x, y, i), _iterate(y, x, j)])))


# ---------------------------------------------------------------------------
# Sweeps over small types
# ---------------------------------------------------------------------------

_BINDER_NAMES = "XYZW"


@functools.lru_cache(maxsize=None)
def _raw_types(size: int, depth: int, q: int) -> tuple:
    """Closed-in-context proper types with exactly ``size`` connectives and
    ``q`` quantifiers; binders at depth k are named by position."""
    out = []
    if size == 0:
        if q == 0:
            out.extend(TVar(_BINDER_NAMES[k]) for k in range(depth))
        return tuple(out)
    if q > 0:
        name = _BINDER_NAMES[depth]
        for body in _raw_types(size - 1, depth + 1, q - 1):
            if name in body.free_vars:
                out.append(Forall(name, body))
    for a in range(size):
        for qa in range(q + 1):
            doms = _raw_types(a, depth, qa)
            if not doms:
                continue
            cods = _raw_types(size - 1 - a, depth, q - qa)
            for d in doms:
                for c in cods:
                    out.append(Arrow(d, c))
    return tuple(out)


def _binders_preorder(a: TypeExpr, out: list) -> list:
    if isinstance(a, Forall):
        out.append(a)
        _binders_preorder(a.body, out)
    elif isinstance(a, Arrow):
        _binders_preorder(a.dom, out)
        _binders_preorder(a.cod, out)
    return out


def _render(a: TypeExpr, names: dict, env: dict) -> str:
    """Order-insensitive rendering: arrow arguments sorted, adjacent
    quantifier blocks sorted."""
    if isinstance(a, TVar):
        return env.get(a.name, a.name)
    if isinstance(a, Forall):
        block = []
        cur = a
        env = dict(env)
        while isinstance(cur, Forall):
            env[cur.binder] = names[id(cur)]
            block.append(names[id(cur)])
            cur = cur.body
        return "A" + ",".join(sorted(block)) + "." + _render(cur, names, env)
    args = []
    cur = a
    while isinstance(cur, Arrow):
        args.append(_render(cur.dom, names, env))
        cur = cur.cod
    return "(" + ",".join(sorted(args)) + ">" + _render(cur, names, env) + ")"


def prenex_codomains(a: TypeExpr) -> TypeExpr:
    """Float quantifiers out of arrow codomains: A -> forall Y. B becomes
    forall Y. A -> B. Both have the same inhabitants."""
    if isinstance(a, Forall):
        return Forall(a.binder, prenex_codomains(a.body))
    if not isinstance(a, Arrow):
        return a
    dom, cod = prenex_codomains(a.dom), prenex_codomains(a.cod)
    if isinstance(cod, Forall):
        if cod.binder in dom.free_vars:
            cod = rename_bound_type(cod, fresh_type_name(all_type_names(dom) | all_type_names(cod)))
        return Forall(cod.binder, prenex_codomains(Arrow(dom, cod.body)))
    return Arrow(dom, cod)


def canonical_key(a: TypeExpr) -> str:
    """Key identifying types equal up to alpha, reordering of arrow
    arguments, reordering of adjacent quantifiers and floating quantifiers
    out of codomains."""
    a = prenex_codomains(a)
    binders = _binders_preorder(a, [])
    best = None
    for perm in itertools.permutations(range(len(binders))):
        names = {id(b): f"v{perm[k]}" for k, b in enumerate(binders)}
        s = _render(a, names, {})
        if best is None or s < best:
            best = s
    return best if best is not None else _render(a, {}, {})


def small_types(max_quantifiers: int, max_size: int = 9) -> list[TypeExpr]:
    """Closed proper types with exactly ``max_quantifiers`` quantifiers and at
    most ``max_size`` connectives, one per canonical class, sorted by
    (size, printed form)."""
    seen: dict = {}
    for size in range(1, max_size + 1):
        for a in _raw_types(size, 0, max_quantifiers):
            k = canonical_key(a)
            if k not in seen or print_type(a) < print_type(seen[k]):
                seen[k] = a
    return sorted(seen.values(), key=lambda a: (type_size(a), print_type(a)))


def theorem_shapes(max_size: int = 9) -> dict:
    """Canonical keys of the two-quantifier shapes listed by the
    classification theorem, for every n that fits ``max_size``."""
    x, y = TVar("X"), TVar("Y")
    out = {}
    for n in range(1, max_size + 1):
        cands = {
            f"[(Y->Y)^{n}->X]->X": foralls("XY", Arrow(arrows(*[Arrow(y, y)] * n, x), x)),
            f"Y,(Y^{n}->X)->X": foralls("XY", arrows(y, arrows(*[y] * n, x), x)),
            f"(Y^{n}->X),Y->X": foralls("XY", arrows(arrows(*[y] * n, x), y, x)),
        }
        for label, a in cands.items():
            if type_size(a) <= max_size:
                out[canonical_key(a)] = label
    a = Forall("X", Arrow(Arrow(Forall("Y", Arrow(y, y)), x), x))
    out[canonical_key(a)] = "(forall Y(Y->Y)->X)->X"
    return out


def sweep_small_types(max_quantifiers: int, max_type_size: int = 9,
                      size_bound: int = DEFAULT_SIZE_BOUND,
                      budget: Optional[SearchBudget] = None,
                      confirm_bound: int = 40,
                      non_positive_bound: int = 12) -> list[ClassificationReport]:
    """Classify every small type, in canonical type order.

    Positive types are classified at ``size_bound`` and the I-type
    candidates are classified again at ``confirm_bound``, since lambda-K
    inhabitants can sit just past the first bound. Types outside the
    positive class cannot be demonstrable I-types, so they are only searched
    (to ``non_positive_bound``) for a first inhabitant.
    """
    if max_quantifiers not in (1, 2):
        raise ValueError("sweeps cover one or two quantifiers")
    reports = []
    for a in small_types(max_quantifiers, max_type_size):
        if polarity(a).in_pos:
            rep = classify_itype(a, size_bound, budget, use_witness=False)
            if rep.is_itype and confirm_bound > size_bound:
                rep = classify_itype(a, confirm_bound, budget, use_witness=False)
        else:
            rep = _classify_non_positive(a, non_positive_bound, budget)
        reports.append(rep)
    return reports


def _classify_non_positive(a: TypeExpr, bound: int, budget) -> ClassificationReport:
    truncated = False
    for b in range(2 + bound % 2, bound + 1, 2):
        stream = DerivationStream(None, a, b, budget)
        for d in stream:
            t = beta_eta_normalize(d.subject).result
            inh = Inhabitant(t, d, is_lambda_I(t), d.size, d.subject == t)
            if inh.is_lambda_I:
                verdict: ITypeVerdict = NotITypeByPolarity(_obstruction(a, polarity(a)))
            else:
                verdict = NotIType(t)
            return ClassificationReport(a, b, [inh], True, ">=1", verdict, stream.truncated)
        truncated = truncated or stream.truncated
    return ClassificationReport(a, bound, [], None, ">=0", NotDemonstrableUpToBound(), truncated)


def sweep_summary(reports: Iterable[ClassificationReport]) -> dict:
    """I-types found, with their inhabitant counts and matched shape."""
    reports = list(reports)
    shapes = theorem_shapes(max((type_size(r.type) for r in reports), default=9))
    itypes = []
    for r in reports:
        if r.is_itype:
            itypes.append({
                "type": print_type(r.type),
                "inhabitants": [print_term(i.term) for i in r.inhabitants],
                "shape": shapes.get(canonical_key(r.type)),
            })
    return {"types": len(reports), "itypes": itypes}
