"""Leftmost-outermost beta, eta and head reduction with explicit fuel."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Optional

from itypes.syntax import App, Lam, Path, Term, Var, subst_term

DEFAULT_FUEL = 10_000


@dataclass(frozen=True)
class ReductionOutcome:
    result: Term
    steps: int
    exhausted: bool

    @property
    def normal(self) -> bool:
        return not self.exhausted


def contract_beta(redex: App) -> Term:
    lam = redex.fun
    assert isinstance(lam, Lam)
    return subst_term(lam.body, redex.arg, lam.binder)


def is_eta_redex(t: Term) -> bool:
    return (
        isinstance(t, Lam)
        and isinstance(t.body, App)
        and isinstance(t.body.arg, Var)
        and t.body.arg.name == t.binder
        and t.binder not in t.body.fun.free_vars
    )


def beta_step(t: Term) -> Optional[Term]:
    """One leftmost-outermost beta step, or None if ``t`` is beta-normal."""
    if isinstance(t, App):
        if isinstance(t.fun, Lam):
            return contract_beta(t)
        f = beta_step(t.fun)
        if f is not None:
            return App(f, t.arg)
        a = beta_step(t.arg)
        if a is not None:
            return App(t.fun, a)
        return None
    if isinstance(t, Lam):
        b = beta_step(t.body)
        return None if b is None else Lam(t.binder, b)
    return None


def eta_step(t: Term) -> Optional[Term]:
    if is_eta_redex(t):
        return t.body.fun
    if isinstance(t, App):
        f = eta_step(t.fun)
        if f is not None:
            return App(f, t.arg)
        a = eta_step(t.arg)
        if a is not None:
            return App(t.fun, a)
        return None
    if isinstance(t, Lam):
        b = eta_step(t.body)
        return None if b is None else Lam(t.binder, b)
    return None


def head_step(t: Term) -> Optional[Term]:
    """Contract the head redex of ``\\x1...\\xn. (\\y. u) v w1...wm``."""
    if isinstance(t, Lam):
        b = head_step(t.body)
        return None if b is None else Lam(t.binder, b)
    if isinstance(t, App):
        if isinstance(t.fun, Lam):
            return contract_beta(t)
        f = head_step(t.fun)
        return None if f is None else App(f, t.arg)
    return None


def _iterate(step: Callable[[Term], Optional[Term]], t: Term, fuel: int) -> ReductionOutcome:
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    n = 0
    while True:
        nxt = step(t)
        if nxt is None:
            return ReductionOutcome(t, n, False)
        if n >= fuel:
            return ReductionOutcome(t, n, True)
        t = nxt
        n += 1


def beta_normalize(t: Term, fuel: int = DEFAULT_FUEL) -> ReductionOutcome:
    return _iterate(beta_step, t, fuel)


def eta_normalize(t: Term, fuel: int = DEFAULT_FUEL) -> ReductionOutcome:
    return _iterate(eta_step, t, fuel)


def beta_eta_normalize(t: Term, fuel: int = DEFAULT_FUEL) -> ReductionOutcome:
    """Beta-normalize, then eta-contract to a fixpoint."""
    b = beta_normalize(t, fuel)
    if b.exhausted:
        return b
    e = eta_normalize(b.result, max(1, fuel - b.steps))
    return ReductionOutcome(e.result, b.steps + e.steps, e.exhausted)


def head_reduce(t: Term, fuel: int = DEFAULT_FUEL) -> ReductionOutcome:
    """Head reduction; ``exhausted=False`` means ``t`` is solvable."""
    return _iterate(head_step, t, fuel)


def is_beta_normal(t: Term) -> bool:
    return beta_step(t) is None


def is_beta_eta_normal(t: Term) -> bool:
    return beta_step(t) is None and eta_step(t) is None


def trace(step: Callable[[Term], Optional[Term]], t: Term, fuel: int = DEFAULT_FUEL) -> Iterator[Term]:
    """Yield ``t`` and each successive reduct (at most ``fuel`` steps)."""
    yield t
    for _ in range(fuel):
        t = step(t)
        if t is None:
            return
        yield t


def beta_redexes(t: Term, prefix: Path = ()) -> Iterator[Path]:
    """Positions of all beta-redexes, leftmost-outermost first."""
    if isinstance(t, App):
        if isinstance(t.fun, Lam):
            yield prefix
        yield from beta_redexes(t.fun, prefix + ("f",))
        yield from beta_redexes(t.arg, prefix + ("a",))
    elif isinstance(t, Lam):
        yield from beta_redexes(t.body, prefix + ("b",))


def contract_at(t: Term, path: Path, contract: Callable[[Term], Term]) -> Term:
    if not path:
        return contract(t)
    step, rest = path[0], path[1:]
    if step == "f":
        return App(contract_at(t.fun, rest, contract), t.arg)
    if step == "a":
        return App(t.fun, contract_at(t.arg, rest, contract))
    return Lam(t.binder, contract_at(t.body, rest, contract))


def beta_reducts(t: Term) -> Iterator[Term]:
    """Every one-step beta reduct of ``t``."""
    for p in beta_redexes(t):
        yield contract_at(t, p, contract_beta)


def beta_reachable(src: Term, dst: Term, max_steps: int = 3, max_frontier: int = 5000) -> bool:
    """Breadth-first check that ``src ->*beta dst`` in at most ``max_steps`` steps."""
    frontier = {src}
    seen = {src}
    for _ in range(max_steps + 1):
        if dst in frontier:
            return True
        nxt = set()
        for t in frontier:
            for r in beta_reducts(t):
                if r not in seen:
                    seen.add(r)
                    nxt.add(r)
        if not nxt or len(nxt) > max_frontier:
            return False
        frontier = nxt
    return dst in frontier
