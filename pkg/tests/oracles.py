"""Independent reference implementations used to cross-check the package.

They share only the term/type constructors with the code under test.
"""

from __future__ import annotations

from itypes.syntax import App, Arrow, Const, Forall, Lam, Term, TypeExpr, Var

# ---------------------------------------------------------------------------
# de Bruijn reducer
# ---------------------------------------------------------------------------


def to_db(t: Term, env: tuple = ()):
    """Nested tuples: ('v', index) for bound, ('f', name) for free,
    ('c', tag), ('l', body), ('a', fun, arg)."""
    if isinstance(t, Var):
        if t.name in env:
            return ("v", env.index(t.name))
        return ("f", t.name)
    if isinstance(t, Const):
        return ("c", repr(t.tag))
    if isinstance(t, Lam):
        return ("l", to_db(t.body, (t.binder,) + env))
    return ("a", to_db(t.fun, env), to_db(t.arg, env))


def _shift(t, d: int, cutoff: int = 0):
    tag = t[0]
    if tag == "v":
        return ("v", t[1] + d) if t[1] >= cutoff else t
    if tag == "l":
        return ("l", _shift(t[1], d, cutoff + 1))
    if tag == "a":
        return ("a", _shift(t[1], d, cutoff), _shift(t[2], d, cutoff))
    return t


def _subst(t, j: int, s):
    tag = t[0]
    if tag == "v":
        return s if t[1] == j else t
    if tag == "l":
        return ("l", _subst(t[1], j + 1, _shift(s, 1)))
    if tag == "a":
        return ("a", _subst(t[1], j, s), _subst(t[2], j, s))
    return t


def _beta(body, arg):
    return _shift(_subst(body, 0, _shift(arg, 1)), -1)


def db_step(t):
    """One leftmost-outermost beta step, or None."""
    if t[0] == "a":
        if t[1][0] == "l":
            return _beta(t[1][1], t[2])
        f = db_step(t[1])
        if f is not None:
            return ("a", f, t[2])
        a = db_step(t[2])
        return None if a is None else ("a", t[1], a)
    if t[0] == "l":
        b = db_step(t[1])
        return None if b is None else ("l", b)
    return None


def db_normalize(t, fuel: int = 2000):
    for _ in range(fuel):
        nxt = db_step(t)
        if nxt is None:
            return t
        t = nxt
    return None


# ---------------------------------------------------------------------------
# E-inactive occurrences by literal pattern matching over all subterms
# ---------------------------------------------------------------------------


def _subterms(t: Term, path=()):
    yield path, t
    if isinstance(t, App):
        yield from _subterms(t.fun, path + ("f",))
        yield from _subterms(t.arg, path + ("a",))
    elif isinstance(t, Lam):
        yield from _subterms(t.body, path + ("b",))


def _binder_path(t: Term, occ: tuple):
    """Path of the abstraction binding the variable occurrence at ``occ``."""
    name = _at(t, occ).name
    for k in range(len(occ) - 1, -1, -1):
        p = occ[:k]
        s = _at(t, p)
        if isinstance(s, Lam) and s.binder == name and occ[k] == "b":
            return p
    return None


def _at(t: Term, path):
    for s in path:
        t = t.fun if s == "f" else t.arg if s == "a" else t.body
    return t


def brute_e_inactive(t: Term, E) -> frozenset:
    occs = [p for p, s in _subterms(t) if isinstance(s, Var)]
    inactive = {p for p in occs if _binder_path(t, p) is None and _at(t, p).name in E}
    while True:
        new = set(inactive)
        for p, s in _subterms(t):
            # s = ((...(y)u_1...u_i) lam) u_{i+1}...u_n with lam = \y_1...\y_m \x u
            spine = []
            q, cur = p, s
            while isinstance(cur, App):
                spine.append(q + ("a",))
                q, cur = q + ("f",), cur.fun
            if not isinstance(cur, Var) or q not in inactive:
                continue
            for ap in spine:
                lp, lam = ap, _at(t, ap)
                while isinstance(lam, Lam):
                    if lam.binder in lam.body.free_vars:
                        new |= {o for o in occs if _binder_path(t, o) == lp}
                    lp, lam = lp + ("b",), lam.body
        if new == inactive:
            return frozenset(inactive)
        inactive = new


# ---------------------------------------------------------------------------
# Polarity by counting arrow-domain depth
# ---------------------------------------------------------------------------


def brute_in_pos(a: TypeExpr) -> bool:
    def proper(b):
        if isinstance(b, Forall):
            return b.binder in b.body.free_vars and proper(b.body)
        if isinstance(b, Arrow):
            return proper(b.dom) and proper(b.cod)
        return True

    def signs(b, positive):
        if isinstance(b, Forall):
            yield positive
            yield from signs(b.body, positive)
        elif isinstance(b, Arrow):
            yield from signs(b.dom, not positive)
            yield from signs(b.cod, positive)

    return proper(a) and all(signs(a, True))


# ---------------------------------------------------------------------------
# Long normal forms of simple types (no quantifiers, variables as atoms)
# ---------------------------------------------------------------------------


def _split(a: TypeExpr):
    args = []
    while isinstance(a, Arrow):
        args.append(a.dom)
        a = a.cod
    return args, a


def simple_long_normal_forms(a: TypeExpr, bound: int, ctx: tuple = (), counter=None):
    """Yield (term, derivation size) for every eta-long beta-normal term of
    simple type ``a`` in ``ctx`` whose derivation has at most ``bound``
    nodes (ax, ->i, ->e each count one)."""
    counter = counter if counter is not None else [0]
    args, atom = _split(a)
    names = []
    for _ in args:
        counter[0] += 1
        names.append(f"v{counter[0]}")
    inner = tuple(zip(names, args)) + ctx
    budget = bound - len(args)
    for body, size in _heads(atom, budget, inner, counter):
        t = body
        for n in reversed(names):
            t = Lam(n, t)
        yield t, size + len(args)


def _heads(atom, budget, ctx, counter):
    if budget < 1:
        return
    seen = set()
    for name, ty in ctx:
        if name in seen:
            continue
        seen.add(name)
        hargs, target = _split(ty)
        if target != atom:
            continue
        # ax + one ->e per argument
        base = 1 + len(hargs)
        if base > budget:
            continue
        yield from _fill(Var(name), hargs, budget - base, ctx, counter, base)


def _fill(head, hargs, budget, ctx, counter, used):
    if not hargs:
        yield head, used
        return
    first, rest = hargs[0], hargs[1:]
    # leave at least one node for each remaining argument
    for arg, size in simple_long_normal_forms(first, budget - len(rest), ctx, counter):
        yield from _fill(App(head, arg), rest, budget - size, ctx, counter, used + size)
