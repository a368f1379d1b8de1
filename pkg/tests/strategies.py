"""Hypothesis strategies for terms and types."""

from __future__ import annotations

from hypothesis import strategies as st

from itypes.syntax import App, Arrow, Const, Forall, Lam, TVar, UConst, Var, VConst

TERM_NAMES = ("x", "y", "z", "u", "v")
TYPE_NAMES = ("X", "Y", "Z")


@st.composite
def types(draw, size: int = 6, bound: tuple = (), free: tuple = ()):
    """Proper types; closed over ``bound`` plus the ``free`` names."""
    atoms = bound + free
    fresh = [n for n in TYPE_NAMES if n not in atoms]
    options = []
    if atoms:
        options.append("atom")
    if size > 0:
        options.append("arrow")
        if fresh:
            options.append("forall")
    kind = draw(st.sampled_from(options)) if options else "forall"
    if kind == "atom":
        return TVar(draw(st.sampled_from(atoms)))
    if kind == "forall" or not atoms:
        name = fresh[0]
        body = draw(types(max(size - 1, 0), bound + (name,), free))
        return Forall(name, body) if name in body.free_vars else body
    left = draw(st.integers(0, size - 1))
    return Arrow(draw(types(left, bound, free)), draw(types(size - 1 - left, bound, free)))


def closed_types(max_size: int = 6):
    return st.integers(1, max_size).flatmap(lambda n: types(n))


def open_types(max_size: int = 6):
    return st.integers(0, max_size).flatmap(lambda n: types(n, (), ("X", "Y")))


@st.composite
def terms(draw, size: int = 8, scope: tuple = ()):
    if size <= 1 and scope:
        return Var(draw(st.sampled_from(scope)))
    kind = draw(st.sampled_from(["lam", "app"] if scope else ["lam"]))
    if kind == "lam":
        x = draw(st.sampled_from(TERM_NAMES))
        return Lam(x, draw(terms(size - 1, scope + (x,))))
    left = draw(st.integers(1, max(1, size - 2)))
    return App(draw(terms(left, scope)), draw(terms(max(1, size - 1 - left), scope)))


def closed_terms(max_size: int = 10):
    return st.integers(1, max_size).flatmap(lambda n: terms(n))


def open_terms(max_size: int = 10):
    return st.integers(1, max_size).flatmap(lambda n: terms(n, ("x", "y")))


@st.composite
def uv_terms(draw, size: int = 7, scope: tuple = ("x", "y")):
    def constant():
        kind = draw(st.sampled_from([UConst, VConst]))
        return Const(kind(draw(st.integers(0, 3).flatmap(lambda n: types(n, (), ("X", "Y")))), "X"))

    if size <= 1:
        return Var(draw(st.sampled_from(scope))) if draw(st.booleans()) else constant()
    kind = draw(st.sampled_from(["lam", "app", "const"]))
    if kind == "lam":
        x = draw(st.sampled_from(TERM_NAMES))
        return Lam(x, draw(uv_terms(size - 1, scope + (x,))))
    if kind == "const":
        return App(constant(), draw(uv_terms(size - 1, scope)))
    left = draw(st.integers(1, max(1, size - 2)))
    return App(draw(uv_terms(left, scope)), draw(uv_terms(max(1, size - 1 - left), scope)))


def any_uv_terms(max_size: int = 8):
    return st.integers(1, max_size).flatmap(lambda n: uv_terms(n))
