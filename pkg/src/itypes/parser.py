"""Recursive-descent parser for the term and type grammars.

Terms::

    t ::= \\x y. t | t t | (t) | x | alpha | U[A, X] | V[A, X] | @name
        | <t1, ..., tn> | #n | ##n | id | K0 | K1

Types::

    A ::= X | A -> B | forall X Y. A | O | A /\\ B | (A) | Id | Bool | Ent

Sugar is expanded while parsing.  ``λ``, ``→``, ``∀`` and ``∧`` are accepted
as alternatives to ``\\``, ``->``, ``forall`` and ``/\\``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from itypes.printer import RESERVED_TYPE_NAMES
from itypes.syntax import (
    ALPHA,
    BOOL_TYPE,
    ENT_TYPE,
    ID_TYPE,
    O,
    Arrow,
    Const,
    Forall,
    Lam,
    Opaque,
    Term,
    TVar,
    TypeExpr,
    UConst,
    Var,
    VConst,
    app,
    church,
    conj,
    ibar,
    id_term,
    one,
    tuple_term,
    zero,
)


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int, text: str):
        super().__init__(f"{msg} at position {pos}: {text!r}")
        self.pos = pos
        self.text = text


@dataclass
class Token:
    kind: str
    value: str
    pos: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<arrow>->|→)
  | (?P<conj>/\\|∧)
  | (?P<lam>\\|λ)
  | (?P<forall>∀)
  | (?P<hash2>\#\#)
  | (?P<hash>\#)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<punct>[().,<>\[\]@])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind != "ws":
            value = m.group()
            if kind == "punct":
                kind = value
            elif kind == "ident" and value == "forall":
                kind = "forall"
            tokens.append(Token(kind, value, pos))
        pos = m.end()
    tokens.append(Token("eof", "", len(text)))
    return tokens


_TERM_KEYWORDS = {"alpha", "id", "K0", "K1", "U", "V"}
_TYPE_SUGAR = {"Id": ID_TYPE, "Bool": BOOL_TYPE, "Ent": ENT_TYPE}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.tok
        raise ParseError(msg, tok.pos, self.text)

    def advance(self) -> Token:
        tok = self.tok
        self.i += 1
        return tok

    def expect(self, kind: str) -> Token:
        if self.tok.kind != kind:
            self.error(f"expected {kind!r}, found {self.tok.value or 'end of input'!r}")
        return self.advance()

    def finish(self):
        if self.tok.kind != "eof":
            self.error(f"unexpected {self.tok.value!r}")

    # -- types ---------------------------------------------------------

    def type_(self) -> TypeExpr:
        if self.tok.kind == "forall":
            self.advance()
            binders = [self.type_var()]
            while self.tok.kind == "ident":
                binders.append(self.type_var())
            self.expect(".")
            body = self.type_()
            for b in reversed(binders):
                body = Forall(b, body)
            return body
        left = self.conj_type()
        if self.tok.kind == "arrow":
            self.advance()
            return Arrow(left, self.type_())
        return left

    def conj_type(self) -> TypeExpr:
        parts = [self.type_atom()]
        while self.tok.kind == "conj":
            self.advance()
            parts.append(self.type_atom())
        return parts[0] if len(parts) == 1 else conj(parts)

    def type_var(self) -> str:
        tok = self.expect("ident")
        if tok.value in RESERVED_TYPE_NAMES:
            self.error(f"{tok.value!r} cannot be bound", tok)
        return tok.value

    def type_atom(self) -> TypeExpr:
        tok = self.tok
        if tok.kind == "(":
            self.advance()
            a = self.type_()
            self.expect(")")
            return a
        if tok.kind == "forall":
            return self.type_()
        if tok.kind == "ident":
            self.advance()
            if tok.value == "O":
                return O
            if tok.value in _TYPE_SUGAR:
                return _TYPE_SUGAR[tok.value]
            return TVar(tok.value)
        self.error(f"expected a type, found {tok.value or 'end of input'!r}")

    # -- terms ---------------------------------------------------------

    def term(self) -> Term:
        if self.tok.kind == "lam":
            return self.lam()
        head = self.term_atom()
        args = []
        while True:
            if self.tok.kind == "lam":
                args.append(self.lam())
                break
            if self.tok.kind in ("ident", "(", "<", "hash", "hash2", "@"):
                args.append(self.term_atom())
            else:
                break
        return app(head, *args)

    def lam(self) -> Term:
        self.expect("lam")
        binders = [self.term_var()]
        while self.tok.kind == "ident":
            binders.append(self.term_var())
        self.expect(".")
        body = self.term()
        for b in reversed(binders):
            body = Lam(b, body)
        return body

    def term_var(self) -> str:
        tok = self.expect("ident")
        if tok.value in _TERM_KEYWORDS:
            self.error(f"{tok.value!r} is reserved", tok)
        return tok.value

    def number(self) -> int:
        return int(self.expect("num").value)

    def term_atom(self) -> Term:
        tok = self.tok
        if tok.kind == "(":
            self.advance()
            t = self.term()
            self.expect(")")
            return t
        if tok.kind == "<":
            self.advance()
            parts = [self.term()]
            while self.tok.kind == ",":
                self.advance()
                parts.append(self.term())
            self.expect(">")
            return tuple_term(parts)
        if tok.kind == "hash":
            self.advance()
            return church(self.number())
        if tok.kind == "hash2":
            self.advance()
            return ibar(self.number())
        if tok.kind == "@":
            self.advance()
            return Const(Opaque(self.expect("ident").value))
        if tok.kind == "ident":
            self.advance()
            v = tok.value
            if v == "alpha":
                return Const(ALPHA)
            if v == "id":
                return id_term()
            if v == "K0":
                return zero()
            if v == "K1":
                return one()
            if v in ("U", "V"):
                self.expect("[")
                annot = self.type_()
                self.expect(",")
                x = self.type_var()
                self.expect("]")
                return Const(UConst(annot, x) if v == "U" else VConst(annot, x))
            return Var(v)
        if tok.kind == "lam":
            return self.lam()
        self.error(f"expected a term, found {tok.value or 'end of input'!r}")


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    p.finish()
    return t


def parse_type(text: str) -> TypeExpr:
    p = _Parser(text)
    a = p.type_()
    p.finish()
    return a
