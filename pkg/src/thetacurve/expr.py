"""Concrete syntax for theta-curves, knots and manifolds.

Grammar (whitespace is ignored)::

    expr  := term ('*' term)*
    term  := name | 'tau' label '(' kexpr ')' | 'tauM' '(' mexpr ')' | '1' | '(' expr ')'
    kexpr := katom ('#' katom)*
    katom := name | 'flat' '(' mexpr ')' | 'unknot' | '(' kexpr ')'
    mexpr := matom ('#' matom)*
    matom := name | 'S3' | '(' mexpr ')'
    label := '-' | '0' | '+'

``*`` is the vertex product and ``#`` the connected sum.  A name must be
declared with the kind its position requires.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .algebra import (
    S3,
    TRIVIAL_THETA,
    UNKNOT,
    Kind,
    KnotNF,
    Label,
    ManifoldNF,
    Registry,
    ThetaNF,
    connected_sum_knot,
    connected_sum_manifold,
    flat_knot,
    knot_prime,
    manifold_prime,
    tau_label,
    tau_manifold,
    theta_prime,
    vertex_product,
)


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class SortError(ParseError):
    pass


# -- tree ---------------------------------------------------------------------


@dataclass(frozen=True)
class ThetaRef:
    name: str


@dataclass(frozen=True)
class Product:
    items: tuple["ThetaExpr", ...]


@dataclass(frozen=True)
class TauLabel:
    label: Label
    knot: "KnotExpr"


@dataclass(frozen=True)
class TauManifold:
    manifold: "MfdExpr"


@dataclass(frozen=True)
class TrivialTheta:
    pass


@dataclass(frozen=True)
class KnotRef:
    name: str


@dataclass(frozen=True)
class KnotSum:
    items: tuple["KnotExpr", ...]


@dataclass(frozen=True)
class Flat:
    manifold: "MfdExpr"


@dataclass(frozen=True)
class Unknot:
    pass


@dataclass(frozen=True)
class MfdRef:
    name: str


@dataclass(frozen=True)
class MfdSum:
    items: tuple["MfdExpr", ...]


@dataclass(frozen=True)
class S3Expr:
    pass


ThetaExpr = Union[ThetaRef, Product, TauLabel, TauManifold, TrivialTheta]
KnotExpr = Union[KnotRef, KnotSum, Flat, Unknot]
MfdExpr = Union[MfdRef, MfdSum, S3Expr]
Expression = Union[ThetaExpr, KnotExpr, MfdExpr]

_THETA_NODES = (ThetaRef, Product, TauLabel, TauManifold, TrivialTheta)
_KNOT_NODES = (KnotRef, KnotSum, Flat, Unknot)


def sort_of(e: Expression) -> Kind:
    if isinstance(e, _THETA_NODES):
        return Kind.THETA
    if isinstance(e, _KNOT_NODES):
        return Kind.KNOT
    return Kind.MANIFOLD


# -- tokens -------------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<tau>tau(?P<label>[-0+]))
  | (?P<word>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<one>1(?![0-9]))
  | (?P<op>[*#()])
    """,
    re.VERBOSE,
)
_KEYWORDS = {"tauM", "flat", "unknot", "S3"}


@dataclass(frozen=True)
class Token:
    kind: str  # 'tau', 'tauM', 'flat', 'unknot', 'S3', 'name', '1', an operator, or 'end'
    text: str
    pos: int
    label: Label | None = None


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.group("tau"):
            tokens.append(Token("tau", m.group(), pos, Label.parse(m.group("label"))))
        elif m.group("word"):
            w = m.group()
            tokens.append(Token(w if w in _KEYWORDS else "name", w, pos))
        elif m.group("one"):
            tokens.append(Token("1", "1", pos))
        elif m.group("op"):
            tokens.append(Token(m.group(), m.group(), pos))
        pos = m.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, registry: Registry | None, implicit: dict[str, Kind] | None):
        self.tokens = tokenize(text)
        self.i = 0
        self.registry = registry
        # implicit mode: undeclared names take the kind of their first position
        self.implicit = implicit

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def next(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, kind: str) -> Token:
        t = self.tok
        if t.kind != kind:
            found = "end of input" if t.kind == "end" else repr(t.text)
            raise ParseError(f"expected {kind!r}, found {found}", t.pos)
        return self.next()

    def kind_of(self, name: str) -> Kind | None:
        if self.registry is not None and name in self.registry:
            return self.registry.kind_of(name)
        if self.implicit is not None:
            return self.implicit.get(name)
        return None

    def resolve(self, tok: Token, wanted: Kind) -> str:
        kind = self.kind_of(tok.text)
        if kind is None:
            if self.implicit is None:
                raise ParseError(f"undeclared name {tok.text!r}", tok.pos)
            self.implicit[tok.text] = kind = wanted
        if kind is not wanted:
            raise SortError(f"{tok.text!r} is a {kind.value} prime, expected a {wanted.value}", tok.pos)
        return tok.text

    def guess_sort(self) -> Kind:
        j = self.i
        while self.tokens[j].kind == "(":
            j += 1
        t = self.tokens[j]
        if t.kind in ("flat", "unknot"):
            return Kind.KNOT
        if t.kind == "S3":
            return Kind.MANIFOLD
        if t.kind == "name":
            return self.kind_of(t.text) or Kind.THETA
        return Kind.THETA

    # theta
    def expr(self) -> ThetaExpr:
        items = [self.term()]
        while self.tok.kind == "*":
            self.next()
            items.append(self.term())
        return items[0] if len(items) == 1 else Product(tuple(items))

    def term(self) -> ThetaExpr:
        t = self.tok
        if t.kind == "name":
            self.next()
            return ThetaRef(self.resolve(t, Kind.THETA))
        if t.kind == "tau":
            self.next()
            self.expect("(")
            k = self.kexpr()
            self.expect(")")
            return TauLabel(t.label, k)
        if t.kind == "tauM":
            self.next()
            self.expect("(")
            m = self.mexpr()
            self.expect(")")
            return TauManifold(m)
        if t.kind == "1":
            self.next()
            return TrivialTheta()
        if t.kind == "(":
            self.next()
            e = self.expr()
            self.expect(")")
            return e
        if t.kind in ("flat", "unknot", "S3"):
            raise SortError(f"{t.text!r} is not a theta-curve", t.pos)
        raise ParseError(f"unexpected {t.text or 'end of input'!r}", t.pos)

    # knots
    def kexpr(self) -> KnotExpr:
        items = [self.katom()]
        while self.tok.kind == "#":
            self.next()
            items.append(self.katom())
        return items[0] if len(items) == 1 else KnotSum(tuple(items))

    def katom(self) -> KnotExpr:
        t = self.tok
        if t.kind == "name":
            self.next()
            return KnotRef(self.resolve(t, Kind.KNOT))
        if t.kind == "flat":
            self.next()
            self.expect("(")
            m = self.mexpr()
            self.expect(")")
            return Flat(m)
        if t.kind == "unknot":
            self.next()
            return Unknot()
        if t.kind == "(":
            self.next()
            k = self.kexpr()
            self.expect(")")
            return k
        if t.kind in ("tau", "tauM", "1", "S3"):
            raise SortError(f"{t.text!r} is not a knot", t.pos)
        raise ParseError(f"unexpected {t.text or 'end of input'!r}", t.pos)

    # manifolds
    def mexpr(self) -> MfdExpr:
        items = [self.matom()]
        while self.tok.kind == "#":
            self.next()
            items.append(self.matom())
        return items[0] if len(items) == 1 else MfdSum(tuple(items))

    def matom(self) -> MfdExpr:
        t = self.tok
        if t.kind == "name":
            self.next()
            return MfdRef(self.resolve(t, Kind.MANIFOLD))
        if t.kind == "S3":
            self.next()
            return S3Expr()
        if t.kind == "(":
            self.next()
            m = self.mexpr()
            self.expect(")")
            return m
        if t.kind in ("tau", "tauM", "1", "flat", "unknot"):
            raise SortError(f"{t.text!r} is not a manifold", t.pos)
        raise ParseError(f"unexpected {t.text or 'end of input'!r}", t.pos)


def parse(
    text: str,
    registry: Registry | None = None,
    sort: Kind | str | None = None,
    implicit: dict[str, Kind] | None = None,
) -> Expression:
    """Parse ``text``; the sort is inferred from the leading atom unless given.

    Without a registry, pass an ``implicit`` dict to let undeclared names
    take the kind of the position they first appear in (the dict records
    the choices, so it can be shared between several parses).
    """
    if registry is None and implicit is None:
        raise ValueError("parse needs a registry or an implicit-names dict")
    p = _Parser(text, registry, implicit)
    sort = Kind(sort) if sort is not None else p.guess_sort()
    rule = {Kind.THETA: p.expr, Kind.KNOT: p.kexpr, Kind.MANIFOLD: p.mexpr}[sort]
    e = rule()
    if p.tok.kind != "end":
        t = p.tok
        if t.kind == "#" and sort is Kind.THETA:
            raise SortError("'#' applied to a theta-curve", t.pos)
        if t.kind == "*" and sort is not Kind.THETA:
            raise SortError(f"'*' applied to a {sort.value}", t.pos)
        raise ParseError(f"unexpected {t.text!r}", t.pos)
    return e


# -- printing -----------------------------------------------------------------


def to_text(e: Expression) -> str:
    """Inverse of :func:`parse`: ``parse(to_text(e)) == e``."""
    if isinstance(e, (ThetaRef, KnotRef, MfdRef)):
        return e.name
    if isinstance(e, TrivialTheta):
        return "1"
    if isinstance(e, Unknot):
        return "unknot"
    if isinstance(e, S3Expr):
        return "S3"
    if isinstance(e, TauLabel):
        return f"tau{e.label.symbol}({to_text(e.knot)})"
    if isinstance(e, TauManifold):
        return f"tauM({to_text(e.manifold)})"
    if isinstance(e, Flat):
        return f"flat({to_text(e.manifold)})"
    if isinstance(e, (Product, KnotSum, MfdSum)):
        op = " * " if isinstance(e, Product) else " # "
        return op.join(f"({to_text(x)})" if type(x) is type(e) else to_text(x) for x in e.items)
    raise TypeError(f"not an expression: {e!r}")


# -- evaluation ---------------------------------------------------------------


def evaluate(e: Expression) -> ThetaNF | KnotNF | ManifoldNF:
    if isinstance(e, ThetaRef):
        return theta_prime(e.name)
    if isinstance(e, Product):
        out = TRIVIAL_THETA
        for x in e.items:
            out = vertex_product(out, evaluate(x))
        return out
    if isinstance(e, TauLabel):
        return tau_label(e.label, evaluate(e.knot))
    if isinstance(e, TauManifold):
        return tau_manifold(evaluate(e.manifold))
    if isinstance(e, TrivialTheta):
        return TRIVIAL_THETA
    if isinstance(e, KnotRef):
        return knot_prime(e.name)
    if isinstance(e, KnotSum):
        out = UNKNOT
        for x in e.items:
            out = connected_sum_knot(out, evaluate(x))
        return out
    if isinstance(e, Flat):
        return flat_knot(evaluate(e.manifold))
    if isinstance(e, Unknot):
        return UNKNOT
    if isinstance(e, MfdRef):
        return manifold_prime(e.name)
    if isinstance(e, MfdSum):
        out = S3
        for x in e.items:
            out = connected_sum_manifold(out, evaluate(x))
        return out
    if isinstance(e, S3Expr):
        return S3
    raise TypeError(f"not an expression: {e!r}")


def prime_total(e: Expression) -> int:
    """Number of prime references in the tree."""
    if isinstance(e, (ThetaRef, KnotRef, MfdRef)):
        return 1
    if isinstance(e, (Product, KnotSum, MfdSum)):
        return sum(prime_total(x) for x in e.items)
    if isinstance(e, TauLabel):
        return prime_total(e.knot)
    if isinstance(e, (TauManifold, Flat)):
        return prime_total(e.manifold)
    return 0
