"""Brute-force equality of prime-factor words.

Deliberately naive: two words are equal when one can be turned into the
other by swapping adjacent letters, at least one of which is central (a
knot or manifold tied into the theta-curve).  The search enumerates the
whole equivalence class, so it knows nothing about normal forms and can
be used to check them.
"""

from __future__ import annotations

import re
from collections import Counter, deque
from dataclasses import dataclass
from typing import Union

from .algebra import (
    Label,
    ThetaNF,
    equals,
    knot_prime,
    manifold_prime,
    product,
    tau_label,
    tau_manifold,
    theta_prime,
)
from .expr import (
    Expression,
    Flat,
    KnotRef,
    KnotSum,
    MfdRef,
    MfdSum,
    Product,
    S3Expr,
    TauLabel,
    TauManifold,
    ThetaRef,
    TrivialTheta,
    Unknot,
    evaluate,
)

DEFAULT_CAP = 10


class OracleError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Hat:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, order=True)
class CentralKnot:
    label: Label
    name: str

    def __str__(self) -> str:
        return f"tau{self.label.symbol}({self.name})"


@dataclass(frozen=True, order=True)
class CentralManifold:
    name: str

    def __str__(self) -> str:
        return f"tauM({self.name})"


Letter = Union[Hat, CentralKnot, CentralManifold]
FactorWord = tuple[Letter, ...]


def is_central(letter: Letter) -> bool:
    return not isinstance(letter, Hat)


def _knot_letters(label: Label, k) -> tuple[list[Letter], list[Letter]]:
    if isinstance(k, KnotRef):
        return [CentralKnot(label, k.name)], []
    if isinstance(k, KnotSum):
        knots, mfds = [], []
        for x in k.items:
            a, b = _knot_letters(label, x)
            knots += a
            mfds += b
        return knots, mfds
    if isinstance(k, Flat):
        return [], _manifold_letters(k.manifold)
    if isinstance(k, Unknot):
        return [], []
    raise OracleError(f"not a knot expression: {k!r}")


def _manifold_letters(m) -> list[Letter]:
    if isinstance(m, MfdRef):
        return [CentralManifold(m.name)]
    if isinstance(m, MfdSum):
        return [x for item in m.items for x in _manifold_letters(item)]
    if isinstance(m, S3Expr):
        return []
    raise OracleError(f"not a manifold expression: {m!r}")


def word_of(e: Expression) -> FactorWord:
    """Flatten a theta-curve expression into prime letters, keeping their order.

    A tau insertion contributes its knot primes in name order followed by
    its manifold primes in name order.
    """
    if isinstance(e, ThetaRef):
        return (Hat(e.name),)
    if isinstance(e, Product):
        return tuple(x for item in e.items for x in word_of(item))
    if isinstance(e, TrivialTheta):
        return ()
    if isinstance(e, TauLabel):
        knots, mfds = _knot_letters(e.label, e.knot)
        return tuple(sorted(knots) + sorted(mfds))
    if isinstance(e, TauManifold):
        return tuple(sorted(_manifold_letters(e.manifold)))
    raise OracleError(f"{type(e).__name__} does not denote a theta-curve")


def word_value(w: FactorWord) -> ThetaNF:
    """Ordered product of the letters, via the algebra module."""
    factors = []
    for x in w:
        if isinstance(x, Hat):
            factors.append(theta_prime(x.name))
        elif isinstance(x, CentralKnot):
            factors.append(tau_label(x.label, knot_prime(x.name)))
        else:
            factors.append(tau_manifold(manifold_prime(x.name)))
    return product(*factors)


def format_word(w: FactorWord) -> str:
    return " ".join(map(str, w))


_LETTER = re.compile(r"tau([-0+])\(([^()\s]+)\)|tauM\(([^()\s]+)\)|([A-Za-z_][A-Za-z0-9_']*)")


def parse_word(text: str) -> FactorWord:
    letters: list[Letter] = []
    for chunk in text.split():
        m = _LETTER.fullmatch(chunk)
        if not m:
            raise OracleError(f"bad letter {chunk!r}")
        if m.group(1):
            letters.append(CentralKnot(Label.parse(m.group(1)), m.group(2)))
        elif m.group(3):
            letters.append(CentralManifold(m.group(3)))
        else:
            letters.append(Hat(m.group(4)))
    return tuple(letters)


def oracle_equal(w1: FactorWord, w2: FactorWord, cap: int = DEFAULT_CAP) -> bool:
    """Is ``w2`` reachable from ``w1`` by swapping adjacent letters, one of them central?"""
    w1, w2 = tuple(w1), tuple(w2)
    if max(len(w1), len(w2)) > cap:
        raise OracleError(f"word longer than the cap of {cap} letters")
    if Counter(w1) != Counter(w2):
        return False
    seen = {w1}
    queue = deque([w1])
    while queue:
        w = queue.popleft()
        if w == w2:
            return True
        for i in range(len(w) - 1):
            a, b = w[i], w[i + 1]
            if a != b and (is_central(a) or is_central(b)):
                nxt = w[:i] + (b, a) + w[i + 2:]
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
    return False


def oracle_consistency(e1: Expression, e2: Expression, cap: int = DEFAULT_CAP) -> bool:
    """Does the word search agree with normal-form equality on this pair?"""
    return oracle_equal(word_of(e1), word_of(e2), cap) == equals(evaluate(e1), evaluate(e2))
