"""Seeded random elements, words and expressions for property checks."""

from __future__ import annotations

import random

from . import expr as ex
from .algebra import (
    KnotNF,
    Label,
    LabeledKnot,
    ManifoldNF,
    Multiset,
    Registry,
    ThetaNF,
    UElement,
)
from .oracle import CentralKnot, CentralManifold, Hat, is_central

THETA_NAMES = ("A", "B", "C", "D")
KNOT_NAMES = ("k", "l", "m")
MANIFOLD_NAMES = ("P", "Q", "R")


def default_registry() -> Registry:
    reg = Registry()
    for names, kind in ((THETA_NAMES, "theta"), (KNOT_NAMES, "knot"), (MANIFOLD_NAMES, "manifold")):
        for n in names:
            reg.declare_prime(n, kind)
    return reg


def random_manifold(rng: random.Random, n: int) -> ManifoldNF:
    return ManifoldNF(Multiset.of(rng.choice(MANIFOLD_NAMES) for _ in range(n)))


def random_knot(rng: random.Random, n: int, manifold_share: float = 0.3) -> KnotNF:
    knots, mfds = [], []
    for _ in range(n):
        if rng.random() < manifold_share:
            mfds.append(rng.choice(MANIFOLD_NAMES))
        else:
            knots.append(rng.choice(KNOT_NAMES))
    return KnotNF(Multiset.of(knots), ManifoldNF(Multiset.of(mfds)))


def random_theta(rng: random.Random, n: int, hat_share: float = 0.5) -> ThetaNF:
    hat: list[str] = []
    knots: list[list[str]] = [[], [], []]
    mfds: list[str] = []
    for _ in range(n):
        r = rng.random()
        if r < hat_share:
            hat.append(rng.choice(THETA_NAMES))
        elif r < hat_share + (1 - hat_share) * 0.75:
            knots[rng.randrange(3)].append(rng.choice(KNOT_NAMES))
        else:
            mfds.append(rng.choice(MANIFOLD_NAMES))
    return ThetaNF(tuple(hat), tuple(Multiset.of(k) for k in knots), ManifoldNF(Multiset.of(mfds)))


def random_element(rng: random.Random, max_primes: int, min_primes: int = 0) -> UElement:
    """A theta-curve, labeled knot or manifold with at most ``max_primes`` primes."""
    n = rng.randint(min_primes, max_primes)
    r = rng.random()
    if r < 0.7:
        return random_theta(rng, n, hat_share=rng.choice((0.2, 0.5, 0.8)))
    if r < 0.9:
        return LabeledKnot(rng.choice(list(Label)), random_knot(rng, n))
    return random_manifold(rng, n)


# -- words --------------------------------------------------------------------


def random_letter(rng: random.Random, central_share: float = 0.5):
    if rng.random() >= central_share:
        return Hat(rng.choice(THETA_NAMES))
    if rng.random() < 0.7:
        return CentralKnot(rng.choice(list(Label)), rng.choice(KNOT_NAMES))
    return CentralManifold(rng.choice(MANIFOLD_NAMES))


def random_word(rng: random.Random, max_len: int, central_share: float | None = None) -> tuple:
    share = rng.random() if central_share is None else central_share
    return tuple(random_letter(rng, share) for _ in range(rng.randint(0, max_len)))


def random_word_pair(rng: random.Random, max_len: int) -> tuple[tuple, tuple]:
    """Two words, biased towards pairs with equal letter multisets.

    One third of the pairs are related by random legal swaps, one third are
    arbitrary permutations of each other, one third are independent.
    """
    w1 = random_word(rng, max_len)
    mode = rng.randrange(3)
    if mode == 0:
        w = list(w1)
        for _ in range(rng.randint(0, 3 * len(w) + 1)):
            if len(w) < 2:
                break
            i = rng.randrange(len(w) - 1)
            if is_central(w[i]) or is_central(w[i + 1]):
                w[i], w[i + 1] = w[i + 1], w[i]
        return w1, tuple(w)
    if mode == 1:
        w = list(w1)
        rng.shuffle(w)
        return w1, tuple(w)
    return w1, random_word(rng, max_len)


# -- expressions --------------------------------------------------------------


def random_manifold_expr(rng: random.Random, depth: int = 2) -> ex.MfdExpr:
    r = rng.random()
    if depth <= 0 or r < 0.5:
        return ex.MfdRef(rng.choice(MANIFOLD_NAMES)) if rng.random() < 0.85 else ex.S3Expr()
    n = rng.randint(2, 3)
    return ex.MfdSum(tuple(random_manifold_expr(rng, depth - 1) for _ in range(n)))


def random_knot_expr(rng: random.Random, depth: int = 2) -> ex.KnotExpr:
    r = rng.random()
    if depth <= 0 or r < 0.45:
        return ex.KnotRef(rng.choice(KNOT_NAMES)) if rng.random() < 0.9 else ex.Unknot()
    if r < 0.6:
        return ex.Flat(random_manifold_expr(rng, depth - 1))
    n = rng.randint(2, 3)
    return ex.KnotSum(tuple(random_knot_expr(rng, depth - 1) for _ in range(n)))


def random_theta_expr(rng: random.Random, depth: int = 3) -> ex.ThetaExpr:
    r = rng.random()
    if depth <= 0 or r < 0.35:
        return ex.ThetaRef(rng.choice(THETA_NAMES)) if rng.random() < 0.9 else ex.TrivialTheta()
    if r < 0.55:
        return ex.TauLabel(rng.choice(list(Label)), random_knot_expr(rng, depth - 1))
    if r < 0.65:
        return ex.TauManifold(random_manifold_expr(rng, depth - 1))
    n = rng.randint(2, 3)
    return ex.Product(tuple(random_theta_expr(rng, depth - 1) for _ in range(n)))


def random_expression(rng: random.Random, depth: int = 3) -> ex.Expression:
    r = rng.random()
    if r < 0.6:
        return random_theta_expr(rng, depth)
    if r < 0.85:
        return random_knot_expr(rng, depth)
    return random_manifold_expr(rng, depth)


def random_small_theta_expr(rng: random.Random, max_primes: int) -> ex.ThetaExpr:
    """Theta expression with at most ``max_primes`` prime references."""
    while True:
        e = random_theta_expr(rng, 3)
        if ex.prime_total(e) <= max_primes:
            return e

