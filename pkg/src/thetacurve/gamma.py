"""The reduction graph of sequences of theta-curves, labeled knots and manifolds.

A vertex is a finite sequence of elements, taken up to three moves: knots
and manifolds may move freely, two adjacent theta-curves may swap when one
is knot-like, and trivial terms may be inserted or deleted.  In canonical
form that leaves an ordered tuple of non-knot-like theta-curves plus three
multisets.  An edge cuts one term along an essential sphere meeting it in
3, 2 or 0 points.
"""

from __future__ import annotations

import random
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Sequence

from .algebra import (
    EMPTY,
    KnotNF,
    Label,
    LabeledKnot,
    ManifoldNF,
    Multiset,
    ThetaNF,
    UElement,
    _Frozen,
    is_knot_like,
    is_trivial,
    knot_prime,
    manifold_prime,
    theta_prime,
)
from .roots import ReductionGraph, all_roots, check_EE, check_F

DEFAULT_CAP = 20_000


class GammaError(RuntimeError):
    pass


class CapExceeded(GammaError):
    def __init__(self, cap: int, partial: int):
        super().__init__(f"reduction graph exceeds the cap of {cap} vertices (explored {partial})")
        self.cap = cap
        self.partial = partial


class UniquenessViolation(GammaError):
    def __init__(self, message: str, report: "GammaReport"):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class PotentialWeights:
    per_count: int = 4
    theta_offset: int = 1
    knot_offset: int = 2
    manifold_offset: int = 3

    def __post_init__(self):
        if not self.manifold_offset > self.knot_offset > self.theta_offset > 0:
            raise ValueError("offsets must satisfy manifold > knot > theta > 0")


@dataclass(frozen=True, order=True)
class GammaVertex(_Frozen):
    __hash__ = _Frozen.__hash__

    ordered_thetas: tuple[ThetaNF, ...] = ()
    knot_like_thetas: Multiset[ThetaNF] = EMPTY
    knots: Multiset[LabeledKnot] = EMPTY
    manifolds: Multiset[ManifoldNF] = EMPTY

    def terms(self) -> Iterator[UElement]:
        yield from self.ordered_thetas
        yield from self.knot_like_thetas
        yield from self.knots
        yield from self.manifolds

    def __len__(self) -> int:
        return len(self.ordered_thetas) + len(self.knot_like_thetas) + len(self.knots) + len(self.manifolds)

    def __str__(self) -> str:
        return "(" + ", ".join(map(str, self.terms())) + ")"

    def to_json(self) -> dict:
        return {
            "thetas": [t.to_json() for t in self.ordered_thetas],
            "knot_like": [t.to_json() for t in self.knot_like_thetas],
            "knots": [k.to_json() for k in self.knots],
            "manifolds": [m.to_json() for m in self.manifolds],
        }

    @classmethod
    def from_json(cls, data: dict) -> "GammaVertex":
        terms: list[UElement] = [ThetaNF.from_json(t) for t in data.get("thetas", [])]
        terms += [ThetaNF.from_json(t) for t in data.get("knot_like", [])]
        terms += [LabeledKnot.from_json(k) for k in data.get("knots", [])]
        terms += [ManifoldNF.from_json(m) for m in data.get("manifolds", [])]
        return canonical_vertex(terms)


class _Builder:
    """Mutable accumulator used while assembling a canonical vertex."""

    __slots__ = ("ordered", "knot_like", "knots", "manifolds")

    def __init__(self, knot_like=(), knots=(), manifolds=()):
        self.ordered: list[ThetaNF] = []
        self.knot_like = Counter(knot_like)
        self.knots = Counter(knots)
        self.manifolds = Counter(manifolds)

    def push(self, term: UElement) -> None:
        if is_trivial(term):
            return
        if isinstance(term, ThetaNF):
            if is_knot_like(term):
                self.knot_like[term] += 1
            else:
                self.ordered.append(term)
        elif isinstance(term, LabeledKnot):
            self.knots[term] += 1
        elif isinstance(term, ManifoldNF):
            self.manifolds[term] += 1
        else:
            raise TypeError(f"not an element: {term!r}")

    def freeze(self) -> GammaVertex:
        return GammaVertex(
            tuple(self.ordered),
            Multiset.from_counts(self.knot_like),
            Multiset.from_counts(self.knots),
            Multiset.from_counts(self.manifolds),
        )


def canonical_vertex(terms: Iterable[UElement]) -> GammaVertex:
    b = _Builder()
    for t in terms:
        b.push(t)
    return b.freeze()


def vertex_of(u: UElement) -> GammaVertex:
    return canonical_vertex([u])


# -- single-term reductions -------------------------------------------------


def _theta_minus(t: ThetaNF, knots: Sequence[Multiset[str]], mfd: Multiset[str]) -> ThetaNF:
    return ThetaNF(t.hat, tuple(a - b for a, b in zip(t.knots, knots)), ManifoldNF(t.manifold.summands - mfd))


def _theta_splits(t: ThetaNF) -> Iterator[tuple[ThetaNF, ThetaNF]]:
    """Pairs (t1, t2), both nontrivial, with t1 * t2 = t."""
    centre_choices = [list(t.knots[lab].submultisets()) for lab in Label]
    mfd_choices = list(t.manifold.summands.submultisets())
    for s in range(len(t.hat) + 1):
        for km in centre_choices[0]:
            for kz in centre_choices[1]:
                for kp in centre_choices[2]:
                    for m in mfd_choices:
                        left = ThetaNF(t.hat[:s], (km, kz, kp), ManifoldNF(m))
                        right = _theta_minus(
                            ThetaNF(t.hat[s:], t.knots, t.manifold), (km, kz, kp), m
                        )
                        if not is_trivial(left) and not is_trivial(right):
                            yield left, right


@lru_cache(maxsize=None)
def term_reductions(term: UElement) -> tuple[tuple[UElement, ...], ...]:
    """Every essential reduction of one term, as the replacement pieces.

    Theta pieces are listed leg side first; for knots and manifolds the two
    pieces are unordered and only one ordering is produced.
    """
    out: list[tuple[UElement, ...]] = []
    if isinstance(term, ThetaNF):
        # 3-point spheres
        out.extend(_theta_splits(term))
        # 2-point spheres on edge `lab`; the remainder may be trivial
        for lab in Label:
            for ks in term.knots[lab].submultisets():
                for ms in term.manifold.summands.submultisets():
                    if not ks and not ms:
                        continue
                    knots = [EMPTY, EMPTY, EMPTY]
                    knots[lab] = ks
                    rest = _theta_minus(term, knots, ms)
                    out.append((rest, LabeledKnot(lab, KnotNF(ks, ManifoldNF(ms)))))
        # 0-point spheres
        for ms in term.manifold.summands.submultisets():
            if ms:
                out.append((_theta_minus(term, (EMPTY, EMPTY, EMPTY), ms), ManifoldNF(ms)))
    elif isinstance(term, LabeledKnot):
        k = term.knot
        seen = set()
        for ks in k.knots.submultisets():
            for ms in k.manifold.summands.submultisets():
                k1 = KnotNF(ks, ManifoldNF(ms))
                k2 = KnotNF(k.knots - ks, ManifoldNF(k.manifold.summands - ms))
                if is_trivial(k1) or is_trivial(k2):
                    continue
                key = tuple(sorted((k1, k2)))
                if key not in seen:
                    seen.add(key)
                    out.append((LabeledKnot(term.label, key[0]), LabeledKnot(term.label, key[1])))
        for ms in k.manifold.summands.submultisets():
            if ms:
                rest = KnotNF(k.knots, ManifoldNF(k.manifold.summands - ms))
                out.append((LabeledKnot(term.label, rest), ManifoldNF(ms)))
    elif isinstance(term, ManifoldNF):
        seen = set()
        for ms in term.summands.submultisets():
            rest = term.summands - ms
            if not ms or not rest:
                continue
            key = tuple(sorted((ms, rest)))
            if key not in seen:
                seen.add(key)
                out.append((ManifoldNF(key[0]), ManifoldNF(key[1])))
    else:
        raise TypeError(f"not an element: {term!r}")
    return tuple(out)


@lru_cache(maxsize=None)
def _sorted_pieces(term: UElement) -> tuple[tuple[tuple, tuple, tuple, tuple], ...]:
    """term_reductions with each piece routed to its slot of a vertex."""
    out = []
    for pieces in term_reductions(term):
        b = _Builder()
        for p in pieces:
            b.push(p)
        out.append((tuple(b.ordered), tuple(b.knot_like.elements()),
                    tuple(b.knots.elements()), tuple(b.manifolds.elements())))
    return tuple(out)


def reductions_of(v: GammaVertex) -> tuple[GammaVertex, ...]:
    """All vertices reachable from ``v`` by one essential reduction.

    Duplicate-free, in a deterministic order (independent of hash seeds).
    """
    out: dict[GammaVertex, None] = {}
    seq, kl, kn, mf = v.ordered_thetas, v.knot_like_thetas, v.knots, v.manifolds
    for j, t in enumerate(seq):
        before, after = seq[:j], seq[j + 1:]
        for ordered, kl_add, kn_add, mf_add in _sorted_pieces(t):
            out[GammaVertex(before + ordered + after, kl.plus(kl_add), kn.plus(kn_add), mf.plus(mf_add))] = None
    # terms in the multisets: remove one copy, then add the pieces
    for slot, bag in enumerate((kl, kn, mf)):
        for term in bag.distinct():
            bags = [kl, kn, mf]
            bags[slot] = bag - Multiset(((term, 1),))
            for ordered, kl_add, kn_add, mf_add in _sorted_pieces(term):
                w = GammaVertex(seq + ordered, bags[0].plus(kl_add), bags[1].plus(kn_add), bags[2].plus(mf_add))
                out[w] = None
    return tuple(out)


# -- potential and expected root ---------------------------------------------


def potential_c(v: GammaVertex, weights: PotentialWeights = PotentialWeights()) -> int:
    total = 0
    for t in v.terms():
        if isinstance(t, ThetaNF):
            offset = weights.theta_offset
        elif isinstance(t, LabeledKnot):
            offset = weights.knot_offset
        else:
            offset = weights.manifold_offset
        total += weights.per_count * t.prime_count() - offset
    return total


def prime_content(v: GammaVertex) -> Counter:
    """Every prime generator in ``v`` with multiplicity, hat order forgotten.

    Keys are ``("theta", name)``, ``("knot", label, name)`` and
    ``("manifold", name)``.
    """
    c: Counter = Counter()
    for t in v.terms():
        if isinstance(t, ThetaNF):
            c.update(("theta", h) for h in t.hat)
            for lab in Label:
                c.update(("knot", lab, k) for k in t.knots[lab])
            c.update(("manifold", p) for p in t.manifold.summands)
        elif isinstance(t, LabeledKnot):
            c.update(("knot", t.label, k) for k in t.knot.knots)
            c.update(("manifold", p) for p in t.knot.manifold.summands)
        else:
            c.update(("manifold", p) for p in t.summands)
    return c


def hat_word(v: GammaVertex) -> tuple[str, ...]:
    return tuple(h for t in v.ordered_thetas for h in t.hat)


def expected_root(v: GammaVertex) -> GammaVertex:
    """The root predicted by the normal forms: every term cut into its primes."""
    terms: list[UElement] = [theta_prime(h) for h in hat_word(v)]
    for key, n in sorted(prime_content(v).items(), key=lambda kv: repr(kv[0])):
        if key[0] == "knot":
            terms += [LabeledKnot(key[1], knot_prime(key[2]))] * n
        elif key[0] == "manifold":
            terms += [manifold_prime(key[1])] * n
    return canonical_vertex(terms)


# -- graph construction -------------------------------------------------------


@dataclass
class Gamma:
    graph: ReductionGraph
    vertices: list[GammaVertex]
    index: dict[GammaVertex, int] = field(repr=False)

    def terminals(self) -> list[int]:
        return [i for i in self.graph.vertices if self.graph.is_terminal(i)]

    def to_json(self, root: Iterable[int] | None = None) -> dict:
        return {
            "vertices": [{"id": i, "value": v.to_json()} for i, v in enumerate(self.vertices)],
            "edges": [list(e) for e in self.graph.edges],
            "root": list(self.terminals() if root is None else root),
        }

    def to_dot(self) -> str:
        labels = {i: str(v) for i, v in enumerate(self.vertices)}
        return self.graph.to_dot(labels, highlight=self.terminals())


def build_gamma(v0: GammaVertex, cap: int = DEFAULT_CAP) -> Gamma:
    """Breadth-first closure of ``reductions_of``; ids follow discovery order."""
    if cap < 1:
        raise ValueError("vertex cap must be positive")
    index = {v0: 0}
    vertices = [v0]
    edges: list[tuple[int, int]] = []
    queue = deque([v0])
    while queue:
        v = queue.popleft()
        src = index[v]
        for w in reductions_of(v):
            if w not in index:
                if len(vertices) >= cap:
                    raise CapExceeded(cap, len(vertices) + 1)
                index[w] = len(vertices)
                vertices.append(w)
                queue.append(w)
            edges.append((src, index[w]))
    return Gamma(ReductionGraph(range(len(vertices)), edges), vertices, index)


Strategy = Callable[[list[GammaVertex]], GammaVertex]


def strategy(name: str, seed: int | None = None) -> Strategy:
    """Named choice rule over the sorted successor list: first, last or random."""
    if name == "first":
        return lambda succ: succ[0]
    if name == "last":
        return lambda succ: succ[-1]
    if name == "random":
        rng = random.Random(seed)
        return lambda succ: rng.choice(succ)
    raise ValueError(f"unknown strategy {name!r}")


def root_of_gamma(v0: GammaVertex, choose: Strategy | str = "first") -> GammaVertex:
    if isinstance(choose, str):
        choose = strategy(choose)
    v = v0
    while True:
        succ = sorted(reductions_of(v))
        if not succ:
            return v
        v = choose(succ)


@dataclass
class GammaReport:
    start: GammaVertex
    gamma: Gamma
    roots: list[GammaVertex]
    expected: GammaVertex
    f_holds: bool
    ee_holds: bool
    ee_witness: int | None
    c_values: dict | None
    descent_ok: bool

    @property
    def unique(self) -> bool:
        return len(self.roots) == 1

    @property
    def matches_expected(self) -> bool:
        return self.unique and self.roots[0] == self.expected

    @property
    def ok(self) -> bool:
        return self.matches_expected and self.f_holds and self.ee_holds and self.descent_ok

    def to_json(self) -> dict:
        return {
            "start": self.start.to_json(),
            "vertices": len(self.gamma.vertices),
            "edges": len(self.gamma.graph.edges),
            "roots": [r.to_json() for r in self.roots],
            "expected_root": self.expected.to_json(),
            "unique": self.unique,
            "matches_expected": self.matches_expected,
            "F": self.f_holds,
            "EE": self.ee_holds,
            "descent": self.descent_ok,
        }


def verify_unique_root(v0: GammaVertex, cap: int = DEFAULT_CAP, strict: bool = True) -> GammaReport:
    """Build the graph below ``v0`` and check it has one root, the expected one.

    With ``strict`` a second root or a wrong root raises
    :class:`UniquenessViolation`; the report is attached to the exception.
    """
    gamma = build_gamma(v0, cap)
    g = gamma.graph
    roots_map = all_roots(g)
    c = check_F(g)
    ee, witness = check_EE(g, roots_map)
    pot = [potential_c(v) for v in gamma.vertices]
    descent = all(pot[a] > pot[b] for a, b in g.edges)
    report = GammaReport(
        start=v0,
        gamma=gamma,
        roots=[gamma.vertices[i] for i in sorted(roots_map[0])],
        expected=expected_root(v0),
        f_holds=c is not None,
        ee_holds=ee,
        ee_witness=witness,
        c_values=c,
        descent_ok=descent,
    )
    if strict and not report.matches_expected:
        raise UniquenessViolation(
            f"{v0}: roots {[str(r) for r in report.roots]} but expected {report.expected}", report
        )
    return report
