"""Free model of the semigroups of theta-curves, knots and 3-manifolds.

Every element is stored in canonical normal form, built on named prime
generators of three kinds:

* theta-hat primes, which generate a free (non-commutative) semigroup,
* knot-hat primes, which generate a free abelian semigroup,
* manifold primes, which generate a free abelian semigroup.

A theta-curve is an ordered word of theta-hat primes together with a
central part: one knot multiset per edge label plus a manifold multiset.
"""

from __future__ import annotations

import enum
import itertools
import threading
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Generic, Iterable, Iterator, Mapping, TypeVar, Union

T = TypeVar("T")


class _Frozen:
    """Hash caching for the immutable value types; they get hashed a lot."""

    def __hash__(self) -> int:
        d = self.__dict__
        try:
            return d["_hash"]
        except KeyError:
            h = d["_hash"] = hash(tuple(d[name] for name in self.__dataclass_fields__))
            return h


class AlgebraError(ValueError):
    """Raised for invalid algebraic input (bad names, trivial factorization...)."""


class Label(enum.IntEnum):
    """Edge label of a theta-graph; the integer value gives the - < 0 < + order."""

    MINUS = 0
    ZERO = 1
    PLUS = 2

    @property
    def symbol(self) -> str:
        return "-0+"[self.value]

    @classmethod
    def parse(cls, symbol: str) -> "Label":
        try:
            return cls("-0+".index(symbol))
        except ValueError:
            raise AlgebraError(f"unknown label {symbol!r}") from None


class Kind(enum.Enum):
    THETA = "theta"
    KNOT = "knot"
    MANIFOLD = "manifold"


@dataclass(frozen=True, order=True)
class PrimeGenerator:
    name: str
    kind: Kind = field(compare=False)


RESERVED_NAMES = frozenset({"tau", "tauM", "flat", "unknot", "S3"})


class Registry:
    """Append-only table of declared prime generators.

    Declarations take a lock; lookups are plain dict reads and are safe to
    run concurrently once the declaration phase is over.
    """

    def __init__(self, primes: Iterable[tuple[str, Kind]] = ()):
        self._primes: dict[str, PrimeGenerator] = {}
        self._lock = threading.Lock()
        for name, kind in primes:
            self.declare_prime(name, kind)

    def declare_prime(self, name: str, kind: Kind) -> PrimeGenerator:
        if not name or not isinstance(name, str):
            raise AlgebraError("prime name must be a nonempty string")
        if name in RESERVED_NAMES or name.startswith("tau"):
            raise AlgebraError(f"{name!r} is a reserved word")
        if not (name[0].isalpha() or name[0] == "_") or not all(
            c.isalnum() or c in "_'" for c in name
        ):
            raise AlgebraError(f"{name!r} is not a valid identifier")
        with self._lock:
            if name in self._primes:
                raise AlgebraError(f"prime {name!r} already declared")
            gen = PrimeGenerator(name, Kind(kind))
            self._primes[name] = gen
        return gen

    def kind_of(self, name: str) -> Kind | None:
        gen = self._primes.get(name)
        return gen.kind if gen else None

    def __contains__(self, name: object) -> bool:
        return name in self._primes

    def __iter__(self) -> Iterator[PrimeGenerator]:
        return iter(list(self._primes.values()))

    def __len__(self) -> int:
        return len(self._primes)

    def names(self, kind: Kind) -> list[str]:
        return [g.name for g in self if g.kind is kind]

    @classmethod
    def from_manifest(cls, manifest: Mapping[str, Iterable[str]]) -> "Registry":
        """Build from ``{"theta": [...], "knot": [...], "manifold": [...]}``."""
        unknown = set(manifest) - {k.value for k in Kind}
        if unknown:
            raise AlgebraError(f"unknown manifest sections: {sorted(unknown)}")
        reg = cls()
        for kind in Kind:
            for name in manifest.get(kind.value, ()):
                reg.declare_prime(name, kind)
        return reg

    def to_manifest(self) -> dict[str, list[str]]:
        return {kind.value: self.names(kind) for kind in Kind}


@dataclass(frozen=True, order=True)
class Multiset(_Frozen, Generic[T]):
    """Immutable finite multiset, stored as sorted ``(element, count)`` pairs."""

    __hash__ = _Frozen.__hash__

    pairs: tuple[tuple[T, int], ...] = ()

    @classmethod
    def of(cls, elements: Iterable[T] = ()) -> "Multiset[T]":
        return cls.from_counts(Counter(elements))

    @classmethod
    def from_counts(cls, counts: Mapping[T, int]) -> "Multiset[T]":
        for elem, n in counts.items():
            if not isinstance(n, int) or n < 0:
                raise AlgebraError(f"bad multiplicity {n!r} for {elem!r}")
        return cls(tuple(sorted((e, n) for e, n in counts.items() if n > 0)))

    def counts(self) -> Counter:
        return Counter(dict(self.pairs))

    def count(self, elem: T) -> int:
        for e, n in self.pairs:
            if e == elem:
                return n
        return 0

    def distinct(self) -> list[T]:
        return [e for e, _ in self.pairs]

    def __iter__(self) -> Iterator[T]:
        for e, n in self.pairs:
            for _ in range(n):
                yield e

    def __len__(self) -> int:
        return self.size

    @cached_property
    def size(self) -> int:
        return sum(n for _, n in self.pairs)

    def __bool__(self) -> bool:
        return bool(self.pairs)

    def __add__(self, other: "Multiset[T]") -> "Multiset[T]":
        if not other.pairs:
            return self
        if not self.pairs:
            return other
        return Multiset.from_counts(self.counts() + other.counts())

    def __sub__(self, other: "Multiset[T]") -> "Multiset[T]":
        if not other.issubset(self):
            raise AlgebraError("multiset difference of a non-subset")
        c = self.counts()
        c.subtract(other.counts())
        return Multiset.from_counts(c)

    def issubset(self, other: "Multiset[T]") -> bool:
        oc = other.counts()
        return all(oc[e] >= n for e, n in self.pairs)

    def plus(self, elems: Iterable[T]) -> "Multiset[T]":
        """``self`` with ``elems`` added; returns ``self`` itself when nothing is added."""
        elems = tuple(elems)
        if not elems:
            return self
        c = dict(self.pairs)
        for e in elems:
            c[e] = c.get(e, 0) + 1
        return Multiset(tuple(sorted(c.items())))

    def add(self, elem: T, n: int = 1) -> "Multiset[T]":
        c = self.counts()
        c[elem] += n
        return Multiset.from_counts(c)

    def submultisets(self) -> Iterator["Multiset[T]"]:
        """All sub-multisets, the empty one first and ``self`` last."""
        elems = [e for e, _ in self.pairs]
        for ns in itertools.product(*(range(n + 1) for _, n in self.pairs)):
            yield Multiset(tuple((e, k) for e, k in zip(elems, ns) if k))


EMPTY: Multiset = Multiset()


@dataclass(frozen=True, order=True)
class ManifoldNF(_Frozen):
    __hash__ = _Frozen.__hash__

    summands: Multiset[str] = EMPTY

    def prime_count(self) -> int:
        return len(self.summands)

    def __str__(self) -> str:
        return " # ".join(self.summands) or "S3"

    def to_json(self) -> dict:
        return {"manifolds": _ms_json(self.summands)}

    @classmethod
    def from_json(cls, data: Mapping) -> "ManifoldNF":
        return cls(_ms_from_json(data.get("manifolds", {})))


@dataclass(frozen=True, order=True)
class KnotNF(_Frozen):
    __hash__ = _Frozen.__hash__

    knots: Multiset[str] = EMPTY
    manifold: ManifoldNF = ManifoldNF()

    def prime_count(self) -> int:
        return len(self.knots) + self.manifold.prime_count()

    def __str__(self) -> str:
        parts = list(self.knots)
        if self.manifold.summands:
            parts.append(f"flat({self.manifold})")
        return " # ".join(parts) or "unknot"

    def to_json(self) -> dict:
        return {"knots": _ms_json(self.knots), "manifolds": _ms_json(self.manifold.summands)}

    @classmethod
    def from_json(cls, data: Mapping) -> "KnotNF":
        return cls(
            _ms_from_json(data.get("knots", {})),
            ManifoldNF(_ms_from_json(data.get("manifolds", {}))),
        )


_NO_KNOTS = (EMPTY, EMPTY, EMPTY)


@dataclass(frozen=True, order=True)
class ThetaNF(_Frozen):
    """Theta-curve: ordered theta-hat word times the central part.

    ``knots[label]`` is the multiset of knot-hat primes tied on the edge with
    that label; ``manifold`` collects the manifold summands.
    """

    __hash__ = _Frozen.__hash__

    hat: tuple[str, ...] = ()
    knots: tuple[Multiset[str], Multiset[str], Multiset[str]] = _NO_KNOTS
    manifold: ManifoldNF = ManifoldNF()

    def __post_init__(self):
        if len(self.knots) != 3:
            raise AlgebraError("a theta-curve carries exactly three knot multisets")

    def knots_at(self, label: Label) -> Multiset[str]:
        return self.knots[label]

    def central_count(self) -> int:
        return sum(len(m) for m in self.knots) + self.manifold.prime_count()

    def prime_count(self) -> int:
        return self._count

    @cached_property
    def _count(self) -> int:
        return len(self.hat) + self.central_count()

    def __str__(self) -> str:
        parts = list(self.hat)
        for lab in Label:
            if self.knots[lab]:
                parts.append(f"tau{lab.symbol}({' # '.join(self.knots[lab])})")
        if self.manifold.summands:
            parts.append(f"tauM({self.manifold})")
        return " * ".join(parts) or "1"

    def to_json(self) -> dict:
        return {
            "hat": list(self.hat),
            "knots": {lab.symbol: _ms_json(self.knots[lab]) for lab in Label},
            "manifolds": _ms_json(self.manifold.summands),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "ThetaNF":
        knots = data.get("knots", {})
        unknown = set(knots) - {"-", "0", "+"}
        if unknown:
            raise AlgebraError(f"unknown labels {sorted(unknown)}")
        hat = data.get("hat", [])
        if not all(isinstance(h, str) and h for h in hat):
            raise AlgebraError("hat must be a list of prime names")
        return cls(
            tuple(hat),
            tuple(_ms_from_json(knots.get(lab.symbol, {})) for lab in Label),
            ManifoldNF(_ms_from_json(data.get("manifolds", {}))),
        )


@dataclass(frozen=True, order=True)
class LabeledKnot(_Frozen):
    __hash__ = _Frozen.__hash__

    label: Label
    knot: KnotNF

    def prime_count(self) -> int:
        return self.knot.prime_count()

    def __str__(self) -> str:
        return f"[{self.label.symbol}]{self.knot}"

    def to_json(self) -> dict:
        return {"label": self.label.symbol, **self.knot.to_json()}

    @classmethod
    def from_json(cls, data: Mapping) -> "LabeledKnot":
        return cls(Label.parse(data["label"]), KnotNF.from_json(data))


UElement = Union[ThetaNF, LabeledKnot, ManifoldNF]


def _ms_json(ms: Multiset[str]) -> dict[str, int]:
    return {name: n for name, n in ms.pairs}


def _ms_from_json(data: Mapping[str, int]) -> Multiset[str]:
    for name, n in data.items():
        if not isinstance(name, str) or not name:
            raise AlgebraError(f"bad prime name {name!r}")
        if not isinstance(n, int) or isinstance(n, bool) or n <= 0:
            raise AlgebraError(f"multiplicity of {name!r} must be a positive integer")
    return Multiset.from_counts(dict(data))


S3 = ManifoldNF()
UNKNOT = KnotNF()
TRIVIAL_THETA = ThetaNF()


def theta_prime(name: str) -> ThetaNF:
    return ThetaNF(hat=(name,))


def knot_prime(name: str) -> KnotNF:
    return KnotNF(knots=Multiset.of([name]))


def manifold_prime(name: str) -> ManifoldNF:
    return ManifoldNF(Multiset.of([name]))


# -- products ---------------------------------------------------------------


def vertex_product(t1: ThetaNF, t2: ThetaNF) -> ThetaNF:
    return ThetaNF(
        t1.hat + t2.hat,
        tuple(a + b for a, b in zip(t1.knots, t2.knots)),
        connected_sum_manifold(t1.manifold, t2.manifold),
    )


def product(*thetas: ThetaNF) -> ThetaNF:
    out = TRIVIAL_THETA
    for t in thetas:
        out = vertex_product(out, t)
    return out


def connected_sum_knot(k1: KnotNF, k2: KnotNF) -> KnotNF:
    return KnotNF(k1.knots + k2.knots, connected_sum_manifold(k1.manifold, k2.manifold))


def connected_sum_manifold(m1: ManifoldNF, m2: ManifoldNF) -> ManifoldNF:
    return ManifoldNF(m1.summands + m2.summands)


def tau_label(label: Label, k: KnotNF) -> ThetaNF:
    knots = [EMPTY, EMPTY, EMPTY]
    knots[Label(label)] = k.knots
    return ThetaNF((), tuple(knots), k.manifold)


def tau_manifold(m: ManifoldNF) -> ThetaNF:
    return ThetaNF(manifold=m)


def flat_knot(m: ManifoldNF) -> KnotNF:
    return KnotNF(EMPTY, m)


def knot_insertion(theta: ThetaNF, label: Label, k: KnotNF) -> ThetaNF:
    return vertex_product(tau_label(label, k), theta)


# -- predicates -------------------------------------------------------------


def is_trivial(u: UElement | KnotNF) -> bool:
    return u.prime_count() == 0


def is_knot_like(t: ThetaNF) -> bool:
    # image of some tau_i: no hat part and knots on at most one edge
    return not t.hat and sum(1 for m in t.knots if m) <= 1


def is_prime(u: UElement | KnotNF) -> bool:
    return u.prime_count() == 1


def equals(u1: UElement | KnotNF, u2: UElement | KnotNF) -> bool:
    return type(u1) is type(u2) and u1 == u2


def prime_factorization(t: ThetaNF) -> list[ThetaNF]:
    """Prime factors of ``t`` whose ordered product is ``t``.

    Hat primes come first in their original order, then the knot-like
    factors: tau_- knots, tau_0 knots, tau_+ knots (each by name), then
    flat theta-curves in manifold primes.  Any other order obtained by
    commuting a knot-like factor is an equally valid factorization.
    """
    if is_trivial(t):
        raise AlgebraError("the trivial theta-curve has no prime factorization")
    factors = [theta_prime(h) for h in t.hat]
    for lab in Label:
        factors.extend(tau_label(lab, knot_prime(k)) for k in t.knots[lab])
    factors.extend(tau_manifold(manifold_prime(p)) for p in t.manifold.summands)
    return factors


def element_to_json(u: UElement) -> dict:
    sort = {ThetaNF: "theta", LabeledKnot: "knot", ManifoldNF: "manifold"}[type(u)]
    return {"sort": sort, **u.to_json()}


def element_from_json(data: Mapping) -> UElement:
    sort = data.get("sort")
    if sort == "theta":
        return ThetaNF.from_json(data)
    if sort == "knot":
        return LabeledKnot.from_json(data)
    if sort == "manifold":
        return ManifoldNF.from_json(data)
    raise AlgebraError(f"unknown element sort {sort!r}")
