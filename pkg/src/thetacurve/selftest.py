"""Seeded invariant checks over all modules, as run by ``thetacurve selftest``."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable

from . import expr as ex
from .algebra import (
    Label,
    LabeledKnot,
    ThetaNF,
    connected_sum_knot,
    connected_sum_manifold,
    is_prime,
    is_trivial,
    prime_factorization,
    product,
    tau_label,
    tau_manifold,
    vertex_product,
)
from .gamma import (
    CapExceeded,
    UniquenessViolation,
    expected_root,
    hat_word,
    potential_c,
    prime_content,
    reductions_of,
    verify_unique_root,
    vertex_of,
)
from .oracle import oracle_consistency, oracle_equal, word_value
from .roots import fuzz
from .sampling import (
    default_registry,
    random_element,
    random_expression,
    random_knot,
    random_manifold,
    random_small_theta_expr,
    random_theta,
    random_word_pair,
)


@dataclass
class CheckResult:
    name: str
    cases: int = 0
    failures: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.cases > 0 and not self.failures

    def fail(self, detail: str) -> None:
        if len(self.failures) < 5:
            self.failures.append(detail)
        else:
            self.failures.append("...")
            self.failures = self.failures[:6]


def check_algebra_laws(rng: random.Random, count: int, max_primes: int) -> CheckResult:
    res = CheckResult("algebra laws")
    for _ in range(count):
        t1, t2, t3 = (random_theta(rng, rng.randint(0, max_primes)) for _ in range(3))
        k1, k2, k3 = (random_knot(rng, rng.randint(0, max_primes)) for _ in range(3))
        m1, m2 = random_manifold(rng, rng.randint(0, 3)), random_manifold(rng, rng.randint(0, 3))
        lab = rng.choice(list(Label))
        checks = {
            "assoc": vertex_product(vertex_product(t1, t2), t3) == vertex_product(t1, vertex_product(t2, t3)),
            "unit": vertex_product(ThetaNF(), t1) == t1 == vertex_product(t1, ThetaNF()),
            "knot assoc": connected_sum_knot(connected_sum_knot(k1, k2), k3)
            == connected_sum_knot(k1, connected_sum_knot(k2, k3)),
            "knot comm": connected_sum_knot(k1, k2) == connected_sum_knot(k2, k1),
            "mfd comm": connected_sum_manifold(m1, m2) == connected_sum_manifold(m2, m1),
            "tau hom": tau_label(lab, connected_sum_knot(k1, k2))
            == vertex_product(tau_label(lab, k1), tau_label(lab, k2)),
            "tau inj": (tau_label(lab, k1) == tau_label(lab, k2)) == (k1 == k2),
            "tauM hom": tau_manifold(connected_sum_manifold(m1, m2))
            == vertex_product(tau_manifold(m1), tau_manifold(m2)),
            "central": vertex_product(tau_label(lab, k1), t1) == vertex_product(t1, tau_label(lab, k1)),
            "trivial product": is_trivial(vertex_product(t1, t2)) == (is_trivial(t1) and is_trivial(t2)),
            "trivial sum": is_trivial(connected_sum_knot(k1, k2)) == (is_trivial(k1) and is_trivial(k2)),
            "lemma 2": is_prime(k1) == is_prime(tau_label(lab, k1))
            and is_prime(m1) == is_prime(tau_manifold(m1)),
        }
        if not is_trivial(t1):
            checks["factor"] = product(*prime_factorization(t1)) == t1
        res.cases += 1
        for name, ok in checks.items():
            if not ok:
                res.fail(f"{name}: {t1} {t2} {k1} {k2}")
    return res


def check_oracle(rng: random.Random, count: int, max_primes: int) -> CheckResult:
    res = CheckResult("oracle consistency")
    for _ in range(count):
        w1, w2 = random_word_pair(rng, max_primes)
        res.cases += 1
        if oracle_equal(w1, w2) != (word_value(w1) == word_value(w2)):
            res.fail(f"words {w1} / {w2}")
        e1, e2 = random_small_theta_expr(rng, max_primes), random_small_theta_expr(rng, max_primes)
        res.cases += 1
        if not oracle_consistency(e1, e2):
            res.fail(f"{ex.to_text(e1)} / {ex.to_text(e2)}")
    return res


def check_gamma(rng: random.Random, count: int, max_primes: int) -> list[CheckResult]:
    unique = CheckResult("gamma unique root")
    descent = CheckResult("gamma descent + (F)")
    ee = CheckResult("gamma (EE)")
    for _ in range(count):
        u = random_element(rng, max_primes, 1)
        v0 = vertex_of(u)
        try:
            rep = verify_unique_root(v0)
        except (UniquenessViolation, CapExceeded) as exc:
            unique.cases += 1
            unique.fail(f"{u}: {exc}")
            continue
        unique.cases += 1
        descent.cases += 1
        ee.cases += 1
        g = rep.gamma.graph
        longest_ok = rep.c_values is not None and all(
            rep.c_values[a] > rep.c_values[b] for a, b in g.edges
        )
        if not (rep.descent_ok and rep.f_holds and longest_ok):
            descent.fail(str(u))
        conserved = all(
            prime_content(rep.gamma.vertices[a]) == prime_content(rep.gamma.vertices[b])
            and hat_word(rep.gamma.vertices[a]) == hat_word(rep.gamma.vertices[b])
            for a, b in g.edges
        )
        if not conserved or reductions_of(expected_root(v0)):
            unique.fail(f"conservation/idempotence: {u}")
        if not rep.ee_holds:
            ee.fail(f"{u} at vertex {rep.ee_witness}")
    return [unique, descent, ee]


def check_potential_steps(rng: random.Random, count: int, max_primes: int) -> CheckResult:
    res = CheckResult("potential on single steps")
    for _ in range(count):
        v = vertex_of(random_element(rng, max_primes, 1))
        for w in reductions_of(v):
            res.cases += 1
            if potential_c(v) <= potential_c(w):
                res.fail(f"{v} -> {w}")
    return res


def check_fuzz(rng: random.Random, count: int) -> CheckResult:
    res = CheckResult("diamond lemma fuzz")
    out = fuzz(count, 12, None, rng.getrandbits(32))
    res.cases = out.graphs
    for g in out.counterexamples:
        res.fail(str(g))
    return res


def check_round_trip(rng: random.Random, count: int) -> CheckResult:
    res = CheckResult("parser round-trip")
    reg = default_registry()
    for _ in range(count):
        e = random_expression(rng)
        res.cases += 1
        text = ex.to_text(e)
        if ex.parse(text, reg) != e:
            res.fail(text)
    return res


def check_knot_factorization(rng: random.Random, count: int, max_primes: int) -> CheckResult:
    res = CheckResult("knot factorization")
    for _ in range(count):
        k = random_knot(rng, rng.randint(1, max_primes))
        lab = rng.choice(list(Label))
        rep = verify_unique_root(vertex_of(LabeledKnot(lab, k)), strict=False)
        res.cases += 1
        got = None
        if rep.unique and all(is_prime(t) for t in rep.roots[0].terms()):
            root = rep.roots[0]
            got = (
                sorted(name for t in root.knots for name in t.knot.knots),
                sorted(name for m in root.manifolds for name in m.summands),
            )
        want = sorted(k.knots), sorted(k.manifold.summands)
        if got != want:
            res.fail(f"{k}: {got} != {want}")
    return res


def run_selftest(count: int, max_primes: int, seed: int) -> list[CheckResult]:
    rng = random.Random(seed)
    plan: list[Callable[[], CheckResult | list[CheckResult]]] = [
        lambda: check_algebra_laws(rng, count, max_primes),
        lambda: check_oracle(rng, count, min(max_primes, 8)),
        lambda: check_gamma(rng, count, max_primes),
        lambda: check_potential_steps(rng, count, max_primes),
        lambda: check_knot_factorization(rng, count, max_primes),
        lambda: check_round_trip(rng, count),
        lambda: check_fuzz(rng, count),
    ]
    results: list[CheckResult] = []
    for step in plan:
        start = time.perf_counter()
        out = step()
        out = out if isinstance(out, list) else [out]
        spent = (time.perf_counter() - start) / len(out)
        for r in out:
            r.seconds = spent
        results.extend(out)
    return results

