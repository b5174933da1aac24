"""Command-line entry point.

Exit status: 0 for success or a true verdict, 1 for a false verdict, 2 for
errors (bad input, unknown names, cap exceeded, I/O).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import expr as ex
from .algebra import (
    AlgebraError,
    Kind,
    KnotNF,
    Label,
    LabeledKnot,
    Registry,
    ThetaNF,
    element_to_json,
    equals,
    is_knot_like,
    is_prime,
    is_trivial,
    prime_factorization,
)
from .gamma import DEFAULT_CAP, GammaError, UniquenessViolation, build_gamma, verify_unique_root, vertex_of
from .oracle import OracleError, format_word, oracle_equal, word_of
from .roots import GraphError, ReductionGraph, fuzz, verify_diamond
from .selftest import run_selftest

OK, FALSE, ERROR = 0, 1, 2


class CLIError(Exception):
    pass


def _emit(args, payload: dict, pretty: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=False))
    else:
        print(pretty)


def _load_registry(args) -> Registry | None:
    if not getattr(args, "primes", None):
        return None
    try:
        manifest = json.loads(Path(args.primes).read_text())
    except json.JSONDecodeError as exc:
        raise CLIError(f"{args.primes}: invalid JSON ({exc})") from None
    return Registry.from_manifest(manifest)


class _Session:
    """Name resolution shared by all expressions of one command."""

    def __init__(self, args):
        self.registry = _load_registry(args)
        self.implicit: dict[str, Kind] | None = None if self.registry is not None else {}
        self.sort = getattr(args, "sort", None)

    def parse(self, text: str) -> ex.Expression:
        return ex.parse(text, self.registry, self.sort, self.implicit)

    def element(self, text: str, label: str = "0"):
        value = ex.evaluate(self.parse(text))
        if isinstance(value, KnotNF):
            return LabeledKnot(Label.parse(label), value)
        return value


def _describe(u) -> dict:
    out = element_to_json(u)
    out["text"] = str(u)
    out["trivial"] = is_trivial(u)
    out["prime"] = is_prime(u)
    if isinstance(u, ThetaNF):
        out["knot_like"] = is_knot_like(u)
    return out


# -- commands -----------------------------------------------------------------


def cmd_declare(args) -> int:
    manifest = json.loads(Path(args.file).read_text())
    reg = Registry.from_manifest(manifest)
    payload = reg.to_manifest()
    pretty = "\n".join(f"{kind}: {' '.join(names) or '-'}" for kind, names in payload.items())
    _emit(args, payload, pretty)
    return OK


def cmd_normalize(args) -> int:
    u = _Session(args).element(args.expr, args.label)
    d = _describe(u)
    _emit(args, d, f"{d['sort']}: {d['text']}")
    return OK


def cmd_eq(args) -> int:
    s = _Session(args)
    lhs, rhs = s.element(args.lhs, args.label), s.element(args.rhs, args.label)
    verdict = equals(lhs, rhs)
    _emit(args, {"equal": verdict, "lhs": str(lhs), "rhs": str(rhs)}, str(verdict).lower())
    return OK if verdict else FALSE


def cmd_factor(args) -> int:
    u = _Session(args).element(args.expr, args.label)
    if isinstance(u, ThetaNF):
        factors = [str(f) for f in prime_factorization(u)]
    elif isinstance(u, LabeledKnot):
        if is_trivial(u):
            raise CLIError("the trivial knot has no prime factorization")
        k = u.knot
        factors = list(k.knots) + [f"flat({p})" for p in k.manifold.summands]
    else:
        if is_trivial(u):
            raise CLIError("S3 has no prime factorization")
        factors = list(u.summands)
    op = " * " if isinstance(u, ThetaNF) else " # "
    _emit(args, {"input": str(u), "factors": factors}, op.join(factors))
    return OK


def cmd_gamma(args) -> int:
    u = _Session(args).element(args.expr, args.label)
    v0 = vertex_of(u)
    if args.verify:
        try:
            rep = verify_unique_root(v0, args.cap)
        except UniquenessViolation as exc:
            rep = exc.report
        gamma = rep.gamma
        payload = rep.to_json()
        pretty = "\n".join(
            [
                f"start:     {v0}",
                f"graph:     {payload['vertices']} vertices, {payload['edges']} edges",
                f"roots:     {', '.join(map(str, rep.roots))}",
                f"expected:  {rep.expected}",
                f"unique:    {rep.unique}",
                f"matches:   {rep.matches_expected}",
                f"(F):       {rep.f_holds}",
                f"(EE):      {rep.ee_holds}",
                f"descent:   {rep.descent_ok}",
            ]
        )
        status = OK if rep.ok else FALSE
    else:
        gamma = build_gamma(v0, args.cap)
        roots = [gamma.vertices[i] for i in gamma.terminals()]
        payload = {
            "vertices": len(gamma.vertices),
            "edges": len(gamma.graph.edges),
            "roots": [r.to_json() for r in roots],
        }
        pretty = f"{payload['vertices']} vertices, {payload['edges']} edges\nroots: " + ", ".join(map(str, roots))
        status = OK
    if args.dot:
        Path(args.dot).write_text(gamma.to_dot())
    if args.json:
        Path(args.json).write_text(json.dumps(gamma.to_json(), indent=1))
    _emit(args, payload, pretty)
    return status


def cmd_ars_check(args) -> int:
    g = ReductionGraph.loads(Path(args.file).read_text())
    rep = verify_diamond(g)
    if args.dot:
        Path(args.dot).write_text(g.to_dot())
    pretty = [f"(F):  {rep.f_holds}", f"(EE): {rep.ee_holds}"]
    if rep.violation:
        pretty.append(f"violation: {rep.violation}")
    for v, r in rep.per_vertex_roots.items():
        pretty.append(f"  {v}: roots {sorted(map(str, r))}" + (f"  c={rep.c_values[v]}" if rep.c_values else ""))
    _emit(args, rep.to_json(), "\n".join(pretty))
    return OK if rep.f_holds and rep.ee_holds else FALSE


def cmd_ars_fuzz(args) -> int:
    if args.count < 1 or args.max_vertices < 1:
        raise CLIError("--count and --max-vertices must be positive")
    res = fuzz(args.count, args.max_vertices, args.edge_prob, args.seed)
    payload = {
        "graphs": res.graphs,
        "ee_graphs": res.ee_graphs,
        "multi_root_graphs": res.multi_root_graphs,
        "counterexamples": res.counterexamples,
    }
    pretty = (
        f"{res.graphs} graphs, {res.ee_graphs} with (EE), {res.multi_root_graphs} with a multi-root vertex, "
        f"{len(res.counterexamples)} counterexamples"
    )
    _emit(args, payload, pretty)
    return OK if res.ok else FALSE


def cmd_oracle_eq(args) -> int:
    s = _Session(args)
    s.sort = "theta"
    w1, w2 = word_of(s.parse(args.lhs)), word_of(s.parse(args.rhs))
    verdict = oracle_equal(w1, w2, args.cap)
    _emit(
        args,
        {"equal": verdict, "lhs": format_word(w1), "rhs": format_word(w2)},
        f"{format_word(w1)}  vs  {format_word(w2)}\n{str(verdict).lower()}",
    )
    return OK if verdict else FALSE


def cmd_selftest(args) -> int:
    results = run_selftest(args.count, args.max_primes, args.seed)
    rows = [
        {"check": r.name, "cases": r.cases, "passed": r.passed, "failures": r.failures, "seconds": round(r.seconds, 3)}
        for r in results
    ]
    width = max(len(r.name) for r in results)
    lines = [f"{'check':<{width}}  {'cases':>7}  result"]
    for r in results:
        lines.append(f"{r.name:<{width}}  {r.cases:>7}  {'PASS' if r.passed else 'FAIL'}")
        lines.extend(f"    {f}" for f in r.failures)
    _emit(args, {"checks": rows}, "\n".join(lines))
    return OK if all(r.passed for r in results) else FALSE


# -- argument parsing ---------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("pretty", "json"), default="pretty")
    primes = argparse.ArgumentParser(add_help=False)
    primes.add_argument("--primes", metavar="FILE", help="JSON manifest of declared primes")
    primes.add_argument("--sort", choices=[k.value for k in Kind], help="force the sort of the expression")
    primes.add_argument("--label", choices=("-", "0", "+"), default="0", help="label for knot expressions")

    p = argparse.ArgumentParser(prog="thetacurve", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("declare", parents=[common], help="load and list a primes manifest")
    s.add_argument("--file", required=True)
    s.set_defaults(func=cmd_declare)

    s = sub.add_parser("normalize", parents=[common, primes], help="print the normal form")
    s.add_argument("--expr", required=True)
    s.set_defaults(func=cmd_normalize)

    s = sub.add_parser("eq", parents=[common, primes], help="decide equality of two expressions")
    s.add_argument("--lhs", required=True)
    s.add_argument("--rhs", required=True)
    s.set_defaults(func=cmd_eq)

    s = sub.add_parser("factor", parents=[common, primes], help="prime factorization")
    s.add_argument("--expr", required=True)
    s.set_defaults(func=cmd_factor)

    s = sub.add_parser("gamma", parents=[common, primes], help="build the reduction graph of an element")
    s.add_argument("--expr", required=True)
    s.add_argument("--dot", metavar="FILE")
    s.add_argument("--json", metavar="FILE")
    s.add_argument("--verify", action="store_true")
    s.add_argument("--cap", type=int, default=DEFAULT_CAP)
    s.set_defaults(func=cmd_gamma)

    ars = sub.add_parser("ars", help="abstract reduction graphs")
    ars_sub = ars.add_subparsers(dest="ars_command", required=True)
    s = ars_sub.add_parser("check", parents=[common], help="roots, (F) and (EE) of a graph file")
    s.add_argument("--file", required=True)
    s.add_argument("--dot", metavar="FILE")
    s.set_defaults(func=cmd_ars_check)
    s = ars_sub.add_parser("fuzz", parents=[common], help="random DAG check of the unique-root theorem")
    s.add_argument("--count", type=int, required=True)
    s.add_argument("--max-vertices", type=int, required=True)
    s.add_argument("--edge-prob", type=float, help="fixed edge probability; random per graph if omitted")
    s.add_argument("--seed", type=int, required=True)
    s.set_defaults(func=cmd_ars_fuzz)

    orc = sub.add_parser("oracle", help="brute-force word equality")
    orc_sub = orc.add_subparsers(dest="oracle_command", required=True)
    s = orc_sub.add_parser("eq", parents=[common, primes])
    s.add_argument("--lhs", required=True)
    s.add_argument("--rhs", required=True)
    s.add_argument("--cap", type=int, default=10)
    s.set_defaults(func=cmd_oracle_eq)

    s = sub.add_parser("selftest", parents=[common], help="run the invariant suite")
    s.add_argument("--count", type=int, default=100)
    s.add_argument("--max-primes", type=int, default=5)
    s.add_argument("--seed", type=int, required=True)
    s.set_defaults(func=cmd_selftest)
    return p


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return OK if exc.code == 0 else ERROR
    try:
        return args.func(args)
    except (AlgebraError, ex.ParseError, GammaError, GraphError, OracleError, CLIError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
