"""Roots of finite oriented graphs and the unique-root (Diamond Lemma) check.

A vertex W is a *subordinate* of V when W is reachable from V (V itself
included); a *root* of V is a subordinate with no outgoing edges.  Property
(F) bounds path lengths, property (EE) asks that all edges leaving a vertex
be chained together by shared roots.  Together they force unique roots.
"""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping

Vertex = Hashable
Edge = tuple[Vertex, Vertex]


class GraphError(ValueError):
    pass


class InconsistencyError(RuntimeError):
    """(F) and (EE) hold but some vertex has several roots: a bug, not data."""


class ReductionGraph:
    """Immutable simple directed graph; duplicate edges are collapsed."""

    def __init__(self, vertices: Iterable[Vertex], edges: Iterable[Edge] = ()):
        self.vertices: tuple[Vertex, ...] = tuple(dict.fromkeys(vertices))
        succ: dict[Vertex, dict[Vertex, None]] = {v: {} for v in self.vertices}
        for a, b in edges:
            if a not in succ or b not in succ:
                raise GraphError(f"edge ({a!r}, {b!r}) has an undeclared endpoint")
            succ[a][b] = None
        self._succ = {v: tuple(s) for v, s in succ.items()}
        self.edges: tuple[Edge, ...] = tuple((a, b) for a in self.vertices for b in self._succ[a])

    def successors(self, v: Vertex) -> tuple[Vertex, ...]:
        try:
            return self._succ[v]
        except KeyError:
            raise GraphError(f"unknown vertex {v!r}") from None

    def out_degree(self, v: Vertex) -> int:
        return len(self.successors(v))

    def is_terminal(self, v: Vertex) -> bool:
        return not self.successors(v)

    def __contains__(self, v: object) -> bool:
        return v in self._succ

    def __len__(self) -> int:
        return len(self.vertices)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ReductionGraph):
            return NotImplemented
        return set(self.vertices) == set(other.vertices) and set(self.edges) == set(other.edges)

    def __repr__(self) -> str:
        return f"ReductionGraph(|V|={len(self.vertices)}, |E|={len(self.edges)})"

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, data: Mapping) -> "ReductionGraph":
        try:
            vertices = data["vertices"]
            edges = data["edges"]
        except (KeyError, TypeError):
            raise GraphError("graph JSON needs 'vertices' and 'edges'") from None
        for e in edges:
            if len(e) != 2:
                raise GraphError(f"edge {e!r} is not a pair")
        return cls(vertices, (tuple(e) for e in edges))

    @classmethod
    def loads(cls, text: str) -> "ReductionGraph":
        return cls.from_json(json.loads(text))

    def to_dot(self, labels: Mapping[Vertex, str] | None = None, highlight: Iterable[Vertex] = ()) -> str:
        """DOT text; terminal vertices are double circles, highlighted ones filled."""
        ids = {v: f"n{i}" for i, v in enumerate(self.vertices)}
        marked = set(highlight)
        lines = ["digraph G {"]
        for v in self.vertices:
            text = labels[v] if labels and v in labels else str(v)
            attrs = [f'label="{_dot_escape(text)}"']
            attrs.append("shape=doublecircle" if self.is_terminal(v) else "shape=circle")
            if v in marked:
                attrs.append("style=filled, fillcolor=lightgoldenrod")
            lines.append(f"  {ids[v]} [{', '.join(attrs)}];")
        for a, b in self.edges:
            lines.append(f"  {ids[a]} -> {ids[b]};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")


def subordinates(g: ReductionGraph, v: Vertex) -> set[Vertex]:
    seen = {v}
    todo = [v]
    while todo:
        for w in g.successors(todo.pop()):
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return seen


def roots_of(g: ReductionGraph, v: Vertex) -> set[Vertex]:
    return {w for w in subordinates(g, v) if g.is_terminal(w)}


def _topological_order(g: ReductionGraph) -> list[Vertex] | None:
    """Sinks-first order, or None when the graph has a directed cycle."""
    indeg = {v: 0 for v in g.vertices}
    for _, b in g.edges:
        indeg[b] += 1
    queue = deque(v for v in g.vertices if indeg[v] == 0)
    order = []
    while queue:
        v = queue.popleft()
        order.append(v)
        for w in g.successors(v):
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    if len(order) != len(g.vertices):
        return None
    order.reverse()
    return order


def find_cycle(g: ReductionGraph) -> list[Vertex] | None:
    """Some directed cycle as a vertex list, or None."""
    color = {v: 0 for v in g.vertices}
    for start in g.vertices:
        if color[start]:
            continue
        stack = [(start, iter(g.successors(start)))]
        path = [start]
        color[start] = 1
        while stack:
            v, it = stack[-1]
            for w in it:
                if color[w] == 1:
                    return path[path.index(w):]
                if color[w] == 0:
                    color[w] = 1
                    path.append(w)
                    stack.append((w, iter(g.successors(w))))
                    break
            else:
                color[v] = 2
                path.pop()
                stack.pop()
    return None


def check_F(g: ReductionGraph) -> dict[Vertex, int] | None:
    """Longest path length from each vertex, or None if some path is unbounded.

    On a finite graph every vertex lies in the graph, so (F) fails exactly
    when a directed cycle exists.
    """
    order = _topological_order(g)
    if order is None:
        return None
    c: dict[Vertex, int] = {}
    for v in order:
        c[v] = max((c[w] + 1 for w in g.successors(v)), default=0)
    return c


def all_roots(g: ReductionGraph) -> dict[Vertex, frozenset]:
    order = _topological_order(g)
    if order is None:
        return {v: frozenset(roots_of(g, v)) for v in g.vertices}
    out: dict[Vertex, frozenset] = {}
    for v in order:
        succ = g.successors(v)
        if not succ:
            out[v] = frozenset([v])
        elif len(succ) == 1:
            out[v] = out[succ[0]]
        else:
            out[v] = frozenset().union(*(out[w] for w in succ))
    return out


def _edge_classes(g: ReductionGraph, v: Vertex, roots: Mapping[Vertex, frozenset]) -> list[list[Edge]]:
    heads = g.successors(v)
    parent = list(range(len(heads)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    owner: dict[Vertex, int] = {}
    for i, h in enumerate(heads):
        for r in roots[h]:
            if r in owner:
                parent[find(i)] = find(owner[r])
            else:
                owner[r] = i
    classes: dict[int, list[Edge]] = {}
    for i, h in enumerate(heads):
        classes.setdefault(find(i), []).append((v, h))
    return list(classes.values())


def edge_classes(g: ReductionGraph, v: Vertex) -> list[list[Edge]]:
    """Partition of the edges leaving ``v`` into equivalence classes.

    Two edges are merged when their heads share a root; the classes are the
    connected components of that relation.
    """
    heads = g.successors(v)
    roots = {h: frozenset(roots_of(g, h)) for h in heads}
    return _edge_classes(g, v, roots)


def check_EE(g: ReductionGraph, roots: Mapping[Vertex, frozenset] | None = None) -> tuple[bool, Vertex | None]:
    """(holds, first violating vertex)."""
    if roots is None:
        roots = all_roots(g)
    for v in g.vertices:
        if g.out_degree(v) >= 2 and len(_edge_classes(g, v, roots)) > 1:
            return False, v
    return True, None


@dataclass(frozen=True)
class RootReport:
    per_vertex_roots: dict
    f_holds: bool
    ee_holds: bool
    c_values: dict | None = None
    violation: object = None

    @property
    def unique_roots(self) -> bool:
        return all(len(r) == 1 for r in self.per_vertex_roots.values())

    def to_json(self) -> dict:
        return {
            "f_holds": self.f_holds,
            "ee_holds": self.ee_holds,
            "unique_roots": self.unique_roots,
            "roots": {str(v): sorted(map(str, r)) for v, r in self.per_vertex_roots.items()},
            "c": None if self.c_values is None else {str(v): n for v, n in self.c_values.items()},
            "violation": self.violation,
        }


def verify_diamond(g: ReductionGraph) -> RootReport:
    c = check_F(g)
    roots = all_roots(g)
    if c is None:
        return RootReport(roots, False, check_EE(g, roots)[0], None, {"cycle": find_cycle(g)})
    ee, witness = check_EE(g, roots)
    if ee:
        bad = [v for v, r in roots.items() if len(r) != 1]
        if bad:
            raise InconsistencyError(f"(F) and (EE) hold but {bad[0]!r} has roots {set(roots[bad[0]])}")
        return RootReport(roots, True, True, c)
    return RootReport(roots, True, False, c, {"vertex": witness})


def random_dag(n: int, p: float, seed: int) -> ReductionGraph:
    """Vertices 0..n-1, each edge i->j (i<j) kept independently with probability p."""
    if n <= 0:
        raise GraphError("a graph needs at least one vertex")
    if not 0.0 <= p <= 1.0:
        raise GraphError(f"edge probability {p} outside [0, 1]")
    rng = random.Random(seed)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return ReductionGraph(range(n), edges)


@dataclass
class FuzzResult:
    graphs: int = 0
    ee_graphs: int = 0
    multi_root_graphs: int = 0
    counterexamples: list = None

    def __post_init__(self):
        if self.counterexamples is None:
            self.counterexamples = []

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def fuzz(count: int, max_vertices: int, edge_prob: float | None, seed: int) -> FuzzResult:
    """Check the unique-root theorem on ``count`` random DAGs.

    With ``edge_prob=None`` each graph draws its own probability, which
    gives a useful mix of sparse and dense graphs.
    """
    rng = random.Random(seed)
    res = FuzzResult()
    for _ in range(count):
        n = rng.randint(1, max_vertices)
        p = rng.random() if edge_prob is None else edge_prob
        g = random_dag(n, p, rng.getrandbits(32))
        roots = all_roots(g)
        ee, _ = check_EE(g, roots)
        multi = any(len(r) != 1 for r in roots.values())
        res.graphs += 1
        res.ee_graphs += ee
        res.multi_root_graphs += multi
        if ee == multi or check_F(g) is None:
            res.counterexamples.append(g.to_json())
    return res
