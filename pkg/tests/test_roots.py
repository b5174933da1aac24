import itertools
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from thetacurve.roots import (
    GraphError,
    InconsistencyError,
    ReductionGraph,
    check_EE,
    check_F,
    edge_classes,
    fuzz,
    random_dag,
    roots_of,
    subordinates,
    verify_diamond,
)
import thetacurve.roots as roots_mod

DIAMOND = ReductionGraph("abcd", [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")])
FORK = ReductionGraph(["a", "b", "c", "r1", "r2"], [("a", "b"), ("a", "c"), ("b", "r1"), ("c", "r2")])
CHAIN = ReductionGraph("abc", [("a", "b"), ("b", "c")])
LOOP = ReductionGraph("ab", [("a", "b"), ("b", "a")])


def _all_paths_longest(g, v):
    """Longest path by exhaustive path enumeration (acyclic graphs only)."""
    best = 0
    stack = [(v, 0)]
    while stack:
        u, n = stack.pop()
        best = max(best, n)
        stack.extend((w, n + 1) for w in g.successors(u))
    return best


def test_graph_validation():
    with pytest.raises(GraphError):
        ReductionGraph("ab", [("a", "z")])
    g = ReductionGraph("ab", [("a", "b"), ("a", "b")])
    assert g.edges == (("a", "b"),)


def test_subordinates():
    assert subordinates(ReductionGraph(["v"]), "v") == {"v"}
    assert subordinates(CHAIN, "a") == {"a", "b", "c"}
    assert subordinates(DIAMOND, "b") == {"b", "d"}


def test_roots_of():
    assert roots_of(ReductionGraph(["v"]), "v") == {"v"}
    g = ReductionGraph("abc", [("a", "b"), ("a", "c")])
    assert roots_of(g, "a") == {"b", "c"}
    assert roots_of(LOOP, "a") == set()


def test_check_F():
    assert check_F(ReductionGraph(["v"])) == {"v": 0}
    assert check_F(CHAIN) == {"a": 2, "b": 1, "c": 0}
    assert check_F(LOOP) is None


def test_edge_classes():
    assert [sorted(c) for c in edge_classes(DIAMOND, "a")] == [[("a", "b"), ("a", "c")]]
    assert sorted(sorted(c) for c in edge_classes(FORK, "a")) == [[("a", "b")], [("a", "c")]]
    assert edge_classes(CHAIN, "a") == [[("a", "b")]]
    assert edge_classes(CHAIN, "c") == []


def test_edge_classes_transitive_chain():
    # b and d share no root, but both share one with c
    g = ReductionGraph(
        ["a", "b", "c", "d", "r1", "r2"],
        [("a", "b"), ("a", "c"), ("a", "d"), ("b", "r1"), ("c", "r1"), ("c", "r2"), ("d", "r2")],
    )
    assert len(edge_classes(g, "a")) == 1
    # c itself forks into two roots
    assert check_EE(g) == (False, "c")


def test_check_EE():
    assert check_EE(DIAMOND) == (True, None)
    assert check_EE(FORK) == (False, "a")
    assert check_EE(CHAIN) == (True, None)


def test_verify_diamond():
    rep = verify_diamond(DIAMOND)
    assert rep.f_holds and rep.ee_holds and rep.unique_roots
    assert rep.c_values == {"a": 2, "b": 1, "c": 1, "d": 0}
    rep = verify_diamond(FORK)
    assert rep.f_holds and not rep.ee_holds
    assert rep.per_vertex_roots["a"] == {"r1", "r2"}
    assert rep.violation == {"vertex": "a"}
    rep = verify_diamond(LOOP)
    assert not rep.f_holds and rep.c_values is None
    assert set(rep.violation["cycle"]) == {"a", "b"}


def test_verify_diamond_reports_inconsistency(monkeypatch):
    monkeypatch.setattr(roots_mod, "check_EE", lambda g, roots=None: (True, None))
    with pytest.raises(InconsistencyError):
        verify_diamond(FORK)


def test_random_dag():
    g = random_dag(1, 0.5, 7)
    assert g.vertices == (0,) and g.edges == ()
    assert random_dag(5, 0.0, 3).edges == ()
    assert set(random_dag(5, 1.0, 3).edges) == set(itertools.combinations(range(5), 2))
    assert random_dag(9, 0.4, 11) == random_dag(9, 0.4, 11)
    with pytest.raises(GraphError):
        random_dag(0, 0.5, 1)
    with pytest.raises(GraphError):
        random_dag(3, 1.5, 1)


@given(st.integers(1, 10), st.floats(0, 1), st.integers(0, 2**32))
def test_random_dag_properties(n, p, seed):
    g = random_dag(n, p, seed)
    c = check_F(g)
    assert c is not None
    assert all(c[a] > c[b] for a, b in g.edges)
    for v in g.vertices:
        assert c[v] == _all_paths_longest(g, v)
        assert roots_of(g, v)
        classes = edge_classes(g, v)
        flat = [e for cls in classes for e in cls]
        assert sorted(flat) == sorted((v, w) for w in g.successors(v))
        assert len(flat) == len(set(flat))


@given(st.integers(1, 9), st.floats(0, 1), st.integers(0, 2**32))
def test_unique_root_theorem(n, p, seed):
    g = random_dag(n, p, seed)
    ee, _ = check_EE(g)
    unique = all(len(roots_of(g, v)) == 1 for v in g.vertices)
    assert ee == unique


def test_fuzz_small():
    res = fuzz(300, 8, None, 5)
    assert res.graphs == 300 and res.ok
    assert 0 < res.ee_graphs < 300


def test_graph_json_round_trip():
    data = json.loads(json.dumps(DIAMOND.to_json()))
    assert data == {"vertices": ["a", "b", "c", "d"], "edges": [["a", "b"], ["a", "c"], ["b", "d"], ["c", "d"]]}
    assert ReductionGraph.from_json(data) == DIAMOND
    with pytest.raises(GraphError):
        ReductionGraph.from_json({"vertices": ["a"]})
    with pytest.raises(GraphError):
        ReductionGraph.from_json({"vertices": ["a"], "edges": [["a"]]})


def test_dot_export():
    dot = DIAMOND.to_dot(highlight=["d"])
    assert dot.startswith("digraph")
    assert 'label="d", shape=doublecircle, style=filled' in dot
    assert 'label="a", shape=circle' in dot
    assert dot.count("->") == 4
