import itertools

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

import oracles
from strategies import formulas, graph_formula_env, graphs
from zeroone import evaluate, definable_set, parse
from zeroone.errors import EquivalenceViolation, SemanticsViolation, WellDefinednessViolation
from zeroone.evaluator import Evaluator, eval_qrl, eval_qtu
from zeroone.formula import (CONN, HAM, TRUE, Adj, Chr, Eq, Exists, Forall, Not, QWeak, conj, disj)
from zeroone.graph import Graph, RngSpec, chromatic_number, is_connected, is_hamiltonian, sample_gnp
from zeroone.tensor_eval import TensorEvaluator

METHODS = ("recursive", "tensor")
TRIANGLE = parse("(exists (x y z) (and (adj x y) (adj y z) (adj x z)))")


def both(g, f, env=None):
    r = [evaluate(g, f, env, method=m) for m in METHODS]
    assert r[0] == r[1]
    return r[0]


def test_triangle():
    assert both(Graph.complete(3), TRIANGLE)
    assert not both(Graph.path(3), TRIANGLE)


@given(graphs(0, 8))
def test_identity_edge_reproduces_graph_property(g):
    assert both(g, parse("(Q conn (x y) (adj x y))")) == is_connected(g)
    assert both(g, parse("(Q ham (x y) (adj x y))")) == is_hamiltonian(g)
    for k in range(1, 4):
        assert both(g, parse(f"(Q chr{k} (x y) (adj x y))")) == (chromatic_number(g) == k)


def test_identity_edge_on_larger_samples():
    for s in range(30):
        g = sample_gnp(20, 0.3, RngSpec(77, s))
        assert both(g, parse("(Q conn (x y) (adj x y))")) == is_connected(g)
        assert both(g, parse("(Q chr3 (x y) (adj x y))")) == (chromatic_number(g) == 3)


def test_named_examples():
    chr2 = parse("(Q chr2 (x y) (adj x y))")
    assert both(Graph.cycle(4), chr2) and not both(Graph.cycle(5), chr2)
    comp_ham = parse("(Q ham (x y) (and (not (= x y)) (not (adj x y))))")
    assert both(Graph.cycle(5), comp_ham)
    c6 = Graph.cycle(6)
    complement = (~(c6.adj.astype(bool) | np.eye(6, dtype=bool))).astype(np.uint8)
    assert both(c6, comp_ham) == oracles.hamiltonian(complement)


def test_relativized_examples():
    # a is vertex 0; N(0) = {1, 2, 3} spans a clique
    g = Graph.from_edges(5, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4)])
    assert eval_qrl(g, CONN, "v", Adj("v", "a"), "x", "y", Adj("x", "y"), {"a": 0})
    none = Not(TRUE)
    assert eval_qrl(g, CONN, "v", none, "x", "y", Adj("x", "y"))
    assert not eval_qrl(g, HAM, "v", Eq("v", "a"), "x", "y", Adj("x", "y"), {"a": 0})
    assert not eval_qrl(g, Chr(1), "v", none, "x", "y", Adj("x", "y"))
    assert eval_qrl(g, Chr(0), "v", none, "x", "y", Adj("x", "y"))


@given(graphs(1, 6))
def test_qtu_degenerate_is_conn(g):
    f = parse("(Qtu conn 1 (v) (true) (u | w) (= u w) (x | y) (adj x y))")
    assert both(g, f) == is_connected(g)


def test_qtu_pairs_quotient_matches_hand_built():
    g = Graph.from_edges(3, [(0, 1)])
    # pairs (a,b),(c,d) adjacent iff a~c and b=d, or a=c and b~d: the product graph on 9 vertices
    edge = "(or (and (adj x1 y1) (= x2 y2)) (and (= x1 y1) (adj x2 y2)))"
    pairs = list(itertools.product(range(3), repeat=2))
    hand = np.zeros((9, 9), np.uint8)
    for i, (a, b) in enumerate(pairs):
        for j, (c, d) in enumerate(pairs):
            hand[i, j] = (g.adj[a, c] and b == d) or (a == c and g.adj[b, d])
    for name in ("conn", "chr2", "chr3", "ham"):
        f = parse(f"(Qtu {name} 2 (v1 v2) (true) (u1 u2 | w1 w2) (and (= u1 w1) (= u2 w2)) "
                  f"(x1 x2 | y1 y2) {edge})")
        assert both(g, f) == oracles.holds(f.name, hand)
    with pytest.raises(EquivalenceViolation):
        eval_qtu(g, CONN, 1, ["v"], TRUE, ["u"], ["w"], Adj("u", "w"), ["x"], ["y"], Adj("x", "y"))


def test_definable_set():
    g = Graph.path(4)
    assert definable_set(g, Adj("x", "a"), "x", {"a": 1}) == {0, 2}
    assert definable_set(g, TRUE, "x") == {0, 1, 2, 3}
    assert definable_set(g, Not(Eq("x", "x")), "x") == frozenset()


def test_unbound_variables_rejected():
    with pytest.raises(ValueError):
        evaluate(Graph.path(3), Adj("x", "y"), {"x": 0})
    with pytest.raises(ValueError):
        evaluate(Graph.path(3), Adj("x", "y"), {"x": 0, "y": 9})


@settings(max_examples=300)
@given(graph_formula_env(max_n=7, depth=4, lindstrom=False))
def test_fo_agrees_with_naive(gfe):
    g, f, env = gfe
    expected = oracles.naive_eval(g.adj, f, env)
    for m in METHODS:
        assert evaluate(g, f, env, method=m) == expected


@settings(max_examples=150)
@given(graph_formula_env(max_n=4, depth=3, lindstrom=True))
def test_lindstrom_agrees_with_naive(gfe):
    g, f, env = gfe
    try:
        expected = oracles.naive_eval(g.adj, f, env)
    except oracles.NaiveViolation:
        for m in METHODS:
            with pytest.raises(SemanticsViolation):
                evaluate(g, f, env, method=m)
        return
    for m in METHODS:
        assert evaluate(g, f, env, method=m) == expected


@given(graph_formula_env(max_n=5, depth=3, lindstrom=True), st.sampled_from(("a", "b", "c")))
def test_duality_identities(gfe, x):
    g, f, env = gfe
    env = {k: v for k, v in env.items() if k != x}
    ex, fa = Exists((x,), f), Forall((x,), f)
    try:
        lhs = both(g, Not(ex), env)
    except SemanticsViolation:
        assume(False)
    assert lhs == both(g, Forall((x,), Not(f)), env)
    assert both(g, Not(fa), env) == both(g, Exists((x,), Not(f)), env)
    # De Morgan on the two closed-off forms
    assert both(g, Not(conj(ex, fa)), env) == both(g, disj(Not(ex), Not(fa)), env)


@given(graphs(2, 6), st.data())
def test_asymmetric_edge_raises(g, data):
    assume(g.adj.any())
    a = data.draw(st.sampled_from([int(v) for v in np.flatnonzero(g.adj.any(axis=1))]))
    f = QWeak(CONN, "x", "y", Adj("x", "a"))
    for m in METHODS:
        with pytest.raises(SemanticsViolation):
            evaluate(g, f, {"a": a}, method=m)


def test_trace_is_recorded():
    ev = Evaluator(Graph.complete(3), trace=True)
    assert ev.eval(TRIANGLE)
    tr = ev.trace_json()
    assert tr[-1]["value"] is True and tr[-1]["env"] == {}


def test_evaluators_are_reusable():
    g = sample_gnp(9, 0.5, RngSpec(4))
    ev, te = Evaluator(g), TensorEvaluator(g)
    for v in range(9):
        f = parse("(Qrl conn (v) (adj v a) (x y) (adj x y))")
        assert ev.eval(f, {"a": v}) == te.eval(f, {"a": v})
