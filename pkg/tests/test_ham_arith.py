import itertools
import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from strategies import graphs
from zeroone import parse, parse_so
from zeroone.errors import CapExceeded
from zeroone.evaluator import Evaluator, definable_set, evaluate
from zeroone.formula import (Adj, ExistsRel, Eq, FreshNames, Rel, free_vars, is_sentence, to_text,
                             walk)
from zeroone.graph import Graph, RngSpec, degree_class, sample_gnp
from zeroone.ham_arith import (ArithConfig, EncoderContext, SetDef, build_arith, build_degree_class_formula,
                               build_logstar, build_nonconv, build_preceq, build_testbed,
                               check_double_powerset_repr, check_powerset_repr, dclass_stats,
                               degree_target, encode_so, expected_class_size, preceq_exact,
                               preceq_holds, weak_patterns)
from zeroone.so_eval import so_truth

BATTERY = Path(__file__).parents[1] / "corpus" / "so_battery"


def comparator(n, A, B, method="tensor"):
    a, b = SetDef.from_vertices(A, prefix="a"), SetDef.from_vertices(B, prefix="b")
    return evaluate(Graph.empty(n), build_preceq(a, b), {**a.env, **b.env}, method=method)


# --- the comparator ------------------------------------------------------------

def test_comparator_examples():
    assert comparator(6, {0, 1}, {2, 3, 4})
    assert not comparator(6, {0, 1, 2, 3}, {4})
    for n in (3, 4, 5):
        assert comparator(n, {0, 1}, {0, 1})
    assert not comparator(2, {0}, {0})


def test_comparator_formula_shape():
    a, b = SetDef.from_vertices([0], prefix="a"), SetDef.from_vertices([1], prefix="b")
    f = build_preceq(a, b)
    assert f.name.kind == "ham" and f.x != f.y
    assert free_vars(f) == {"a0", "b0"}


def test_comparator_avoids_capture():
    # definitions that already use the names the builder would pick
    A = SetDef(Adj("x", "y"), "x")
    B = SetDef(Eq("y", "y"), "y")
    f = build_preceq(A, B)
    assert {f.x, f.y}.isdisjoint({"x", "y"})
    assert free_vars(f) == {"y"}


def test_closed_form_matches_evaluation_exhaustively():
    for n in range(1, 6):
        V = range(n)
        for ma, mb in itertools.product(range(1 << n), repeat=2):
            A = {v for v in V if ma >> v & 1}
            B = {v for v in V if mb >> v & 1}
            assert comparator(n, A, B) == preceq_holds(n, A, B), (n, A, B)


def test_exception_class_is_exactly_the_documented_one():
    # away from X = A\B empty, |X| = |Y| with |X| = 1 or Z nonempty, the comparator is <=
    for n in range(1, 9):
        for ma, mb in itertools.product(range(1 << n), repeat=2):
            A = {v for v in range(n) if ma >> v & 1}
            B = {v for v in range(n) if mb >> v & 1}
            X, Y = A - B, B - A
            z = n - len(X) - len(Y)
            special = (bool(X) and len(X) == len(Y) and (len(X) == 1 or z > 0)) or (not X and n < 3)
            assert preceq_exact(n, A, B) == (not special)


@settings(max_examples=40)
@given(st.integers(3, 8), st.data())
def test_comparator_random_pairs(n, data):
    A = data.draw(st.sets(st.integers(0, n - 1)))
    B = data.draw(st.sets(st.integers(0, n - 1)))
    got = comparator(n, A, B, method=data.draw(st.sampled_from(("recursive", "tensor"))))
    assert got == preceq_holds(n, A, B)
    if preceq_exact(n, A, B):
        assert got == (len(A) <= len(B))


# --- degree classes ---------------------------------------------------------------

def dclass_of(g, w):
    return definable_set(g, build_degree_class_formula("v", "x"), "x", {"v": w})


def test_degree_class_examples():
    k4 = Graph.complete(4)
    assert all(dclass_of(k4, w) == {0, 1, 2, 3} for w in range(4))
    assert dclass_of(Graph.path(3), 0) == {0, 2}
    assert dclass_of(Graph.empty(1), 0) == {0}


def test_degree_class_exhaustive_small():
    for n in range(1, 5):
        for a in oracles.all_graphs(n):
            g = Graph(a)
            for w in range(n):
                assert dclass_of(g, w) == set(np.flatnonzero(a.sum(1) == a[w].sum()).tolist())


@settings(max_examples=25)
@given(graphs(5, 8))
def test_degree_class_fuzzed(g):
    for w in range(g.n):
        assert dclass_of(g, w) == degree_class(g, int(g.degrees[w]))


# --- certificates and testbeds -------------------------------------------------------

def test_testbed_sizes():
    assert build_testbed(2).graph.n == 2 + 4 + 64 + 2
    assert build_testbed(3).graph.n == 3 + 8 + 2048 + 2
    assert build_testbed(1).graph.n == 1 + 2 + 8 + 2
    for b in (0, 4):
        with pytest.raises(ValueError):
            build_testbed(b)


@pytest.mark.parametrize("b", [1, 2, 3])
def test_testbed_certificates(b):
    tb = build_testbed(b)
    cert = check_double_powerset_repr(tb.graph, tb.phi0(), tb.phi1())
    assert cert.valid and cert.f_value == b
    assert set(cert.B) <= set(cert.S) and set(cert.S) == set(tb.S)
    assert check_powerset_repr(tb.graph, list(tb.S)).valid


def test_invalid_certificates():
    k5 = Graph.complete(5)
    every = SetDef(Eq("x", "x"), "x")
    assert not check_double_powerset_repr(k5, every, every).valid
    cert = check_powerset_repr(Graph.empty(6), [0, 1, 2])
    assert sorted(map(tuple, cert.missing)) == sorted(
        c for k in (1, 2, 3) for c in itertools.combinations((0, 1, 2), k))
    with pytest.raises(CapExceeded):
        check_powerset_repr(Graph.empty(30), list(range(21)))


def test_powerset_repr_random_graph():
    ok = 0
    for s in range(10):
        g = sample_gnp(500, 0.5, RngSpec(99, s))
        S = sorted(np.random.default_rng(s).choice(500, 3, replace=False).tolist())
        ok += check_powerset_repr(g, S, exclude_S=True).valid
    assert ok >= 9


# --- the encoder ---------------------------------------------------------------------------

def round_trip(phi, tb):
    ctx = EncoderContext(tb.phi0(), tb.phi1())
    f = encode_so(phi, ctx)
    assert free_vars(f) <= {"mS", "mB"}
    got = Evaluator(tb.graph).eval(f, tb.env)
    want = so_truth(phi, tb.B, lambda a, c: tb.graph.has_edge(a, c))
    return got, want


def test_encoder_monadic_b3():
    phi = parse_so("(existsSet (A) (and (exists (x) (member x A)) (exists (x) (not (member x A)))))")
    assert round_trip(phi, build_testbed(3)) == (True, True)
    assert round_trip(phi, build_testbed(1)) == (False, False)


def test_encoder_linear_order_b2():
    phi = parse_so((BATTERY / "b_linear_order.so").read_text())
    assert round_trip(phi, build_testbed(2)) == (True, True)


def test_encoder_tautology():
    phi = parse_so("(forall (x) (= x x))")
    for b in (1, 2, 3):
        assert round_trip(phi, build_testbed(b)) == (True, True)


def test_encoder_sees_inner_edges():
    phi = parse_so((BATTERY / "fo_edgeless.so").read_text())
    assert round_trip(phi, build_testbed(2)) == (True, True)
    assert round_trip(phi, build_testbed(2, inner_edges=[(0, 1)])) == (False, False)
    # G[B] is 2-colourable: true for one edge, false for a triangle
    two_col = parse_so("(existsSet (A) (forall (x y) (implies (adj x y) "
                       "(or (and (member x A) (not (member y A))) "
                       "(and (member y A) (not (member x A)))))))")
    assert round_trip(two_col, build_testbed(3, inner_edges=[(0, 2)])) == (True, True)
    triangle = [(0, 1), (1, 2), (0, 2)]
    assert round_trip(two_col, build_testbed(3, inner_edges=triangle)) == (False, False)


def test_order_totality_b2():
    tb = build_testbed(2)
    ctx = EncoderContext(tb.phi0(), tb.phi1(), fresh=FreshNames({"v", "a", "c", "mS", "mB"}))
    order, le = ctx.order("v"), ctx.le("a", "c", "v")
    ev = Evaluator(tb.graph)
    found = set()
    for w in range(tb.graph.n):
        env = {**tb.env, "v": w}
        if not ev.eval(order, env):
            continue
        rel = {(a, c) for a in tb.B for c in tb.B if ev.eval(le, {**env, "a": a, "c": c})}
        # a reflexive, antisymmetric, total relation on B
        assert all((a, a) in rel for a in tb.B)
        assert all(((a, c) in rel) != ((c, a) in rel) for a, c in itertools.combinations(tb.B, 2))
        found.add(tuple(sorted(tb.B, key=lambda a: sum((c, a) in rel for c in tb.B))))
    assert found == {(0, 1), (1, 0)}


def test_encoder_names_and_caps():
    tb = build_testbed(2)
    phi = parse_so("(existsSet (mS) (exists (mB) (member mB mS)))")
    ctx = EncoderContext(tb.phi0(), tb.phi1())
    f = encode_so(phi, ctx)
    assert free_vars(f) == {"mS", "mB"}
    assert Evaluator(tb.graph).eval(f, tb.env)
    with pytest.raises(CapExceeded):
        encode_so(parse_so("(existsRel (R 4) (true))"), EncoderContext(tb.phi0(), tb.phi1()))
    with pytest.raises(ValueError):
        encode_so(parse_so("(exists (x) (member x A))"), EncoderContext(tb.phi0(), tb.phi1()))


def test_weak_patterns():
    # ordered Bell numbers: the number of weak orderings of k items
    assert [len(weak_patterns(k)) for k in (1, 2, 3, 4)] == [1, 3, 13, 75]
    assert len(set(weak_patterns(3))) == 13


# --- arithmetic ----------------------------------------------------------------------------

def test_arith_config_validation():
    ArithConfig()
    for bad in [dict(r=0), dict(q=0), dict(threshold=0), dict(q=10, threshold=11)]:
        with pytest.raises(ValueError):
            ArithConfig(**{**dict(r=100, q=100, threshold=50), **bad})


def test_arith_boundary():
    assert so_truth(build_arith(ArithConfig(1, 2, 1)), [0, 1])
    assert so_truth(build_arith(ArithConfig(1, 2, 1)), [0, 1, 2])
    assert not so_truth(build_arith(ArithConfig(2, 2, 1)), [0, 1])
    assert so_truth(build_arith(ArithConfig(2, 2, 1)), [0, 1, 2])
    assert not so_truth(build_arith(ArithConfig(4, 2, 1)), [0, 1, 2])


def test_arith_default_shape():
    f = build_arith()
    rels = {g.rel: g.arity for g in walk(f) if isinstance(g, ExistsRel)}
    assert rels == {"lt": 2, "add": 3, "mul": 3, "pow2": 2, "tower": 2, "modq": 2}
    assert is_sentence(f)
    assert parse_so(to_text(f)) == f


def test_logstar():
    cfg = ArithConfig(1, 2, 1)
    f = build_logstar(cfg)
    assert parse_so(to_text(f)) == f
    # tower indices on 0 < 1: T(0, 1) only (the tower 2^^1 = 2 is out of range), largest 0, 0 mod 2 = 0
    assert so_truth(f, [0, 1])
    # on 0 < 1 < 2 also T(1, 2); the largest index 1 is odd
    assert not so_truth(f, [0, 1, 2])
    mods = [g for g in walk(build_logstar(ArithConfig(3, 10, 4))) if isinstance(g, Rel)
            and g.rel == "modq" and g.args[1].startswith("c")]
    assert len({g.args[1] for g in mods}) == 4
    with pytest.raises(ValueError):
        build_logstar(ArithConfig(2, 10, 5))


@pytest.fixture(scope="module")
def nonconv_small():
    return build_nonconv(ArithConfig(1, 2, 1))


def test_nonconv_is_a_sentence(nonconv_small):
    f = nonconv_small
    assert free_vars(f) == frozenset()
    assert parse(to_text(f)) == f


def test_nonconv_evaluates(nonconv_small):
    g = Graph.path(3)
    assert isinstance(Evaluator(g).eval(nonconv_small), bool)


# --- degree-class statistics ----------------------------------------------------------------

def test_degree_target_example():
    n = 10**4
    h = math.sqrt(n * (0.5 * math.log(n) - math.log(math.log(math.log(n)))) * 0.5)
    t = degree_target(n, 0.5, 0)
    assert t.h == pytest.approx(h) and t.m == 5138


def test_dclass_stats_k4():
    st_ = dclass_stats(Graph.complete(4), 3, eps=0.5)
    assert st_["size"] == 4 and st_["inner_degrees"] == [3, 3, 3, 3]


def test_expected_class_size():
    # n Pr[Bin(n-1, p) = m] computed from the binomial coefficient directly
    n, p, m = 200, 0.5, 105
    assert expected_class_size(n, p, m) == pytest.approx(n * math.comb(n - 1, m) * 0.5 ** (n - 1))
