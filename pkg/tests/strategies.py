"""Hypothesis strategies: small graphs and well-behaved random formulas."""
from __future__ import annotations

import numpy as np
from hypothesis import strategies as st

from zeroone.formula import (CONN, HAM, TRUE, Adj, And, Chr, Eq, Exists, Forall, Implies, Not, Or,
                             QEq, QRel, QTu, QWeak, conj, disj, iff, rename)
from zeroone.graph import Graph

POOL = ("a", "b", "c")
NAMES = st.sampled_from([CONN, HAM, Chr(1), Chr(2), Chr(3)])


@st.composite
def graphs(draw, min_n=0, max_n=6):
    n = draw(st.integers(min_n, max_n))
    bits = draw(st.lists(st.booleans(), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))
    a = np.zeros((n, n), np.uint8)
    iu = np.triu_indices(n, 1)
    a[iu] = bits
    return Graph(a | a.T)


def symmetric(psi, x, y):
    """Irreflexive, symmetric closure of psi(x, y)."""
    return conj(Not(Eq(x, y)), disj(psi, rename(psi, {x: y, y: x})))


@st.composite
def formulas(draw, scope=(), depth=3, lindstrom=True):
    """A formula whose free variables lie in ``scope``."""
    scope = tuple(scope)
    kinds = ["atom"] if depth <= 0 else ["atom", "not", "and", "or", "implies", "exists", "forall"]
    if depth > 0 and lindstrom:
        kinds += ["qweak", "qrel", "qeq", "qtu"]
    kind = draw(st.sampled_from(kinds))
    sub = lambda sc=scope, d=depth - 1: formulas(sc, d, lindstrom)
    if kind == "atom":
        if not scope:
            return draw(st.sampled_from([TRUE, Not(TRUE)]))
        a, b = draw(st.sampled_from(scope)), draw(st.sampled_from(scope))
        return draw(st.sampled_from([Eq(a, b), Adj(a, b)]))
    if kind == "not":
        return Not(draw(sub()))
    if kind in ("and", "or"):
        args = tuple(draw(st.lists(sub(), min_size=1, max_size=3)))
        return (And if kind == "and" else Or)(args)
    if kind == "implies":
        return Implies(draw(sub()), draw(sub()))
    if kind in ("exists", "forall"):
        v = draw(st.sampled_from(POOL))
        body = draw(sub(tuple(sorted(set(scope) | {v}))))
        return (Exists if kind == "exists" else Forall)((v,), body)
    name = draw(NAMES)
    if kind == "qweak":
        psi = draw(sub(scope + ("x", "y"), min(depth - 1, 1)))
        return QWeak(name, "x", "y", symmetric(psi, "x", "y"))
    if kind == "qrel":
        dom = draw(sub(scope + ("v",), min(depth - 1, 1)))
        psi = draw(sub(scope + ("x", "y"), min(depth - 1, 1)))
        return QRel(name, "v", dom, "x", "y", symmetric(psi, "x", "y"))
    if kind == "qeq":
        dom = draw(sub(scope + ("v",), min(depth - 1, 1)))
        # names the quantifier rebinds would make the edge formula vary within a class
        outer = tuple(v for v in scope if v not in ("v", "u", "w", "x", "y"))
        if outer:
            t = draw(st.sampled_from(outer))
            eq = iff(Adj("u", t), Adj("w", t))
            differ = Not(iff(Adj("x", t), Adj("y", t)))
        else:
            eq, differ = TRUE, Not(TRUE)
        side = draw(sub(outer, 0))
        return QEq(name, "v", dom, "u", "w", eq, "x", "y", conj(differ, side))
    # tuples of length 1 or 2 under componentwise equality
    l = draw(st.integers(1, 2))
    vb = ("v1", "v2")[:l]
    ub, wb = ("u1", "u2")[:l], ("w1", "w2")[:l]
    xb, yb = ("x1", "x2")[:l], ("y1", "y2")[:l]
    dom = draw(sub(scope + vb, 0))
    eq = conj(*(Eq(u, w) for u, w in zip(ub, wb)))
    psi = draw(sub(scope + xb + yb, 0))
    swap = dict(zip(xb, yb)) | dict(zip(yb, xb))
    same = conj(*(Eq(x, y) for x, y in zip(xb, yb)))
    edge = conj(Not(same), disj(psi, rename(psi, swap)))
    return QTu(name, l, vb, dom, ub, wb, eq, xb, yb, edge)


@st.composite
def graph_formula_env(draw, max_n=5, depth=3, lindstrom=True):
    g = draw(graphs(1, max_n))
    scope = tuple(draw(st.lists(st.sampled_from(POOL), max_size=2, unique=True)))
    f = draw(formulas(scope, depth, lindstrom))
    env = {v: draw(st.integers(0, g.n - 1)) for v in scope}
    return g, f, env
