import itertools
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from zeroone import parse_so
from zeroone.errors import CapExceeded
from zeroone.formula import (Adj, And, Eq, Exists, ExistsRel, ExistsSet, Forall, Implies, Member, Not,
                             Or, Rel, TRUE)
from zeroone.so_eval import so_truth

BATTERY = Path(__file__).parents[1] / "corpus" / "so_battery"


def brute(f, U, fo=None, rel=None, edges=frozenset()):
    """Full enumeration of every relation, no pruning."""
    fo, rel = fo or {}, rel or {}
    rec = lambda g, fo=fo, rel=rel: brute(g, U, fo, rel, edges)
    match f:
        case Eq(a, b):
            return fo[a] == fo[b]
        case Adj(a, b):
            return frozenset((fo[a], fo[b])) in edges
        case Member(x, r):
            return (fo[x],) in rel[r]
        case Rel(r, args):
            return tuple(fo[a] for a in args) in rel[r]
        case Not(g):
            return not rec(g)
        case And(args):
            return all(rec(g) for g in args)
        case Or(args):
            return any(rec(g) for g in args)
        case Implies(a, b):
            return not rec(a) or rec(b)
        case Exists(vs, body) | Forall(vs, body):
            q = any if isinstance(f, Exists) else all
            return q(rec(body, {**fo, **dict(zip(vs, t))})
                     for t in itertools.product(U, repeat=len(vs)))
        case ExistsSet(r, body) | ExistsRel(r, _, body):
            k = 1 if isinstance(f, ExistsSet) else f.arity
            tuples = list(itertools.product(U, repeat=k))
            return any(rec(body, fo, {**rel, r: {t for t, b in zip(tuples, bits) if b}})
                       for bits in itertools.product((0, 1), repeat=len(tuples)))
    if f == TRUE:
        return True
    raise TypeError(type(f).__name__)


@st.composite
def so_formulas(draw, fo=(), rels=(), depth=3):
    kinds = ["atom"] if depth <= 0 else ["atom", "not", "and", "or", "exists", "forall", "set", "rel"]
    kind = draw(st.sampled_from(kinds))
    sub = lambda fo=fo, rels=rels: so_formulas(fo, rels, depth - 1)
    if kind == "atom":
        opts = [TRUE, Not(TRUE)]
        if fo:
            a, b = draw(st.sampled_from(fo)), draw(st.sampled_from(fo))
            opts += [Eq(a, b), Adj(a, b)]
            for r, k in rels:
                opts.append(Member(a, r) if k == 1 else Rel(r, (a, b)))
        return draw(st.sampled_from(opts))
    if kind == "not":
        return Not(draw(sub()))
    if kind in ("and", "or"):
        return (And if kind == "and" else Or)(tuple(draw(st.lists(sub(), min_size=1, max_size=3))))
    if kind in ("exists", "forall"):
        v = draw(st.sampled_from(("x", "y")))
        return (Exists if kind == "exists" else Forall)((v,), draw(sub(tuple(set(fo) | {v}))))
    name = f"R{len(rels)}"
    if kind == "set":
        return ExistsSet(name, draw(sub(fo, rels + ((name, 1),))))
    return ExistsRel(name, 2, draw(sub(fo, rels + ((name, 2),))))


@given(so_formulas(), st.integers(1, 2), st.booleans())
def test_agrees_with_full_enumeration(f, n, edge):
    U = list(range(n))
    edges = frozenset({frozenset((0, 1))}) if edge else frozenset()
    adjacent = lambda a, b: frozenset((a, b)) in edges
    assert so_truth(f, U, adjacent) == brute(f, U, edges=edges)


@pytest.mark.parametrize("path", sorted(BATTERY.glob("[mbf]*.so")), ids=lambda p: p.stem)
def test_battery_small_universes(path):
    f = parse_so(path.read_text())
    for n in (1, 2, 3):
        assert so_truth(f, list(range(n))) == brute(f, list(range(n))), n


def test_known_truths():
    order = parse_so((BATTERY / "b_linear_order.so").read_text())
    assert all(so_truth(order, list(range(n))) for n in (1, 2, 3, 4))
    no_max = parse_so((BATTERY / "b_order_without_max.so").read_text())
    assert not any(so_truth(no_max, list(range(n))) for n in (1, 2, 3))
    parts = parse_so((BATTERY / "m_two_parts.so").read_text())
    assert not so_truth(parts, [0]) and so_truth(parts, [0, 1])


def test_tuple_cap():
    f = parse_so("(existsRel (R 3) (exists (x) (rel R x x x)))")
    with pytest.raises(CapExceeded):
        so_truth(f, list(range(5)))
