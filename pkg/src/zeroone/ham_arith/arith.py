"""Second-order arithmetic on an ordered set, and the sentence that does not converge.

Relations are pinned down by recursions over the successor of the order,
each well founded, so every relation has exactly one solution once the
order is fixed:

    succ(a, b)   a < b and nothing lies strictly between
    add(x,y,z)   (y = c0 and z = x) or exists y',z' (succ(y',y), succ(z',z), add(x,y',z'))
    mul(x,y,z)   (y = c0 and z = c0) or exists y',z' (succ(y',y), mul(x,y',z'), add(z',x,z))
    pow2(x,y)    (x = c0 and y = c1) or exists x',y' (succ(x',x), pow2(x',y'), add(y',y',y))
    tower(x,y)   (x = c0 and y = c1) or exists x',y' (succ(x',x), tower(x',y'), pow2(y',y))
    modq(x,y)    x = y or exists x' (x = x'+q, modq(x',y)) or exists y' (y = y'+q, modq(x,y'))

c0..cr are the r+1 smallest elements.  Functions are partial: a value
beyond the largest element has no tuple.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..formula import (Adj, Eq, Exists, ExistsRel, Forall, Implies, Not, Rel, TRUE, conj, disj,
                       iff)
from .encoder import EncoderContext, encode_so
from .setdef import SetDef, build_degree_class_formula, build_strict_less

LT, ADD, MUL, POW, TOWER, MOD = "lt", "add", "mul", "pow2", "tower", "modq"


@dataclass(frozen=True)
class ArithConfig:
    r: int = 100
    q: int = 100
    threshold: int = 50

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("r must be at least 1")
        if not 1 <= self.threshold <= self.q:
            raise ValueError("threshold must lie in 1..q")


def const(i: int) -> str:
    return f"c{i}"


def lt(a, b):
    return Rel(LT, (a, b))


def succ(a, b, z="z"):
    return conj(lt(a, b), Not(Exists((z,), conj(lt(a, z), lt(z, b)))))


def shift(a, b, q: int):
    """b is q successors above a."""
    if q == 1:
        return succ(a, b)
    zs = tuple(f"s{i}" for i in range(1, q))
    chain = (a,) + zs + (b,)
    return Exists(zs, conj(*(succ(chain[i], chain[i + 1]) for i in range(q))))


def order_axioms():
    return conj(Forall(("x",), Not(lt("x", "x"))),
                Forall(("x", "y", "z"), Implies(conj(lt("x", "y"), lt("y", "z")), lt("x", "z"))),
                Forall(("x", "y"), disj(Eq("x", "y"), lt("x", "y"), lt("y", "x"))))


def constant_axioms(r: int):
    c = [const(i) for i in range(r + 1)]
    return conj(Forall(("z",), Not(lt("z", c[0]))), *(succ(c[i], c[i + 1]) for i in range(r)))


def _defn(rel, args, rhs):
    return Forall(args, iff(Rel(rel, args), rhs))


def add_axioms():
    c0 = const(0)
    return _defn(ADD, ("x", "y", "z"), disj(
        conj(Eq("y", c0), Eq("z", "x")),
        Exists(("y1", "z1"), conj(succ("y1", "y"), succ("z1", "z"), Rel(ADD, ("x", "y1", "z1"))))))


def mul_axioms():
    c0 = const(0)
    return _defn(MUL, ("x", "y", "z"), disj(
        conj(Eq("y", c0), Eq("z", c0)),
        Exists(("y1", "z1"), conj(succ("y1", "y"), Rel(MUL, ("x", "y1", "z1")),
                                  Rel(ADD, ("z1", "x", "z"))))))


def pow_axioms():
    return _defn(POW, ("x", "y"), disj(
        conj(Eq("x", const(0)), Eq("y", const(1))),
        Exists(("x1", "y1"), conj(succ("x1", "x"), Rel(POW, ("x1", "y1")),
                                  Rel(ADD, ("y1", "y1", "y"))))))


def tower_axioms():
    return _defn(TOWER, ("x", "y"), disj(
        conj(Eq("x", const(0)), Eq("y", const(1))),
        Exists(("x1", "y1"), conj(succ("x1", "x"), Rel(TOWER, ("x1", "y1")),
                                  Rel(POW, ("y1", "y"))))))


def mod_axioms(q: int):
    return _defn(MOD, ("x", "y"), disj(
        Eq("x", "y"),
        Exists(("x1",), conj(shift("x1", "x", q), Rel(MOD, ("x1", "y")))),
        Exists(("y1",), conj(shift("y1", "y", q), Rel(MOD, ("x", "y1"))))))


def _staged(cfg: ArithConfig, body):
    inner = conj(mod_axioms(cfg.q), body)
    inner = ExistsRel(MOD, 2, inner)
    inner = ExistsRel(TOWER, 2, conj(tower_axioms(), inner))
    inner = ExistsRel(POW, 2, conj(pow_axioms(), inner))
    inner = ExistsRel(MUL, 3, conj(mul_axioms(), inner))
    inner = ExistsRel(ADD, 3, conj(add_axioms(), inner))
    inner = Exists(tuple(const(i) for i in range(cfg.r + 1)), conj(constant_axioms(cfg.r), inner))
    return ExistsRel(LT, 2, conj(order_axioms(), inner))


def build_arith(cfg: ArithConfig = ArithConfig()):
    """Holds on every set with at least r+1 elements."""
    return _staged(cfg, TRUE)


def logstar_body(cfg: ArithConfig):
    if cfg.threshold - 1 > cfg.r:
        raise ValueError("LogStar needs threshold - 1 <= r named constants")
    top = conj(Exists(("y",), Rel(TOWER, ("x", "y"))),
               Forall(("z",), Implies(lt("x", "z"), Not(Exists(("y",), Rel(TOWER, ("z", "y")))))))
    return Exists(("x",), conj(top, disj(*(Rel(MOD, ("x", const(j)))
                                           for j in range(cfg.threshold)))))


def build_logstar(cfg: ArithConfig = ArithConfig()):
    """The largest tower index, taken mod q, is below the threshold."""
    return _staged(cfg, logstar_body(cfg))


def degree_class_def(v: str) -> SetDef:
    return SetDef(build_degree_class_formula(v, "x"), "x")


def build_nonconv(cfg: ArithConfig = ArithConfig()):
    """The graph sentence whose probability keeps oscillating.

    Over pairs (v, u) whose set N(u) within D(v) carries arithmetic, take
    one of largest size and assert LogStar about it.
    """
    arith, logstar = build_arith(cfg), build_logstar(cfg)

    def enc(phi, u, v):
        return encode_so(phi, EncoderContext(degree_class_def(v), SetDef(Adj("x", u), "x")))

    def n_u_dv(u, v):
        return SetDef(conj(degree_class_def(v).at("x"), Adj("x", u)), "x")

    maximal = Forall(("v2",), Forall(("u2",), Implies(
        enc(arith, "u2", "v2"), Not(build_strict_less(n_u_dv("u", "v"), n_u_dv("u2", "v2"))))))
    return Exists(("v",), Exists(("u",), conj(enc(arith, "u", "v"), maximal,
                                               enc(logstar, "u", "v"))))
