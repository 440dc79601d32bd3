"""Compiling second-order sentences over B into graph sentences.

Given definitions of a set S and of B inside S with a double powerset
representation, an SO sentence about the structure G[B] becomes a graph
sentence:

* element variables range over B;
* a set variable A becomes a vertex v_A of S, with x in A read as x ~ v_A;
* a linear order of B is named by a vertex v_< whose neighbours in S form a
  chain of neighbourhoods growing one element of B at a time;
* a binary relation becomes two vertices of V, one for the pairs with
  x <= y and one for the rest, each adjacent to the pair witnesses
  s with N(s, B) = {x, y} of the pairs it contains;
* a k-ary relation (k >= 3) becomes one vertex per weak-ordering pattern of
  a k-tuple, adjacent to the set witnesses of the tuples with that pattern.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from ..errors import CapExceeded
from ..formula import (Adj, And, Eq, Exists, ExistsRel, ExistsSet, Forall, FreshNames, Implies,
                       Member, Not, Or, Rel, TrueF, all_vars, conj, disj, free_relvars, iff, walk)
from .setdef import SetDef


@dataclass
class EncoderContext:
    phi0: SetDef
    phi1: SetDef
    fresh: FreshNames | None = None
    arity_cap: int = 3
    arities: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)  # witness name -> (kind, relation)

    @property
    def reserved(self) -> set:
        out = set(self.phi0.param_names) | set(self.phi1.param_names)
        out |= {k for k, _ in self.phi0.params} | {k for k, _ in self.phi1.params}
        return out

    @property
    def env(self) -> dict:
        return {**self.phi0.env, **self.phi1.env}

    # --- membership ------------------------------------------------------------

    def in_S(self, t):
        return self.phi0.at(t)

    def in_B(self, t):
        return conj(self.phi0.at(t), self.phi1.at(t))

    def nb_is(self, s, ts):
        """N(s, B) = {ts}."""
        z = self.fresh("z")
        return Forall((z,), Implies(self.in_B(z), iff(Adj(z, s), disj(*(Eq(z, t) for t in ts)))))

    def nb_subset(self, s, t):
        z = self.fresh("z")
        return Forall((z,), Implies(conj(self.in_B(z), Adj(z, s)), Adj(z, t)))

    def witness(self, ts, w):
        """Some s in S with N(s, B) = {ts} is adjacent to w."""
        s = self.fresh("s")
        return Exists((s,), conj(Adj(s, w), self.in_S(s), self.nb_is(s, ts)))

    # --- the order -----------------------------------------------------------------

    def le(self, a, b, v):
        """a <=_v b: every chain set at v that contains b also contains a."""
        if a == b:
            return TrueF()
        s = self.fresh("s")
        return Forall((s,), Implies(conj(Adj(s, v), Adj(s, b), self.in_S(s)), Adj(s, a)))

    def lt(self, a, b, v):
        return Not(self.le(b, a, v))

    def order(self, v):
        """v names a linear order of B."""
        s, t, b, z = (self.fresh(x) for x in ("s", "t", "b", "z"))
        strict = lambda p, q: conj(self.nb_subset(p, q), Not(self.nb_subset(q, p)))
        chain = Forall((s,), Implies(conj(Adj(s, v), self.in_S(s)),
                       Forall((t,), Implies(conj(Adj(t, v), self.in_S(t), Not(Eq(s, t))),
                                            disj(strict(s, t), strict(t, s))))))
        single = Forall((z,), Implies(self.in_B(z), iff(Not(iff(Adj(z, s), Adj(z, t))), Eq(z, b))))
        separating = Forall((b,), Implies(self.in_B(b), Exists((s,), conj(
            Adj(s, v), self.in_S(s), Exists((t,), conj(Adj(t, v), self.in_S(t), single))))))
        return conj(chain, separating)


def weak_patterns(k: int) -> list[tuple]:
    """Rank vectors of k-tuples: surjections onto 0..m-1, in a fixed order."""
    out = []
    for m in range(1, k + 1):
        for p in itertools.product(range(m), repeat=k):
            if len(set(p)) == m:
                out.append(p)
    return out


class _Compiler:
    def __init__(self, ctx: EncoderContext, order_var):
        self.ctx = ctx
        self.v = order_var

    def pattern(self, args, rho):
        parts = []
        for i, j in itertools.combinations(range(len(args)), 2):
            if rho[i] == rho[j]:
                parts.append(Eq(args[i], args[j]))
            elif rho[i] < rho[j]:
                parts.append(self.ctx.lt(args[i], args[j], self.v))
            else:
                parts.append(self.ctx.lt(args[j], args[i], self.v))
        return conj(*parts)

    def rel_atom(self, info, args):
        kind, ws = info
        ctx = self.ctx
        if kind == 1:
            return Adj(args[0], ws[0])
        if kind == 2:
            x, y = args
            le = ctx.le(x, y, self.v)
            return disj(conj(le, ctx.witness((x, y), ws[0])),
                        conj(Not(le), ctx.witness((x, y), ws[1])))
        return disj(*(conj(self.pattern(args, rho), ctx.witness(args, w))
                      for rho, w in zip(weak_patterns(kind), ws)))

    def run(self, f, fo: dict, rel: dict):
        ctx = self.ctx
        t = type(f)
        if t is Eq:
            return Eq(fo[f.lhs], fo[f.rhs])
        if t is Adj:
            return Adj(fo[f.lhs], fo[f.rhs])
        if t is TrueF:
            return f
        if t is Member:
            return self.rel_atom(rel[f.rel], (fo[f.x],))
        if t is Rel:
            info = rel[f.rel]
            if info[0] != len(f.args):
                raise ValueError(f"relation {f.rel} used with {len(f.args)} arguments, "
                                 f"declared arity {info[0]}")
            return self.rel_atom(info, tuple(fo[a] for a in f.args))
        if t is Not:
            return Not(self.run(f.f, fo, rel))
        if t is And:
            return And(tuple(self.run(g, fo, rel) for g in f.args))
        if t is Or:
            return Or(tuple(self.run(g, fo, rel) for g in f.args))
        if t is Implies:
            return Implies(self.run(f.a, fo, rel), self.run(f.b, fo, rel))
        if t is Exists or t is Forall:
            fo2 = dict(fo)
            names = []
            for x in f.vars:
                nx = ctx.fresh(x) if x in ctx.reserved or x in ctx.witnesses else x
                fo2[x] = nx
                names.append(nx)
            out = self.run(f.body, fo2, rel)
            for nx in reversed(names):
                if t is Exists:
                    out = Exists((nx,), conj(ctx.in_B(nx), out))
                else:
                    out = Forall((nx,), Implies(ctx.in_B(nx), out))
            return out
        if t is ExistsSet or t is ExistsRel:
            k = 1 if t is ExistsSet else f.arity
            if k > ctx.arity_cap:
                raise CapExceeded(f"relation {f.rel} has arity {k}, cap {ctx.arity_cap}")
            ctx.arities[f.rel] = k
            if k == 1:
                ws = (ctx.fresh(f"v_{f.rel}"),)
            elif k == 2:
                ws = (ctx.fresh(f"v_{f.rel}_12"), ctx.fresh(f"v_{f.rel}_21"))
            else:
                ws = tuple(ctx.fresh(f"v_{f.rel}_" + "".join(map(str, rho)))
                           for rho in weak_patterns(k))
            for w in ws:
                ctx.witnesses[w] = (k, f.rel)
            rel2 = dict(rel)
            rel2[f.rel] = (k, ws)
            body = self.run(f.body, fo, rel2)
            if k == 1:
                return Exists(ws, conj(ctx.in_S(ws[0]), body))
            return Exists(ws, body)
        raise TypeError(f"cannot encode {type(f).__name__}")


def needs_order(phi) -> bool:
    return any(isinstance(g, ExistsRel) and g.arity >= 2 for g in walk(phi))


def encode_so(phi, ctx: EncoderContext):
    """Graph sentence true on G iff phi holds on G[B].

    Free variables of the result are the parameters of ctx.phi0/phi1.
    """
    if free_relvars(phi):
        raise ValueError(f"free relation variables: {sorted(free_relvars(phi))}")
    used = set(all_vars(phi))
    for g in walk(phi):
        if isinstance(g, (ExistsSet, ExistsRel)):
            used.add(g.rel)
    for d in (ctx.phi0, ctx.phi1):
        used |= all_vars(d.formula) | {d.var} | {k for k, _ in d.params}
    if ctx.fresh is None:
        ctx.fresh = FreshNames(used)
    else:
        ctx.fresh.used |= used
    v = None
    if needs_order(phi):
        v = ctx.fresh("v_lt")
        ctx.witnesses[v] = (0, "<")
    body = _Compiler(ctx, v).run(phi, {}, {})
    if v is None:
        return body
    return Exists((v,), conj(ctx.order(v), body))
