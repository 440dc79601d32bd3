"""Exact model checking of graph formulas.

:class:`Evaluator` is a recursive evaluator over Kleene's three truth
values: a subformula whose free variables are not all assigned yields
``None`` unless its value is already forced.  Full evaluation never sees
``None``; the partial mode drives forward checking inside multi-variable
``exists`` blocks, which are solved by depth-first search with domain
filtering and smallest-domain-first variable choice.

Quantifier and Lindström nodes are memoised on the values of their free
variables.  Atomic guards ``(adj x t)`` / ``(= x t)`` among the conjuncts
of an ``exists`` body (or the antecedent of a ``forall`` implication)
shrink the candidate list of ``x``.  Candidates are enumerated in
ascending vertex order.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import derived
from .errors import CapExceeded
from .formula import (_ATOMS, Adj, And, Eq, Exists, Forall, Implies, Not, Or, QEq, QRel,
                      QTu, QWeak, TrueF, atom_vars, scopes, to_text)
from .graph import DEFAULT_CAPS, Caps, Graph

Env = dict


@dataclass
class _Info:
    node: object  # keeps the node alive so its id is not reused
    fv: frozenset
    fvt: tuple


class Evaluator:
    def __init__(self, g: Graph, caps: Caps = DEFAULT_CAPS, trace: bool = False,
                 restrict: dict | None = None, max_steps: int | None = None):
        self.g = g
        self.n = g.n
        self.caps = caps
        self.adjl = g.adj.tolist()
        self.nbrs = [np.flatnonzero(row).tolist() for row in g.adj]
        self.all = list(range(g.n))
        self.restrict = {k: sorted(v) for k, v in (restrict or {}).items()}
        self.max_steps = max_steps
        self.steps = 0
        self.memo: dict = {}
        self.trace: list | None = [] if trace else None
        self._info: dict[int, _Info] = {}
        self._guards: dict[int, list] = {}
        self._nested: dict[int, object] = {}

    # --- bookkeeping ---------------------------------------------------------

    def info(self, f) -> _Info:
        r = self._info.get(id(f))
        if r is None:
            if isinstance(f, _ATOMS):
                fv = frozenset(atom_vars(f))
            else:
                fv = frozenset()
                for bound, g in scopes(f):
                    fv |= self.info(g).fv - set(bound)
            r = _Info(f, fv, tuple(sorted(fv)))
            self._info[id(f)] = r
        return r

    def _tick(self):
        self.steps += 1
        if self.max_steps is not None and self.steps > self.max_steps:
            raise CapExceeded(f"evaluation exceeded {self.max_steps} steps")

    # --- entry points -----------------------------------------------------------

    def eval(self, f, env: Env | None = None) -> bool:
        env = dict(env or {})
        missing = self.info(f).fv - env.keys()
        if missing:
            raise ValueError(f"unbound free variables: {sorted(missing)}")
        for v, val in env.items():
            if not 0 <= val < self.n:
                raise ValueError(f"{v}={val} is not a vertex of a graph with n={self.n}")
        r = self.ev(f, env)
        assert r is not None
        if self.trace is not None:
            self.trace.append((f, {v: env[v] for v in self.info(f).fvt}, r))
        return r

    def peval(self, f, env: Env):
        """Three-valued evaluation; unassigned variables are simply absent from env."""
        return self.ev(f, env)

    # --- core ----------------------------------------------------------------------

    def ev(self, f, env):
        t = type(f)
        if t is Adj:
            if f.lhs == f.rhs:
                return False
            a, b = env.get(f.lhs), env.get(f.rhs)
            if a is None or b is None:
                return None
            return self.adjl[a][b] == 1
        if t is Eq:
            if f.lhs == f.rhs:
                return True
            a, b = env.get(f.lhs), env.get(f.rhs)
            if a is None or b is None:
                return None
            return a == b
        if t is And:
            unknown = False
            for g in f.args:
                r = self.ev(g, env)
                if r is False:
                    return False
                if r is None:
                    unknown = True
            return None if unknown else True
        if t is Or:
            unknown = False
            for g in f.args:
                r = self.ev(g, env)
                if r is True:
                    return True
                if r is None:
                    unknown = True
            return None if unknown else False
        if t is Not:
            r = self.ev(f.f, env)
            return None if r is None else not r
        if t is Implies:
            a = self.ev(f.a, env)
            if a is False:
                return True
            b = self.ev(f.b, env)
            if b is True:
                return True
            if a is True and b is False:
                return False
            return None
        if t is TrueF:
            return True
        return self._memoised(f, env)

    def _memoised(self, f, env):
        inf = self.info(f)
        key = (id(f),) + tuple(env.get(v) for v in inf.fvt)
        r = self.memo.get(key, self)
        if r is self:
            self._tick()
            r = self._quant(f, env, inf)
            self.memo[key] = r
            if self.trace is not None and r is not None and len(self.trace) < 100_000:
                self.trace.append((f, {v: env[v] for v in inf.fvt}, r))
        return r

    def _quant(self, f, env, inf):
        t = type(f)
        if t is Exists:
            if len(f.vars) == 1:
                return self._loop(f.vars[0], f.body, env, True, f)
            if any(v not in env for v in inf.fvt):
                return None
            return self._block(f.vars, f.body, env)
        if t is Forall:
            if len(f.vars) == 1:
                return self._loop(f.vars[0], f.body, env, False, f)
            nested = self._nested.get(id(f))
            if nested is None:
                nested = f.body
                for v in reversed(f.vars):
                    nested = Forall((v,), nested)
                self._nested[id(f)] = nested
            return self.ev(nested, env)
        if any(v not in env for v in inf.fvt):
            return None
        if t is QWeak:
            return self._qweak(f, env)
        if t is QRel:
            return self._qrel(f, env)
        if t is QEq:
            return self._qeq(f, env)
        if t is QTu:
            return self._qtu(f, env)
        raise TypeError(f"cannot evaluate {type(f).__name__} on a graph")

    # --- first-order quantifiers ------------------------------------------------

    def guards(self, f, x):
        """Atoms that restrict x: conjuncts of an exists body or forall antecedent."""
        key = (id(f), x)
        r = self._guards.get(key)
        if r is None:
            body = f.body if isinstance(f, (Exists, Forall)) else f
            if isinstance(f, Forall):
                if isinstance(body, Implies):
                    parts = body.a.args if isinstance(body.a, And) else (body.a,)
                elif isinstance(body, Or):
                    parts = tuple(g.f for g in body.args if isinstance(g, Not))
                else:
                    parts = ()
            else:
                parts = body.args if isinstance(body, And) else (body,)
            r = []
            for g in parts:
                if isinstance(g, (Adj, Eq)) and g.lhs != g.rhs and x in (g.lhs, g.rhs):
                    r.append((type(g) is Adj, g.rhs if g.lhs == x else g.lhs))
            self._guards[key] = r
        return r

    def candidates(self, x, guards, env):
        best = None
        for is_adj, t in guards:
            tv = env.get(t)
            if tv is None:
                continue
            c = self.nbrs[tv] if is_adj else [tv]
            if best is None or len(c) < len(best):
                best = c
        pool = self.restrict.get(x)
        if best is None:
            return self.all if pool is None else pool
        if pool is not None:
            allowed = set(pool)
            best = [c for c in best if c in allowed]
        return best

    def _loop(self, x, body, env, exists, node):
        cands = self.candidates(x, self.guards(node, x), env)
        env2 = dict(env)
        unknown = False
        for c in cands:
            env2[x] = c
            r = self.ev(body, env2)
            if r is exists:
                return exists
            if r is None:
                unknown = True
        return None if unknown else not exists

    def _block(self, xs, body, env):
        env2 = dict(env)
        for v in xs:
            env2.pop(v, None)
        doms = {v: list(self.candidates(v, self.guards(body, v), env2)) for v in xs}
        return self._dfs(list(xs), doms, body, env2)

    def _dfs(self, unassigned, doms, body, env):
        if not unassigned:
            return self.ev(body, env)
        self._tick()
        filtered = {}
        for u in unassigned:
            keep = []
            for c in doms[u]:
                env[u] = c
                r = self.ev(body, env)
                if r is True:  # forced for every completion
                    return True
                if r is None:
                    keep.append(c)
            env.pop(u, None)
            if not keep:
                return False
            filtered[u] = keep
        u = min(unassigned, key=lambda v: len(filtered[v]))
        rest = [v for v in unassigned if v != u]
        for c in filtered[u]:
            env[u] = c
            if self._dfs(rest, filtered, body, env):
                return True
        del env[u]
        return False

    # --- Lindström quantifiers ------------------------------------------------

    def _table(self, f, names, rows, cols, env):
        """Boolean matrix f(rows[i] -> names[0], cols[j] -> names[1]) over tuples."""
        env2 = dict(env)
        out = np.zeros((len(rows), len(cols)), bool)
        for i, r in enumerate(rows):
            env2.update(zip(names[0], r))
            for j, c in enumerate(cols):
                env2.update(zip(names[1], c))
                out[i, j] = self.ev(f, env2)
        return out

    def _mask(self, f, names, elems, env):
        env2 = dict(env)
        out = np.zeros(len(elems), bool)
        for i, e in enumerate(elems):
            env2.update(zip(names, e))
            out[i] = self.ev(f, env2)
        return out

    def _qweak(self, f, env):
        pts = [(v,) for v in self.all]
        edge = self._table(f.edge, ((f.x,), (f.y,)), pts, pts, env)
        return derived.holds(f.name, derived.weak_graph(edge).adj, self.caps)

    def _qrel(self, f, env):
        kept = [(v,) for v in self.all]
        kept = [k for k, m in zip(kept, self._mask(f.dom, (f.v,), kept, env)) if m]
        edge = self._table(f.edge, ((f.x,), (f.y,)), kept, kept, env)
        dg = derived.relativized_graph([k[0] for k in kept], edge)
        return derived.holds(f.name, dg.adj, self.caps)

    def _qeq(self, f, env):
        kept = [(v,) for v in self.all]
        kept = [k for k, m in zip(kept, self._mask(f.dom, (f.v,), kept, env)) if m]
        eq = self._table(f.eq, ((f.u,), (f.w,)), kept, kept, env)
        edge = self._table(f.edge, ((f.x,), (f.y,)), kept, kept, env)
        dg = derived.quotient_graph([k[0] for k in kept], eq, edge, "eq")
        return derived.holds(f.name, dg.adj, self.caps)

    def _qtu(self, f, env):
        if self.n ** f.l > self.caps.tuple_domain:
            raise CapExceeded(f"Qtu: n^l = {self.n}^{f.l} exceeds cap {self.caps.tuple_domain}")
        tuples = list(itertools.product(self.all, repeat=f.l))
        kept = [t for t, m in zip(tuples, self._mask(f.dom, f.vbar, tuples, env)) if m]
        eq = self._table(f.eq, (f.ubar, f.wbar), kept, kept, env)
        edge = self._table(f.edge, (f.xbar, f.ybar), kept, kept, env)
        dg = derived.quotient_graph(kept, eq, edge, "tu")
        return derived.holds(f.name, dg.adj, self.caps)

    # --- extras -----------------------------------------------------------------------

    def trace_json(self) -> list:
        return [{"formula": to_text(f), "env": e, "value": v} for f, e, v in (self.trace or [])]


def evaluate(g: Graph, f, env: Env | None = None, caps: Caps = DEFAULT_CAPS,
             method: str = "recursive") -> bool:
    """Truth of f in g under env (``method`` is "recursive" or "tensor")."""
    if method == "tensor":
        from .tensor_eval import TensorEvaluator
        return TensorEvaluator(g, caps).eval(f, env)
    return Evaluator(g, caps).eval(f, env)


def eval_qrl(g: Graph, name, v: str, dom, x: str, y: str, edge, env: Env | None = None,
             caps: Caps = DEFAULT_CAPS) -> bool:
    return Evaluator(g, caps).eval(QRel(name, v, dom, x, y, edge), env)


def eval_qtu(g: Graph, name, l: int, vbar, dom, ubar, wbar, eq, xbar, ybar, edge,
             env: Env | None = None, caps: Caps = DEFAULT_CAPS) -> bool:
    f = QTu(name, l, tuple(vbar), dom, tuple(ubar), tuple(wbar), eq, tuple(xbar), tuple(ybar), edge)
    return Evaluator(g, caps).eval(f, env)


def definable_set(g: Graph, f, free: str, env: Env | None = None,
                  caps: Caps = DEFAULT_CAPS, evaluator: Evaluator | None = None) -> frozenset:
    """{a | g |= f(a)} with ``free`` ranging over the vertices."""
    ev = evaluator or Evaluator(g, caps)
    env = dict(env or {})
    out = []
    for a in range(g.n):
        env[free] = a
        if ev.eval(f, env):
            out.append(a)
    return frozenset(out)
