"""Vectorised evaluator: one numpy axis per variable.

Every variable of the formula owns an axis; the value of a subformula is
a boolean array with extent ``n`` on the axes of its unfixed free
variables and extent 1 elsewhere, so connectives are broadcasting
operations and quantifiers are reductions.  When an array would exceed
``budget`` elements, or when a Lindström quantifier depends on the bound
variable, the quantifier instead loops over vertex values with early
exit.  Lindström nodes are always evaluated at fixed parameter values and
memoised on them.
"""
from __future__ import annotations

import itertools

import numpy as np

from . import derived
from .errors import CapExceeded
from .formula import (LINDSTROM, _ATOMS, Adj, And, Eq, Exists, Forall, Implies, Not, Or, QEq,
                      QRel, QTu, QWeak, TrueF, all_vars, atom_vars, scopes)
from .graph import DEFAULT_CAPS, Caps, Graph


class TensorEvaluator:
    def __init__(self, g: Graph, caps: Caps = DEFAULT_CAPS, budget: int = 1 << 22):
        self.g = g
        self.n = g.n
        self.caps = caps
        self.budget = budget
        self.adj = g.adj.astype(bool)
        self.eye = np.eye(g.n, dtype=bool)
        self.axis: dict[str, int] = {}
        self.memo: dict = {}
        self._fv: dict[int, tuple] = {}
        self._lf: dict = {}
        self._nested: dict[int, object] = {}

    # --- helpers ------------------------------------------------------------

    def fv(self, f) -> frozenset:
        r = self._fv.get(id(f))
        if r is None:
            if isinstance(f, _ATOMS):
                s = frozenset(atom_vars(f))
            else:
                s = frozenset()
                for bound, g in scopes(f):
                    s |= self.fv(g) - set(bound)
            r = (f, s)
            self._fv[id(f)] = r
        return r[1]

    def lind_free(self, f, x) -> bool:
        """Does x occur free inside some Lindström subformula of f?"""
        key = (id(f), x)
        r = self._lf.get(key)
        if r is None:
            if isinstance(f, LINDSTROM) and x in self.fv(f):
                r = True
            else:
                r = any(x not in b and self.lind_free(g, x) for b, g in scopes(f))
            self._lf[key] = r
        return r

    @property
    def ndim(self) -> int:
        return len(self.axis)

    def scalar(self, value: bool) -> np.ndarray:
        return np.full((1,) * self.ndim, bool(value))

    def _vec(self, v: np.ndarray, name: str) -> np.ndarray:
        shape = [1] * self.ndim
        shape[self.axis[name]] = self.n
        return v.reshape(shape)

    def _mat(self, m: np.ndarray, a: str, b: str) -> np.ndarray:
        ia, ib = self.axis[a], self.axis[b]
        shape = [1] * self.ndim
        shape[ia] = shape[ib] = self.n
        return (m if ia < ib else m.T).reshape(shape)

    def _size(self, names) -> int:
        return self.n ** len(names)

    # --- entry ---------------------------------------------------------------

    def eval(self, f, env: dict | None = None) -> bool:
        env = dict(env or {})
        missing = self.fv(f) - env.keys()
        if missing:
            raise ValueError(f"unbound free variables: {sorted(missing)}")
        for v in sorted(all_vars(f) | env.keys()):
            self.axis.setdefault(v, len(self.axis))
        return bool(self.T(f, env).reshape(-1)[0])

    def table(self, f, names, env) -> np.ndarray:
        """f as an array of shape (n,)*len(names), axes in the order of names."""
        for v in sorted(all_vars(f)) + list(names):
            self.axis.setdefault(v, len(self.axis))
        env = {k: v for k, v in env.items() if k not in names}
        names = tuple(names)
        if not names:
            return np.asarray(self.T(f, env).reshape(-1)[0])
        if self._size(names) > self.budget:
            first, rest = names[0], names[1:]
            rows = []
            for i in range(self.n):
                env[first] = i
                rows.append(self.table(f, rest, env))
            return np.stack(rows) if rows else np.zeros((0,) * len(names), bool)
        arr = self.T(f, env)
        shape = list(arr.shape)
        for v in names:
            shape[self.axis[v]] = self.n
        arr = np.broadcast_to(arr, shape)
        idx = tuple(slice(None) if any(self.axis[v] == a for v in names) else 0
                    for a in range(self.ndim))
        arr = arr[idx]
        order = sorted(names, key=lambda v: self.axis[v])
        return np.transpose(arr, [order.index(v) for v in names])

    # --- core ----------------------------------------------------------------------

    def T(self, f, env) -> np.ndarray:
        t = type(f)
        if t is Adj or t is Eq:
            a, b = f.lhs, f.rhs
            if a == b:
                return self.scalar(t is Eq)
            m = self.adj if t is Adj else self.eye
            av, bv = env.get(a), env.get(b)
            if av is not None and bv is not None:
                return self.scalar(m[av, bv])
            if av is not None:
                return self._vec(m[av], b)
            if bv is not None:
                return self._vec(m[:, bv], a)
            return self._mat(m, a, b)
        if t is TrueF:
            return self.scalar(True)
        if t is Not:
            return ~self.T(f.f, env)
        if t is And:
            r = None
            for g in f.args:
                c = self.T(g, env)
                r = c if r is None else r & c
                if not r.any():
                    return self.scalar(False)
            return r
        if t is Or:
            r = None
            for g in f.args:
                c = self.T(g, env)
                r = c if r is None else r | c
                if r.all():
                    return self.scalar(True)
            return r
        if t is Implies:
            a = self.T(f.a, env)
            if a.all():
                return self.T(f.b, env)
            if not a.any():
                return self.scalar(True)
            return ~a | self.T(f.b, env)
        if t is Exists or t is Forall:
            if len(f.vars) > 1:
                nested = self._nested.get(id(f))
                if nested is None:
                    nested = f.body
                    for v in reversed(f.vars):
                        nested = t((v,), nested)
                    self._nested[id(f)] = (f, nested)
                else:
                    nested = nested[1]
                return self.T(nested, env)
            return self._quant(f.vars[0], f.body, env, t is Exists)
        if isinstance(f, LINDSTROM):
            return self._lindstrom(f, env)
        raise TypeError(f"cannot evaluate {type(f).__name__} on a graph")

    def _quant(self, x, body, env, exists: bool) -> np.ndarray:
        env2 = {k: v for k, v in env.items() if k != x}
        if self.n == 0:
            return self.scalar(not exists)
        open_vars = self.fv(body) - env2.keys()
        if x not in open_vars:
            return self.T(body, env2)
        if self._size(open_vars) <= self.budget and not self.lind_free(body, x):
            r = self.T(body, env2)
            ax = self.axis[x]
            return r.any(axis=ax, keepdims=True) if exists else r.all(axis=ax, keepdims=True)
        acc = None
        for i in range(self.n):
            env2[x] = i
            r = self.T(body, env2)
            acc = r if acc is None else (acc | r if exists else acc & r)
            if exists and acc.all():
                break
            if not exists and not acc.any():
                break
        return acc

    # --- Lindström -------------------------------------------------------------------

    def _lindstrom(self, f, env) -> np.ndarray:
        params = sorted(self.fv(f), key=lambda v: self.axis[v])
        unfixed = [p for p in params if p not in env]
        if unfixed:
            out = np.zeros([self.n if a in [self.axis[p] for p in unfixed] else 1
                            for a in range(self.ndim)], bool)
            env2 = dict(env)
            for vals in itertools.product(range(self.n), repeat=len(unfixed)):
                env2.update(zip(unfixed, vals))
                idx = [0] * self.ndim
                for p, v in zip(unfixed, vals):
                    idx[self.axis[p]] = v
                out[tuple(idx)] = self._lindstrom(f, env2).reshape(-1)[0]
            return out
        key = (id(f),) + tuple(env[p] for p in params)
        r = self.memo.get(key)
        if r is None:
            r = self._decide(f, {p: env[p] for p in params})
            self.memo[key] = r
        return self.scalar(r)

    def _decide(self, f, env) -> bool:
        n = self.n
        if isinstance(f, QWeak):
            edge = self.table(f.edge, (f.x, f.y), env)
            return derived.holds(f.name, derived.weak_graph(edge).adj, self.caps)
        if isinstance(f, (QRel, QEq)):
            mask = self.table(f.dom, (f.v,), env).reshape(n)
            kept = np.flatnonzero(mask)
            edge = self.table(f.edge, (f.x, f.y), env)[np.ix_(kept, kept)]
            if isinstance(f, QRel):
                dg = derived.relativized_graph(kept.tolist(), edge)
            else:
                eq = self.table(f.eq, (f.u, f.w), env)[np.ix_(kept, kept)]
                dg = derived.quotient_graph(kept.tolist(), eq, edge, "eq")
            return derived.holds(f.name, dg.adj, self.caps)
        if isinstance(f, QTu):
            l = f.l
            if n ** l > self.caps.tuple_domain:
                raise CapExceeded(f"Qtu: n^l = {n}^{l} exceeds cap {self.caps.tuple_domain}")
            mask = self.table(f.dom, f.vbar, env).reshape(-1)
            kept = np.flatnonzero(mask)
            tuples = [tuple(int(c) for c in np.unravel_index(k, (n,) * l)) for k in kept]
            eq = self._pair_table(f.eq, f.ubar, f.wbar, tuples, kept, env)
            edge = self._pair_table(f.edge, f.xbar, f.ybar, tuples, kept, env)
            dg = derived.quotient_graph(tuples, eq, edge, "tu")
            return derived.holds(f.name, dg.adj, self.caps)
        raise TypeError(type(f).__name__)

    def _pair_table(self, f, left, right, tuples, kept, env):
        out = np.zeros((len(tuples), len(tuples)), bool)
        env2 = dict(env)
        for i, t in enumerate(tuples):
            env2.update(zip(left, t))
            out[i] = self.table(f, right, env2).reshape(-1)[kept]
        return out
