"""Brute-force truth of second-order sentences on a small finite set.

This is the independent oracle for the encoder: it never looks at the
graph encoding.  Relation variables are searched tuple by tuple.  A
partially assigned relation makes atoms on unassigned tuples unknown, and
formulas are evaluated in Kleene's three-valued logic, so a search node is
closed as soon as the body is forced.  Before branching, every open tuple
whose two values are tested (failed-literal propagation) is fixed when one
value already falsifies the body.
"""
from __future__ import annotations

import itertools

from .errors import CapExceeded
from .formula import (Adj, And, Eq, Exists, ExistsRel, ExistsSet, Forall, Implies, Member, Not, Or,
                      Rel, TrueF, free_relvars)


class SOEvaluator:
    def __init__(self, universe, adjacent=None, max_tuples: int = 64):
        self.U = list(universe)
        self.adjacent = adjacent or (lambda a, b: False)
        self.max_tuples = max_tuples

    def truth(self, f) -> bool:
        r = self.ev(f, {}, {})
        assert r is not None
        return r

    def ev(self, f, fo: dict, rel: dict):
        t = type(f)
        if t is Eq:
            return fo[f.lhs] == fo[f.rhs]
        if t is Adj:
            return f.lhs != f.rhs and fo[f.lhs] != fo[f.rhs] and bool(self.adjacent(fo[f.lhs], fo[f.rhs]))
        if t is TrueF:
            return True
        if t is Member:
            return rel[f.rel][1].get((fo[f.x],))
        if t is Rel:
            return rel[f.rel][1].get(tuple(fo[a] for a in f.args))
        if t is Not:
            r = self.ev(f.f, fo, rel)
            return None if r is None else not r
        if t is And or t is Or:
            stop = t is Or
            unknown = False
            for g in f.args:
                r = self.ev(g, fo, rel)
                if r is stop:
                    return stop
                if r is None:
                    unknown = True
            return None if unknown else not stop
        if t is Implies:
            a = self.ev(f.a, fo, rel)
            if a is False:
                return True
            b = self.ev(f.b, fo, rel)
            if b is True:
                return True
            return False if (a is True and b is False) else None
        if t is Exists or t is Forall:
            return self._fo_quant(f.vars, f.body, fo, rel, t is Exists)
        if t is ExistsSet or t is ExistsRel:
            k = 1 if t is ExistsSet else f.arity
            # an inner search is only meaningful once its context is fully known
            for r in free_relvars(f):
                arity, part = rel[r]
                if len(part) < len(self.U) ** arity:
                    return None
            return self._search(f.rel, k, f.body, fo, rel)
        raise TypeError(f"not an SO formula node: {type(f).__name__}")

    def _fo_quant(self, vs, body, fo, rel, exists):
        unknown = False
        fo2 = dict(fo)
        for vals in itertools.product(self.U, repeat=len(vs)):
            fo2.update(zip(vs, vals))
            r = self.ev(body, fo2, rel)
            if r is exists:
                return exists
            if r is None:
                unknown = True
        return None if unknown else not exists

    def _search(self, name, k, body, fo, rel):
        tuples = list(itertools.product(self.U, repeat=k))
        if len(tuples) > self.max_tuples:
            raise CapExceeded(f"relation {name} has {len(tuples)} tuples, cap {self.max_tuples}")
        part: dict = {}
        rel2 = dict(rel)
        rel2[name] = (k, part)
        return self._dfs(tuples, part, body, fo, rel2)

    def _dfs(self, tuples, part, body, fo, rel):
        r = self.ev(body, fo, rel)
        if r is not None:
            return r
        fixed = []
        changed = True
        while changed:
            changed = False
            for t in tuples:
                if t in part:
                    continue
                part[t] = True
                r1 = self.ev(body, fo, rel)
                part[t] = False
                r0 = self.ev(body, fo, rel)
                del part[t]
                if r1 is True or r0 is True:
                    self._undo(part, fixed)
                    return True
                if r1 is False and r0 is False:
                    self._undo(part, fixed)
                    return False
                if r1 is False or r0 is False:
                    part[t] = r1 is not False
                    fixed.append(t)
                    changed = True
        r = self.ev(body, fo, rel)
        if r is not None:
            self._undo(part, fixed)
            return r
        t = next(t for t in tuples if t not in part)
        for val in (True, False):
            part[t] = val
            if self._dfs(tuples, part, body, fo, rel):
                del part[t]
                self._undo(part, fixed)
                return True
            del part[t]
        self._undo(part, fixed)
        return False

    @staticmethod
    def _undo(part, fixed):
        for t in fixed:
            part.pop(t, None)


def so_truth(f, universe, adjacent=None) -> bool:
    """Truth of the SO sentence f on the set ``universe``."""
    return SOEvaluator(universe, adjacent).truth(f)
