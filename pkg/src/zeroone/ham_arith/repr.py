"""Powerset-representation certificates and the synthetic witness graph."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import CapExceeded
from ..formula import Adj
from ..graph import Graph
from .setdef import SetDef

MAX_S = 20


@dataclass
class ReprCertificate:
    kind: str  # "PowersetRepr" | "DoublePowersetRepr"
    S: tuple
    B: tuple = ()
    missing: list = field(default_factory=list)
    f_value: int = 0
    problems: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.missing and not self.problems

    def to_json(self) -> dict:
        return {"kind": self.kind, "valid": self.valid, "S": list(self.S), "B": list(self.B),
                "missing": [list(m) for m in self.missing], "f_value": self.f_value,
                "problems": list(self.problems)}


def _realised(g: Graph, S: list, pool) -> set:
    """Bitmasks (bit i = S[i]) of N(v, S) over v in pool."""
    pool = np.asarray(sorted(pool), dtype=np.int64)
    if not len(S) or not len(pool):
        return {0} if len(pool) else set()
    if isinstance(g, Graph):
        sub = g.adj[np.ix_(pool, np.asarray(S))].astype(np.int64)
    else:  # packed sample: rows of S are its columns
        sub = np.stack([g.row(s)[pool] for s in S], axis=1).astype(np.int64)
    masks = sub @ (np.int64(1) << np.arange(len(S), dtype=np.int64))
    return set(np.unique(masks).tolist())


def _subsets(S, masks):
    return [tuple(S[i] for i in range(len(S)) if m >> i & 1) for m in masks]


def check_powerset_repr(g, S, exclude_S: bool = False) -> ReprCertificate:
    """Is every A subset of S equal to N(v, S) for some witness v?

    ``g`` is a Graph or a PackedGnp sample.
    """
    S = sorted(set(int(s) for s in S))
    if len(S) > MAX_S:
        raise CapExceeded(f"|S| = {len(S)} exceeds {MAX_S}")
    pool = set(range(g.n)) - (set(S) if exclude_S else set())
    have = _realised(g, S, pool)
    missing = [m for m in range(1 << len(S)) if m not in have]
    return ReprCertificate("PowersetRepr", tuple(S), (), _subsets(S, missing), 0)


def check_double_powerset_repr(g: Graph, phi0: SetDef, phi1: SetDef, caps=None) -> ReprCertificate:
    """Double powerset representation with S = phi0 and B = {x in S | phi1}.

    Checks that S is represented by V, that B is a nonempty subset of S and
    that every subset of B is N(v, S) for some v in S.
    """
    S = sorted(phi0.members(g, caps))
    if len(S) > MAX_S:
        raise CapExceeded(f"|S| = {len(S)} exceeds {MAX_S}")
    B = sorted(set(S) & phi1.members(g, caps))
    problems = []
    if not B:
        problems.append("B is empty")
    have_v = _realised(g, S, range(g.n))
    missing = [m for m in range(1 << len(S)) if m not in have_v]
    have_s = _realised(g, S, S)
    pos = {s: i for i, s in enumerate(S)}
    for mb in range(1 << len(B)):
        m = sum(1 << pos[B[i]] for i in range(len(B)) if mb >> i & 1)
        if m not in have_s:
            missing.append(m)
    missing = sorted(set(missing))
    return ReprCertificate("DoublePowersetRepr", tuple(S), tuple(B), _subsets(S, missing),
                           len(B), problems)


@dataclass(frozen=True)
class Testbed:
    graph: Graph
    m_S: int
    m_B: int
    B: tuple
    P: tuple

    @property
    def S(self) -> tuple:
        return self.B + self.P

    @property
    def env(self) -> dict:
        return {"mS": self.m_S, "mB": self.m_B}

    def phi0(self, var: str = "x") -> SetDef:
        return SetDef(Adj(var, "mS"), var, (("mS", self.m_S),))

    def phi1(self, var: str = "x") -> SetDef:
        return SetDef(Adj(var, "mB"), var, (("mB", self.m_B),))

    def __iter__(self):
        return iter((self.graph, self.m_S, self.m_B))


def build_testbed(b: int, inner_edges=()) -> Testbed:
    """A graph with a double powerset representation of a b-element set.

    Layout: B = 0..b-1 (independent), then p_A with N(p_A, S) = A for each
    A subset of B, then w_T with N(w_T, S) = T for each T subset of
    S = B + P, then the markers m_S (adjacent to exactly S) and m_B.
    ``inner_edges`` optionally adds edges inside B, so that G[B] is not
    edgeless.
    """
    if not 1 <= b <= 3:
        raise ValueError(f"testbed size b must be in 1..3, got {b}")
    B = list(range(b))
    P = list(range(b, b + (1 << b)))
    S = B + P
    W = list(range(len(S), len(S) + (1 << len(S))))
    mS, mB = W[-1] + 1, W[-1] + 2
    n = mB + 1
    adj = np.zeros((n, n), dtype=np.uint8)
    for a, p in enumerate(P):
        for i in range(b):
            if a >> i & 1:
                adj[p, B[i]] = 1
    for t, w in enumerate(W):
        for i, s in enumerate(S):
            if t >> i & 1:
                adj[w, s] = 1
    for u, v in inner_edges:
        if u == v or not (0 <= u < b and 0 <= v < b):
            raise ValueError(f"inner edge ({u}, {v}) is not a pair of base vertices")
        adj[u, v] = 1
    adj[mS, S] = 1
    adj[mB, B] = 1
    adj = adj | adj.T
    return Testbed(Graph(adj), mS, mB, tuple(B), tuple(P))
