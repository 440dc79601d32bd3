"""Limiting truth values of weak-variant sentences with Conn and Chr(k) quantifiers.

The decider runs the quantifier-elimination induction over parameter
configurations.  A configuration records which parameters coincide and
which of the resulting blocks are adjacent.  Vertices outside the
parameters fall into one linear-size class per adjacency pattern towards
the blocks.  ``exists`` ranges over classes.  A Lindström quantifier
tabulates the limit value of its edge formula on class pairs, builds the
quotient graph H and applies the connectivity or chromatic rule.  The
edge probability p is never consulted.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import SemanticsViolation, UnsupportedFragment
from .formula import (Adj, And, Eq, Exists, Forall, Implies, Not, Or, QEq, QRel, QTu, QWeak,
                      TrueF, free_vars, to_text, walk)
from .graph import Graph, chromatic_number, is_connected

ALWAYS_FALSE = "AlwaysFalse"
ALWAYS_TRUE = "AlwaysTrue"
AGREES = "AgreesWithAdjacency"
DISAGREES = "DisagreesWithAdjacency"


@dataclass(frozen=True)
class ParamConfig:
    params: tuple = ()
    blocks: tuple = ()  # block index of each parameter, numbered by first occurrence
    adjacent: frozenset = frozenset()  # pairs (i, j), i < j, of adjacent blocks

    def __post_init__(self):
        if len(self.params) != len(self.blocks) or len(set(self.params)) != len(self.params):
            raise ValueError("params and blocks must align and params must be distinct")
        seen = []
        for b in self.blocks:
            if b not in seen:
                if b != len(seen):
                    raise ValueError("blocks must be numbered by first occurrence")
                seen.append(b)
        for i, j in self.adjacent:
            if not (0 <= i < j < self.nblocks):
                raise ValueError(f"bad adjacent block pair ({i}, {j})")

    @property
    def nblocks(self) -> int:
        return max(self.blocks) + 1 if self.blocks else 0

    def block_of(self, v: str) -> int:
        try:
            return self.blocks[self.params.index(v)]
        except ValueError:
            raise ValueError(f"variable {v} is not a parameter of the configuration") from None

    def block_adj(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.adjacent

    def eq(self, a: str, b: str) -> bool:
        return self.block_of(a) == self.block_of(b)

    def adj(self, a: str, b: str) -> bool:
        i, j = self.block_of(a), self.block_of(b)
        return i != j and self.block_adj(i, j)

    def restrict(self, names) -> "ParamConfig":
        keep = [k for k, p in enumerate(self.params) if p in names]
        renum = {}
        for k in keep:
            renum.setdefault(self.blocks[k], len(renum))
        adjacent = frozenset((min(renum[i], renum[j]), max(renum[i], renum[j]))
                             for i, j in self.adjacent if i in renum and j in renum)
        return ParamConfig(tuple(self.params[k] for k in keep),
                           tuple(renum[self.blocks[k]] for k in keep), adjacent)

    def join(self, v: str, block: int) -> "ParamConfig":
        if v in self.params or not 0 <= block < self.nblocks:
            raise ValueError("join expects a new variable and an existing block")
        return ParamConfig(self.params + (v,), self.blocks + (block,), self.adjacent)

    def fresh(self, v: str, pattern: tuple) -> "ParamConfig":
        if v in self.params or len(pattern) != self.nblocks:
            raise ValueError("fresh expects a new variable and one adjacency bit per block")
        b = self.nblocks
        adjacent = self.adjacent | {(i, b) for i, bit in enumerate(pattern) if bit}
        return ParamConfig(self.params + (v,), self.blocks + (b,), frozenset(adjacent))

    def describe(self) -> dict:
        return {"params": list(self.params), "blocks": list(self.blocks),
                "adjacent": sorted(list(p) for p in self.adjacent)}

    @classmethod
    def all_configs(cls, params) -> list["ParamConfig"]:
        """Every complete configuration of the given parameters."""
        params = tuple(params)
        out = []
        for blocks in _set_partitions(len(params)):
            nb = max(blocks) + 1 if blocks else 0
            pairs = list(itertools.combinations(range(nb), 2))
            for bits in itertools.product((0, 1), repeat=len(pairs)):
                out.append(cls(params, blocks, frozenset(p for p, b in zip(pairs, bits) if b)))
        return out


def _set_partitions(k: int):
    """Restricted growth strings of length k."""
    if k == 0:
        yield ()
        return
    for rest in _set_partitions(k - 1):
        top = max(rest) + 1 if rest else 0
        for b in range(top + 1):
            yield rest + (b,)


# --- classes ------------------------------------------------------------------

@dataclass(frozen=True)
class VClass:
    kind: str  # "Singleton" | "Linear"
    block: int | None = None
    pattern: tuple | None = None

    def __str__(self):
        if self.kind == "Singleton":
            return f"S{self.block}"
        return "L" + "".join(map(str, self.pattern))


@dataclass(frozen=True)
class ClassSystem:
    classes: tuple

    @classmethod
    def of(cls, cfg: ParamConfig) -> "ClassSystem":
        sing = [VClass("Singleton", block=j) for j in range(cfg.nblocks)]
        lin = [VClass("Linear", pattern=p) for p in itertools.product((0, 1), repeat=cfg.nblocks)]
        return cls(tuple(sing + lin))


def bind(cfg: ParamConfig, v: str, c: VClass) -> ParamConfig:
    if c.kind == "Singleton":
        return cfg.join(v, c.block)
    return cfg.fresh(v, c.pattern)


def pair_combos(cfg: ParamConfig, c1: VClass, c2: VClass):
    """Legal (equal, adjacent) flags for y1 in c1, y2 in c2."""
    if c1.kind == "Singleton" and c2.kind == "Singleton":
        if c1.block == c2.block:
            return [(True, False)]
        return [(False, cfg.block_adj(c1.block, c2.block))]
    if c1.kind == "Singleton":
        return [(False, bool(c2.pattern[c1.block]))]
    if c2.kind == "Singleton":
        return [(False, bool(c1.pattern[c2.block]))]
    if c1 == c2:
        return [(True, False), (False, False), (False, True)]
    return [(False, False), (False, True)]


def bind_pair(cfg: ParamConfig, x: str, y: str, c1: VClass, c2: VClass, equal: bool, adjacent: bool):
    cfg2 = bind(cfg, x, c1)
    bx = cfg2.block_of(x)
    if equal:
        return cfg2.join(y, bx)
    if c2.kind == "Singleton":
        return cfg2.join(y, c2.block)
    pattern = c2.pattern + ((int(adjacent),) if c1.kind == "Linear" else ())
    return cfg2.fresh(y, pattern)


@dataclass
class QuotientH:
    classes: tuple
    edges: set  # frozensets of class indices; singletons are loops
    internal: dict  # linear class index -> pattern name

    def simple_graph(self) -> Graph:
        return Graph.from_edges(len(self.classes), [tuple(e) for e in self.edges if len(e) == 2])

    def has_loop(self, i: int) -> bool:
        return frozenset({i}) in self.edges


def build_quotient(classes: tuple, table: dict) -> QuotientH:
    """H from a pair-verdict table {(i, j, equal, adjacent): 0|1}."""
    edges = set()
    for (i, j, _, _), val in table.items():
        if val:
            edges.add(frozenset({i, j}))
    internal = {}
    for i, c in enumerate(classes):
        if c.kind == "Linear":
            v0, v1 = table[(i, i, False, False)], table[(i, i, False, True)]
            internal[i] = {(0, 0): ALWAYS_FALSE, (1, 1): ALWAYS_TRUE,
                           (0, 1): AGREES, (1, 0): DISAGREES}[(v0, v1)]
    return QuotientH(classes, edges, internal)


def conn_rule(H: QuotientH, cfg: ParamConfig) -> int:
    if cfg.nblocks == 0:
        (pattern,) = H.internal.values()
        return 0 if pattern == ALWAYS_FALSE else 1
    return int(is_connected(H.simple_graph()))


def chr_rule(H: QuotientH, k: int, cfg: ParamConfig) -> int:
    if any(p != ALWAYS_FALSE for p in H.internal.values()):
        return 0  # some class spans a clique or a random graph: chromatic number diverges
    return int(chromatic_number(H.simple_graph()) == k)


def check_pair_table(classes: tuple, table: dict, formula_text: str):
    for (i, j, e, a), val in table.items():
        if e and val:
            raise SemanticsViolation(
                f"edge formula of {formula_text} is a.a.s. reflexive on class {classes[i]}")
        if table.get((j, i, e, a)) != val:
            raise SemanticsViolation(
                f"edge formula of {formula_text} is a.a.s. asymmetric on classes "
                f"{classes[i]}, {classes[j]}")


# --- traces --------------------------------------------------------------------

@dataclass
class TraceNode:
    rule: str
    node: object
    cfg: ParamConfig
    value: int
    children: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def recompute(self) -> int:
        """Re-derive the value from the children and the recorded rule."""
        kids = [c.recompute() for c in self.children]
        r = self.rule
        if r in ("atom", "true"):
            return self.value
        if r == "not":
            return 1 - kids[0]
        if r == "and":
            return min(kids)
        if r == "or":
            return max(kids)
        if r == "implies":
            return max(1 - kids[0], kids[1])
        if r == "exists":
            return max(kids)
        if r == "forall":
            return min(kids)
        if r in ("conn", "chr"):
            classes = self.extra["classes"]
            table = {tuple(c.extra["pair"]): v for c, v in zip(self.children, kids)}
            H = build_quotient(classes, table)
            if r == "conn":
                return conn_rule(H, self.cfg)
            return chr_rule(H, self.extra["k"], self.cfg)
        raise ValueError(f"unknown rule {r}")

    def to_json(self, depth: int = 6) -> dict:
        out = {"rule": self.rule, "formula": to_text(self.node), "config": self.cfg.describe(),
               "value": self.value}
        for k, v in self.extra.items():
            if k == "classes":
                out[k] = [str(c) for c in v]
            elif k == "H":
                out[k] = {"edges": sorted(sorted(map(int, e)) for e in v.edges),
                          "internal": {str(v.classes[i]): p for i, p in v.internal.items()}}
            else:
                out[k] = v
        if self.rule in ("conn", "chr"):
            out["pair_verdicts"] = [
                {"y1": str(self.extra["classes"][c.extra["pair"][0]]),
                 "y2": str(self.extra["classes"][c.extra["pair"][1]]),
                 "equal": c.extra["pair"][2], "adjacent": c.extra["pair"][3], "value": c.value}
                for c in self.children]
        if depth > 0 and self.rule not in ("conn", "chr"):
            out["children"] = [c.to_json(depth - 1) for c in self.children]
        elif depth > 0:
            out["children"] = [c.to_json(depth - 1) for c in self.children if c.value]
        return out


@dataclass
class LimitVerdict:
    value: int
    trace: TraceNode

    def to_json(self, depth: int = 6) -> dict:
        return {"verdict": self.value, "trace": self.trace.to_json(depth)}


def _relabel(t: TraceNode, extra: dict) -> TraceNode:
    """Copy of a (possibly shared) trace node with extra annotations."""
    return TraceNode(t.rule, t.node, t.cfg, t.value, t.children, {**t.extra, **extra})


# --- the induction -------------------------------------------------------------------

class _Decider:
    def __init__(self):
        self.memo: dict = {}
        self._fv: dict = {}
        self._split: dict = {}

    def fv(self, f):
        r = self._fv.get(id(f))
        if r is None:
            r = (f, free_vars(f))
            self._fv[id(f)] = r
        return r[1]

    def run(self, f, cfg: ParamConfig) -> TraceNode:
        key = (id(f), cfg)
        r = self.memo.get(key)
        if r is None:
            r = self._run(f, cfg)
            self.memo[key] = r
        return r

    def _run(self, f, cfg: ParamConfig) -> TraceNode:
        match f:
            case Eq(a, b):
                return TraceNode("atom", f, cfg, int(a == b or cfg.eq(a, b)))
            case Adj(a, b):
                return TraceNode("atom", f, cfg, int(a != b and cfg.adj(a, b)))
            case TrueF():
                return TraceNode("true", f, cfg, 1)
            case Not(g):
                c = self.run(g, cfg)
                return TraceNode("not", f, cfg, 1 - c.value, [c])
            case And(args) | Or(args):
                kids, val = [], None
                for g in args:
                    c = self.run(g, cfg)
                    kids.append(c)
                    val = c.value if val is None else (min if isinstance(f, And) else max)(val, c.value)
                rule = "and" if isinstance(f, And) else "or"
                return TraceNode(rule, f, cfg, val, kids)
            case Implies(a, b):
                ca, cb = self.run(a, cfg), self.run(b, cfg)
                return TraceNode("implies", f, cfg, max(1 - ca.value, cb.value), [ca, cb])
            case Exists(vs, body) | Forall(vs, body):
                exists = isinstance(f, Exists)
                if len(vs) > 1:
                    split = self._split.get(id(f))
                    if split is None:
                        split = self._split[id(f)] = (f, type(f)(tuple(vs[1:]), body))
                    return self.run_quant(f, vs[0], split[1], cfg, exists)
                return self.run_quant(f, vs[0], body, cfg, exists)
            case QWeak(name, x, y, edge):
                return self.run_lindstrom(f, name, x, y, edge, cfg)
        raise UnsupportedFragment(f"{type(f).__name__} is outside the decider's language")

    def run_quant(self, f, y, body, cfg, exists):
        base = cfg.restrict(self.fv(f))
        kids = []
        # forall is the dual of exists: stop at the first class that refutes it
        for c in ClassSystem.of(base).classes:
            t = _relabel(self.run(body, bind(base, y, c)), {"class": str(c)})
            kids.append(t)
            if t.value == int(exists):
                break
        val = max(k.value for k in kids) if exists else min(k.value for k in kids)
        return TraceNode("exists" if exists else "forall", f, base, val, kids)

    def run_lindstrom(self, f, name, x, y, edge, cfg):
        base = cfg.restrict(self.fv(f))
        classes = ClassSystem.of(base).classes
        kids, table = [], {}
        for i, c1 in enumerate(classes):
            for j, c2 in enumerate(classes):
                for e, a in pair_combos(base, c1, c2):
                    t = self.run(edge, bind_pair(base, x, y, c1, c2, e, a))
                    kids.append(_relabel(t, {"pair": (i, j, e, a)}))
                    table[(i, j, e, a)] = t.value
        check_pair_table(classes, table, to_text(f))
        H = build_quotient(classes, table)
        if name.kind == "conn":
            val, rule, extra = conn_rule(H, base), "conn", {}
        elif name.kind == "chr":
            val, rule, extra = chr_rule(H, name.k, base), "chr", {"k": name.k}
        else:
            raise UnsupportedFragment("the Ham quantifier has no limit law in general")
        extra.update(classes=classes, H=H)
        return TraceNode(rule, f, base, val, kids, extra)


def check_fragment(f):
    for g in walk(f):
        if isinstance(g, (QRel, QEq, QTu)):
            raise UnsupportedFragment(f"{type(g).__name__} is outside the weak-variant language")
        if isinstance(g, QWeak) and g.name.kind == "ham":
            raise UnsupportedFragment("the Ham quantifier has no limit law in general")


def limit_truth(f, cfg: ParamConfig) -> int:
    check_fragment(f)
    missing = free_vars(f) - set(cfg.params)
    if missing:
        raise ValueError(f"free variables {sorted(missing)} are not parameters of the configuration")
    return _Decider().run(f, cfg).value


def decide(f) -> LimitVerdict:
    """Limiting probability (0 or 1) of a sentence over G(n,p), any constant p."""
    check_fragment(f)
    if free_vars(f):
        raise ValueError(f"not a sentence: free variables {sorted(free_vars(f))}")
    t = _Decider().run(f, ParamConfig())
    return LimitVerdict(t.value, t)
