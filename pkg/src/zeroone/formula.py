"""Formula AST, s-expression syntax, printer and static checks.

The first-order graph language has atoms ``(= x y)`` and ``(adj x y)``,
Boolean connectives, vertex quantifiers and four Lindström quantifier
forms (weak, relativized, equality, tuple).  Second-order formulas over an
abstract finite set reuse the connective nodes and add ``Member``/``Rel``
atoms and ``ExistsSet``/``ExistsRel`` binders; they are parsed by
:func:`parse_so` only, so a graph formula can never contain them.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterator, Union

from .errors import ParseError

VAR_RE = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*\Z")


@dataclass(frozen=True)
class QuantName:
    kind: str  # "conn" | "ham" | "chr"
    k: int | None = None

    def __str__(self):
        return f"chr{self.k}" if self.kind == "chr" else self.kind

    @classmethod
    def parse(cls, text: str) -> "QuantName":
        if text in ("conn", "ham"):
            return cls(text)
        m = re.fullmatch(r"chr([0-9]+)", text)
        if m and int(m.group(1)) >= 1:
            return cls("chr", int(m.group(1)))
        raise ValueError(f"unknown quantifier name {text!r}")


CONN = QuantName("conn")
HAM = QuantName("ham")


def Chr(k: int) -> QuantName:
    return QuantName("chr", k)


# --- nodes ---------------------------------------------------------------

@dataclass(frozen=True)
class Eq:
    lhs: str
    rhs: str


@dataclass(frozen=True)
class Adj:
    lhs: str
    rhs: str


@dataclass(frozen=True)
class TrueF:
    pass


@dataclass(frozen=True)
class Not:
    f: "Formula"


@dataclass(frozen=True)
class And:
    args: tuple


@dataclass(frozen=True)
class Or:
    args: tuple


@dataclass(frozen=True)
class Implies:
    a: "Formula"
    b: "Formula"


@dataclass(frozen=True)
class Exists:
    vars: tuple
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    vars: tuple
    body: "Formula"


@dataclass(frozen=True)
class QWeak:
    name: QuantName
    x: str
    y: str
    edge: "Formula"


@dataclass(frozen=True)
class QRel:
    name: QuantName
    v: str
    dom: "Formula"
    x: str
    y: str
    edge: "Formula"


@dataclass(frozen=True)
class QEq:
    name: QuantName
    v: str
    dom: "Formula"
    u: str
    w: str
    eq: "Formula"
    x: str
    y: str
    edge: "Formula"


@dataclass(frozen=True)
class QTu:
    name: QuantName
    l: int
    vbar: tuple
    dom: "Formula"
    ubar: tuple
    wbar: tuple
    eq: "Formula"
    xbar: tuple
    ybar: tuple
    edge: "Formula"


# second-order only
@dataclass(frozen=True)
class Member:
    x: str
    rel: str


@dataclass(frozen=True)
class Rel:
    rel: str
    args: tuple


@dataclass(frozen=True)
class ExistsSet:
    rel: str
    body: "Formula"


@dataclass(frozen=True)
class ExistsRel:
    rel: str
    arity: int
    body: "Formula"


Formula = Union[Eq, Adj, TrueF, Not, And, Or, Implies, Exists, Forall,
                QWeak, QRel, QEq, QTu]
SOFormula = Union[Formula, Member, Rel, ExistsSet, ExistsRel]

TRUE = TrueF()
FALSE = Not(TRUE)

LINDSTROM = (QWeak, QRel, QEq, QTu)
_ATOMS = (Eq, Adj, TrueF, Member, Rel)


def conj(*fs):
    """And of the arguments, flattening nested Ands; ``TRUE`` when empty."""
    out = []
    for f in fs:
        if isinstance(f, And):
            out.extend(f.args)
        elif f != TRUE:
            out.append(f)
    if not out:
        return TRUE
    return out[0] if len(out) == 1 else And(tuple(out))


def disj(*fs):
    out = []
    for f in fs:
        if isinstance(f, Or):
            out.extend(f.args)
        else:
            out.append(f)
    if not out:
        return FALSE
    return out[0] if len(out) == 1 else Or(tuple(out))


def iff(a, b):
    return And((Implies(a, b), Implies(b, a)))


# --- structural helpers --------------------------------------------------

def scopes(f) -> list[tuple[tuple, object]]:
    """(bound variables, subformula) pairs of the immediate children."""
    match f:
        case Not(g):
            return [((), g)]
        case And(args) | Or(args):
            return [((), g) for g in args]
        case Implies(a, b):
            return [((), a), ((), b)]
        case Exists(vs, body) | Forall(vs, body):
            return [(tuple(vs), body)]
        case QWeak(_, x, y, edge):
            return [((x, y), edge)]
        case QRel(_, v, dom, x, y, edge):
            return [((v,), dom), ((x, y), edge)]
        case QEq(_, v, dom, u, w, eq, x, y, edge):
            return [((v,), dom), ((u, w), eq), ((x, y), edge)]
        case QTu(_, _, vbar, dom, ubar, wbar, eq, xbar, ybar, edge):
            return [(tuple(vbar), dom), (tuple(ubar) + tuple(wbar), eq),
                    (tuple(xbar) + tuple(ybar), edge)]
        case ExistsSet(_, body) | ExistsRel(_, _, body):
            return [((), body)]
    return []


def atom_vars(f) -> tuple:
    match f:
        case Eq(a, b) | Adj(a, b):
            return (a, b)
        case Member(x, _):
            return (x,)
        case Rel(_, args):
            return tuple(args)
    return ()


def free_vars(f) -> frozenset:
    """Free first-order variables."""
    if isinstance(f, _ATOMS):
        return frozenset(atom_vars(f))
    out = set()
    for bound, g in scopes(f):
        out |= free_vars(g) - set(bound)
    return frozenset(out)


def all_vars(f) -> set:
    """Every first-order variable name occurring anywhere, bound or free."""
    out = set(atom_vars(f))
    for bound, g in scopes(f):
        out |= set(bound)
        out |= all_vars(g)
    return out


def free_relvars(f) -> frozenset:
    """Free second-order variables of an SO formula."""
    match f:
        case Member(_, r):
            return frozenset({r})
        case Rel(r, _):
            return frozenset({r})
        case ExistsSet(r, body) | ExistsRel(r, _, body):
            return free_relvars(body) - {r}
    out = frozenset()
    for _, g in scopes(f):
        out |= free_relvars(g)
    return out


def walk(f) -> Iterator:
    yield f
    for _, g in scopes(f):
        yield from walk(g)


def size(f) -> int:
    return sum(1 for _ in walk(f))


class FreshNames:
    """Supply of variable names that avoid a growing set of used names."""

    def __init__(self, used=()):
        self.used = set(used)
        self._counter = itertools.count()

    def __call__(self, base: str) -> str:
        if base not in self.used:
            self.used.add(base)
            return base
        while True:
            name = f"{base}_{next(self._counter)}"
            if name not in self.used:
                self.used.add(name)
                return name


def _rebuild(f, bound_lists, subs):
    match f:
        case Not():
            return Not(subs[0])
        case And():
            return And(tuple(subs))
        case Or():
            return Or(tuple(subs))
        case Implies():
            return Implies(subs[0], subs[1])
        case Exists():
            return Exists(bound_lists[0], subs[0])
        case Forall():
            return Forall(bound_lists[0], subs[0])
        case QWeak(name):
            x, y = bound_lists[0]
            return QWeak(name, x, y, subs[0])
        case QRel(name):
            (v,), (x, y) = bound_lists
            return QRel(name, v, subs[0], x, y, subs[1])
        case QEq(name):
            (v,), (u, w), (x, y) = bound_lists
            return QEq(name, v, subs[0], u, w, subs[1], x, y, subs[2])
        case QTu(name, l):
            vb, uw, xy = bound_lists
            return QTu(name, l, vb, subs[0], uw[:l], uw[l:], subs[1],
                       xy[:l], xy[l:], subs[2])
        case ExistsSet(r):
            return ExistsSet(r, subs[0])
        case ExistsRel(r, k):
            return ExistsRel(r, k, subs[0])
    raise TypeError(f"not a formula node: {f!r}")


def _subst(f, mapping: dict):
    match f:
        case Eq(a, b):
            return Eq(mapping.get(a, a), mapping.get(b, b))
        case Adj(a, b):
            return Adj(mapping.get(a, a), mapping.get(b, b))
        case Member(x, r):
            return Member(mapping.get(x, x), r)
        case Rel(r, args):
            return Rel(r, tuple(mapping.get(a, a) for a in args))
        case TrueF():
            return f
    bound_lists, subs = [], []
    for bound, g in scopes(f):
        inner = {k: v for k, v in mapping.items() if k not in bound} if bound else mapping
        bound_lists.append(tuple(bound))
        subs.append(_subst(g, inner) if inner else g)
    return _rebuild(f, bound_lists, subs)


def rename(f, mapping: dict, fresh: FreshNames | None = None):
    """Capture-avoiding substitution of free variables ``mapping[v]`` for ``v``."""
    if not mapping:
        return f
    if fresh is None:
        used = all_vars(f)
        if not (set(mapping.values()) & used) or not (set(mapping) & used):
            # no target is a variable of f, so nothing can be captured
            return _subst(f, mapping)
        fresh = FreshNames(used | set(mapping) | set(mapping.values()))
    match f:
        case Eq(a, b):
            return Eq(mapping.get(a, a), mapping.get(b, b))
        case Adj(a, b):
            return Adj(mapping.get(a, a), mapping.get(b, b))
        case Member(x, r):
            return Member(mapping.get(x, x), r)
        case Rel(r, args):
            return Rel(r, tuple(mapping.get(a, a) for a in args))
        case TrueF():
            return f
    bound_lists, subs = [], []
    for bound, g in scopes(f):
        inner = {k: v for k, v in mapping.items() if k not in bound}
        targets = {inner[v] for v in free_vars(g) if v in inner}
        new_bound = []
        for b in bound:
            if b in targets:
                nb = fresh(b)
                inner[b] = nb
                new_bound.append(nb)
            else:
                new_bound.append(b)
        bound_lists.append(tuple(new_bound))
        subs.append(rename(g, inner, fresh))
    return _rebuild(f, bound_lists, subs)


# --- check_wellformed ------------------------------------------------------

def _node_diags(g) -> list[str]:
    diags: list[str] = []

    def name_ok(q):
        if not isinstance(q, QuantName) or q.kind not in ("conn", "ham", "chr"):
            diags.append(f"unknown quantifier name {q!r}")
        elif q.kind == "chr" and (q.k is None or q.k < 1):
            diags.append(f"chromatic quantifier needs k >= 1, got {q.k!r}")

    def dup(group, where):
        if len(set(group)) != len(group):
            diags.append(f"duplicate binder in {where}: {' '.join(group)}")

    match g:
        case Exists(vs) | Forall(vs):
            if not vs:
                diags.append("empty binder list")
            dup(tuple(vs), type(g).__name__)
        case QWeak(name, x, y):
            name_ok(name)
            dup((x, y), "Q")
        case QRel(name, v, _, x, y):
            name_ok(name)
            dup((x, y), "Qrl")
        case QEq(name, v, _, u, w, _, x, y):
            name_ok(name)
            dup((u, w), "Qeq")
            dup((x, y), "Qeq")
        case QTu(name, l, vbar, _, ubar, wbar, _, xbar, ybar):
            name_ok(name)
            lens = [len(vbar), len(ubar), len(wbar), len(xbar), len(ybar)]
            if l < 1 or any(n != l for n in lens):
                diags.append(f"Qtu length mismatch: l={l}, lists have lengths {lens}")
            dup(tuple(vbar), "Qtu")
            dup(tuple(ubar) + tuple(wbar), "Qtu")
            dup(tuple(xbar) + tuple(ybar), "Qtu")
        case ExistsRel(_, k):
            if k < 1:
                diags.append(f"relation arity must be >= 1, got {k}")
        case Rel(_, args):
            if not args:
                diags.append("relation atom without arguments")
    return diags


def check_wellformed(f) -> list[str]:
    """Static diagnostics: duplicate binders, tuple-length mismatches, bad names."""
    return [d for g in walk(f) for d in _node_diags(g)]


# --- printer ---------------------------------------------------------------

def to_text(f) -> str:
    """Canonical s-expression text; ``parse(to_text(f)) == f``."""
    match f:
        case TrueF():
            return "(true)"
        case Eq(a, b):
            return f"(= {a} {b})"
        case Adj(a, b):
            return f"(adj {a} {b})"
        case Not(g):
            return f"(not {to_text(g)})"
        case And(args):
            return "(and " + " ".join(map(to_text, args)) + ")"
        case Or(args):
            return "(or " + " ".join(map(to_text, args)) + ")"
        case Implies(a, b):
            return f"(implies {to_text(a)} {to_text(b)})"
        case Exists(vs, body):
            return f"(exists ({' '.join(vs)}) {to_text(body)})"
        case Forall(vs, body):
            return f"(forall ({' '.join(vs)}) {to_text(body)})"
        case QWeak(name, x, y, edge):
            return f"(Q {name} ({x} {y}) {to_text(edge)})"
        case QRel(name, v, dom, x, y, edge):
            return f"(Qrl {name} ({v}) {to_text(dom)} ({x} {y}) {to_text(edge)})"
        case QEq(name, v, dom, u, w, eq, x, y, edge):
            return (f"(Qeq {name} ({v}) {to_text(dom)} ({u} {w}) {to_text(eq)} "
                    f"({x} {y}) {to_text(edge)})")
        case QTu(name, l, vbar, dom, ubar, wbar, eq, xbar, ybar, edge):
            return (f"(Qtu {name} {l} ({' '.join(vbar)}) {to_text(dom)} "
                    f"({' '.join(ubar)} | {' '.join(wbar)}) {to_text(eq)} "
                    f"({' '.join(xbar)} | {' '.join(ybar)}) {to_text(edge)})")
        case Member(x, r):
            return f"(member {x} {r})"
        case Rel(r, args):
            return f"(rel {r} {' '.join(args)})"
        case ExistsSet(r, body):
            return f"(existsSet ({r}) {to_text(body)})"
        case ExistsRel(r, k, body):
            return f"(existsRel ({r} {k}) {to_text(body)})"
    raise TypeError(f"not a formula node: {f!r}")


def pretty(f, width: int = 100) -> str:
    """Indented multi-line rendering for large formulas; reparses like ``to_text``."""
    flat = to_text(f)
    if len(flat) <= width:
        return flat
    head = flat[: flat.index(" ")] if " " in flat else flat
    parts = []
    match f:
        case Not(g):
            parts = [pretty(g, width)]
        case And(args) | Or(args):
            parts = [pretty(g, width) for g in args]
        case Implies(a, b):
            parts = [pretty(a, width), pretty(b, width)]
        case Exists(vs, body) | Forall(vs, body):
            head = f"{head} ({' '.join(vs)})"
            parts = [pretty(body, width)]
        case ExistsSet(r, body):
            head = f"{head} ({r})"
            parts = [pretty(body, width)]
        case ExistsRel(r, k, body):
            head = f"{head} ({r} {k})"
            parts = [pretty(body, width)]
        case QWeak(name, x, y, edge):
            head = f"(Q {name} ({x} {y})"
            parts = [pretty(edge, width)]
        case _:
            return flat
    body = "\n".join("  " + line for p in parts for line in p.splitlines())
    return f"{head}\n{body})"


# --- parser ----------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s+|;[^\n]*|[()|]|[^\s()|;]+")


def _tokenize(text: str):
    tokens = []
    line, line_start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        tok = m.group(0)
        if not tok.isspace() and not tok.startswith(";"):
            tokens.append((tok, line, pos - line_start + 1))
        nl = tok.count("\n")
        if nl:
            line += nl
            line_start = pos + tok.rindex("\n") + 1
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str, so: bool):
        self.toks = _tokenize(text)
        self.i = 0
        self.so = so

    def err(self, msg, tok=None):
        if tok is None:
            tok = self.toks[self.i] if self.i < len(self.toks) else None
        if tok is None:
            last = self.toks[-1] if self.toks else ("", 1, 0)
            raise ParseError(f"{msg}: unexpected end of input", last[1], last[2] + len(last[0]))
        raise ParseError(f"{msg}: got {tok[0]!r}", tok[1], tok[2])

    def peek(self):
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def next(self):
        if self.i >= len(self.toks):
            self.err("incomplete formula")
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, s):
        tok = self.next()
        if tok[0] != s:
            self.err(f"expected {s!r}", tok)

    def var(self):
        tok = self.next()
        if not VAR_RE.match(tok[0]):
            self.err("expected variable", tok)
        return tok[0]

    def var_list(self, stop=(")",)):
        out = []
        while self.peek() not in stop:
            if self.peek() is None:
                self.err("unterminated variable list")
            out.append(self.var())
        return tuple(out)

    def binder(self):
        self.expect("(")
        vs = self.var_list()
        self.expect(")")
        if not vs:
            self.err("empty variable list", self.toks[self.i - 1])
        return vs

    def pair(self):
        self.expect("(")
        a = self.var()
        b = self.var()
        self.expect(")")
        return a, b

    def split_pair(self):
        self.expect("(")
        left = self.var_list(stop=("|", ")"))
        self.expect("|")
        right = self.var_list()
        self.expect(")")
        return left, right

    def qname(self):
        tok = self.next()
        try:
            return QuantName.parse(tok[0])
        except ValueError:
            self.err("unknown quantifier name", tok)

    def integer(self):
        tok = self.next()
        if not tok[0].isdigit():
            self.err("expected integer", tok)
        return int(tok[0])

    def formula(self):
        start = self.i
        self.expect("(")
        head_tok = self.next()
        head = head_tok[0]
        if head == "true":
            f = TRUE
        elif head == "=":
            f = Eq(self.var(), self.var())
        elif head == "adj":
            f = Adj(self.var(), self.var())
        elif head == "not":
            f = Not(self.formula())
        elif head in ("and", "or"):
            args = []
            while self.peek() == "(":
                args.append(self.formula())
            if not args:
                self.err(f"{head} needs at least one argument")
            f = (And if head == "and" else Or)(tuple(args))
        elif head == "implies":
            f = Implies(self.formula(), self.formula())
        elif head in ("exists", "forall"):
            vs = self.binder()
            f = (Exists if head == "exists" else Forall)(vs, self.formula())
        elif head == "Q" and not self.so:
            name = self.qname()
            x, y = self.pair()
            f = QWeak(name, x, y, self.formula())
        elif head == "Qrl" and not self.so:
            name = self.qname()
            self.expect("(")
            v = self.var()
            self.expect(")")
            dom = self.formula()
            x, y = self.pair()
            f = QRel(name, v, dom, x, y, self.formula())
        elif head == "Qeq" and not self.so:
            name = self.qname()
            self.expect("(")
            v = self.var()
            self.expect(")")
            dom = self.formula()
            u, w = self.pair()
            eq = self.formula()
            x, y = self.pair()
            f = QEq(name, v, dom, u, w, eq, x, y, self.formula())
        elif head == "Qtu" and not self.so:
            name = self.qname()
            l = self.integer()
            vbar = self.binder()
            dom = self.formula()
            ubar, wbar = self.split_pair()
            eq = self.formula()
            xbar, ybar = self.split_pair()
            edge = self.formula()
            lens = [len(vbar), len(ubar), len(wbar), len(xbar), len(ybar)]
            if l < 1 or any(n != l for n in lens):
                raise ParseError(f"Qtu arity mismatch: l={l}, lists have lengths {lens}",
                                 head_tok[1], head_tok[2])
            f = QTu(name, l, vbar, dom, ubar, wbar, eq, xbar, ybar, edge)
        elif head == "member" and self.so:
            f = Member(self.var(), self.var())
        elif head == "rel" and self.so:
            r = self.var()
            args = self.var_list()
            if not args:
                self.err("relation atom needs arguments")
            f = Rel(r, args)
        elif head == "existsSet" and self.so:
            self.expect("(")
            r = self.var()
            self.expect(")")
            f = ExistsSet(r, self.formula())
        elif head == "existsRel" and self.so:
            self.expect("(")
            r = self.var()
            k = self.integer()
            self.expect(")")
            if k < 1:
                self.err("relation arity must be >= 1", self.toks[self.i - 2])
            f = ExistsRel(r, k, self.formula())
        else:
            self.err("unknown form", head_tok)
        self.expect(")")
        diags = _node_diags(f)
        if diags:
            tok = self.toks[start]
            raise ParseError(diags[0], tok[1], tok[2])
        return f

    def parse(self):
        if not self.toks:
            raise ParseError("empty input", 1, 1)
        f = self.formula()
        if self.i != len(self.toks):
            self.err("trailing input")
        return f


def parse(text: str) -> Formula:
    """Parse a graph-language formula."""
    f = _Parser(text, so=False).parse()
    _check_arities(f)
    return f


def parse_so(text: str) -> SOFormula:
    """Parse a second-order formula over a finite set."""
    f = _Parser(text, so=True).parse()
    _check_arities(f)
    return f


def _check_arities(f, env=None):
    env = dict(env or {})
    match f:
        case ExistsSet(r, body):
            env[r] = 1
            return _check_arities(body, env)
        case ExistsRel(r, k, body):
            env[r] = k
            return _check_arities(body, env)
        case Member(_, r):
            if env.get(r, 1) != 1:
                raise ParseError(f"relation {r} has arity {env[r]} but is used as a set")
            return
        case Rel(r, args):
            if r in env and env[r] != len(args):
                raise ParseError(f"relation {r} has arity {env[r]} but is applied to {len(args)} arguments")
            return
    for _, g in scopes(f):
        _check_arities(g, env)


def is_sentence(f) -> bool:
    return not free_vars(f)
