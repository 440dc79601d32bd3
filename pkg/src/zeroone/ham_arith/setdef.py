"""Definable vertex sets and the Hamiltonicity-based size comparator."""
from __future__ import annotations

from dataclasses import dataclass

from ..formula import (HAM, Adj, Eq, Not, Or, QWeak, FreshNames, all_vars, conj, disj, free_vars,
                       rename)


@dataclass(frozen=True)
class SetDef:
    """The set {var | formula} under an assignment of the other free variables.

    ``params`` optionally fixes parameter values, as ``((name, vertex), ...)``;
    parameters left out stay free in anything built from the definition.
    """
    formula: object
    var: str = "x"
    params: tuple = ()

    @property
    def env(self) -> dict:
        return dict(self.params)

    @property
    def param_names(self) -> frozenset:
        return free_vars(self.formula) - {self.var}

    def at(self, t: str):
        """Membership of the variable ``t``."""
        return rename(self.formula, {self.var: t})

    def members(self, g, caps=None, evaluator=None) -> frozenset:
        from ..evaluator import definable_set
        kw = {} if caps is None else {"caps": caps}
        return definable_set(g, self.formula, self.var, self.env, evaluator=evaluator, **kw)

    @classmethod
    def from_vertices(cls, vertices, var: str = "x", prefix: str = "c") -> "SetDef":
        """A finite set named by parameters: x = c0 or x = c1 or ..."""
        vs = sorted(set(vertices))
        names = [f"{prefix}{i}" for i in range(len(vs))]
        if var in names:
            raise ValueError(f"variable {var} clashes with a parameter name")
        return cls(disj(*(Eq(var, c) for c in names)), var, tuple(zip(names, vs)))

    @classmethod
    def neighborhood(cls, center: str, var: str = "z") -> "SetDef":
        """N(center) with ``center`` a free parameter."""
        return cls(Adj(var, center), var)


def _names(*defs) -> FreshNames:
    used = set()
    for d in defs:
        used |= all_vars(d.formula) | {d.var} | {k for k, _ in d.params}
    return FreshNames(used)


def build_preceq(A: SetDef, B: SetDef):
    """|A| <= |B| as a Ham-quantifier formula.

    The auxiliary graph joins x and y when they lie on opposite sides of
    A\\B and B\\A, or when neither lies in A\\B.
    """
    fresh = _names(A, B)
    x, y = fresh("x"), fresh("y")

    def only_a(t):
        return conj(A.at(t), Not(B.at(t)))

    def only_b(t):
        return conj(B.at(t), Not(A.at(t)))

    psi = conj(Not(Eq(x, y)),
               disj(conj(only_a(x), only_b(y)),
                    conj(only_a(y), only_b(x)),
                    conj(Not(only_a(x)), Not(only_a(y)))))
    return QWeak(HAM, x, y, psi)


def build_strict_less(A: SetDef, B: SetDef):
    """|A| < |B|, i.e. A <= B and not B <= A."""
    return conj(build_preceq(A, B), Not(build_preceq(B, A)))


def build_degree_class_formula(v: str = "v", x: str = "x"):
    """x has the same degree as v.

    Written as "neither degree is strictly smaller", which stays exact on
    graphs with fewer than three vertices where the bare comparator is not.
    """
    if x == v:
        raise ValueError("x and v must differ")
    z = "z" if "z" not in (x, v) else "w"
    nx, nv = SetDef(Adj(z, x), z), SetDef(Adj(z, v), z)
    return conj(Not(build_strict_less(nx, nv)), Not(build_strict_less(nv, nx)))


def preceq_holds(n: int, A, B) -> bool:
    """Closed-form truth of the comparator on n vertices.

    With X = A\\B, Y = B\\A and Z the rest, the auxiliary graph is
    Hamiltonian iff X is empty and n >= 3, or 1 <= |X| < |Y|, or
    |X| = |Y| >= 2 and Z is empty.
    """
    A, B = set(A), set(B)
    X, Y = A - B, B - A
    z = n - len(X) - len(Y)
    if not X:
        return n >= 3
    if len(X) < len(Y):
        return True
    return len(X) == len(Y) >= 2 and z == 0


def preceq_exact(n: int, A, B) -> bool:
    """Is the comparator equal to |A| <= |B| on this instance?"""
    return preceq_holds(n, A, B) == (len(set(A)) <= len(set(B)))
