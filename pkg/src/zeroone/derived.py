"""Derived graphs of the four Lindström quantifier variants.

Both evaluators compute the truth tables of the dom/eq/edge formulas in
their own way and hand them to the builders here, which verify the
semantic side conditions and apply the named graph property.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EquivalenceViolation, SemanticsViolation, WellDefinednessViolation
from .formula import QuantName
from .graph import DEFAULT_CAPS, Caps, K, has_chromatic_number, hamiltonian_adj


@dataclass
class DerivedGraph:
    domain: list  # kept vertices, or per-class lists of kept elements
    adj: np.ndarray
    provenance: str  # "weak" | "rel" | "eq" | "tu"

    @property
    def n(self) -> int:
        return self.adj.shape[0]


def _check_edges(edge: np.ndarray, labels, what: str):
    diag = np.flatnonzero(np.diagonal(edge))
    if diag.size:
        z = labels[diag[0]]
        raise SemanticsViolation(f"{what}: edge formula is reflexive at {z}")
    bad = np.argwhere(edge != edge.T)
    if bad.size:
        i, j = bad[0]
        raise SemanticsViolation(
            f"{what}: edge formula is not symmetric: holds at ({labels[i]}, {labels[j]}) "
            f"but not at ({labels[j]}, {labels[i]})")


def weak_graph(edge: np.ndarray) -> DerivedGraph:
    edge = np.asarray(edge, dtype=bool)
    labels = list(range(edge.shape[0]))
    _check_edges(edge, labels, "Q")
    return DerivedGraph(labels, edge.astype(np.uint8), "weak")


def relativized_graph(kept: list, edge: np.ndarray) -> DerivedGraph:
    """``edge`` is indexed by positions in ``kept``."""
    edge = np.asarray(edge, dtype=bool)
    _check_edges(edge, kept, "Qrl")
    return DerivedGraph(list(kept), edge.astype(np.uint8), "rel")


def quotient_graph(kept: list, eq: np.ndarray, edge: np.ndarray, provenance: str) -> DerivedGraph:
    """Quotient of the kept elements by ``eq`` with class edges taken from ``edge``."""
    eq = np.asarray(eq, dtype=bool)
    edge = np.asarray(edge, dtype=bool)
    what = "Qeq" if provenance == "eq" else "Qtu"
    d = len(kept)
    if d:
        miss = np.flatnonzero(~np.diagonal(eq))
        if miss.size:
            raise EquivalenceViolation(f"{what}: equality formula is not reflexive at {kept[miss[0]]}")
        bad = np.argwhere(eq != eq.T)
        if bad.size:
            i, j = bad[0]
            raise EquivalenceViolation(
                f"{what}: equality formula is not symmetric at ({kept[i]}, {kept[j]})")
    # rows of an equivalence relation are equal exactly on related pairs
    _, label = np.unique(eq, axis=0, return_inverse=True) if d else (None, np.zeros(0, np.int64))
    label = np.asarray(label).reshape(-1)
    same = label[:, None] == label[None, :]
    bad = np.argwhere(same != eq)
    if bad.size:
        i, j = bad[0]
        raise EquivalenceViolation(
            f"{what}: equality formula is not transitive around ({kept[i]}, {kept[j]})")
    reps = []
    seen = {}
    for i, c in enumerate(label.tolist()):
        if c not in seen:
            seen[c] = len(reps)
            reps.append(i)
    reps = np.asarray(reps, dtype=np.int64)
    cls = np.asarray([seen[c] for c in label.tolist()], dtype=np.int64)
    if d:
        lifted = edge[np.ix_(reps[cls], reps[cls])]
        bad = np.argwhere(lifted != edge)
        if bad.size:
            i, j = bad[0]
            raise WellDefinednessViolation(
                f"{what}: edge formula differs between ({kept[i]}, {kept[j]}) and the "
                f"representatives ({kept[reps[cls[i]]]}, {kept[reps[cls[j]]]})")
        hit = np.argwhere(edge & eq)
        if hit.size:
            i, j = hit[0]
            raise SemanticsViolation(
                f"{what}: edge formula holds between equivalent elements {kept[i]} and {kept[j]}")
        _check_edges(edge, kept, what)
    qadj = edge[np.ix_(reps, reps)] if d else np.zeros((0, 0), bool)
    classes = [[] for _ in reps]
    for i, c in enumerate(cls.tolist()):
        classes[c].append(kept[i])
    return DerivedGraph(classes, qadj.astype(np.uint8), provenance)


def holds(name: QuantName, adj: np.ndarray, caps: Caps = DEFAULT_CAPS) -> bool:
    """Membership of the graph ``adj`` in Conn, Ham or Chr(k).

    Empty graphs: connected, not Hamiltonian, chromatic number 0.
    """
    adj = np.ascontiguousarray(adj, dtype=np.uint8)
    if name.kind == "conn":
        return bool(K.is_connected(adj))
    if name.kind == "ham":
        return hamiltonian_adj(adj, caps)
    return has_chromatic_number(adj, name.k, caps)
