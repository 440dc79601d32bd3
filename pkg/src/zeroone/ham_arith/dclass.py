"""Statistics of the degree class D(m) at the target degree m."""
from __future__ import annotations

import numpy as np
from scipy.stats import binom

from ..graph import DegreeTarget, Graph, PackedGnp, RngSpec


def degree_target(n: int, p: float, alpha: float = 0.0) -> DegreeTarget:
    return DegreeTarget(n, p, alpha)


def expected_class_size(n: int, p: float, m: int) -> float:
    """n Pr[Bin(n-1, p) = m]."""
    return float(n * binom.pmf(m, n - 1, p))


def _inner_stats(inner: np.ndarray, p: float, eps: float) -> dict:
    d = inner.shape[0]
    deg = inner.sum(axis=1)
    target = p * d
    ok = np.abs(deg - target) <= eps * target
    co = inner.astype(np.int64) @ inner.astype(np.int64)
    iu = np.triu_indices(d, 1)
    t2 = p * p * d
    pairs = co[iu]
    ok2 = np.abs(pairs - t2) <= eps * t2
    return {
        "size": int(d),
        "degree_target": target,
        "degree_in_tolerance": float(ok.mean()) if d else None,
        "codegree_target": t2,
        "codegree_in_tolerance": float(ok2.mean()) if pairs.size else None,
        "inner_degrees": deg.tolist(),
    }


def dclass_stats(g: Graph, m: int, p: float = 0.5, eps: float | None = None) -> dict:
    """|D(m)| and how many inner degrees / codegrees fall in (1 +- eps) of p|D|, p^2|D|.

    eps defaults to the value at n = g.n (when that is defined).
    """
    if eps is None:
        eps = DegreeTarget(g.n, p).eps if g.n > 16 else 0.0
    D = np.flatnonzero(g.degrees == m)
    out = _inner_stats(g.adj[np.ix_(D, D)], p, eps)
    out.update({"n": g.n, "m": int(m), "eps": eps, "D": D.tolist()})
    return out


def dclass_sample(n: int, p: float, rng: RngSpec, alpha: float = 0.0) -> tuple:
    """Sample G(n,p) compactly; returns (packed graph, stats at the target m)."""
    t = DegreeTarget(n, p, alpha)
    pg = PackedGnp(n, p, rng)
    D = np.flatnonzero(pg.degrees == t.m)
    inner = pg.induced(D.tolist()).adj
    out = _inner_stats(inner, p, t.eps)
    out.update({"n": n, "m": t.m, "eps": t.eps, "D": D.tolist()})
    return pg, out
