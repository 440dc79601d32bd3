"""Hot graph kernels on dense ``uint8`` adjacency matrices.

Every kernel is written in the numba-compatible subset of Python and is
compiled with ``numba.njit`` unless ``ZEROONE_NO_NUMBA=1`` is set, in which
case the identical source runs as plain Python over numpy arrays.  Both
variants are always importable through :data:`JIT` and :data:`PY` so tests
and the benchmark can compare them directly.

Search kernels return 1 (yes), 0 (no) or -1 (node budget exhausted).
"""
import os
from types import SimpleNamespace

import numpy as np

USE_NUMBA = os.environ.get("ZEROONE_NO_NUMBA", "") not in ("1", "true", "yes")


def is_connected(adj):
    n = adj.shape[0]
    if n <= 1:
        return True
    seen = np.zeros(n, np.uint8)
    queue = np.empty(n, np.int64)
    queue[0] = 0
    seen[0] = 1
    head, tail = 0, 1
    while head < tail:
        v = queue[head]
        head += 1
        for w in range(n):
            if adj[v, w] and not seen[w]:
                seen[w] = 1
                queue[tail] = w
                tail += 1
    return tail == n


def is_bipartite(adj):
    n = adj.shape[0]
    side = np.full(n, -1, np.int64)
    queue = np.empty(n, np.int64)
    for s in range(n):
        if side[s] >= 0:
            continue
        side[s] = 0
        queue[0] = s
        head, tail = 0, 1
        while head < tail:
            v = queue[head]
            head += 1
            for w in range(n):
                if adj[v, w]:
                    if side[w] < 0:
                        side[w] = 1 - side[v]
                        queue[tail] = w
                        tail += 1
                    elif side[w] == side[v]:
                        return False
    return True


def clique_at_least(adj, target):
    """Greedy search for a clique of size >= target (one-sided certificate)."""
    n = adj.shape[0]
    if target <= 1:
        return n >= target
    deg = np.zeros(n, np.int64)
    for v in range(n):
        for w in range(n):
            deg[v] += adj[v, w]
    order = np.argsort(-deg, kind="mergesort")
    best = 1
    cand = np.zeros(n, np.uint8)
    for si in range(n):
        s = order[si]
        if deg[s] + 1 < target:
            continue
        for w in range(n):
            cand[w] = adj[s, w]
        size = 1
        for ti in range(n):
            t = order[ti]
            if cand[t]:
                size += 1
                for w in range(n):
                    if not adj[t, w]:
                        cand[w] = 0
                cand[t] = 0
        if size > best:
            best = size
        if best >= target:
            return True
    return best >= target


def max_clique_greedy(adj):
    n = adj.shape[0]
    if n == 0:
        return 0
    best = 1
    cand = np.zeros(n, np.uint8)
    for s in range(n):
        for w in range(n):
            cand[w] = adj[s, w]
        size = 1
        while True:
            pick = -1
            pick_deg = -1
            for t in range(n):
                if cand[t]:
                    d = 0
                    for w in range(n):
                        if cand[w] and adj[t, w]:
                            d += 1
                    if d > pick_deg:
                        pick_deg = d
                        pick = t
            if pick < 0:
                break
            size += 1
            for w in range(n):
                if not adj[pick, w]:
                    cand[w] = 0
            cand[pick] = 0
        if size > best:
            best = size
    return best


def dsatur_greedy(adj):
    """Number of colours used by one DSATUR greedy pass (an upper bound)."""
    n = adj.shape[0]
    color = np.full(n, -1, np.int64)
    used = 0
    for _ in range(n):
        best, best_sat, best_deg = -1, -1, -1
        for u in range(n):
            if color[u] >= 0:
                continue
            seen = np.zeros(n + 1, np.uint8)
            sat = 0
            deg = 0
            for w in range(n):
                if adj[u, w]:
                    if color[w] < 0:
                        deg += 1
                    elif not seen[color[w]]:
                        seen[color[w]] = 1
                        sat += 1
            if sat > best_sat or (sat == best_sat and deg > best_deg):
                best, best_sat, best_deg = u, sat, deg
        forbidden = np.zeros(n + 1, np.uint8)
        for w in range(n):
            if adj[best, w] and color[w] >= 0:
                forbidden[color[w]] = 1
        c = 0
        while forbidden[c]:
            c += 1
        color[best] = c
        if c + 1 > used:
            used = c + 1
    return used


def k_colorable(adj, k, budget):
    """Exact DSATUR-ordered backtracking for a proper k-colouring."""
    n = adj.shape[0]
    if n == 0:
        return 1
    if k <= 0:
        return 0
    color = np.full(n, -1, np.int64)
    stack_v = np.empty(n, np.int64)
    stack_c = np.zeros(n, np.int64)
    stack_used = np.zeros(n, np.int64)
    seen = np.zeros(k, np.uint8)
    depth = 0
    used = 0
    nodes = 0
    entering = True
    while True:
        if depth == n:
            return 1
        if entering:
            best, best_sat, best_deg = -1, -1, -1
            for u in range(n):
                if color[u] >= 0:
                    continue
                for c in range(k):
                    seen[c] = 0
                sat = 0
                deg = 0
                for w in range(n):
                    if adj[u, w]:
                        cw = color[w]
                        if cw < 0:
                            deg += 1
                        elif not seen[cw]:
                            seen[cw] = 1
                            sat += 1
                if sat > best_sat or (sat == best_sat and deg > best_deg):
                    best, best_sat, best_deg = u, sat, deg
            stack_v[depth] = best
            stack_c[depth] = 0
            stack_used[depth] = used
        v = stack_v[depth]
        limit = stack_used[depth] + 1
        if limit > k:
            limit = k
        placed = False
        c = stack_c[depth]
        while c < limit:
            ok = True
            for w in range(n):
                if adj[v, w] and color[w] == c:
                    ok = False
                    break
            if ok:
                placed = True
                break
            c += 1
        if placed:
            color[v] = c
            stack_c[depth] = c + 1
            used = stack_used[depth]
            if c + 1 > used:
                used = c + 1
            depth += 1
            entering = True
            nodes += 1
            if nodes > budget:
                return -1
        else:
            color[v] = -1
            depth -= 1
            if depth < 0:
                return 0
            color[stack_v[depth]] = -1
            used = stack_used[depth]
            entering = False


def hamiltonian(adj, budget):
    """Backtracking Hamilton-cycle search from vertex 0 with degree pruning."""
    n = adj.shape[0]
    if n < 3:
        return 0
    for v in range(n):
        d = 0
        for w in range(n):
            d += adj[v, w]
        if d < 2:
            return 0
    path = np.zeros(n, np.int64)
    nxt = np.zeros(n + 1, np.int64)
    visited = np.zeros(n, np.uint8)
    visited[0] = 1
    depth = 1
    nodes = 0
    while depth > 0:
        if depth == n:
            if adj[path[n - 1], 0]:
                return 1
            depth -= 1
            visited[path[depth]] = 0
            continue
        cur = path[depth - 1]
        c = nxt[depth]
        found = False
        while c < n:
            if adj[cur, c] and not visited[c]:
                visited[c] = 1
                ok = True
                if depth + 1 == n:
                    ok = adj[c, 0] == 1
                else:
                    for u in range(n):
                        if visited[u]:
                            continue
                        cnt = 0
                        for w in range(n):
                            if adj[u, w] and (not visited[w] or w == c or w == 0):
                                cnt += 1
                                if cnt >= 2:
                                    break
                        if cnt < 2:
                            ok = False
                            break
                if ok:
                    found = True
                    break
                visited[c] = 0
            c += 1
        if found:
            nxt[depth] = c + 1
            path[depth] = c
            depth += 1
            nxt[depth] = 0
            nodes += 1
            if nodes > budget:
                return -1
        else:
            nxt[depth] = 0
            depth -= 1
            if depth == 0:
                break
            visited[path[depth]] = 0
    return 0


def gnp_upper(draws, n, p):
    """Symmetric adjacency from uniform draws over pairs (i<j) in row-major order."""
    adj = np.zeros((n, n), np.uint8)
    k = 0
    for i in range(n):
        for j in range(i + 1, n):
            if draws[k] < p:
                adj[i, j] = 1
                adj[j, i] = 1
            k += 1
    return adj


_NAMES = ("is_connected", "is_bipartite", "clique_at_least", "max_clique_greedy",
          "dsatur_greedy", "k_colorable", "hamiltonian", "gnp_upper")

PY = SimpleNamespace(**{name: globals()[name] for name in _NAMES})


def _py_gnp_upper(draws, n, p):
    adj = np.zeros((n, n), np.uint8)
    iu = np.triu_indices(n, 1)
    adj[iu] = draws < p
    return adj | adj.T


def _py_is_connected(adj):
    n = adj.shape[0]
    if n <= 1:
        return True
    seen = np.zeros(n, bool)
    seen[0] = True
    frontier = seen.copy()
    while frontier.any():
        reach = adj[frontier].any(axis=0) & ~seen
        seen |= reach
        frontier = reach
    return bool(seen.all())


# vectorised equivalents where a loop-per-element version would be hopeless
PY.gnp_upper = _py_gnp_upper
PY.is_connected = _py_is_connected

try:
    import numba

    JIT = SimpleNamespace(**{name: numba.njit(cache=True)(globals()[name]) for name in _NAMES})
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    JIT = PY
    HAVE_NUMBA = False

K = JIT if (USE_NUMBA and HAVE_NUMBA) else PY
BACKEND = "numba" if K is JIT and HAVE_NUMBA else "python"
