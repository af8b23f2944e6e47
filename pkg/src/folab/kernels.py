"""Hot kernels for trial-graph evaluation.

Each kernel ships in two interchangeable implementations: a numba @njit
loop and a pure-numpy one.  The public names dispatch to numba when it
imports and the environment variable ``FOLAB_PURE_NUMPY`` is unset; set
``FOLAB_PURE_NUMPY=1`` to force the numpy path.  Both variants stay
importable so the benchmark (benchmarks/kernel_bench.py) and the parity
tests can compare them directly.
"""

import os

import numpy as np

_FORCE_NUMPY = os.environ.get("FOLAB_PURE_NUMPY", "").strip().lower() in ("1", "true", "yes")

try:
    from numba import njit as _njit
    _NUMBA_OK = True
except ImportError:          # pragma: no cover - numba is a declared dep
    _NUMBA_OK = False

USE_NUMBA = _NUMBA_OK and not _FORCE_NUMPY


def adjacency_from_uniforms(uniforms, n, p):
    """Symmetric boolean matrix; entry u*n+v (u<v) of ``uniforms`` decides {u,v}."""
    grid = uniforms.reshape(n, n) < p
    upper = np.triu(grid, 1)
    return upper | upper.T


def triangle_count_numpy(adj):
    a = adj.astype(np.int64)
    return int(((a @ a) * a).sum() // 6)


def contains_triangle_numpy(adj):
    n = adj.shape[0]
    for u in range(n):
        row = adj[u]
        nbrs = np.flatnonzero(row)
        nbrs = nbrs[nbrs > u]
        for v in nbrs:
            if np.any(row & adj[v]):
                return True
    return False


def contains_clique4_numpy(adj):
    n = adj.shape[0]
    for u in range(n):
        for v in np.flatnonzero(adj[u]):
            if v <= u:
                continue
            common = np.flatnonzero(adj[u] & adj[v])
            if len(common) >= 2 and np.any(adj[np.ix_(common, common)]):
                return True
    return False


if _NUMBA_OK:

    @_njit(cache=True)
    def triangle_count_numba(adj):
        n = adj.shape[0]
        total = 0
        for u in range(n):
            for v in range(u + 1, n):
                if adj[u, v]:
                    for w in range(v + 1, n):
                        if adj[u, w] and adj[v, w]:
                            total += 1
        return total

    @_njit(cache=True)
    def contains_triangle_numba(adj):
        n = adj.shape[0]
        for u in range(n):
            for v in range(u + 1, n):
                if adj[u, v]:
                    for w in range(v + 1, n):
                        if adj[u, w] and adj[v, w]:
                            return True
        return False

    @_njit(cache=True)
    def contains_clique4_numba(adj):
        n = adj.shape[0]
        for u in range(n):
            for v in range(u + 1, n):
                if not adj[u, v]:
                    continue
                for w in range(v + 1, n):
                    if adj[u, w] and adj[v, w]:
                        for x in range(w + 1, n):
                            if adj[u, x] and adj[v, x] and adj[w, x]:
                                return True
        return False

else:                          # pragma: no cover
    triangle_count_numba = None
    contains_triangle_numba = None
    contains_clique4_numba = None


if USE_NUMBA:
    triangle_count = triangle_count_numba
    contains_triangle = contains_triangle_numba
    contains_clique4 = contains_clique4_numba
else:
    triangle_count = triangle_count_numpy
    contains_triangle = contains_triangle_numpy
    contains_clique4 = contains_clique4_numpy
