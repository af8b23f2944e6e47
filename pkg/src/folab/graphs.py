"""Exact combinatorial invariants of small simple graphs.

Densities use exact rationals (``fractions.Fraction``) so that identities
like rho = 1/alpha are tested with equality, never tolerance.  Subset
enumerations are guarded by caps; :mod:`folab.flow` provides exact
min-cut-based checks for graphs beyond the caps.
"""

import math
from fractions import Fraction
from itertools import combinations

import numpy as np

from .errors import CapacityError, DomainError, GraphFormatError

INFINITE = math.inf

MAX_DENSITY_CAP = 16
AUTOMORPHISM_CAP = 10


class Graph:
    """Immutable simple undirected graph on vertices 0..n-1.

    Edges are stored as a frozenset of (u, v) tuples with u < v.
    """

    __slots__ = ("n", "edges", "_adj", "_matrix")

    def __init__(self, n, edges=()):
        n = int(n)
        if n < 0:
            raise DomainError("vertex count must be nonnegative")
        norm = set()
        for e in edges:
            u, v = e
            if u == v:
                raise DomainError(f"loop edge {{{u},{u}}} not allowed")
            if not (0 <= u < n and 0 <= v < n):
                raise DomainError(f"edge ({u},{v}) has endpoint outside 0..{n - 1}")
            norm.add((u, v) if u < v else (v, u))
        self.n = n
        self.edges = frozenset(norm)
        self._adj = None
        self._matrix = None

    @property
    def adj(self):
        """Tuple of neighbor frozensets, built on first use."""
        if self._adj is None:
            nbrs = [set() for _ in range(self.n)]
            for u, v in self.edges:
                nbrs[u].add(v)
                nbrs[v].add(u)
            self._adj = tuple(frozenset(s) for s in nbrs)
        return self._adj

    def matrix(self):
        """Boolean adjacency matrix (cached)."""
        if self._matrix is None:
            m = np.zeros((self.n, self.n), dtype=bool)
            for u, v in self.edges:
                m[u, v] = m[v, u] = True
            self._matrix = m
        return self._matrix

    def edge_count(self):
        return len(self.edges)

    def has_edge(self, u, v):
        return (u, v) in self.edges or (v, u) in self.edges

    def degree(self, u):
        return len(self.adj[u])

    def add_vertices(self, k):
        """New graph with k extra isolated vertices."""
        return Graph(self.n + k, self.edges)

    def with_edges(self, extra):
        return Graph(self.n, set(self.edges) | {tuple(sorted(e)) for e in extra})

    def relabel(self, perm):
        """New graph where old vertex v becomes perm[v]."""
        return Graph(self.n, ((perm[u], perm[v]) for u, v in self.edges))

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, m={len(self.edges)})"


# Constructors used all over the tests and witness builders.

def complete_graph(t):
    return Graph(t, combinations(range(t), 2))


def cycle_graph(t):
    if t < 3:
        raise DomainError("cycle needs at least 3 vertices")
    return Graph(t, [(i, (i + 1) % t) for i in range(t)])


def path_graph(t):
    return Graph(t, [(i, i + 1) for i in range(t - 1)])


def empty_graph(t):
    return Graph(t, ())


def disjoint_union(g, h):
    shifted = [(u + g.n, v + g.n) for u, v in h.edges]
    return Graph(g.n + h.n, list(g.edges) + shifted)


# --- densities ---------------------------------------------------------

def density(g):
    """rho(G) = e(G)/v(G), exact."""
    if g.n == 0:
        raise DomainError("density of the empty graph is undefined")
    return Fraction(len(g.edges), g.n)


def _edges_within(g, subset):
    s = set(subset)
    return sum(1 for u, v in g.edges if u in s and v in s)


def max_density(g, cap=MAX_DENSITY_CAP):
    """Maximum rho over nonempty induced subgraphs, with the maximizer.

    Ties break toward the lexicographically smallest sorted vertex tuple,
    which also prefers fewer vertices (a proper prefix sorts first).
    """
    if g.n == 0:
        raise DomainError("max_density of the empty graph is undefined")
    if g.n > cap:
        raise CapacityError(f"max_density enumeration capped at {cap} vertices (got {g.n})")
    best = None
    best_subset = None
    verts = range(g.n)
    for k in range(1, g.n + 1):
        for subset in combinations(verts, k):
            rho = Fraction(_edges_within(g, subset), k)
            if best is None or rho > best or (rho == best and subset < best_subset):
                best = rho
                best_subset = subset
    return best, frozenset(best_subset)


def is_strictly_balanced(g, cap=MAX_DENSITY_CAP):
    """True iff every proper nonempty vertex subset induces strictly lower density.

    Checking induced subsets suffices: a non-induced proper subgraph on the
    same vertex set has strictly fewer edges, hence strictly lower density.
    """
    if g.n == 0:
        raise DomainError("balance of the empty graph is undefined")
    if g.n > cap:
        raise CapacityError(f"is_strictly_balanced enumeration capped at {cap} vertices (got {g.n})")
    rho = density(g)
    for k in range(1, g.n):
        for subset in combinations(range(g.n), k):
            if Fraction(_edges_within(g, subset), k) >= rho:
                return False
    return True


# --- automorphisms -----------------------------------------------------

def automorphism_count(g, cap=AUTOMORPHISM_CAP):
    """Number of adjacency-preserving permutations, by pruned backtracking."""
    if g.n > cap:
        raise CapacityError(f"automorphism search capped at {cap} vertices (got {g.n})")
    if g.n == 0:
        return 1
    n = g.n
    adj = g.matrix()
    degs = [g.degree(v) for v in range(n)]
    count = 0

    def extend(image, used):
        nonlocal count
        v = len(image)
        if v == n:
            count += 1
            return
        for w in range(n):
            if used[w] or degs[w] != degs[v]:
                continue
            ok = True
            for u in range(v):
                if adj[v, u] != adj[image[u], w]:
                    ok = False
                    break
            if ok:
                image.append(w)
                used[w] = True
                extend(image, used)
                image.pop()
                used[w] = False

    extend([], [False] * n)
    return count


# --- distances and neighborhoods ---------------------------------------

def _check_vertex(g, x):
    if not (0 <= x < g.n):
        raise DomainError(f"vertex {x} outside 0..{g.n - 1}")


def bfs_distances(g, source):
    """Distances from source; INFINITE where unreachable."""
    _check_vertex(g, source)
    dist = [INFINITE] * g.n
    dist[source] = 0
    frontier = [source]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for u in frontier:
            for w in g.adj[u]:
                if dist[w] == INFINITE:
                    dist[w] = d
                    nxt.append(w)
        frontier = nxt
    return dist


def distance(g, x, y):
    _check_vertex(g, x)
    _check_vertex(g, y)
    if x == y:
        return 0
    return bfs_distances(g, x)[y]


def set_distance(g, a, b):
    """min over u in a, w in b of distance(u, w)."""
    a = list(a)
    b = set(b)
    if not a or not b:
        raise DomainError("set_distance over an empty set")
    for v in a:
        _check_vertex(g, v)
    for v in b:
        _check_vertex(g, v)
    if b & set(a):
        return 0
    best = INFINITE
    for u in a:
        dist = bfs_distances(g, u)
        for w in b:
            if dist[w] < best:
                best = dist[w]
    return best


def common_r_neighbors(g, xs, r):
    """{ y : distance(g, x, y) = r for every x in xs }."""
    xs = list(xs)
    if not xs:
        raise DomainError("common_r_neighbors needs a nonempty tuple")
    if r < 0:
        raise DomainError("r must be nonnegative")
    result = None
    for x in xs:
        dist = bfs_distances(g, x)
        here = {y for y in range(g.n) if dist[y] == r}
        result = here if result is None else (result & here)
    return frozenset(result)


def induced(g, subset):
    """Induced subgraph plus the old->new relabeling map.

    Vertices are relabeled 0..|S|-1 in ascending original order.
    """
    subset = sorted(set(subset))
    for v in subset:
        _check_vertex(g, v)
    remap = {v: i for i, v in enumerate(subset)}
    keep = set(subset)
    edges = [(remap[u], remap[v]) for u, v in g.edges if u in keep and v in keep]
    return Graph(len(subset), edges), remap


# --- text format --------------------------------------------------------
# line 1: "vertices <n>"; then "edge <u> <v>" lines; '#' comments; blanks ok.

def parse_graph_text(text):
    n = None
    edges = []
    extra = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "vertices":
            if n is not None:
                raise GraphFormatError(f"line {lineno}: duplicate vertices line")
            if len(parts) != 2:
                raise GraphFormatError(f"line {lineno}: expected 'vertices <n>'")
            n = int(parts[1])
        elif parts[0] == "edge":
            if len(parts) != 3:
                raise GraphFormatError(f"line {lineno}: expected 'edge <u> <v>'")
            u, v = int(parts[1]), int(parts[2])
            if n is None:
                raise GraphFormatError(f"line {lineno}: edge before vertices line")
            if u == v:
                raise GraphFormatError(f"line {lineno}: loop edge {u} {v}")
            key = (min(u, v), max(u, v))
            if key in edges or key in extra:
                raise GraphFormatError(f"line {lineno}: duplicate edge {u} {v}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"line {lineno}: edge endpoint outside range")
            edges.append(key)
        else:
            extra.append((lineno, parts))
    if n is None:
        raise GraphFormatError("missing 'vertices <n>' line")
    return Graph(n, edges), extra


def format_graph_text(g, header=None):
    lines = []
    if header:
        lines.append(f"# {header}")
    lines.append(f"vertices {g.n}")
    for u, v in sorted(g.edges):
        lines.append(f"edge {u} {v}")
    return "\n".join(lines) + "\n"


def load_graph(path):
    with open(path, "r", encoding="utf-8") as fh:
        g, extra = parse_graph_text(fh.read())
    if extra:
        lineno, parts = extra[0]
        raise GraphFormatError(f"line {lineno}: unknown directive {parts[0]!r}")
    return g


def save_graph(g, path, header=None):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_graph_text(g, header))
