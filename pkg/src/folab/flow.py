"""Exact min-cut machinery for density checks beyond the enumeration caps.

Strict balance of a graph G asks that no proper vertex subset S has
e(S)/|S| >= e(G)/v(G), i.e. that v*e(S) - e*|S| <= -1 for all S outside
{0, V}.  Maximizing A*e(S) - B*|S| is a supermodular selection problem
solved by one s-t min cut with integer capacities, so everything stays
exact:

    cut({s} + S) = 2*A*e_total - 2*(A*e(S) - B*|S|)

with s->u of capacity A*deg(u), u->t of capacity 2*B, and arcs of capacity
A both ways across each edge.  The maximal maximizer (largest optimal S)
falls out of residual reachability and exposes ties at score zero.
"""

from collections import deque

from .errors import DomainError


class _Dinic:
    def __init__(self, size):
        self.size = size
        self.head = [[] for _ in range(size)]
        self.to = []
        self.cap = []

    def add_edge(self, u, v, cap):
        self.head[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(cap)
        self.head[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(0)

    def max_flow(self, s, t):
        flow = 0
        while True:
            level = [-1] * self.size
            level[s] = 0
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for eid in self.head[u]:
                    v = self.to[eid]
                    if self.cap[eid] > 0 and level[v] < 0:
                        level[v] = level[u] + 1
                        queue.append(v)
            if level[t] < 0:
                return flow
            it = [0] * self.size

            def dfs(u, pushed):
                if u == t:
                    return pushed
                while it[u] < len(self.head[u]):
                    eid = self.head[u][it[u]]
                    v = self.to[eid]
                    if self.cap[eid] > 0 and level[v] == level[u] + 1:
                        got = dfs(v, min(pushed, self.cap[eid]))
                        if got > 0:
                            self.cap[eid] -= got
                            self.cap[eid ^ 1] += got
                            return got
                    it[u] += 1
                return 0

            while True:
                pushed = dfs(s, 1 << 62)
                if pushed == 0:
                    break
                flow += pushed

    def coreach_sink(self, t):
        """Vertices that can still reach t in the residual graph."""
        seen = [False] * self.size
        seen[t] = True
        queue = deque([t])
        while queue:
            u = queue.popleft()
            for eid in self.head[u]:
                v = self.to[eid]
                # residual arc v->u exists iff the paired edge has capacity
                if not seen[v] and self.cap[eid ^ 1] > 0:
                    seen[v] = True
                    queue.append(v)
        return seen


def max_subgraph_score(g, a_coef, b_coef, forced=(), banned=()):
    """Max of a_coef*e(S) - b_coef*|S| over allowed S, with the largest maximizer.

    ``forced`` vertices must be in S, ``banned`` ones are deleted from the
    graph.  e(S) counts edges of G with both ends in S.  Returns the exact
    integer score and the maximizer as a frozenset.
    """
    forced = set(forced)
    banned = set(banned)
    if forced & banned:
        raise DomainError("a vertex is both forced and banned")
    allowed = [v for v in range(g.n) if v not in banned]
    idx = {v: i for i, v in enumerate(allowed)}
    edges = [(u, v) for u, v in g.edges if u in idx and v in idx]
    deg = {v: 0 for v in allowed}
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    m = len(edges)
    s = len(allowed)
    t = s + 1
    net = _Dinic(s + 2)
    big = 2 * a_coef * m + 2 * b_coef * len(allowed) + 1
    for v in allowed:
        net.add_edge(s, idx[v], big if v in forced else a_coef * deg[v])
        net.add_edge(idx[v], t, 2 * b_coef)
    for u, v in edges:
        net.add_edge(idx[u], idx[v], a_coef)
        net.add_edge(idx[v], idx[u], a_coef)
    cut = net.max_flow(s, t)
    reach_t = net.coreach_sink(t)
    maximizer = frozenset(v for v in allowed if not reach_t[idx[v]])
    score = (2 * a_coef * m - cut) // 2
    return score, maximizer


def is_strictly_balanced_flow(g):
    """Strict balance for arbitrary-size graphs via per-vertex min cuts.

    G is strictly balanced iff for every vertex u the best score of
    v(G)*e(S) - e(G)*|S| over S avoiding u is 0 and attained only by S = {}.
    """
    if g.n == 0:
        raise DomainError("balance of the empty graph is undefined")
    if g.n == 1:
        return True
    a_coef, b_coef = g.n, len(g.edges)
    for u in range(g.n):
        score, maximizer = max_subgraph_score(g, a_coef, b_coef, banned=(u,))
        if score > 0 or (score == 0 and maximizer):
            return False
    return True


def is_strictly_balanced_pair_flow(big, small_vertices, small_edge_count):
    """Pair strict balance for large pairs; requires the small side induced.

    Checks rho(K, H) < rho(G, H) for every intermediate H < K < G, where for
    each vertex superset the maximizing K carries every edge of G.  The
    objective over supersets W of the roots is

        h(W) = v_rel*(e(W) - e_H) - e_rel*(|W| - |roots|)

    which is max_subgraph_score shifted by the constant v_rel*e_H -
    e_rel*|roots|.  Not balanced iff some W strictly between roots and V(G)
    has h >= 0.
    """
    roots = frozenset(small_vertices)
    inner = sum(1 for u, v in big.edges if u in roots and v in roots)
    if inner != small_edge_count:
        raise DomainError("flow-based pair balance needs the small graph induced in the big one")
    rest = [v for v in range(big.n) if v not in roots]
    v_rel = len(rest)
    if v_rel < 1:
        raise DomainError("pair has no relative vertices")
    e_rel = len(big.edges) - small_edge_count
    shift = v_rel * small_edge_count - e_rel * len(roots)
    for u in rest:
        score, maximizer = max_subgraph_score(big, v_rel, e_rel, forced=roots, banned=(u,))
        h = score - shift
        if h > 0:
            return False
        if h == 0 and maximizer != roots:
            return False
    return True
