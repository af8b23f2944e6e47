"""Certificate checks for the Duplicator bookkeeping, and the greedy
cyclic-extension chain used by the opening strategy.

The certificates verify, never assume: a regular certificate checks pick
coverage (I), pairwise tuple separation (II), absence of cyclic
extensions (III), a size bound (IV), and a single pick-respecting
isomorphism across the tuple lists (V).  The boundary rounds drop one
condition each: II at r = 1, III at r = k.
"""

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from ..errors import DomainError
from ..graphs import Graph, set_distance
from ..pairs import Subgraph, alpha_value, enumerate_cyclic_extensions


def _iso_between(sub_x, sub_y, pinned):
    """A structure isomorphism sub_x -> sub_y extending ``pinned``, or None."""
    vx = sorted(sub_x.vertices)
    vy = sorted(sub_y.vertices)
    if len(vx) != len(vy) or len(sub_x.edges) != len(sub_y.edges):
        return None
    mapping = {}
    for a, b in pinned.items():
        if a in sub_x.vertices:
            if b not in sub_y.vertices:
                return None
            mapping[a] = b
    if len(set(mapping.values())) != len(mapping):
        return None
    degree_x = {v: 0 for v in vx}
    degree_y = {v: 0 for v in vy}
    for u, v in sub_x.edges:
        degree_x[u] += 1
        degree_x[v] += 1
    for u, v in sub_y.edges:
        degree_y[u] += 1
        degree_y[v] += 1

    def edge_x(a, b):
        return (min(a, b), max(a, b)) in sub_x.edges

    def edge_y(a, b):
        return (min(a, b), max(a, b)) in sub_y.edges

    for a in mapping:
        if degree_x[a] != degree_y[mapping[a]]:
            return None
        for c in mapping:
            if a < c and edge_x(a, c) != edge_y(mapping[a], mapping[c]):
                return None

    order = [v for v in vx if v not in mapping]
    used = set(mapping.values())

    def search(i):
        if i == len(order):
            return dict(mapping)
        v = order[i]
        for w in vy:
            if w in used or degree_x[v] != degree_y[w]:
                continue
            if any(edge_x(v, a) != edge_y(w, mapping[a]) for a in mapping):
                continue
            mapping[v] = w
            used.add(w)
            found = search(i + 1)
            if found is not None:
                return found
            del mapping[v]
            used.discard(w)
        return None

    return search(0)


def _tuples_disjoint(tuples):
    seen = set()
    for t in tuples:
        if t.vertices & seen:
            return False
        seen |= t.vertices
    return True


def _check_picks_covered(tuples_x, tuples_y, picks):
    union_x = set().union(*(t.vertices for t in tuples_x))
    union_y = set().union(*(t.vertices for t in tuples_y))
    return all(gx in union_x and hy in union_y for gx, hy in picks)


def _check_size_bound(tuples_x, tuples_y, k, r, b):
    bound = 2 ** (2 * k) * b + 2 ** (k - 1) * r
    union_x = set().union(*(t.vertices for t in tuples_x))
    union_y = set().union(*(t.vertices for t in tuples_y))
    return len(union_x) <= bound and len(union_y) <= bound


def _check_shared_iso(tuples_x, tuples_y, picks):
    pinned = {}
    for gx, hy in picks:
        if pinned.get(gx, hy) != hy:
            return False
        pinned[gx] = hy
    for j, (tx, ty) in enumerate(zip(tuples_x, tuples_y)):
        local = {a: pinned[a] for a in pinned if a in tx.vertices}
        if any(bimg not in ty.vertices for bimg in local.values()):
            return False
        if _iso_between(tx, ty, local) is None:
            return False
    return True


def check_regular_equivalence(xr, yr, tuples_x, tuples_y, picks, k, r, l, b=1):
    """The five-property certificate for tuple lists in (X_r, Y_r).

    ``picks`` lists the r pick pairs (x-vertex, y-vertex).  Returns
    (ok, reason).
    """
    if not (1 <= l <= r <= k):
        raise DomainError("need 1 <= l <= r <= k")
    if len(tuples_x) != l or len(tuples_y) != l:
        raise DomainError("tuple lists must have length l")
    if len(picks) != r:
        raise DomainError("need exactly r picks")
    if not (_tuples_disjoint(tuples_x) and _tuples_disjoint(tuples_y)):
        return False, "tuples overlap"
    if not _check_picks_covered(tuples_x, tuples_y, picks):
        return False, "property I: a pick escapes the tuples"
    if r > 1:
        gap = 2 ** (k - r)
        for j in range(l):
            for jj in range(j + 1, l):
                if set_distance(xr, tuples_x[j].vertices, tuples_x[jj].vertices) <= gap:
                    return False, "property II: x tuples too close"
                if set_distance(yr, tuples_y[j].vertices, tuples_y[jj].vertices) <= gap:
                    return False, "property II: y tuples too close"
    if r < k:
        m = 2 ** (k - r)
        for j in range(l):
            if enumerate_cyclic_extensions(xr, tuples_x[j], m):
                return False, f"property III: x tuple {j} has a cyclic {m}-extension"
            if enumerate_cyclic_extensions(yr, tuples_y[j], m):
                return False, f"property III: y tuple {j} has a cyclic {m}-extension"
    if not _check_size_bound(tuples_x, tuples_y, k, r, b):
        return False, "property IV: tuple union above the size bound"
    if not _check_shared_iso(tuples_x, tuples_y, picks):
        return False, "property V: no pick-respecting isomorphism"
    return True, "ok"


def _pick_subgraph(host, vertices):
    vs = frozenset(vertices)
    return Subgraph.of(vs, {e for e in host.edges if e[0] in vs and e[1] in vs})


def check_kr_equivalence(xr, yr, tilde_x, tilde_y, picks, k, r, b=1):
    """(k, r)-equivalence: I, IV, V at l = 1 plus three cyclic conditions.

    No cyclic (2^(k-r) - 1)-extension of either tilde graph, no
    second-type cyclic 2^(k-r)-extension of the pick-induced subgraphs,
    and at most one cyclic 2^(k-r)-extension of either tilde graph.
    """
    if not (1 <= r <= k):
        raise DomainError("need 1 <= r <= k")
    if len(picks) != r:
        raise DomainError("need exactly r picks")
    if not _check_picks_covered([tilde_x], [tilde_y], picks):
        return False, "property I: a pick escapes the tilde graphs"
    if not _check_size_bound([tilde_x], [tilde_y], k, r, b):
        return False, "property IV: tilde graph above the size bound"
    if not _check_shared_iso([tilde_x], [tilde_y], picks):
        return False, "property V: no pick-respecting isomorphism"
    m = 2 ** (k - r)
    if m - 1 >= 2:
        for host, sub, side in ((xr, tilde_x, "x"), (yr, tilde_y, "y")):
            if enumerate_cyclic_extensions(host, sub, m - 1):
                return False, f"{side} tilde graph has a cyclic {m - 1}-extension"
    if m >= 2:
        px = _pick_subgraph(xr, (gx for gx, _ in picks))
        py = _pick_subgraph(yr, (hy for _, hy in picks))
        for host, sub, side in ((xr, px, "x"), (yr, py, "y")):
            if any(ext.kind == "type2"
                   for ext in enumerate_cyclic_extensions(host, sub, m)):
                return False, f"{side} pick subgraph has a second-type cyclic {m}-extension"
        for host, sub, side in ((xr, tilde_x, "x"), (yr, tilde_y, "y")):
            if len(enumerate_cyclic_extensions(host, sub, m)) > 1:
                return False, f"{side} tilde graph has two cyclic {m}-extensions"
    return True, "ok"


# --- extension chain -----------------------------------------------------

@dataclass
class ChainResult:
    """Greedy cyclic-extension chain from a single start vertex.

    ``graphs`` lists the chain as Subgraphs (start vertex included),
    ``edge_steps`` the e(G_i, G_{i-1}) increments, ``full_steps`` which
    steps were not (m-1)-extensions.  ``closure_case`` relates the induced
    closure of the chain end to 1/alpha: "equal" (no extra induced
    edges), "below", "at", "above", or "unknown" when alpha was not
    given.  ``guard_violated`` flags a tripped length guard (the host
    would be too dense for the intended regime).
    """

    graphs: list
    edge_steps: list
    full_steps: list
    closure_case: str
    closure_density: Fraction
    guard_violated: bool

    @property
    def length(self):
        return len(self.graphs)


def _is_smaller_extension(ext, m):
    """Would this extension also qualify at parameter m - 1?"""
    t = len(ext.new_vertices)
    if ext.kind == "type2":
        return m - 1 >= 2 and t <= m - 2
    return m - 1 >= 3 and t <= m - 2


def _ext_key(ext):
    return (ext.kind, ext.anchors, ext.new_vertices)


def _without(host, ext):
    """Host minus the extension's new vertices and added edges."""
    drop = set(ext.new_vertices)
    keep = [e for e in host.edges
            if e not in ext.new_edges and not (e[0] in drop or e[1] in drop)]
    return Graph(host.n, keep)


def _grow(sub, ext):
    return Subgraph(sub.vertices | set(ext.new_vertices), sub.edges | ext.new_edges)


def build_extension_chain(host, start, k, b=1, alpha=None):
    """Chain G_1 < G_2 < ... of cyclic 2^(k-1)-extensions from ``start``.

    Smaller steps (those that also qualify at 2^(k-1) - 1) are taken
    first.  When only full-size steps remain, the builder prefers one
    with no alternative in the host minus its material; failing that, it
    exhausts that reduced host before taking the step, so the full step
    it finally takes has no alternative there.  Stops when no extension
    exists, or flags the guard at 2^(k-1)*b + 1 steps.
    """
    m = 2 ** (k - 1)
    limit = m * b + 1
    current = Subgraph.of({start}, ())
    graphs = []
    edge_steps = []
    full_steps = []
    guard_violated = False

    def take(ext):
        nonlocal current
        current = _grow(current, ext)
        graphs.append(current)
        edge_steps.append(len(ext.new_edges))
        full_steps.append(not _is_smaller_extension(ext, m))

    while True:
        if len(graphs) >= limit:
            guard_violated = True
            break
        exts = sorted(enumerate_cyclic_extensions(host, current, m), key=_ext_key)
        if not exts:
            break
        small = [e for e in exts if _is_smaller_extension(e, m)]
        if small:
            take(small[0])
            continue
        chosen = None
        for cand in exts:
            if not enumerate_cyclic_extensions(_without(host, cand), current, m):
                chosen = cand
                break
        if chosen is not None:
            take(chosen)
            continue
        cand = exts[0]
        reduced = _without(host, cand)
        while len(graphs) < limit:
            sub_exts = sorted(enumerate_cyclic_extensions(reduced, current, m),
                              key=_ext_key)
            if not sub_exts:
                break
            sub_small = [e for e in sub_exts if _is_smaller_extension(e, m)]
            take(sub_small[0] if sub_small else sub_exts[0])
        if len(graphs) >= limit:
            guard_violated = True
            break
        take(cand)

    if not graphs:
        return ChainResult([], [], [], "empty", Fraction(0), False)

    closure_vertices = graphs[-1].vertices
    closure_edges = frozenset(e for e in host.edges
                              if e[0] in closure_vertices and e[1] in closure_vertices)
    closure_density = Fraction(len(closure_edges), len(closure_vertices))
    if closure_edges == graphs[-1].edges:
        case = "equal"
    elif alpha is None:
        case = "unknown"
    else:
        inv = 1 / alpha_value(alpha)
        case = "below" if closure_density < inv else ("at" if closure_density == inv else "above")
    return ChainResult(graphs, edge_steps, full_steps, case, closure_density,
                       guard_violated)


def shortest_path_to_set(host, vertex, targets):
    """A lexicographically-least shortest path from ``vertex`` into ``targets``.

    Returns the vertex list (``vertex`` first) or None when unreachable.
    """
    targets = set(targets)
    if vertex in targets:
        return [vertex]
    parent = {vertex: None}
    frontier = deque([vertex])
    goal = None
    while frontier and goal is None:
        u = frontier.popleft()
        for w in sorted(host.adj[u]):
            if w in parent:
                continue
            parent[w] = u
            if w in targets:
                goal = w
                break
            frontier.append(w)
    if goal is None:
        return None
    path = []
    cur = goal
    while cur is not None:
        path.append(cur)
        cur = parent[cur]
    path.reverse()
    return path
