"""Rooted pairs (G, H): relative densities, alpha-safety, strict and
(K,T)-maximal extensions, cyclic extensions and cyclic maximality.

H is an explicit subgraph (vertex subset + edge subset of the big graph),
so H may omit edges that the big graph carries on its vertex set.
Intermediate graphs K with v(K, H) = 0 have undefined relative density and
are excluded from density comparisons; alpha-safety still sees them
through f_alpha < 0.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations

from .errors import CapacityError, DomainError, GraphFormatError
from .graphs import Graph, parse_graph_text, format_graph_text

PAIR_CAP = 14


@dataclass(frozen=True)
class Alpha:
    """An edge-probability exponent alpha in (0, 1), exact."""

    value: Fraction

    def __post_init__(self):
        v = Fraction(self.value)
        object.__setattr__(self, "value", v)
        if not (0 < v < 1):
            raise DomainError(f"alpha must lie in (0,1), got {v}")

    @classmethod
    def from_parameters(cls, k, a, b):
        """alpha = 1 - 1/(2^(k-1) + a/b) for integers k > 3, a, b >= 1."""
        if k <= 3 or a < 1 or b < 1:
            raise DomainError("need k > 3 and a, b >= 1")
        return cls(1 - 1 / (Fraction(2) ** (k - 1) + Fraction(a, b)))


def alpha_value(alpha):
    """Accept Alpha, Fraction, int-pair or numeric; return an exact Fraction."""
    if isinstance(alpha, Alpha):
        return alpha.value
    if isinstance(alpha, tuple):
        return Fraction(*alpha)
    return Fraction(alpha)


@dataclass(frozen=True)
class Subgraph:
    """A subgraph of some host graph, as explicit vertex and edge sets."""

    vertices: frozenset
    edges: frozenset

    @classmethod
    def of(cls, vertices, edges=()):
        vs = frozenset(vertices)
        es = set()
        for u, v in edges:
            if u == v or u not in vs or v not in vs:
                raise DomainError(f"bad subgraph edge ({u},{v})")
            es.add((u, v) if u < v else (v, u))
        return cls(vs, frozenset(es))

    def contains(self, other):
        return other.vertices <= self.vertices and other.edges <= self.edges

    @classmethod
    def full(cls, g):
        return cls(frozenset(range(g.n)), g.edges)


def subgraph_in(g, subgraph):
    if not all(0 <= v < g.n for v in subgraph.vertices):
        raise DomainError("subgraph vertex outside host graph")
    if not subgraph.edges <= g.edges:
        raise DomainError("subgraph edge missing from host graph")


class RootedPair:
    """A pair (G, H) with an ordered root tuple enumerating V(H)."""

    __slots__ = ("big", "small_vertices", "small_edges", "roots")

    def __init__(self, big, small_vertices, small_edges, roots):
        small_vertices = frozenset(small_vertices)
        small_edges = frozenset(tuple(sorted(e)) for e in small_edges)
        roots = tuple(roots)
        for v in small_vertices:
            if not (0 <= v < big.n):
                raise DomainError(f"small vertex {v} outside big graph")
        for u, v in small_edges:
            if u not in small_vertices or v not in small_vertices:
                raise DomainError(f"small edge ({u},{v}) leaves the small vertex set")
            if not big.has_edge(u, v):
                raise DomainError(f"small edge ({u},{v}) missing from big graph")
        if len(roots) != len(small_vertices) or set(roots) != small_vertices:
            raise DomainError("roots must enumerate the small vertex set exactly once each")
        self.big = big
        self.small_vertices = small_vertices
        self.small_edges = small_edges
        self.roots = roots

    @classmethod
    def induced(cls, big, roots):
        """Pair whose small side is the induced subgraph on ``roots``."""
        rs = frozenset(roots)
        edges = {e for e in big.edges if e[0] in rs and e[1] in rs}
        return cls(big, rs, edges, tuple(roots))

    def new_vertices(self):
        return tuple(v for v in range(self.big.n) if v not in self.small_vertices)

    def added_edges(self):
        return frozenset(self.big.edges - self.small_edges)

    def __repr__(self):
        return (f"RootedPair(v={self.big.n}, e={len(self.big.edges)}, "
                f"roots={self.roots})")


# --- relative densities -------------------------------------------------

def rel_counts(pair):
    """(v(G,H), e(G,H)) = (v(G)-v(H), e(G)-e(H))."""
    return (pair.big.n - len(pair.small_vertices),
            len(pair.big.edges) - len(pair.small_edges))


def rel_density(pair):
    v_rel, e_rel = rel_counts(pair)
    if v_rel == 0:
        raise DomainError("relative density undefined when v(G,H) = 0")
    return Fraction(e_rel, v_rel)


def _check_cap(pair, cap):
    if pair.big.n > cap:
        raise CapacityError(f"pair enumeration capped at {cap} total vertices (got {pair.big.n})")


def _full_edge_count(pair, vertex_set):
    return sum(1 for u, v in pair.big.edges if u in vertex_set and v in vertex_set)


def _supersets(pair, proper=False):
    """Vertex sets W with roots < W <= V(G) (W < V(G) when proper)."""
    rest = sorted(set(range(pair.big.n)) - pair.small_vertices)
    top = len(rest) - 1 if proper else len(rest)
    for k in range(1, top + 1):
        for extra in combinations(rest, k):
            yield pair.small_vertices | set(extra)


def max_rel_density(pair, cap=PAIR_CAP):
    """max over H < K <= G of rho(K, H) with the witness vertex set.

    The maximizing K over a fixed vertex set carries every edge of G, so
    vertex supersets of V(H) suffice.  Ties break toward the smallest
    sorted vertex tuple.
    """
    _check_cap(pair, cap)
    if rel_counts(pair)[0] < 1:
        raise DomainError("max_rel_density needs v(G,H) >= 1")
    m = len(pair.small_vertices)
    e_h = len(pair.small_edges)
    best = None
    best_w = None
    for w in _supersets(pair):
        rho = Fraction(_full_edge_count(pair, w) - e_h, len(w) - m)
        key = tuple(sorted(w))
        if best is None or rho > best or (rho == best and key < tuple(sorted(best_w))):
            best = rho
            best_w = w
    return best, frozenset(best_w)


def e_min(pair, cap=PAIR_CAP):
    """Minimum e(K,H) among relative-density maximizers with a cross edge.

    The cross-edge condition requires K to carry an edge touching V(H)
    that is not an edge of H.
    """
    _check_cap(pair, cap)
    rho_max, _ = max_rel_density(pair, cap)
    m = len(pair.small_vertices)
    e_h = len(pair.small_edges)
    roots = pair.small_vertices
    best = None
    for w in _supersets(pair):
        e_k = _full_edge_count(pair, w)
        if Fraction(e_k - e_h, len(w) - m) != rho_max:
            continue
        crosses = any((u in roots or v in roots) and (u, v) not in pair.small_edges
                      for u, v in pair.big.edges if u in w and v in w)
        if crosses and (best is None or e_k - e_h < best):
            best = e_k - e_h
    if best is None:
        raise DomainError("no density maximizer satisfies the cross-edge condition")
    return best


def f_alpha(pair, alpha):
    """f_alpha(G,H) = v(G,H) - alpha*e(G,H), exact."""
    v_rel, e_rel = rel_counts(pair)
    return Fraction(v_rel) - alpha_value(alpha) * e_rel


def is_alpha_safe(pair, alpha, cap=PAIR_CAP):
    """True iff f_alpha(S,H) > 0 for every S with H < S <= G.

    The minimizer of f over a fixed vertex set takes every edge of G, so
    it suffices to scan vertex supersets; the vertex set of H itself
    participates when G has extra edges on it (then f < 0 and the pair is
    unsafe for every alpha).
    """
    _check_cap(pair, cap)
    if rel_counts(pair)[0] < 1:
        raise DomainError("alpha-safety needs v(G,H) >= 1")
    a = alpha_value(alpha)
    m = len(pair.small_vertices)
    e_h = len(pair.small_edges)
    extra_on_roots = _full_edge_count(pair, pair.small_vertices) - e_h
    if extra_on_roots > 0:
        return False
    for w in _supersets(pair):
        if Fraction(len(w) - m) - a * (_full_edge_count(pair, w) - e_h) <= 0:
            return False
    return True


def is_strictly_balanced_pair(pair, cap=PAIR_CAP):
    """True iff rho(G,H) > rho(K,H) for every H < K < G with v(K,H) >= 1."""
    _check_cap(pair, cap)
    rho = rel_density(pair)
    m = len(pair.small_vertices)
    e_h = len(pair.small_edges)
    for w in _supersets(pair, proper=True):
        if Fraction(_full_edge_count(pair, w) - e_h, len(w) - m) >= rho:
            return False
    return True


# --- extensions ---------------------------------------------------------

def iter_extensions(host, pattern, anchor, strict=False):
    """Lazily yield injective maps of the pattern into ``host`` pinning
    roots to anchor.

    A map qualifies when every pattern edge outside E(H) lands on a host
    edge.  With ``strict`` the condition is two-sided for pairs touching a
    new vertex: pattern non-edges must land on host non-edges.  Yields
    dicts {pattern vertex -> host vertex}.
    """
    anchor = tuple(anchor)
    if len(anchor) != len(pattern.roots):
        raise DomainError(f"anchor arity {len(anchor)} != root arity {len(pattern.roots)}")
    if len(set(anchor)) != len(anchor):
        raise DomainError("anchor vertices must be distinct")
    for v in anchor:
        if not (0 <= v < host.n):
            raise DomainError(f"anchor vertex {v} outside host graph")

    added = pattern.added_edges()
    mapping = dict(zip(pattern.roots, anchor))
    # root-root pattern edges outside E(H) constrain the anchor directly
    for u, v in added:
        if u in mapping and v in mapping:
            if not host.has_edge(mapping[u], mapping[v]):
                return
    news = pattern.new_vertices()
    host_adj = host.adj

    def ok(vertex, image, partial):
        for other, other_img in partial.items():
            pat_edge = (min(vertex, other), max(vertex, other)) in added
            host_edge = other_img in host_adj[image]
            if pat_edge and not host_edge:
                return False
            if strict and not pat_edge and host_edge:
                return False
        return True

    def place(i, partial, used):
        if i == len(news):
            yield dict(partial)
            return
        v = news[i]
        for cand in range(host.n):
            if cand in used:
                continue
            if ok(v, cand, partial):
                partial[v] = cand
                used.add(cand)
                yield from place(i + 1, partial, used)
                del partial[v]
                used.remove(cand)

    yield from place(0, mapping, set(anchor))


def enumerate_extensions(host, pattern, anchor, strict=False):
    """All qualifying maps, as a list; see :func:`iter_extensions`."""
    return list(iter_extensions(host, pattern, anchor, strict))


def is_kt_maximal(host, gt_vertices, ht_vertices, k_pattern, t_size):
    """No tuple from Gt sprouts a detached strict K-extension in the host.

    ``ht_vertices`` None selects the graph variant (tuples unrestricted);
    otherwise tuples need at least one vertex of Gt - Ht.  A violating
    extension meets Gt only in its anchor tuple and has no host edges
    between its new vertices and Gt minus the tuple.
    """
    gt = frozenset(gt_vertices)
    ht = None if ht_vertices is None else frozenset(ht_vertices)
    if t_size != len(k_pattern.roots):
        raise DomainError("t_size must equal the root arity of the K pattern")
    if t_size > len(gt):
        raise DomainError("t_size exceeds |Gt|")
    if ht is not None and not ht <= gt:
        raise DomainError("Ht must be a subset of Gt")
    fresh_required = None if ht is None else (gt - ht)
    pattern_news = k_pattern.new_vertices()
    for tup in permutations(sorted(gt), t_size):
        if fresh_required is not None and not (set(tup) & fresh_required):
            continue
        for ext in iter_extensions(host, k_pattern, tup, strict=True):
            new_images = {ext[v] for v in pattern_news}
            if new_images & gt:
                continue
            outside = gt - set(tup)
            if any(host.has_edge(a, b) for a in new_images for b in outside):
                continue
            return False
    return True


def count_kt_maximal_extensions(host, pattern, anchor, constraints):
    """Strict extensions whose (extension, anchor) pair passes every (K, T)."""
    count = 0
    anchor_set = frozenset(anchor)
    for ext in enumerate_extensions(host, pattern, anchor, strict=True):
        gt = frozenset(ext.values())
        if all(is_kt_maximal(host, gt, anchor_set, k_pat, t_sz)
               for k_pat, t_sz in constraints):
            count += 1
    return count


# --- cyclic extensions --------------------------------------------------

@dataclass(frozen=True)
class CyclicExtension:
    """One added tailed cycle (type1) or base-to-base path (type2)."""

    kind: str                 # "type1" | "type2"
    anchors: tuple            # one base vertex (type1) or two (type2)
    new_vertices: tuple
    new_edges: frozenset

    def key(self):
        return (frozenset(self.new_vertices), self.new_edges)


def _sorted_edge(u, v):
    return (u, v) if u < v else (v, u)


def enumerate_cyclic_extensions(host, base, m):
    """All cyclic m-extensions of ``base`` (a Subgraph of host) in host.

    Occurrences are deduplicated as added subgraphs: traversal direction
    and tail/cycle relabelings collapse.  Type2 with t = 0 is admitted and
    adds a single host edge between two base vertices that the base lacks.
    """
    if m < 2:
        raise DomainError("cyclic extensions need m >= 2")
    subgraph_in(host, base)
    base_v = base.vertices
    base_e = base.edges
    seen = {}

    def emit(kind, anchors, new_vertices, new_edges):
        ext = CyclicExtension(kind, tuple(anchors), tuple(new_vertices),
                              frozenset(new_edges))
        seen.setdefault(ext.key(), ext)

    # type2: paths x1 - y1 - ... - yt - x2 with 0 <= t <= m-1 fresh interior
    for x1 in sorted(base_v):
        stack = [(x1, [])]

        def walk(last, interior):
            for nxt in sorted(host.adj[last]):
                if nxt in base_v:
                    if nxt != x1 and (interior or _sorted_edge(x1, nxt) not in base_e):
                        edges = path_edges(x1, interior, nxt)
                        emit("type2", sorted((x1, nxt)), interior, edges)
                elif nxt not in interior and len(interior) < m - 1:
                    walk(nxt, interior + [nxt])

        def path_edges(a, interior, b):
            chain = [a] + interior + [b]
            return {_sorted_edge(u, v) for u, v in zip(chain, chain[1:])}

        walk(x1, [])

    # type1 (m >= 3): tail x1 - y^1_1 - ... - y^1_t1, then a cycle of
    # length t2+1 hung on the tail end (on x1 itself when t1 = 0)
    if m >= 3:
        for x1 in sorted(base_v):
            def tails(last, tail):
                yield last, tail
                if len(tail) < m - 3:  # leave room for a cycle (t2 >= 2)
                    for nxt in sorted(host.adj[last]):
                        if nxt not in base_v and nxt not in tail:
                            yield from tails(nxt, tail + [nxt])

            for hub, tail in tails(x1, []):
                budget = (m - 1) - len(tail)

                def cycles(last, body):
                    for nxt in sorted(host.adj[last]):
                        if nxt == hub and len(body) >= 2:
                            chain = [hub] + body + [hub]
                            edges = {_sorted_edge(u, v) for u, v in zip(chain, chain[1:])}
                            tail_chain = [x1] + tail
                            edges |= {_sorted_edge(u, v) for u, v in zip(tail_chain, tail_chain[1:])}
                            emit("type1", (x1,), tail + body, edges)
                        elif (nxt not in base_v and nxt not in body and nxt not in tail
                              and nxt != hub and len(body) < budget):
                            cycles(nxt, body + [nxt])

                cycles(hub, [])
    return list(seen.values())


def is_cyclically_m_maximal(host, g_sub, h_sub, m):
    """True iff every cyclic m-extension of G in host extends H too.

    Extensions compare as full graphs: G+added must coincide with some
    H+added' vertex- and edge-wise.
    """
    subgraph_in(host, g_sub)
    subgraph_in(host, h_sub)
    if not g_sub.contains(h_sub):
        raise DomainError("H_sub must be a subgraph of G_sub")
    h_keys = set()
    for ext in enumerate_cyclic_extensions(host, h_sub, m):
        h_keys.add((h_sub.vertices | set(ext.new_vertices),
                    h_sub.edges | ext.new_edges))
    for ext in enumerate_cyclic_extensions(host, g_sub, m):
        full = (g_sub.vertices | set(ext.new_vertices),
                g_sub.edges | ext.new_edges)
        if full not in h_keys:
            return False
    return True


# --- pair text format ----------------------------------------------------

def parse_pair_text(text):
    big, extra = parse_graph_text(text)
    small_v = []
    small_e = []
    roots = []
    for lineno, parts in extra:
        if parts[0] == "small" and len(parts) == 2:
            small_v.append(int(parts[1]))
        elif parts[0] == "smalledge" and len(parts) == 3:
            small_e.append((int(parts[1]), int(parts[2])))
        elif parts[0] == "root" and len(parts) == 2:
            roots.append(int(parts[1]))
        else:
            raise GraphFormatError(f"line {lineno}: unknown pair directive {' '.join(parts)!r}")
    try:
        return RootedPair(big, small_v, small_e, roots)
    except DomainError as exc:
        raise GraphFormatError(str(exc)) from exc


def format_pair_text(pair, header=None):
    out = [format_graph_text(pair.big, header).rstrip("\n")]
    for v in sorted(pair.small_vertices):
        out.append(f"small {v}")
    for u, v in sorted(pair.small_edges):
        out.append(f"smalledge {u} {v}")
    for v in pair.roots:
        out.append(f"root {v}")
    return "\n".join(out) + "\n"


def load_pair(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_pair_text(fh.read())


def save_pair(pair, path, header=None):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_pair_text(pair, header))
