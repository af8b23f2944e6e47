"""Explicit witness constructions (X, Y) with exact density identities.

Two families:

* :func:`build_clique_witness` - X is a q-clique (q = floor(k/2)) whose m
  common neighbors contain a further q-clique; Y hangs singleton-linked
  vertices v_1..v_{m+q-1} and a hub z on it.  All of X, Y and the pair
  (Y, X) have density 1/alpha for alpha = 1/q + 1/(q(m+q-1)).

* :func:`build_path_witness` - X bundles m internally disjoint a-b paths
  of length L = 2^(k-5) together with m disjoint paths of length L from a
  to the midpoints; Y adds a hub z joined to each midpoint by a fresh
  length-L path.  Densities are 1/alpha for alpha = 1 - 1/L + 1/(Lm), and
  the pair (Y, X) has relative density Lm/((L-1)m + 1).

X's vertices always come first in the labeling, so the pair's roots are
(0, ..., v(X)-1) and stay positionally stable across runs.
"""

from fractions import Fraction
from itertools import combinations

from .errors import DomainError
from .graphs import Graph, density
from .pairs import Alpha, RootedPair, rel_density


def clique_witness_alpha(k, m):
    """alpha = 1/q + 1/(q(m+q-1)), q = floor(k/2)."""
    q = k // 2
    return Fraction(1, q) + Fraction(1, q * (m + q - 1))


def path_witness_alpha(k, m):
    """alpha = 1 - 1/L + 1/(Lm), L = 2^(k-5)."""
    big = 2 ** (k - 5)
    return 1 - Fraction(1, big) + Fraction(1, big * m)


def build_clique_witness(k, m):
    """Returns (X, Y, pair, Alpha); requires k >= 5 and m >= floor(k/2).

    The density identity forces e(X) = q(m+q-1) on m+q vertices, which no
    simple graph attains for m < q (it exceeds C(m+q, 2)); such calls and
    the degenerate alpha = 1 case (k = 5, m = 1) raise DomainError.
    """
    if k < 5:
        raise DomainError("need k >= 5")
    if m < 1:
        raise DomainError("need m >= 1")
    q = k // 2
    alpha = clique_witness_alpha(k, m)
    if not (0 < alpha < 1):
        raise DomainError(f"alpha = {alpha} falls outside (0,1)")
    if m < q:
        raise DomainError(
            f"no simple graph realizes the witness for m={m} < q={q}: "
            f"it would need {q * (m + q - 1)} edges on {m + q} vertices")

    xs = list(range(q))
    cs = list(range(q, q + m))
    edges = list(combinations(xs, 2))
    edges += [(x, c) for x in xs for c in cs]
    edges += list(combinations(cs[:q], 2))      # the common-neighbor clique
    x_graph = Graph(q + m, edges)

    j = m + q - 1
    vs = list(range(q + m, q + m + j))
    z = q + m + j
    assigned = xs[:q - 1] + cs                   # one partner per new vertex
    y_edges = list(edges)
    for i, v in enumerate(vs):
        partner = assigned[i]
        y_edges.append((v, partner))
        extras = [x for x in xs if x != partner][:q - 2]
        y_edges += [(v, x) for x in extras]
        y_edges.append((v, z))
    y_graph = Graph(2 * (q + m), y_edges)

    pair = RootedPair(y_graph, range(x_graph.n), x_graph.edges, range(x_graph.n))
    inv = Fraction(1, 1) / alpha
    if density(x_graph) != inv or density(y_graph) != inv or rel_density(pair) != inv:
        raise AssertionError("witness density identity failed; construction bug")
    return x_graph, y_graph, pair, Alpha(alpha)


def build_path_witness(k, m):
    """Returns (X, Y, pair, Alpha); requires k >= 8 and m >= 2."""
    if k < 8:
        raise DomainError("need k >= 8")
    if m < 2:
        raise DomainError("need m >= 2")
    length = 2 ** (k - 5)
    half = length // 2
    alpha = path_witness_alpha(k, m)

    a, b = 0, 1
    edges = []
    nxt = 2
    midpoints = []

    def add_path(start, end):
        nonlocal nxt
        interior = list(range(nxt, nxt + length - 1))
        nxt += length - 1
        chain = [start] + interior + [end]
        edges.extend(zip(chain, chain[1:]))
        return interior

    for _ in range(m):
        interior = add_path(a, b)
        midpoints.append(interior[half - 1])
    for mid in midpoints:
        add_path(a, mid)
    x_graph = Graph(nxt, edges)

    z = nxt
    nxt += 1
    for mid in midpoints:
        add_path(z, mid)
    y_graph = Graph(nxt, edges)

    pair = RootedPair(y_graph, range(x_graph.n), x_graph.edges, range(x_graph.n))
    inv = 1 / alpha
    pair_rho = Fraction(length * m, (length - 1) * m + 1)
    if density(x_graph) != inv or density(y_graph) != inv or rel_density(pair) != pair_rho:
        raise AssertionError("witness density identity failed; construction bug")
    return x_graph, y_graph, pair, Alpha(alpha)
