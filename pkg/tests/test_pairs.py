import random
from fractions import Fraction
from itertools import combinations

import pytest

from folab.errors import DomainError, GraphFormatError
from folab.graphs import Graph, complete_graph, cycle_graph, path_graph
from folab.pairs import (Alpha, CyclicExtension, RootedPair, Subgraph, e_min,
                         enumerate_cyclic_extensions, enumerate_extensions,
                         f_alpha, format_pair_text, is_alpha_safe,
                         is_cyclically_m_maximal, is_kt_maximal,
                         is_strictly_balanced_pair, count_kt_maximal_extensions,
                         max_rel_density, parse_pair_text, rel_counts,
                         rel_density)
from folab.witnesses import build_path_witness


def k3_edge_pair():
    return RootedPair(complete_graph(3), {0, 1}, [(0, 1)], (0, 1))


def pendant_pattern():
    """One new vertex hung on a single root."""
    return RootedPair(Graph(2, [(0, 1)]), {0}, [], (0,))


def random_pair(rng, max_n=6):
    n = rng.randint(2, max_n)
    g = Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)
                  if rng.random() < 0.6])
    root_count = rng.randint(1, n - 1)
    roots = tuple(rng.sample(range(n), root_count))
    inner = [e for e in g.edges if e[0] in roots and e[1] in roots]
    kept = [e for e in inner if rng.random() < 0.7]
    return RootedPair(g, roots, kept, roots)


def test_rel_counts_examples():
    assert rel_counts(k3_edge_pair()) == (1, 2)
    g = cycle_graph(4)
    assert rel_counts(RootedPair.induced(g, range(4))) == (0, 0)
    assert rel_counts(RootedPair(g, {0}, [], (0,))) == (3, 4)


def test_rel_density_examples():
    assert rel_density(k3_edge_pair()) == 2
    p3 = path_graph(3)
    assert rel_density(RootedPair(p3, {0}, [], (0,))) == 1
    # the glued-paths pair at k = 8 with three connecting paths
    _, _, pair, _ = build_path_witness(8, 3)
    assert rel_density(pair) == Fraction(24, 22) == Fraction(12, 11)
    with pytest.raises(DomainError):
        rel_density(RootedPair.induced(p3, range(3)))


def test_max_rel_density_examples():
    rho, witness = max_rel_density(k3_edge_pair())
    assert rho == 2 and witness == frozenset({0, 1, 2})
    assert max_rel_density(k3_edge_pair())[0] == rel_density(k3_edge_pair())
    k4 = complete_graph(4)
    rho, witness = max_rel_density(RootedPair(k4, {0}, [], (0,)))
    assert rho == 2 and witness == frozenset(range(4))


def test_e_min_examples():
    assert e_min(k3_edge_pair()) == 2
    star = Graph(4, [(0, 1), (0, 2), (0, 3)])
    assert e_min(RootedPair(star, {1, 2, 3}, [], (1, 2, 3))) == 3
    single = RootedPair(Graph(2, [(0, 1)]), {0}, [], (0,))
    assert e_min(single) == 1
    # no qualifying maximizer: relative part detached from the roots
    detached = RootedPair(Graph(3, [(1, 2)]), {0}, [], (0,))
    with pytest.raises(DomainError):
        e_min(detached)


def test_f_alpha_examples():
    assert f_alpha(k3_edge_pair(), Fraction(2, 5)) == Fraction(1, 5)
    p3 = path_graph(3)
    assert f_alpha(RootedPair(p3, {0}, [], (0,)), Fraction(1, 2)) == 1
    same = RootedPair.induced(p3, range(3))
    for num in range(1, 10):
        assert f_alpha(same, Fraction(num, 10)) == 0


def test_alpha_safe_examples():
    pair = k3_edge_pair()
    assert is_alpha_safe(pair, Fraction(2, 5))
    assert not is_alpha_safe(pair, Fraction(1, 2))
    iso = RootedPair(Graph(2, []), {0}, [], (0,))
    for num in range(1, 10):
        assert is_alpha_safe(iso, Fraction(num, 10))


def brute_alpha_safe(pair, alpha):
    """Independent oracle: every intermediate subgraph, all edge subsets."""
    roots = pair.small_vertices
    rest = [v for v in range(pair.big.n) if v not in roots]
    for k in range(len(rest) + 1):
        for extra in combinations(rest, k):
            w = set(roots) | set(extra)
            avail = [e for e in pair.big.edges
                     if e[0] in w and e[1] in w and e not in pair.small_edges]
            for r in range(len(avail) + 1):
                for chosen in combinations(avail, r):
                    s_v, s_e = len(w) - len(roots), len(chosen)
                    if s_v == 0 and s_e == 0:
                        continue  # S = H itself is excluded
                    if Fraction(s_v) - alpha * s_e <= 0:
                        return False
    return True


def test_alpha_safe_against_brute_oracle():
    rng = random.Random(5)
    grid = [Fraction(i, 10) for i in range(1, 10)]
    checked = 0
    while checked < 60:
        pair = random_pair(rng)
        if rel_counts(pair)[0] < 1:
            continue
        checked += 1
        for alpha in grid:
            assert is_alpha_safe(pair, alpha) == brute_alpha_safe(pair, alpha)


def test_alpha_safe_threshold_identity():
    # with every intermediate carrying an edge, safety is alpha < 1/rho_max
    rng = random.Random(6)
    grid = [Fraction(i, 10) for i in range(1, 10)]
    checked = 0
    while checked < 40:
        pair = random_pair(rng)
        v_rel, _ = rel_counts(pair)
        if v_rel < 1:
            continue
        roots = pair.small_vertices
        edges_everywhere = all(
            any((e[0] in w and e[1] in w and e not in pair.small_edges)
                for e in pair.big.edges)
            for k in range(1, v_rel + 1)
            for w in ({*roots, *extra} for extra in combinations(
                [v for v in range(pair.big.n) if v not in roots], k)))
        if not edges_everywhere:
            continue
        inner_extra = sum(1 for e in pair.big.edges
                          if e[0] in roots and e[1] in roots
                          and e not in pair.small_edges)
        if inner_extra:
            continue
        checked += 1
        bound = 1 / max_rel_density(pair)[0]
        for alpha in grid:
            assert is_alpha_safe(pair, alpha) == (alpha < bound)


def test_strictly_balanced_pair_examples():
    assert is_strictly_balanced_pair(k3_edge_pair())
    two_pendants = Graph(4, [(0, 2), (1, 3)])
    pair = RootedPair(two_pendants, {0, 1}, [], (0, 1))
    assert not is_strictly_balanced_pair(pair)
    single = RootedPair(Graph(2, [(0, 1)]), {0}, [], (0,))
    assert is_strictly_balanced_pair(single)


def test_enumerate_extensions_examples():
    pend = pendant_pattern()
    assert len(enumerate_extensions(complete_graph(3), pend, (0,))) == 2
    p3 = path_graph(3)
    assert len(enumerate_extensions(p3, pend, (1,))) == 2
    assert len(enumerate_extensions(p3, pend, (0,))) == 1
    lonely = RootedPair(Graph(3, [(0, 2)]), {0, 1}, [], (0, 1))
    assert enumerate_extensions(complete_graph(3), lonely, (0, 1), strict=True) == []
    with pytest.raises(DomainError):
        enumerate_extensions(p3, pend, (0, 1))


def test_strict_subset_of_nonstrict():
    rng = random.Random(9)
    pend = pendant_pattern()
    two_new = RootedPair(Graph(3, [(0, 1), (1, 2)]), {0}, [], (0,))
    for _ in range(60):
        n = rng.randint(2, 6)
        g = Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)
                      if rng.random() < 0.5])
        for pattern in (pend, two_new):
            anchor = (rng.randrange(n),)
            loose = enumerate_extensions(g, pattern, anchor)
            strict = enumerate_extensions(g, pattern, anchor, strict=True)
            keys = {tuple(sorted(m.items())) for m in loose}
            assert all(tuple(sorted(m.items())) in keys for m in strict)
    # counts agree when the pattern has no new-vertex non-edges
    g = complete_graph(4)
    assert (len(enumerate_extensions(g, pend, (0,)))
            == len(enumerate_extensions(g, pend, (0,), strict=True)))


def triangle_with_pendant():
    return Graph(4, [(0, 1), (1, 2), (0, 2), (0, 3)])


def test_kt_maximal_examples():
    host = triangle_with_pendant()
    pend = pendant_pattern()
    # no room outside Gt
    assert is_kt_maximal(complete_graph(3), {0, 1, 2}, None, pend, 1)
    assert not is_kt_maximal(host, {0, 1, 2}, None, pend, 1)
    wedge = RootedPair(Graph(3, [(0, 2), (1, 2)]), {0, 1}, [], (0, 1))
    assert is_kt_maximal(host, {0, 1, 2}, None, wedge, 2)
    with pytest.raises(DomainError):
        is_kt_maximal(host, {0}, None, wedge, 2)


def test_count_kt_maximal_extensions():
    host = triangle_with_pendant()
    pend = pendant_pattern()
    # empty constraint list equals the strict count
    for anchor in ((0,), (1,), (3,)):
        assert (count_kt_maximal_extensions(host, pend, anchor, [])
                == len(enumerate_extensions(host, pend, anchor, strict=True)))
    # requiring the new vertex to stay unextended keeps only clean leaves:
    # from vertex 1 only the extension into 2 survives (2's sole fresh
    # pendant would touch the rest of the triangle), and from the pendant
    # tip nothing survives (0 extends away from it)
    constraint = (pendant_pattern(), 1)
    assert count_kt_maximal_extensions(host, pend, (1,), [constraint]) == 1
    assert count_kt_maximal_extensions(host, pend, (3,), [constraint]) == 0
    no_room = Graph(2, [])
    assert count_kt_maximal_extensions(no_room, pend, (0,), []) == 0


def test_cyclic_extension_examples():
    c4 = cycle_graph(4)
    exts = enumerate_cyclic_extensions(c4, Subgraph.of({0}), 4)
    assert len(exts) == 1 and exts[0].kind == "type1"
    assert enumerate_cyclic_extensions(c4, Subgraph.of({0}), 3) == []
    p3 = path_graph(3)
    exts = enumerate_cyclic_extensions(p3, Subgraph.of({0, 2}), 2)
    assert len(exts) == 1 and exts[0].kind == "type2"
    with pytest.raises(DomainError):
        enumerate_cyclic_extensions(c4, Subgraph.of({0}), 1)


def test_cyclic_extension_type2_zero_interior():
    tri = complete_graph(3)
    base = Subgraph.of({0, 1})  # the edge {0,1} is not claimed by the base
    exts = enumerate_cyclic_extensions(tri, base, 2)
    bare = [e for e in exts if not e.new_vertices]
    assert len(bare) == 1 and bare[0].new_edges == frozenset({(0, 1)})


def test_cyclic_extensions_add_one_independent_cycle():
    rng = random.Random(11)
    for _ in range(60):
        n = rng.randint(3, 7)
        g = Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)
                      if rng.random() < 0.5])
        verts = rng.sample(range(n), rng.randint(1, n - 1))
        base = Subgraph.of(verts, [e for e in g.edges
                                   if e[0] in verts and e[1] in verts
                                   and rng.random() < 0.7])
        for ext in enumerate_cyclic_extensions(g, base, rng.randint(2, 5)):
            assert len(ext.new_edges) == len(ext.new_vertices) + 1


def test_cyclically_m_maximal():
    c4 = cycle_graph(4)
    assert is_cyclically_m_maximal(c4, Subgraph.full(c4), Subgraph.of({0}), 4)
    single = Subgraph.of({0})
    assert is_cyclically_m_maximal(c4, single, single, 4)
    # a pendant path closing onto G_sub but not onto H_sub
    host = Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])
    g_sub = Subgraph.of({0, 1, 2}, [(0, 1), (1, 2)])
    h_sub = Subgraph.of({1})
    assert not is_cyclically_m_maximal(host, g_sub, h_sub, 4)


def test_pair_text_roundtrip():
    pair = k3_edge_pair()
    loaded = parse_pair_text(format_pair_text(pair, header="demo"))
    assert loaded.big == pair.big
    assert loaded.small_vertices == pair.small_vertices
    assert loaded.small_edges == pair.small_edges
    assert loaded.roots == pair.roots
    with pytest.raises(GraphFormatError):
        parse_pair_text("vertices 2\nedge 0 1\nsmall 0\nroot 0\nroot 1\n")


def test_alpha_type():
    assert Alpha(Fraction(5, 8)).value == Fraction(5, 8)
    assert Alpha.from_parameters(4, 7, 1).value == Fraction(14, 15)
    with pytest.raises(DomainError):
        Alpha(Fraction(3, 2))
    with pytest.raises(DomainError):
        Alpha.from_parameters(3, 1, 1)
