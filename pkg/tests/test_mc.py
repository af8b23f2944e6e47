import math
import random
from fractions import Fraction
from itertools import combinations, permutations, product

import pytest

from folab.errors import DomainError
from folab.graphs import (Graph, automorphism_count, complete_graph,
                          cycle_graph, disjoint_union, empty_graph, path_graph)
from folab.mc import (SampleSpec, count_copies, enumerate_copies,
                      has_unextendable_copy, injective_map_count,
                      log_probability, mc_estimate, poisson_check,
                      rows_to_csv, sample_gnp, threshold_scan,
                      triangle_property, wilson_interval)
from folab.pairs import RootedPair
from folab.witnesses import build_clique_witness


def random_graph(rng, n, p=0.5):
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)
                     if rng.random() < p])


def test_sampling_extremes_and_determinism():
    edgeless = sample_gnp(SampleSpec(n=6, p=0.0, trials=1), 0)
    assert edgeless.edges == frozenset()
    full = sample_gnp(SampleSpec(n=6, p=1.0, trials=1), 0)
    assert full == complete_graph(6)
    spec = SampleSpec(n=25, p=0.3, seed=42, trials=10)
    a = sample_gnp(spec, 7)
    b = sample_gnp(spec, 7)
    assert a == b
    assert sample_gnp(spec, 8) != a  # overwhelmingly
    with pytest.raises(DomainError):
        SampleSpec(n=0, p=0.5)
    with pytest.raises(DomainError):
        SampleSpec(n=3, p=0.5, alpha=Fraction(1, 2))


def test_log_probability():
    one_edge = Graph(2, [(0, 1)])
    assert math.isclose(log_probability(one_edge, 2, 0.3), math.log(0.3))
    assert math.isclose(log_probability(empty_graph(2), 2, 0.3), math.log(0.7))
    assert log_probability(one_edge, 2, 0.0) == -math.inf
    assert log_probability(one_edge, 2, 1.0) == 0.0
    assert log_probability(empty_graph(2), 2, 1.0) == -math.inf


def test_probabilities_sum_to_one():
    pairs = list(combinations(range(3), 2))
    total = 0.0
    for bits in range(2 ** len(pairs)):
        g = Graph(3, [pairs[i] for i in range(len(pairs)) if bits >> i & 1])
        total += math.exp(log_probability(g, 3, 0.4))
    assert abs(total - 1.0) < 1e-12


def test_count_copies_examples():
    assert count_copies(complete_graph(4), complete_graph(3)) == 4
    assert count_copies(cycle_graph(5), complete_graph(3)) == 0
    assert count_copies(complete_graph(4), path_graph(3)) == 12
    with pytest.raises(DomainError):
        count_copies(path_graph(3), complete_graph(4))


def brute_injective_maps(host, pattern):
    count = 0
    for image in permutations(range(host.n), pattern.n):
        if all(host.has_edge(image[u], image[v]) for u, v in pattern.edges):
            count += 1
    return count


def test_copy_count_against_injective_oracle():
    rng = random.Random(3)
    patterns = [complete_graph(3), path_graph(3), path_graph(4),
                cycle_graph(4), complete_graph(4), Graph(3, [(0, 1)])]
    for _ in range(500):
        host = random_graph(rng, rng.randint(1, 7), rng.random())
        pattern = rng.choice(patterns)
        if pattern.n > host.n:
            continue
        raw = brute_injective_maps(host, pattern)
        assert injective_map_count(host, pattern) == raw
        assert count_copies(host, pattern) * automorphism_count(pattern) == raw


def test_wilson_interval():
    lo, hi = wilson_interval(0, 100)
    assert lo == 0.0 and 0 < hi < 0.05
    lo, hi = wilson_interval(100, 100)
    assert hi == 1.0 and lo > 0.95
    lo, hi = wilson_interval(50, 100)
    assert lo < 0.5 < hi


def test_mc_estimate_trivial():
    est = mc_estimate(SampleSpec(n=3, p=1.0, trials=20), triangle_property)
    assert est.p_hat == 1.0 and est.hits == 20
    has_edge = lambda g: bool(g.edges)
    est = mc_estimate(SampleSpec(n=5, p=0.0, trials=20), has_edge)
    assert est.p_hat == 0.0
    assert est.ci_low <= est.p_hat <= est.ci_high


def test_mc_estimate_reproducible():
    spec = SampleSpec(n=30, p=0.2, seed=11, trials=50)
    a = mc_estimate(spec, triangle_property)
    b = mc_estimate(spec, triangle_property)
    assert (a.hits, a.p_hat, a.ci_low, a.ci_high) == (b.hits, b.p_hat, b.ci_low, b.ci_high)


def test_mc_estimate_reports_failing_trial():
    def boom(_g):
        raise ValueError("nope")
    with pytest.raises(RuntimeError, match="trial 0"):
        mc_estimate(SampleSpec(n=3, p=0.5, trials=2), boom)


def test_poisson_check_domain():
    with pytest.raises(DomainError):
        poisson_check(50, complete_graph(2), 10)    # 1/rho = 2 outside (0,1)
    with pytest.raises(DomainError):
        poisson_check(50, Graph(4, [(0, 1), (1, 2), (0, 2), (2, 3)]), 10)


def test_poisson_check_small_run():
    report = poisson_check(80, complete_graph(3), 300, seed=5)
    assert report.lam == Fraction(1, 6)
    assert sum(report.bin_observed) == 300
    assert 0 <= report.p_value <= 1
    assert report.empirical_mean >= 0
    report_c4 = poisson_check(60, cycle_graph(4), 200, seed=5)
    assert report_c4.lam == Fraction(1, 8)


def test_threshold_scan_determinism_and_grid():
    prop = triangle_property
    rows = threshold_scan(prop, [40, 30], [Fraction(1, 2), Fraction(3, 4)], 30, seed=9)
    again = threshold_scan(prop, [30, 40], [Fraction(3, 4), Fraction(1, 2)], 30, seed=9)
    assert rows_to_csv(rows) == rows_to_csv(again)
    assert [(r.n, r.alpha) for r in rows] == sorted((n, a) for n, a in
                                                    product((30, 40), (Fraction(1, 2), Fraction(3, 4))))
    with pytest.raises(DomainError):
        threshold_scan(prop, [30], [Fraction(13, 10)], 5, seed=0)
    with pytest.raises(DomainError):
        threshold_scan(prop, [], [Fraction(1, 2)], 5, seed=0)


def test_threshold_scan_epsilon_mode():
    rows = threshold_scan(triangle_property, [30], [Fraction(1, 2)], 10, seed=1,
                          epsilon=Fraction(1, 10))
    assert [r.alpha for r in rows] == [Fraction(2, 5), Fraction(3, 5)]
    with pytest.raises(DomainError):
        threshold_scan(triangle_property, [30], [Fraction(1, 20)], 5, seed=1,
                       epsilon=Fraction(1, 10))


def test_unextendable_copy_on_witnesses():
    x_graph, y_graph, pair, _ = build_clique_witness(5, 2)
    assert has_unextendable_copy(x_graph, x_graph, pair)
    assert not has_unextendable_copy(y_graph, x_graph, pair)
    both = disjoint_union(x_graph, y_graph)
    assert has_unextendable_copy(both, x_graph, pair)


def brute_unextendable(host, pattern, pair):
    """Independent oracle: raw tuple enumeration on both levels."""
    news = [v for v in range(pair.big.n) if v >= pattern.n]
    copies = {}
    for image in permutations(range(host.n), pattern.n):
        if all(host.has_edge(image[u], image[v]) for u, v in pattern.edges):
            key = (frozenset(image),
                   frozenset(tuple(sorted((image[u], image[v])))
                             for u, v in pattern.edges))
            copies.setdefault(key, []).append(image)
    added = [e for e in pair.big.edges if e not in pair.small_edges]
    for maps in copies.values():
        extendable = False
        for image in maps:
            for extra in permutations([w for w in range(host.n) if w not in image],
                                      len(news)):
                assign = dict(zip(range(pattern.n), image))
                assign.update(dict(zip(news, extra)))
                if all(host.has_edge(assign[u], assign[v]) for u, v in added):
                    extendable = True
                    break
            if extendable:
                break
        if not extendable:
            return True
    return False


def test_unextendable_copy_against_double_brute_oracle():
    rng = random.Random(8)
    x_graph, _, pair, _ = build_clique_witness(5, 2)
    hits = 0
    for _ in range(25):
        host = random_graph(rng, rng.randint(4, 12), rng.uniform(0.3, 0.8))
        want = brute_unextendable(host, x_graph, pair)
        assert has_unextendable_copy(host, x_graph, pair) == want
        hits += want
    assert hits > 0  # the sweep must exercise both outcomes


def test_enumerate_copies_groups_by_subgraph():
    host = complete_graph(4)
    groups = enumerate_copies(host, complete_graph(3))
    assert len(groups) == 4
    assert all(len(maps) == 6 for maps in groups.values())
