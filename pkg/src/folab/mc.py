"""Seeded G(n,p) sampling, exact model probability, copy counting, Monte
Carlo estimation, and the Poisson / threshold experiments.

Determinism contract: trial ``t`` of a run is generated from
``SeedSequence((seed, *cell, t))`` and edge {u,v} (u < v) is decided by
the (u*n+v)-th uniform of that stream, so results do not depend on
iteration order or worker count.
"""

import json
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.stats import chi2

from . import kernels
from .errors import CapacityError, DomainError
from .graphs import Graph, complete_graph, density, is_strictly_balanced, automorphism_count
from .pairs import RootedPair, alpha_value, enumerate_extensions
from .rng import edge_uniforms, trial_rng

COPY_PATTERN_CAP = 8
WILSON_Z = 1.959963984540054  # 95%


@dataclass(frozen=True)
class SampleSpec:
    """n, edge probability (explicit p or p = n^-alpha), seed, trials."""

    n: int
    p: float = None
    alpha: object = None     # Alpha, Fraction, or numeric
    seed: int = 0
    trials: int = 1

    def __post_init__(self):
        if self.n <= 0:
            raise DomainError("need n >= 1")
        if (self.p is None) == (self.alpha is None):
            raise DomainError("give exactly one of p and alpha")
        if self.trials < 1:
            raise DomainError("need trials >= 1")
        if self.p is not None and not (0 <= self.p <= 1):
            raise DomainError("p must lie in [0,1]")
        if self.alpha is not None and alpha_value(self.alpha) <= 0:
            raise DomainError("alpha must be positive")

    def resolved_p(self):
        if self.p is not None:
            return float(self.p)
        a = alpha_value(self.alpha)
        return float(self.n) ** (-float(a))


@dataclass(frozen=True)
class Estimate:
    trials: int
    hits: int
    p_hat: float
    ci_low: float
    ci_high: float
    n: int
    p: float
    seed: int
    wall_ms: float = 0.0
    alpha: object = None


def wilson_interval(hits, trials, z=WILSON_Z):
    if trials <= 0:
        raise DomainError("need trials >= 1")
    phat = hits / trials
    denom = 1 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def sample_adjacency(spec, trial_index, cell=()):
    rng = trial_rng(spec.seed, trial_index, *cell)
    return kernels.adjacency_from_uniforms(edge_uniforms(rng, spec.n), spec.n, spec.resolved_p())


def sample_gnp(spec, trial_index, cell=()):
    """One G(n,p) draw as a Graph; deterministic in (seed, cell, trial_index)."""
    adj = sample_adjacency(spec, trial_index, cell)
    iu, iv = np.nonzero(np.triu(adj, 1))
    g = Graph(spec.n, zip(iu.tolist(), iv.tolist()))
    g._matrix = adj
    return g


def log_probability(g, n, p):
    """log P_{n,p}(G) = e*ln(p) + (C(n,2)-e)*ln(1-p); -inf at contradicting 0/1."""
    if g.n != n:
        raise DomainError("graph order differs from n")
    e = len(g.edges)
    pairs = n * (n - 1) // 2
    if p < 0 or p > 1:
        raise DomainError("p must lie in [0,1]")
    if p == 0:
        return 0.0 if e == 0 else -math.inf
    if p == 1:
        return 0.0 if e == pairs else -math.inf
    return e * math.log(p) + (pairs - e) * math.log1p(-p)


# --- copy counting -------------------------------------------------------

def injective_map_count(host, pattern):
    """Number of injective edge-preserving maps pattern -> host."""
    adj = host.matrix()
    n = host.n
    order = _search_order(pattern)
    pat_adj = [sorted(pattern.adj[v]) for v in range(pattern.n)]
    placed_pos = {v: i for i, v in enumerate(order)}

    count = 0
    images = [0] * len(order)
    used = np.zeros(n, dtype=bool)

    def place(i):
        nonlocal count
        if i == len(order):
            count += 1
            return
        v = order[i]
        mask = ~used
        for w in pat_adj[v]:
            if placed_pos[w] < i:
                mask = mask & adj[images[placed_pos[w]]]
        for cand in np.flatnonzero(mask):
            images[i] = cand
            used[cand] = True
            place(i + 1)
            used[cand] = False

    place(0)
    return count


def _search_order(pattern):
    """Pattern vertices, most-connected-to-placed first."""
    order = []
    remaining = set(range(pattern.n))
    while remaining:
        best = max(remaining,
                   key=lambda v: (sum(1 for w in pattern.adj[v] if w in set(order)),
                                  pattern.degree(v), -v))
        order.append(best)
        remaining.remove(best)
    return order


def count_copies(host, pattern, cap=COPY_PATTERN_CAP):
    """Copies (unlabeled, not-necessarily-induced subgraphs) of pattern in host."""
    if pattern.n > cap:
        raise CapacityError(f"copy counting capped at {cap} pattern vertices")
    if pattern.n > host.n:
        raise DomainError("pattern larger than host")
    if pattern == complete_graph(3):
        return int(kernels.triangle_count(host.matrix()))
    maps = injective_map_count(host, pattern)
    return maps // automorphism_count(pattern)


# --- estimation ----------------------------------------------------------

def triangle_property(g):
    return bool(kernels.contains_triangle(g.matrix()))


def clique4_property(g):
    return bool(kernels.contains_clique4(g.matrix()))


BUILTIN_PROPERTIES = {
    "triangle": triangle_property,
    "k4": clique4_property,
}


def mc_estimate(spec, prop, cell=(), timing=False):
    """Estimate P(G(n,p) |= prop) over independent seeded trials.

    The (hits, trials) fold is associative and order-free; a failure of
    the property evaluator aborts with the trial index attached.
    """
    start = time.perf_counter()
    hits = 0
    for t in range(spec.trials):
        g = sample_gnp(spec, t, cell)
        try:
            if prop(g):
                hits += 1
        except Exception as exc:
            raise RuntimeError(f"property evaluator failed on trial {t}: {exc}") from exc
    lo, hi = wilson_interval(hits, spec.trials)
    wall = (time.perf_counter() - start) * 1000 if timing else 0.0
    return Estimate(trials=spec.trials, hits=hits, p_hat=hits / spec.trials,
                    ci_low=lo, ci_high=hi, n=spec.n, p=spec.resolved_p(),
                    seed=spec.seed, wall_ms=wall,
                    alpha=alpha_value(spec.alpha) if spec.alpha is not None else None)


# --- Poisson experiment --------------------------------------------------

@dataclass(frozen=True)
class PoissonReport:
    n: int
    p: float
    trials: int
    lam: Fraction
    counts: tuple
    empirical_mean: float
    bin_observed: tuple     # bins {0, 1, 2, >=3}
    bin_expected: tuple
    chi_square: float
    p_value: float


def poisson_check(n, pattern, trials, seed=0, cap=COPY_PATTERN_CAP):
    """Distribution check of the pattern-copy count at p = n^(-1/rho).

    Requires a strictly balanced pattern whose 1/rho lies in (0,1); the
    copy count converges to Poisson(1/a(pattern)) there, and the report
    carries a chi-square statistic over the bins {0, 1, 2, >=3}.
    """
    if not is_strictly_balanced(pattern):
        raise DomainError("the Poisson limit needs a strictly balanced pattern")
    rho = density(pattern)
    alpha = 1 / rho
    if not (0 < alpha < 1):
        raise DomainError(f"1/rho = {alpha} falls outside (0,1)")
    p = float(n) ** (-float(alpha))
    base = SampleSpec(n=n, p=p, seed=seed, trials=trials)
    lam = Fraction(1, automorphism_count(pattern))
    counts = []
    for t in range(base.trials):
        g = sample_gnp(base, t)
        counts.append(count_copies(g, pattern, cap))
    counts = tuple(counts)
    observed = [0, 0, 0, 0]
    for c in counts:
        observed[min(c, 3)] += 1
    lam_f = float(lam)
    pmf = [math.exp(-lam_f), lam_f * math.exp(-lam_f), lam_f ** 2 / 2 * math.exp(-lam_f)]
    pmf.append(1.0 - sum(pmf))
    expected = [q * base.trials for q in pmf]
    stat = sum((o - e) ** 2 / e for o, e in zip(observed, expected))
    p_value = float(chi2.sf(stat, df=len(observed) - 1))
    return PoissonReport(n=spec.n, p=p, trials=base.trials, lam=lam, counts=counts,
                         empirical_mean=sum(counts) / base.trials,
                         bin_observed=tuple(observed), bin_expected=tuple(expected),
                         chi_square=stat, p_value=p_value)


# --- threshold scan ------------------------------------------------------

@dataclass(frozen=True)
class ScanRow:
    n: int
    alpha: Fraction
    estimate: Estimate


def threshold_scan(prop, n_list, alphas, trials, seed, epsilon=None, timing=False):
    """One Estimate per (n, alpha) cell, exponents exact; optional
    epsilon mode samples the interval endpoints alpha -+ epsilon instead.

    Cells are processed and emitted in canonical sorted order, and each
    cell owns its own trial streams, so the table is reproducible
    regardless of scheduling.
    """
    if not n_list or not alphas:
        raise DomainError("empty scan grid")
    exps = []
    for a in alphas:
        a = alpha_value(a)
        if not (0 < a < 1):
            raise DomainError(f"alpha = {a} outside (0,1)")
        if epsilon is None:
            exps.append(a)
        else:
            eps = Fraction(epsilon)
            for e in (a - eps, a + eps):
                if not (0 < e < 1):
                    raise DomainError(f"alpha endpoint {e} outside (0,1)")
                exps.append(e)
    cells = sorted((int(n), a) for n in set(n_list) for a in set(exps))
    rows = []
    for index, (n, a) in enumerate(cells):
        spec = SampleSpec(n=n, alpha=a, seed=seed, trials=trials)
        rows.append(ScanRow(n=n, alpha=a,
                            estimate=mc_estimate(spec, prop, cell=(index,), timing=timing)))
    return rows


CSV_HEADER = "n,alpha,p,trials,hits,p_hat,ci_low,ci_high,seed,wall_ms"
SCHEMA_VERSION = 1


def rows_to_csv(rows):
    out = [f"# schema={SCHEMA_VERSION}", CSV_HEADER]
    for row in rows:
        e = row.estimate
        out.append(",".join([
            str(row.n), str(row.alpha), repr(e.p), str(e.trials), str(e.hits),
            repr(e.p_hat), repr(e.ci_low), repr(e.ci_high), str(e.seed), repr(e.wall_ms),
        ]))
    return "\n".join(out) + "\n"


def estimate_to_json(e):
    payload = {
        "schema": SCHEMA_VERSION,
        "n": e.n,
        "alpha": str(e.alpha) if e.alpha is not None else None,
        "p": e.p,
        "trials": e.trials,
        "hits": e.hits,
        "p_hat": e.p_hat,
        "ci_low": e.ci_low,
        "ci_high": e.ci_high,
        "seed": e.seed,
        "wall_ms": e.wall_ms,
    }
    return json.dumps(payload, sort_keys=True)


def rows_to_json(rows):
    return json.dumps([json.loads(estimate_to_json(r.estimate)) | {"alpha": str(r.alpha)}
                       for r in rows], sort_keys=True)


# --- unextendable copies -------------------------------------------------

def enumerate_copies(host, pattern, cap=COPY_PATTERN_CAP):
    """Distinct copies of the pattern, each with every witnessing map.

    A copy is a subgraph: the frozenset of image vertices plus image
    edges.  Maps are dicts pattern-vertex -> host-vertex.
    """
    if pattern.n > cap:
        raise CapacityError(f"copy enumeration capped at {cap} pattern vertices")
    adj = host.matrix()
    groups = {}
    order = _search_order(pattern)
    placed_pos = {v: i for i, v in enumerate(order)}
    pat_adj = [sorted(pattern.adj[v]) for v in range(pattern.n)]
    images = [0] * len(order)
    used = np.zeros(host.n, dtype=bool)

    def place(i):
        if i == len(order):
            mapping = {order[j]: images[j] for j in range(len(order))}
            verts = frozenset(mapping.values())
            edges = frozenset(tuple(sorted((mapping[u], mapping[v])))
                              for u, v in pattern.edges)
            groups.setdefault((verts, edges), []).append(mapping)
            return
        v = order[i]
        mask = ~used
        for w in pat_adj[v]:
            if placed_pos[w] < i:
                mask = mask & adj[images[placed_pos[w]]]
        for cand in np.flatnonzero(mask):
            images[i] = cand
            used[cand] = True
            place(i + 1)
            used[cand] = False

    place(0)
    return groups


def has_unextendable_copy(host, pattern, extension_pair, cap=COPY_PATTERN_CAP):
    """True iff some pattern copy extends to no copy of the pair's big graph.

    The pair's roots must host the pattern with vertex i of the pattern on
    root i.  A copy counts as extendable when at least one of its
    witnessing maps admits a (non-strict) extension anchored on it.
    """
    roots = extension_pair.roots
    if len(roots) != pattern.n:
        raise DomainError("extension pair roots must match the pattern order")
    for u, v in pattern.edges:
        if tuple(sorted((roots[u], roots[v]))) not in extension_pair.small_edges:
            raise DomainError("extension pair's small side differs from the pattern")
    if len(extension_pair.small_edges) != len(pattern.edges):
        raise DomainError("extension pair's small side differs from the pattern")
    for (verts, edges), maps in enumerate_copies(host, pattern, cap).items():
        extendable = False
        for mapping in maps:
            anchor = tuple(mapping[i] for i in range(pattern.n))
            if enumerate_extensions(host, extension_pair, anchor, strict=False):
                extendable = True
                break
        if not extendable:
            return True
    return False
