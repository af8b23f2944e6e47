"""Membership check for the family of well-structured hosts.

Three properties, each quantified up to configurable caps in place of the
astronomically large bounds of the asymptotic statement:

1) no vertex subset within the cap induces density above 1/alpha
   (equivalently: no strictly balanced subgraph beats 1/alpha, since a
   vertex-minimal dense subset is strictly balanced);
2) every anchor tuple admits a strict extension of every alpha-safe
   rooted pattern that stays (K, T)-maximal for every small pattern with
   f_alpha < 0;
3) every small strictly balanced graph with density below 1/alpha has a
   (K, T)-maximal copy.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations

from ..errors import DomainError
from ..graphs import Graph, is_strictly_balanced
from ..pairs import (RootedPair, alpha_value, f_alpha, is_alpha_safe,
                     is_kt_maximal, iter_extensions)


@dataclass(frozen=True)
class MembershipCaps:
    max_subgraph_v: int = 3
    max_pattern_v: int = 3
    max_root_v: int = 2


@dataclass
class MembershipReport:
    alpha: Fraction
    caps: MembershipCaps
    failures: list = field(default_factory=list)
    h_patterns: int = 0
    k_patterns: int = 0
    balanced_targets: int = 0

    @property
    def passed(self):
        return not self.failures


def _canonical(total, roots, edges):
    best = None
    news = list(range(roots, total))
    for rp in permutations(range(roots)):
        for np_ in permutations(news):
            relabel = dict(zip(range(roots), rp))
            relabel.update(dict(zip(news, np_)))
            key = tuple(sorted(tuple(sorted((relabel[u], relabel[v]))) for u, v in edges))
            if best is None or key < best:
                best = key
    return best


def rooted_patterns(root_count, max_total):
    """Rooted patterns with >= 1 new vertex, up to root/new relabeling.

    Root-root edges are omitted: they never constrain an extension map,
    so patterns differing only there collapse.
    """
    out = []
    for total in range(root_count + 1, max_total + 1):
        news = range(root_count, total)
        possible = [(r, w) for r in range(root_count) for w in news]
        possible += list(combinations(news, 2))
        seen = set()
        for bits in range(2 ** len(possible)):
            edges = [possible[i] for i in range(len(possible)) if bits >> i & 1]
            key = _canonical(total, root_count, edges)
            if key in seen:
                continue
            seen.add(key)
            out.append(RootedPair(Graph(total, edges), range(root_count), (),
                                  range(root_count)))
    return out


def small_graphs_up_to_iso(max_v):
    out = []
    for v in range(1, max_v + 1):
        pairs = list(combinations(range(v), 2))
        seen = set()
        for bits in range(2 ** len(pairs)):
            edges = [pairs[i] for i in range(len(pairs)) if bits >> i & 1]
            best = None
            for perm in permutations(range(v)):
                key = tuple(sorted(tuple(sorted((perm[a], perm[b]))) for a, b in edges))
                if best is None or key < best:
                    best = key
            if best in seen:
                continue
            seen.add(best)
            out.append(Graph(v, edges))
    return out


def negative_patterns(alpha, caps):
    """(K, T) constraint pairs: f_alpha < 0, 1 or 2 roots, within the cap."""
    a = alpha_value(alpha)
    found = []
    for roots in (1, 2):
        if roots > caps.max_pattern_v - 1:
            continue
        for pat in rooted_patterns(roots, caps.max_pattern_v):
            if f_alpha(pat, a) < 0:
                found.append((pat, roots))
    return found


def safe_patterns(alpha, caps):
    a = alpha_value(alpha)
    found = []
    for roots in range(1, caps.max_root_v + 1):
        if roots > caps.max_pattern_v - 1:
            continue
        for pat in rooted_patterns(roots, caps.max_pattern_v):
            if is_alpha_safe(pat, a):
                found.append((pat, roots))
    return found


def _dense_subset(g, alpha, cap):
    """A minimal vertex subset inducing density > 1/alpha, or None."""
    inv = 1 / alpha_value(alpha)
    for size in range(1, min(cap, g.n) + 1):
        for subset in combinations(range(g.n), size):
            inside = sum(1 for u, v in g.edges if u in subset and v in subset)
            if Fraction(inside, size) > inv:
                return subset
    return None


def _maximal_extension_exists(g, pattern, anchor, constraints):
    ranked = sorted(
        iter_extensions(g, pattern, anchor, strict=True),
        key=lambda ext: sum(g.degree(w) for w in ext.values()))
    for ext in ranked:
        gt = frozenset(ext.values())
        if all(is_kt_maximal(g, gt, frozenset(anchor), k_pat, t_sz)
               for k_pat, t_sz in constraints):
            return True
    return False


def check_S_membership(g, alpha, caps=MembershipCaps(), max_failures=10):
    """Report which of the three properties hold at the given caps."""
    a = alpha_value(alpha)
    if not (0 < a < 1):
        raise DomainError("alpha must lie in (0,1)")
    report = MembershipReport(alpha=a, caps=caps)

    dense = _dense_subset(g, a, caps.max_subgraph_v)
    if dense is not None:
        report.failures.append(("property-1", f"vertex subset {sorted(dense)} "
                                              f"induces density above 1/alpha"))

    constraints = negative_patterns(a, caps)
    report.k_patterns = len(constraints)

    anchors_by_arity = {}

    def anchors(arity):
        if arity not in anchors_by_arity:
            anchors_by_arity[arity] = list(permutations(range(g.n), arity))
        return anchors_by_arity[arity]

    patterns = safe_patterns(a, caps)
    report.h_patterns = len(patterns)
    for pat, roots in patterns:
        for anchor in anchors(roots):
            if not _maximal_extension_exists(g, pat, anchor, constraints):
                report.failures.append(
                    ("property-2",
                     f"anchor {anchor} has no clean strict extension of a "
                     f"{pat.big.n}-vertex pattern with {roots} root(s)"))
                if len(report.failures) >= max_failures:
                    return report
                break  # one failing anchor condemns this pattern; move on

    targets = [h for h in small_graphs_up_to_iso(caps.max_subgraph_v)
               if is_strictly_balanced(h) and Fraction(len(h.edges), h.n) < 1 / a]
    report.balanced_targets = len(targets)
    for target in targets:
        if not _has_maximal_copy(g, target, constraints):
            report.failures.append(
                ("property-3", f"no detached copy of a {target.n}-vertex, "
                               f"{len(target.edges)}-edge balanced graph"))
            if len(report.failures) >= max_failures:
                return report
    return report


def _has_maximal_copy(g, target, constraints):
    rootless = RootedPair(target, (), (), ())
    for copy in iter_extensions(g, rootless, (), strict=False):
        gt = frozenset(copy.values())
        if all(is_kt_maximal(g, gt, None, k_pat, t_sz)
               for k_pat, t_sz in constraints):
            return True
    return False
