"""Scripted Duplicator: the opening strategy, the certificate-carrying
middle-game scripts, and the exact-solver fallback.

The scripts follow the published case analysis at desk scale: replies
inside the tracked tuple go through the recorded isomorphism; replies
outside search the mirror graph for a vertex in the same structural
relation (distance class to the tuple, local cyclic-extension
fingerprint) and then try to validate a successor certificate with the
checkers in :mod:`.equivalence`.  Whenever the analysis hands over to the
endgame strategy of the companion reference, or a required structure is
missing, or no candidate certificate validates, the context switches to
the exact solver for the remaining rounds and records why.
"""

from dataclasses import dataclass, field

from ..errors import DomainError
from ..graphs import set_distance
from ..pairs import Subgraph, enumerate_cyclic_extensions
from .equivalence import (build_extension_chain, check_kr_equivalence,
                          check_regular_equivalence, shortest_path_to_set)
from .solver import reply_values


class ForcedLossError(DomainError):
    """Duplicator has no legal reply at all."""


@dataclass
class StrategyContext:
    """Mutable per-game strategy state.

    ``mode`` is "script" or "fallback"; ``cert`` carries the current
    certificate as a dict with tuple lists per graph and the isomorphism;
    ``flags`` records every noteworthy transition (certificate kind
    changes, fallback reasons) for the test harness.
    """

    k: int
    b: int = 1
    alpha: object = None
    mode: str = "script"
    cert: dict = None
    flags: list = field(default_factory=list)
    solver_memo: dict = field(default_factory=dict)
    cost_guard: int = 10 ** 9

    def note(self, flag):
        self.flags.append(flag)

    def to_fallback(self, reason):
        if self.mode != "fallback":
            self.note(f"fallback:{reason}")
            self.mode = "fallback"
            self.cert = None


def duplicator_move(state, ctx):
    """Duplicator's reply vertex for the pending Spoiler move.

    Mutates and returns ``ctx`` alongside the chosen vertex.
    """
    if state.pending is None:
        raise DomainError("no pending Spoiler move")
    legal = state.duplicator_replies()
    if not legal:
        raise ForcedLossError("no legal reply vertex remains")
    forced = state.forced_reply()
    if forced is not None:
        return forced, ctx

    if ctx.mode == "fallback":
        return _solver_reply(state, ctx), ctx

    round_no = len(state.picks) + 1
    if round_no == 1:
        return _opening_move(state, ctx)
    if ctx.cert is not None:
        return _scripted_move(state, ctx)
    ctx.to_fallback("no-certificate")
    return _solver_reply(state, ctx), ctx


def _solver_reply(state, ctx):
    winners = reply_values(state, cost_guard=ctx.cost_guard, memo=ctx.solver_memo)
    if winners:
        return winners[0]
    ctx.note("forced-loss")
    return state.duplicator_replies()[0]


# --- shared helpers ------------------------------------------------------

def _orient(state, ctx):
    """(x_host, y_host, tilde_x, tilde_y, iso x->y, spoiler side)."""
    side, v = state.pending
    cert = ctx.cert
    if side == "g":
        return (state.graph_g, state.graph_h, cert["tuple_g"], cert["tuple_h"],
                dict(cert["iso_gh"]), side, v)
    inv = {b: a for a, b in cert["iso_gh"].items()}
    return (state.graph_h, state.graph_g, cert["tuple_h"], cert["tuple_g"],
            inv, side, v)


def _picks_oriented(state, side, extra=None):
    """Pick pairs as (spoiler-graph vertex, mirror vertex)."""
    pairs = [(g, h) if side == "g" else (h, g) for g, h in state.picks]
    if extra is not None:
        pairs.append(extra)
    return pairs


def _induced_sub(host, vertices):
    vs = frozenset(vertices)
    return Subgraph.of(vs, {e for e in host.edges if e[0] in vs and e[1] in vs})


def _induced_copies(host, pattern):
    """Yield maps pattern-vertex -> host-vertex onto induced copies."""
    nbrs = {v: set() for v in pattern.vertices}
    for u, v in pattern.edges:
        nbrs[u].add(v)
        nbrs[v].add(u)
    pat = []
    remaining = set(pattern.vertices)
    while remaining:                 # connectivity-first order prunes early
        placed = set(pat)
        pat.append(max(remaining,
                       key=lambda v: (len(nbrs[v] & placed), len(nbrs[v]), -v)))
        remaining.discard(pat[-1])

    def edge_p(a, b):
        return (min(a, b), max(a, b)) in pattern.edges

    def search(i, mapping, used):
        if i == len(pat):
            yield dict(mapping)
            return
        v = pat[i]
        for w in range(host.n):
            if w in used:
                continue
            ok = True
            for a, img in mapping.items():
                if edge_p(v, a) != host.has_edge(w, img):
                    ok = False
                    break
            if ok:
                mapping[v] = w
                used.add(w)
                yield from search(i + 1, mapping, used)
                del mapping[v]
                used.discard(w)

    yield from search(0, {}, set())


def _store_cert(ctx, state, side, kind, tuples_x, tuples_y, iso_xy, mode):
    """Record a certificate in g/h orientation and set the next mode."""
    if side == "g":
        tuple_g, tuple_h = tuples_x, tuples_y
        iso_gh = dict(iso_xy)
    else:
        tuple_g, tuple_h = tuples_y, tuples_x
        iso_gh = {b: a for a, b in iso_xy.items()}
    ctx.cert = {"tuple_g": tuple_g, "tuple_h": tuple_h, "iso_gh": iso_gh}
    ctx.mode = mode
    return ctx


def _ext_fingerprint(host, vertices, m):
    exts = enumerate_cyclic_extensions(host, _induced_sub(host, vertices), m)
    return min(len(exts), 2), exts


# --- round one -----------------------------------------------------------

def _opening_move(state, ctx):
    x_host = state.graph_g if state.pending[0] == "g" else state.graph_h
    y_host = state.graph_h if state.pending[0] == "g" else state.graph_g
    side, x = state.pending
    legal = set(state.duplicator_replies())
    m1 = 2 ** (ctx.k - 1)

    exts = enumerate_cyclic_extensions(x_host, Subgraph.of({x}), m1)
    if not exts:
        for y in sorted(legal):
            if enumerate_cyclic_extensions(y_host, Subgraph.of({y}), m1):
                continue
            tx, ty = Subgraph.of({x}), Subgraph.of({y})
            ok, _ = check_regular_equivalence(
                x_host, y_host, [tx], [ty], [(x, y)], ctx.k, 1, 1, b=ctx.b)
            if ok:
                ctx.note("S1:isolated-regular")
                _store_cert(ctx, state, side, "regular", [tx], [ty], {x: y},
                            "fallback")
                return y, ctx
        ctx.to_fallback("S1:no-quiet-vertex")
        return _solver_reply(state, ctx), ctx

    chain = build_extension_chain(x_host, x, ctx.k, b=ctx.b, alpha=ctx.alpha)
    if chain.guard_violated:
        ctx.to_fallback("S1:chain-guard")
        return _solver_reply(state, ctx), ctx

    if chain.closure_case in ("equal", "below", "unknown"):
        closure = chain.graphs[-1].vertices
        tilde_x = _induced_sub(x_host, closure)
        reply = _match_copy(state, ctx, x_host, y_host, side, x, tilde_x,
                            kind="regular", rounds=1)
        if reply is not None:
            ctx.note("S1:chain-regular")
            return reply, ctx
        ctx.to_fallback("S1:no-mirror-copy")
        return _solver_reply(state, ctx), ctx

    if chain.closure_case == "at":
        idx = next((i for i, fullstep in enumerate(chain.full_steps) if fullstep), None)
        tilde_x = (Subgraph.of({x}) if idx in (None, 0)
                   else _induced_sub(x_host, chain.graphs[idx - 1].vertices))
        reply = _match_copy(state, ctx, x_host, y_host, side, x, tilde_x,
                            kind="kr", rounds=1)
        if reply is not None:
            ctx.note("S1:boundary-kr")
            return reply, ctx
        ctx.to_fallback("S1:no-kr-copy")
        return _solver_reply(state, ctx), ctx

    ctx.to_fallback(f"S1:closure-{chain.closure_case}")
    return _solver_reply(state, ctx), ctx


def _match_copy(state, ctx, x_host, y_host, side, x, tilde_x, kind, rounds):
    """Mirror ``tilde_x`` into the other graph and certify; returns the reply."""
    legal = set(state.duplicator_replies())
    if x not in tilde_x.vertices:
        return None
    prior = _picks_oriented(state, side)
    for iso in _induced_copies(y_host, tilde_x):
        y = iso[x]
        if y not in legal:
            continue
        # the stored isomorphism must agree with every pick already made,
        # or later iso-replies would break the partial isomorphism
        if any(px in tilde_x.vertices and iso.get(px) != py for px, py in prior):
            continue
        tilde_y = Subgraph.of(set(iso.values()),
                              {tuple(sorted((iso[u], iso[v]))) for u, v in tilde_x.edges})
        picks = _picks_oriented(state, side, (x, y))
        if kind == "regular":
            ok, _ = check_regular_equivalence(
                x_host, y_host, [tilde_x], [tilde_y], picks,
                ctx.k, rounds, 1, b=ctx.b)
        else:
            ok, _ = check_kr_equivalence(
                x_host, y_host, tilde_x, tilde_y, picks, ctx.k, rounds, b=ctx.b)
        if ok:
            mode = "fallback" if kind == "regular" else "script"
            _store_cert(ctx, state, side, kind, [tilde_x], [tilde_y], iso, mode)
            return y
    return None


# --- later rounds under a kr certificate ----------------------------------

def _scripted_move(state, ctx):
    x_host, y_host, tilde_x, tilde_y, iso, side, v = _orient(state, ctx)
    tilde_x = tilde_x[0]
    tilde_y = tilde_y[0]
    legal = set(state.duplicator_replies())
    r_prev = len(state.picks)
    round_no = r_prev + 1
    threshold = 2 ** (ctx.k - round_no)

    # pick inside the tracked tuple: answer through the isomorphism
    if v in tilde_x.vertices:
        y = iso.get(v)
        if y is None or y not in legal:
            ctx.to_fallback("script:iso-miss")
            return _solver_reply(state, ctx), ctx
        picks = _picks_oriented(state, side, (v, y))
        ok, _ = check_regular_equivalence(
            x_host, y_host, [tilde_x], [tilde_y], picks,
            ctx.k, round_no, 1, b=ctx.b)
        if ok:
            ctx.note(f"script:iso-reply:r{round_no}")
            _store_cert(ctx, state, side, "regular", [tilde_x], [tilde_y], iso,
                        "fallback")
            return y, ctx
        ok, _ = check_kr_equivalence(
            x_host, y_host, tilde_x, tilde_y, picks, ctx.k, round_no, b=ctx.b)
        if ok:
            ctx.note(f"script:iso-reply-kr:r{round_no}")
            _store_cert(ctx, state, side, "kr", [tilde_x], [tilde_y], iso, "script")
            return y, ctx
        ctx.to_fallback("script:iso-cert-miss")
        return _solver_reply(state, ctx), ctx

    dist = set_distance(x_host, tilde_x.vertices, {v})
    if dist > threshold:
        fp_x, _ = _ext_fingerprint(x_host, {v}, threshold)
        reply = _far_reply(state, ctx, x_host, y_host, side, v,
                           tilde_x, tilde_y, iso, threshold, fp_x, round_no)
        if reply is not None:
            return reply, ctx
        ctx.to_fallback("script:far-miss")
        return _solver_reply(state, ctx), ctx

    # near pick: extend the tuple by a minimal connecting path
    path = shortest_path_to_set(x_host, v, tilde_x.vertices)
    if path is None:
        ctx.to_fallback("script:no-path")
        return _solver_reply(state, ctx), ctx
    ext_x = _induced_sub(x_host, tilde_x.vertices | set(path))
    reply = _match_copy(state, ctx, x_host, y_host, side, v, ext_x,
                        kind="regular", rounds=round_no)
    if reply is not None:
        ctx.note(f"script:path-regular:r{round_no}")
        return reply, ctx
    reply = _match_copy(state, ctx, x_host, y_host, side, v, ext_x,
                        kind="kr", rounds=round_no)
    if reply is not None:
        ctx.note(f"script:path-kr:r{round_no}")
        return reply, ctx
    ctx.to_fallback("script:near-miss")
    return _solver_reply(state, ctx), ctx


def _far_reply(state, ctx, x_host, y_host, side, v, tilde_x, tilde_y, iso,
               threshold, fp_x, round_no):
    """Mirror a far pick by a far vertex with the same local fingerprint."""
    legal = sorted(set(state.duplicator_replies()))
    ranked = []
    for y in legal:
        dy = set_distance(y_host, tilde_y.vertices, {y})
        if dy <= threshold:
            continue
        fp_y, _ = _ext_fingerprint(y_host, {y}, threshold)
        if fp_y != fp_x:
            continue
        ranked.append((abs(dy - (threshold + 1)), y))
    for _, y in sorted(ranked):
        tx2 = Subgraph.of({v})
        ty2 = Subgraph.of({y})
        picks = _picks_oriented(state, side, (v, y))
        ok, _ = check_regular_equivalence(
            x_host, y_host, [tilde_x, tx2], [tilde_y, ty2], picks,
            ctx.k, round_no, 2, b=ctx.b)
        if ok:
            ctx.note(f"script:far-regular:r{round_no}")
            _store_cert(ctx, state, side, "regular",
                        [tilde_x, tx2], [tilde_y, ty2], {**iso, v: y}, "fallback")
            return y
    return None
