"""Exact game value by memoized minimax.

States are canonicalized to the frozenset of pick pairs: order never
matters to the remaining game, and repeated picks collapse.  A position
whose pairs already violate the partial isomorphism is lost for
Duplicator outright (Spoiler can burn the remaining rounds on repeats),
which prunes most of the tree.  Spoiler gains nothing from repeats
himself (fewer effective rounds), so the search skips them.
"""

from ..errors import CapacityError
from .state import Winner, pairs_consistent

COST_GUARD = 10 ** 9


def solve(graph_g, graph_h, rounds, cost_guard=COST_GUARD, memo=None):
    """Game value of EHR(graph_g, graph_h, rounds) under optimal play."""
    budget = (max(1, graph_g.n) * max(1, graph_h.n)) ** rounds
    if budget > cost_guard:
        raise CapacityError(
            f"(v*v')^k = {budget} exceeds the solver guard {cost_guard}")
    if memo is None:
        memo = {}
    win = _duplicator_wins(graph_g, graph_h, frozenset(), rounds, memo)
    return Winner.DUPLICATOR if win else Winner.SPOILER


def _duplicator_wins(gg, gh, pairs, rounds, memo):
    if not pairs_consistent(gg, gh, pairs):
        return False
    if rounds == 0:
        return True
    key = (pairs, rounds)
    hit = memo.get(key)
    if hit is not None:
        return hit
    used_g = {g for g, _ in pairs}
    used_h = {h for _, h in pairs}
    result = True
    for side, fresh, used_other, other_n in (
            ("g", used_g, used_h, gh.n), ("h", used_h, used_g, gg.n)):
        source_n = gg.n if side == "g" else gh.n
        for v in range(source_n):
            if v in fresh:
                continue  # repeat moves never help Spoiler
            saved = False
            for w in range(other_n):
                if w in used_other:
                    continue
                pair = (v, w) if side == "g" else (w, v)
                if _duplicator_wins(gg, gh, pairs | {pair}, rounds - 1, memo):
                    saved = True
                    break
            if not saved:
                result = False
                break
        if not result:
            break
    memo[key] = result
    return result


def reply_values(state, cost_guard=COST_GUARD, memo=None):
    """Winning Duplicator replies for the pending move, via the solver."""
    if memo is None:
        memo = {}
    gg, gh = state.graph_g, state.graph_h
    winners = []
    for w in state.duplicator_replies():
        nxt = state.apply_reply(w)
        budget = (max(1, gg.n) * max(1, gh.n)) ** nxt.rounds_left()
        if budget > cost_guard:
            raise CapacityError(
                f"(v*v')^k = {budget} exceeds the solver guard {cost_guard}")
        if _duplicator_wins(gg, gh, frozenset(nxt.picks), nxt.rounds_left(), memo):
            winners.append(w)
    return winners
