"""Game positions for the vertex-picking game EHR(G, H, k).

A position records the ordered pick pairs, the round budget, and an
optional pending Spoiler move awaiting Duplicator's reply.  Repeated
picks collapse: picking an already-used vertex forces the recorded
partner, so the frozenset of pairs determines the future of the game.
"""

import enum
from dataclasses import dataclass

from ..errors import DomainError


class Winner(enum.Enum):
    SPOILER = "spoiler"
    DUPLICATOR = "duplicator"


@dataclass(frozen=True)
class GameState:
    graph_g: object
    graph_h: object
    rounds_total: int
    picks: tuple = ()            # ordered ((g_vertex, h_vertex), ...)
    pending: tuple = None        # ("g"|"h", vertex) after a Spoiler move

    def __post_init__(self):
        if self.rounds_total < 0:
            raise DomainError("rounds_total must be nonnegative")
        if len(self.picks) > self.rounds_total:
            raise DomainError("more picks than rounds")

    def rounds_left(self):
        return self.rounds_total - len(self.picks)

    def side_to_move(self):
        if self.pending is not None:
            return "duplicator"
        return "spoiler" if self.rounds_left() > 0 else None

    def spoiler_moves(self):
        if self.pending is not None or self.rounds_left() == 0:
            return []
        return ([("g", v) for v in range(self.graph_g.n)]
                + [("h", v) for v in range(self.graph_h.n)])

    def apply_spoiler(self, side, vertex):
        if self.pending is not None:
            raise DomainError("a Spoiler move is already pending")
        if self.rounds_left() == 0:
            raise DomainError("no rounds left")
        graph = self.graph_g if side == "g" else self.graph_h
        if not (0 <= vertex < graph.n):
            raise DomainError(f"vertex {vertex} outside graph {side}")
        return GameState(self.graph_g, self.graph_h, self.rounds_total,
                         self.picks, (side, vertex))

    def forced_reply(self):
        """The recorded partner when the pending pick repeats, else None."""
        if self.pending is None:
            raise DomainError("no pending move")
        side, vertex = self.pending
        for gv, hv in self.picks:
            if side == "g" and gv == vertex:
                return hv
            if side == "h" and hv == vertex:
                return gv
        return None

    def duplicator_replies(self):
        """Legal reply vertices; empty means Duplicator loses immediately."""
        forced = self.forced_reply()
        if forced is not None:
            return [forced]
        side, _ = self.pending
        other = self.graph_h if side == "g" else self.graph_g
        used = {hv for _, hv in self.picks} if side == "g" else {gv for gv, _ in self.picks}
        return [w for w in range(other.n) if w not in used]

    def apply_reply(self, vertex):
        replies = self.duplicator_replies()
        if vertex not in replies:
            raise DomainError(f"illegal Duplicator reply {vertex}")
        side, picked = self.pending
        pair = (picked, vertex) if side == "g" else (vertex, picked)
        picks = self.picks if pair in self.picks else self.picks + (pair,)
        return GameState(self.graph_g, self.graph_h, self.rounds_total, picks, None)

    def finished(self):
        return self.pending is None and self.rounds_left() == 0

    def winner(self):
        if not self.finished():
            raise DomainError("game still in progress")
        return Winner.DUPLICATOR if partial_isomorphism_ok(self) else Winner.SPOILER


def pairs_consistent(graph_g, graph_h, pairs):
    """Distinct pick pairs induce a partial isomorphism (both directions)."""
    pairs = list(pairs)
    for i, (g1, h1) in enumerate(pairs):
        for g2, h2 in pairs[i + 1:]:
            if (g1 == g2) != (h1 == h2):
                return False
            if g1 == g2:
                continue
            if graph_g.has_edge(g1, g2) != graph_h.has_edge(h1, h2):
                return False
    return True


def partial_isomorphism_ok(state):
    if state.pending is not None:
        raise DomainError("resolve the pending move first")
    return pairs_consistent(state.graph_g, state.graph_h, state.picks)
