"""One-sided crosscheck of the game solver against formula batteries.

If Duplicator wins EHR(G, H, k), every closed sentence of quantifier
depth <= k must take the same value on G and H; and whenever a sentence
of depth d <= k distinguishes the graphs, the solver must report a
Spoiler win at d rounds.  Violations of either direction are collected
with the witnessing formula.
"""

import random
from dataclasses import dataclass, field

from ..errors import DomainError
from ..logic import (And, Or, Not, Implies, Exists, Forall, Adjacent, Equal,
                     depth, evaluate_table, format_formula)
from .solver import solve
from .state import Winner


@dataclass
class CrosscheckReport:
    rounds: int
    solver_winner: Winner
    checked: int = 0
    distinguishing: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations


def crosscheck_ehrenfeucht(graph_g, graph_h, rounds, battery, cost_guard=10 ** 9):
    solver_winner = solve(graph_g, graph_h, rounds, cost_guard)
    report = CrosscheckReport(rounds=rounds, solver_winner=solver_winner)
    solve_at = {rounds: solver_winner}
    for formula in battery:
        d = depth(formula)
        if d > rounds:
            raise DomainError(
                f"battery formula of depth {d} exceeds the {rounds}-round game")
        val_g = evaluate_table(graph_g, formula)
        val_h = evaluate_table(graph_h, formula)
        report.checked += 1
        if val_g == val_h:
            continue
        report.distinguishing += 1
        if solver_winner is Winner.DUPLICATOR:
            report.violations.append(
                ("duplicator-wins-but-distinguished", format_formula(formula)))
        if d not in solve_at:
            solve_at[d] = solve(graph_g, graph_h, d, cost_guard)
        if solve_at[d] is not Winner.SPOILER:
            report.violations.append(
                ("distinguished-but-no-spoiler-win", format_formula(formula)))
    return report


def generate_battery(count, max_depth, seed, connective_bias=0.6):
    """Deterministic battery of closed sentences with depth <= max_depth."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        f = _random_sentence(rng, max_depth, connective_bias)
        if 0 < depth(f) <= max_depth:
            out.append(f)
    return out


def _random_sentence(rng, max_depth, bias):
    counter = [0]

    def fresh():
        counter[0] += 1
        return f"q{counter[0]}"

    def body(budget, struct, bound):
        roll = rng.random()
        if not bound or (budget > 0 and roll < 0.45):
            var = fresh()
            quant = Exists if rng.random() < 0.5 else Forall
            return quant(var, body(budget - 1, struct, bound + [var]))
        if struct > 0 and roll < bias:
            kind = rng.randrange(4)
            if kind == 0:
                return Not(body(budget, struct - 1, bound))
            if kind == 1:
                parts = tuple(body(budget, struct - 1, bound)
                              for _ in range(rng.randint(2, 3)))
                return And(parts)
            if kind == 2:
                parts = tuple(body(budget, struct - 1, bound)
                              for _ in range(rng.randint(2, 3)))
                return Or(parts)
            return Implies(body(budget, struct - 1, bound),
                           body(budget, struct - 1, bound))
        x = rng.choice(bound)
        y = rng.choice(bound)
        return Adjacent(x, y) if rng.random() < 0.7 else Equal(x, y)

    return body(max_depth, 4, [])
