"""Command-line front door.

Exit codes: 0 success, 2 usage error, 3 input/parse error, 4 capacity
guard.  Every command taking --seed is byte-reproducible; wall-clock
timing is off by default so that seeded outputs stay byte-identical
(enable with --timing when profiling).
"""

import functools
import os
import sys
from fractions import Fraction

import click

from .errors import CapacityError, DomainError, FolabError, FormulaSyntaxError, GraphFormatError
from .graphs import (automorphism_count, density, is_strictly_balanced,
                     load_graph, max_density, save_graph)
from .logic import depth as formula_depth
from .logic import evaluate_table, parse as parse_formula
from .mc import (BUILTIN_PROPERTIES, SampleSpec, estimate_to_json, mc_estimate,
                 poisson_check, rows_to_csv, rows_to_json, threshold_scan)
from .pairs import (Alpha, e_min, f_alpha, is_alpha_safe, load_pair,
                    is_strictly_balanced_pair, max_rel_density, rel_counts,
                    rel_density, save_pair)
from .witnesses import build_clique_witness, build_path_witness
from .game import (GameState, StrategyContext, Winner, check_S_membership,
                   crosscheck_ehrenfeucht, duplicator_move, generate_battery,
                   reply_values, solve)
from .game.membership import MembershipCaps

EXIT_INPUT = 3
EXIT_CAPACITY = 4


def folab_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except CapacityError as exc:
            click.echo(f"capacity error: {exc}", err=True)
            sys.exit(EXIT_CAPACITY)
        except (GraphFormatError, FormulaSyntaxError, DomainError, FileNotFoundError,
                OSError, ValueError) as exc:
            click.echo(f"input error: {exc}", err=True)
            sys.exit(EXIT_INPUT)
        except FolabError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_INPUT)
    return wrapper


def _fraction(_ctx, _param, value):
    if value is None:
        return None
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise click.BadParameter(f"not a fraction: {value!r} ({exc})")


def _fractions(_ctx, _param, values):
    return tuple(_fraction(None, None, v) for v in values)


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def worker_cap():
    """FOLAB_THREADS caps the trial-loop workers (informational; the
    sequential fold is already order-independent)."""
    try:
        return max(1, int(os.environ.get("FOLAB_THREADS", "1")))
    except ValueError:
        return 1


@click.group()
def main():
    """Experiments on first-order properties of G(n, n^-alpha)."""


@main.command("density")
@click.argument("graph_file", type=click.Path())
@click.option("--cap", default=16, show_default=True)
@folab_errors
def cmd_density(graph_file, cap):
    """Exact density report for a graph file."""
    g = load_graph(graph_file)
    rho = density(g)
    rho_max, _ = max_density(g, cap=cap)
    balanced = is_strictly_balanced(g, cap=cap)
    aut = automorphism_count(g, cap=max(10, min(g.n, cap)))
    click.echo(f"rho={rho} rhomax={rho_max} strictly_balanced={str(balanced).lower()} aut={aut}")


@main.command("pair")
@click.argument("pair_file", type=click.Path())
@click.option("--alpha", callback=_fraction, default=None,
              help="exact fraction, e.g. 5/8; adds f_alpha and safety")
@click.option("--cap", default=14, show_default=True)
@folab_errors
def cmd_pair(pair_file, alpha, cap):
    """Relative-density report for a rooted pair file."""
    pair = load_pair(pair_file)
    v_rel, e_rel = rel_counts(pair)
    parts = [f"v_rel={v_rel} e_rel={e_rel}"]
    if v_rel >= 1:
        rho_max, _ = max_rel_density(pair, cap=cap)
        parts.append(f"rho={rel_density(pair)} rhomax={rho_max}")
        parts.append(f"strictly_balanced={str(is_strictly_balanced_pair(pair, cap=cap)).lower()}")
        try:
            parts.append(f"emin={e_min(pair, cap=cap)}")
        except DomainError:
            parts.append("emin=undefined")
    if alpha is not None:
        parts.append(f"f_alpha={f_alpha(pair, alpha)}")
        if v_rel >= 1:
            parts.append(f"alpha_safe={str(is_alpha_safe(pair, alpha, cap=cap)).lower()}")
    click.echo(" ".join(parts))


def _resolve_property(name, formula_file):
    if (name is None) == (formula_file is None):
        raise click.UsageError("give exactly one of --property and --formula-file")
    if name is not None:
        if name not in BUILTIN_PROPERTIES:
            raise click.UsageError(
                f"unknown property {name!r}; builtins: {', '.join(sorted(BUILTIN_PROPERTIES))}")
        return BUILTIN_PROPERTIES[name]
    with open(formula_file, "r", encoding="utf-8") as fh:
        formula = parse_formula(fh.read(), declared_free=())
    return lambda g: evaluate_table(g, formula)


@main.command("scan")
@click.option("--property", "prop_name", default=None, help="builtin property name")
@click.option("--formula-file", type=click.Path(), default=None)
@click.option("--n", "n_list", multiple=True, type=int, required=True)
@click.option("--alpha", "alphas", multiple=True, callback=_fractions, required=True,
              help="exact fractions in (0,1), e.g. --alpha 11/20")
@click.option("--trials", type=int, required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--epsilon", callback=_fraction, default=None,
              help="sample the endpoints alpha -+ epsilon instead")
@click.option("--out", type=click.Path(), default=None)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
@click.option("--timing", is_flag=True, help="record wall times (breaks byte-reproducibility)")
@folab_errors
def cmd_scan(prop_name, formula_file, n_list, alphas, trials, seed, epsilon, out, fmt, timing):
    """Threshold scan: one estimate per (n, alpha) cell."""
    if trials < 1:
        raise click.UsageError("--trials must be at least 1")
    prop = _resolve_property(prop_name, formula_file)
    rows = threshold_scan(prop, list(n_list), list(alphas), trials, seed,
                          epsilon=epsilon, timing=timing)
    text = rows_to_csv(rows) if fmt == "csv" else rows_to_json(rows) + "\n"
    _emit(text, out)


@main.command("mc")
@click.option("--property", "prop_name", default=None)
@click.option("--formula-file", type=click.Path(), default=None)
@click.option("--n", type=int, required=True)
@click.option("--alpha", callback=_fraction, default=None, help="p = n^-alpha (exact fraction)")
@click.option("--p", "p_explicit", type=float, default=None)
@click.option("--trials", type=int, required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(), default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
@click.option("--timing", is_flag=True)
@folab_errors
def cmd_mc(prop_name, formula_file, n, alpha, p_explicit, trials, seed, out, fmt, timing):
    """Monte Carlo estimate of P(G(n,p) satisfies the property)."""
    if trials < 1:
        raise click.UsageError("--trials must be at least 1")
    if (alpha is None) == (p_explicit is None):
        raise click.UsageError("give exactly one of --alpha and --p")
    prop = _resolve_property(prop_name, formula_file)
    spec = SampleSpec(n=n, p=p_explicit, alpha=alpha, seed=seed, trials=trials)
    est = mc_estimate(spec, prop, timing=timing)
    if fmt == "json":
        _emit(estimate_to_json(est) + "\n", out)
    else:
        from .mc import CSV_HEADER, SCHEMA_VERSION
        line = ",".join([str(est.n), str(est.alpha if est.alpha is not None else ""),
                         repr(est.p), str(est.trials), str(est.hits), repr(est.p_hat),
                         repr(est.ci_low), repr(est.ci_high), str(est.seed),
                         repr(est.wall_ms)])
        _emit(f"# schema={SCHEMA_VERSION}\n{CSV_HEADER}\n{line}\n", out)


@main.command("poisson")
@click.option("--pattern", "pattern_file", type=click.Path(), required=True,
              help="graph file of the strictly balanced pattern")
@click.option("--n", type=int, required=True)
@click.option("--trials", type=int, required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@folab_errors
def cmd_poisson(pattern_file, n, trials, seed):
    """Copy-count distribution against the Poisson limit at p = n^(-1/rho)."""
    pattern = load_graph(pattern_file)
    report = poisson_check(n, pattern, trials, seed)
    click.echo(f"n={report.n} p={report.p!r} trials={report.trials} lambda={report.lam}")
    click.echo(f"empirical_mean={report.empirical_mean!r}")
    click.echo(f"bins_observed={list(report.bin_observed)} "
               f"bins_expected={[round(e, 3) for e in report.bin_expected]}")
    click.echo(f"chi_square={report.chi_square!r} p_value={report.p_value!r}")


@main.command("witness")
@click.option("--kind", type=click.IntRange(1, 2), required=True,
              help="1 = clique construction, 2 = disjoint-paths construction")
@click.option("--k", "k_param", type=int, required=True)
@click.option("--m", "m_param", type=int, required=True)
@click.option("--out", type=click.Path(), default=None, help="directory for X/Y/pair files")
@folab_errors
def cmd_witness(kind, k_param, m_param, out):
    """Build the witness graphs (X, Y) and report their exact densities."""
    builder = build_clique_witness if kind == 1 else build_path_witness
    x_graph, y_graph, pair, alpha = builder(k_param, m_param)
    click.echo(f"alpha={alpha.value} v(X)={x_graph.n} e(X)={len(x_graph.edges)} "
               f"v(Y)={y_graph.n} e(Y)={len(y_graph.edges)} "
               f"rho(X)={density(x_graph)} rho(Y)={density(y_graph)} "
               f"pair_rho={rel_density(pair)}")
    if out:
        os.makedirs(out, exist_ok=True)
        save_graph(x_graph, os.path.join(out, "X.graph"), header="witness X")
        save_graph(y_graph, os.path.join(out, "Y.graph"), header="witness Y")
        save_pair(pair, os.path.join(out, "pair.pair"), header="witness pair (Y, X)")
        click.echo(f"wrote X.graph, Y.graph, pair.pair to {out}")


@main.command("sset-check")
@click.argument("graph_file", type=click.Path())
@click.option("--alpha", callback=_fraction, required=True)
@click.option("--max-subgraph-v", default=3, show_default=True)
@click.option("--max-pattern-v", default=3, show_default=True)
@click.option("--max-root-v", default=2, show_default=True)
@folab_errors
def cmd_sset_check(graph_file, alpha, max_subgraph_v, max_pattern_v, max_root_v):
    """Check the well-structured-host properties at the given caps."""
    g = load_graph(graph_file)
    caps = MembershipCaps(max_subgraph_v, max_pattern_v, max_root_v)
    report = check_S_membership(g, alpha, caps)
    click.echo(f"passed={str(report.passed).lower()} h_patterns={report.h_patterns} "
               f"k_patterns={report.k_patterns} balanced_targets={report.balanced_targets}")
    for prop, what in report.failures:
        click.echo(f"fail {prop}: {what}")
    if not report.passed:
        sys.exit(1)


@main.group("ef")
def ef_group():
    """Vertex-picking game commands."""


@ef_group.command("solve")
@click.option("--g", "g_file", type=click.Path(), required=True)
@click.option("--h", "h_file", type=click.Path(), required=True)
@click.option("--k", "rounds", type=int, required=True)
@folab_errors
def ef_solve(g_file, h_file, rounds):
    """Game value under optimal play."""
    gg = load_graph(g_file)
    gh = load_graph(h_file)
    click.echo(solve(gg, gh, rounds).value)


@ef_group.command("crosscheck")
@click.option("--pairs", "pair_count", type=int, default=50, show_default=True)
@click.option("--depth", "max_depth", type=int, default=3, show_default=True)
@click.option("--battery", "battery_file", type=click.Path(), default=None,
              help="file with one closed formula per line (default: generated)")
@click.option("--battery-size", type=int, default=50, show_default=True)
@click.option("--max-v", type=int, default=7, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@folab_errors
def ef_crosscheck(pair_count, max_depth, battery_file, battery_size, max_v, seed):
    """Random graph pairs vs. a formula battery; report any violations."""
    import random

    from .graphs import Graph
    if battery_file:
        with open(battery_file, "r", encoding="utf-8") as fh:
            battery = [parse_formula(line.strip(), declared_free=())
                       for line in fh if line.strip()]
        for f in battery:
            if formula_depth(f) > max_depth:
                raise DomainError("battery formula deeper than --depth")
    else:
        battery = generate_battery(battery_size, max_depth, seed)
    rng = random.Random(seed + 1)
    bad = 0
    for _ in range(pair_count):
        n1 = rng.randint(1, max_v)
        n2 = rng.randint(1, max_v)
        g1 = _random_graph(rng, n1)
        g2 = _random_graph(rng, n2)
        report = crosscheck_ehrenfeucht(g1, g2, max_depth, battery)
        bad += len(report.violations)
    click.echo(f"pairs={pair_count} battery={len(battery)} violations={bad}")
    if bad:
        sys.exit(1)


def _random_graph(rng, n):
    from .graphs import Graph
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < rng.random()]
    return Graph(n, edges)


@ef_group.command("play")
@click.option("--g", "g_file", type=click.Path(), required=True)
@click.option("--h", "h_file", type=click.Path(), required=True)
@click.option("--k", "rounds", type=int, required=True)
@click.option("--side", type=click.Choice(["spoiler", "duplicator"]), default="spoiler",
              show_default=True, help="the human's side")
@click.option("--engine", type=click.Choice(["solver", "script"]), default="solver",
              show_default=True)
@click.option("--b", "b_param", type=int, default=1, show_default=True)
@folab_errors
def ef_play(g_file, h_file, rounds, side, engine, b_param):
    """Interactive game; enter moves as: pick <g|h> <vertex>."""
    gg = load_graph(g_file)
    gh = load_graph(h_file)
    click.echo(f"graph g: n={gg.n}, edges={sorted(gg.edges)}")
    click.echo(f"graph h: n={gh.n}, edges={sorted(gh.edges)}")
    state = GameState(gg, gh, rounds)
    ctx = StrategyContext(k=rounds, b=b_param)
    memo = {}
    while not state.finished():
        if state.pending is None:
            state = _spoiler_turn(state, side, memo)
        else:
            state = _duplicator_turn(state, side, engine, ctx, memo)
    click.echo(f"winner: {state.winner().value}")


def _prompt_move(state):
    while True:
        raw = click.prompt("pick", prompt_suffix=" (g|h vertex)> ")
        parts = raw.replace("pick", "").split()
        if len(parts) == 2 and parts[0] in ("g", "h"):
            try:
                vertex = int(parts[1])
                return state.apply_spoiler(parts[0], vertex)
            except (ValueError, DomainError) as exc:
                click.echo(f"illegal move ({exc}); try again")
        else:
            click.echo("format: <g|h> <vertex>")


def _spoiler_turn(state, human_side, memo):
    if human_side == "spoiler":
        return _prompt_move(state)
    # engine Spoiler: first move that the solver scores as winning
    for side, v in state.spoiler_moves():
        nxt = state.apply_spoiler(side, v)
        if not reply_values(nxt, memo=memo):
            click.echo(f"spoiler picks {side} {v}")
            return nxt
    side, v = state.spoiler_moves()[0]
    click.echo(f"spoiler picks {side} {v}")
    return state.apply_spoiler(side, v)


def _duplicator_turn(state, human_side, engine, ctx, memo):
    if human_side == "duplicator":
        while True:
            raw = click.prompt("reply", prompt_suffix=" (vertex)> ")
            try:
                return state.apply_reply(int(raw))
            except (ValueError, DomainError) as exc:
                click.echo(f"illegal reply ({exc}); try again")
    if engine == "script":
        vertex, _ = duplicator_move(state, ctx)
    else:
        winners = reply_values(state, memo=memo)
        vertex = winners[0] if winners else state.duplicator_replies()[0]
    click.echo(f"duplicator replies {vertex}")
    return state.apply_reply(vertex)


if __name__ == "__main__":
    main()
