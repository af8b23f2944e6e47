"""First-order formulas over the graph signature (adjacency, equality).

The AST keeps Implies primitive and And/Or n-ary so printed formulas keep
the shape of the constructions they mirror.  Two evaluators are provided:

* :func:`evaluate` - naive Tarskian recursion with an explicit cost guard
  (the reference semantics; cost O(v^depth * |formula|), estimated up
  front and refused above the guard).
* :func:`evaluate_table` - bottom-up truth tables over numpy boolean
  arrays, one axis per free variable of each subformula.  Same semantics,
  memory-guarded, and fast enough for the big sentence builders.
"""

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import CapacityError, DomainError, FormulaSyntaxError

EVAL_VISIT_GUARD = 10 ** 9
TABLE_CELL_GUARD = 2 * 10 ** 8


@dataclass(frozen=True)
class Adjacent:
    x: str
    y: str


@dataclass(frozen=True)
class Equal:
    x: str
    y: str


@dataclass(frozen=True)
class Not:
    sub: "Formula"


@dataclass(frozen=True)
class And:
    parts: tuple

    def __post_init__(self):
        if not self.parts:
            raise DomainError("And needs at least one part")
        object.__setattr__(self, "parts", tuple(self.parts))


@dataclass(frozen=True)
class Or:
    parts: tuple

    def __post_init__(self):
        if not self.parts:
            raise DomainError("Or needs at least one part")
        object.__setattr__(self, "parts", tuple(self.parts))


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    sub: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    sub: "Formula"


Formula = (Adjacent, Equal, Not, And, Or, Implies, Exists, Forall)


def exists_block(variables, body):
    for v in reversed(list(variables)):
        body = Exists(v, body)
    return body


def forall_block(variables, body):
    for v in reversed(list(variables)):
        body = Forall(v, body)
    return body


def conj(parts):
    """And over the parts, unwrapping a singleton (the printed grammar
    has no one-operand connective)."""
    parts = tuple(parts)
    return parts[0] if len(parts) == 1 else And(parts)


def disj(parts):
    parts = tuple(parts)
    return parts[0] if len(parts) == 1 else Or(parts)


def free_vars(f):
    if isinstance(f, (Adjacent, Equal)):
        return frozenset((f.x, f.y))
    if isinstance(f, Not):
        return free_vars(f.sub)
    if isinstance(f, (And, Or)):
        out = frozenset()
        for p in f.parts:
            out |= free_vars(p)
        return out
    if isinstance(f, Implies):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, (Exists, Forall)):
        return free_vars(f.sub) - {f.var}
    raise DomainError(f"not a formula: {f!r}")


def depth(f):
    """Quantifier depth: maximum number of nested quantifiers."""
    if isinstance(f, (Adjacent, Equal)):
        return 0
    if isinstance(f, Not):
        return depth(f.sub)
    if isinstance(f, (And, Or)):
        return max(depth(p) for p in f.parts)
    if isinstance(f, Implies):
        return max(depth(f.left), depth(f.right))
    if isinstance(f, (Exists, Forall)):
        return 1 + depth(f.sub)
    raise DomainError(f"not a formula: {f!r}")


def formula_size(f):
    if isinstance(f, (Adjacent, Equal)):
        return 1
    if isinstance(f, Not):
        return 1 + formula_size(f.sub)
    if isinstance(f, (And, Or)):
        return 1 + sum(formula_size(p) for p in f.parts)
    if isinstance(f, Implies):
        return 1 + formula_size(f.left) + formula_size(f.right)
    return 1 + formula_size(f.sub)


# --- printer -------------------------------------------------------------

def format_formula(f):
    if isinstance(f, Adjacent):
        return f"adj({f.x},{f.y})"
    if isinstance(f, Equal):
        return f"{f.x}={f.y}"
    if isinstance(f, Not):
        return "!" + format_formula(f.sub)
    if isinstance(f, And):
        return "(" + " & ".join(format_formula(p) for p in f.parts) + ")"
    if isinstance(f, Or):
        return "(" + " | ".join(format_formula(p) for p in f.parts) + ")"
    if isinstance(f, Implies):
        return f"({format_formula(f.left)} -> {format_formula(f.right)})"
    if isinstance(f, Exists):
        return f"E {f.var} . {format_formula(f.sub)}"
    if isinstance(f, Forall):
        return f"A {f.var} . {format_formula(f.sub)}"
    raise DomainError(f"not a formula: {f!r}")


# --- parser --------------------------------------------------------------

class _Tokens:
    SYMBOLS = ("->", "(", ")", ",", ".", "&", "|", "!", "=")

    def __init__(self, text):
        self.text = text
        self.items = []          # (value, 1-based offset)
        i = 0
        while i < len(text):
            ch = text[i]
            if ch.isspace():
                i += 1
                continue
            if text.startswith("->", i):
                self.items.append(("->", i + 1))
                i += 2
                continue
            if ch in "(),.&|!=":
                self.items.append((ch, i + 1))
                i += 1
                continue
            if ch.isalpha() or ch == "_":
                j = i
                while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                self.items.append((text[i:j], i + 1))
                i = j
                continue
            raise FormulaSyntaxError(f"unexpected character {ch!r}", i + 1)
        self.pos = 0

    def peek(self, ahead=0):
        idx = self.pos + ahead
        return self.items[idx][0] if idx < len(self.items) else None

    def offset(self):
        if self.pos < len(self.items):
            return self.items[self.pos][1]
        return len(self.text) + 1

    def take(self, expect=None):
        if self.pos >= len(self.items):
            raise FormulaSyntaxError(
                f"unexpected end of input{', expected ' + repr(expect) if expect else ''}",
                len(self.text) + 1)
        value, off = self.items[self.pos]
        if expect is not None and value != expect:
            raise FormulaSyntaxError(f"expected {expect!r}, found {value!r}", off)
        self.pos += 1
        return value, off


def _is_ident(tok):
    return tok is not None and (tok[0].isalpha() or tok[0] == "_") and tok not in ("adj",)


def parse(text, declared_free=None):
    """Parse ASCII formula text; round-trips with :func:`format_formula`.

    ``declared_free``: None accepts any free variables; otherwise a
    collection of allowed free names (use () to demand a closed formula).
    """
    toks = _Tokens(text)
    formula = _parse_formula(toks)
    if toks.peek() is not None:
        raise FormulaSyntaxError(f"trailing input {toks.peek()!r}", toks.offset())
    if declared_free is not None:
        stray = free_vars(formula) - set(declared_free)
        if stray:
            raise FormulaSyntaxError(
                f"unbound variable(s): {', '.join(sorted(stray))}", 1)
    return formula


def _parse_formula(toks):
    tok = toks.peek()
    if tok is None:
        raise FormulaSyntaxError("unexpected end of input", toks.offset())
    if tok in ("E", "A") and _is_ident(toks.peek(1)) and toks.peek(2) == ".":
        kind, _ = toks.take()
        var, _ = toks.take()
        toks.take(".")
        body = _parse_formula(toks)
        return Exists(var, body) if kind == "E" else Forall(var, body)
    if tok == "!":
        toks.take()
        return Not(_parse_formula(toks))
    if tok == "(":
        toks.take()
        first = _parse_formula(toks)
        op, off = toks.take()
        if op == "->":
            right = _parse_formula(toks)
            toks.take(")")
            return Implies(first, right)
        if op in ("&", "|"):
            parts = [first, _parse_formula(toks)]
            while toks.peek() == op:
                toks.take()
                parts.append(_parse_formula(toks))
            toks.take(")")
            return And(tuple(parts)) if op == "&" else Or(tuple(parts))
        raise FormulaSyntaxError(f"expected '&', '|' or '->', found {op!r}", off)
    if tok == "adj":
        toks.take()
        toks.take("(")
        x, off = toks.take()
        if not _is_ident(x):
            raise FormulaSyntaxError(f"expected variable, found {x!r}", off)
        toks.take(",")
        y, off = toks.take()
        if not _is_ident(y):
            raise FormulaSyntaxError(f"expected variable, found {y!r}", off)
        toks.take(")")
        return Adjacent(x, y)
    if _is_ident(tok):
        x, _ = toks.take()
        toks.take("=")
        y, off = toks.take()
        if not _is_ident(y):
            raise FormulaSyntaxError(f"expected variable, found {y!r}", off)
        return Equal(x, y)
    raise FormulaSyntaxError(f"unexpected token {tok!r}", toks.offset())


# --- naive evaluation ----------------------------------------------------

def cost_estimate(f, n):
    """Leaf visits of the naive evaluator, without short-circuiting."""
    if isinstance(f, (Adjacent, Equal)):
        return 1
    if isinstance(f, Not):
        return 1 + cost_estimate(f.sub, n)
    if isinstance(f, (And, Or)):
        return 1 + sum(cost_estimate(p, n) for p in f.parts)
    if isinstance(f, Implies):
        return 1 + cost_estimate(f.left, n) + cost_estimate(f.right, n)
    if isinstance(f, (Exists, Forall)):
        return 1 + n * cost_estimate(f.sub, n)
    raise DomainError(f"not a formula: {f!r}")


def evaluate(g, f, assignment=None, visit_guard=EVAL_VISIT_GUARD):
    """Standard Tarskian semantics by naive recursive enumeration.

    Quantifiers range over V(g).  Refuses up front when the estimated
    visit count exceeds ``visit_guard``.
    """
    assignment = dict(assignment or {})
    missing = free_vars(f) - set(assignment)
    if missing:
        raise DomainError(f"unassigned free variable(s): {', '.join(sorted(missing))}")
    for var, vertex in assignment.items():
        if not (0 <= vertex < g.n):
            raise DomainError(f"assignment {var}={vertex} outside the graph")
    est = cost_estimate(f, g.n)
    if est > visit_guard:
        raise CapacityError(f"estimated {est} visits exceeds guard {visit_guard}")
    adj = g.matrix() if g.n else None

    def rec(node, env):
        if isinstance(node, Adjacent):
            return bool(adj[env[node.x], env[node.y]])
        if isinstance(node, Equal):
            return env[node.x] == env[node.y]
        if isinstance(node, Not):
            return not rec(node.sub, env)
        if isinstance(node, And):
            return all(rec(p, env) for p in node.parts)
        if isinstance(node, Or):
            return any(rec(p, env) for p in node.parts)
        if isinstance(node, Implies):
            return (not rec(node.left, env)) or rec(node.right, env)
        if isinstance(node, Exists):
            return any(rec(node.sub, {**env, node.var: w}) for w in range(g.n))
        if isinstance(node, Forall):
            return all(rec(node.sub, {**env, node.var: w}) for w in range(g.n))
        raise DomainError(f"not a formula: {node!r}")

    return rec(f, assignment)


# --- table evaluation ----------------------------------------------------

def evaluate_table(g, f, assignment=None, cell_guard=TABLE_CELL_GUARD):
    """Same semantics as :func:`evaluate`, via numpy truth tables.

    Builds one boolean array per distinct subformula (memoized), with an
    axis per free variable in sorted name order.  Memory-guarded by the
    total cell count of any single table.
    """
    assignment = dict(assignment or {})
    missing = free_vars(f) - set(assignment)
    if missing:
        raise DomainError(f"unassigned free variable(s): {', '.join(sorted(missing))}")
    n = g.n
    adjacency = g.matrix()
    eye = np.eye(n, dtype=bool)
    memo = {}

    def guard(axes):
        if n and n ** len(axes) > cell_guard:
            raise CapacityError(
                f"table with {len(axes)} free variables over {n} vertices "
                f"exceeds the {cell_guard}-cell guard")

    def combine(tables_axes, op):
        target = tuple(sorted(set().union(*(set(a) for a, _ in tables_axes))))
        guard(target)
        out = None
        for axes, table in tables_axes:
            idx = tuple(slice(None) if v in axes else None for v in target)
            piece = table[idx] if axes != target else table
            if out is None:
                shape = (n,) * len(target)
                out = np.broadcast_to(piece, shape).copy()
            else:
                op(out, piece, out=out)
        return target, out

    def rec(node):
        key = node
        hit = memo.get(key)
        if hit is not None:
            return hit
        if isinstance(node, Adjacent):
            if node.x == node.y:
                res = ((node.x,), np.zeros(n, dtype=bool))
            else:
                axes = tuple(sorted((node.x, node.y)))
                table = adjacency if axes == (node.x, node.y) else adjacency.T
                res = (axes, table)
        elif isinstance(node, Equal):
            if node.x == node.y:
                res = ((node.x,), np.ones(n, dtype=bool))
            else:
                res = (tuple(sorted((node.x, node.y))), eye)
        elif isinstance(node, Not):
            axes, table = rec(node.sub)
            res = (axes, ~table)
        elif isinstance(node, (And, Or)):
            op = np.logical_and if isinstance(node, And) else np.logical_or
            res = combine([rec(p) for p in node.parts], op)
        elif isinstance(node, Implies):
            (la, lt) = rec(node.left)
            (ra, rt) = rec(node.right)
            res = combine([(la, ~lt), (ra, rt)], np.logical_or)
        elif isinstance(node, (Exists, Forall)):
            axes, table = rec(node.sub)
            if node.var in axes:
                k = axes.index(node.var)
                reduced = table.any(axis=k) if isinstance(node, Exists) else table.all(axis=k)
                res = (axes[:k] + axes[k + 1:], reduced)
            elif n == 0:
                fill = isinstance(node, Forall)
                res = (axes, np.full((n,) * len(axes), fill, dtype=bool))
            else:
                res = (axes, table)
        else:
            raise DomainError(f"not a formula: {node!r}")
        memo[key] = res
        return res

    axes, table = rec(f)
    idx = tuple(assignment[v] for v in axes)
    value = table[idx] if axes else table
    return bool(value)


# --- builders ------------------------------------------------------------

class _Names:
    """Deterministic fresh-variable supply for capture-free construction."""

    def __init__(self, prefix="w"):
        self.prefix = prefix
        self.counter = 0

    def fresh(self):
        self.counter += 1
        return f"{self.prefix}{self.counter}"


def dist_formula(i, x="x", y="y", names=None):
    """Walk-length-i reachability by midpoint recursion.

    Base cases: length 0 is equality, length 1 adjacency.  Semantically
    this holds iff the graph has a walk of exactly i edges from x to y
    (validated against a walk-DP oracle in the tests), so conjoined
    negations of shorter lengths pin the exact distance.
    """
    if i < 0:
        raise DomainError("walk length must be nonnegative")
    names = names or _Names()
    if i == 0:
        return Equal(x, y)
    if i == 1:
        return Adjacent(x, y)
    mid = names.fresh()
    return Exists(mid, And((dist_formula(i // 2, x, mid, names),
                            dist_formula((i + 1) // 2, y, mid, names))))


def dist_exact_formula(i, x="x", y="y", names=None):
    """True iff the distance between x and y is exactly i.

    The negated disjunction starts at walk length 0 (equality), not 1:
    without it, the two-step backtracking walk makes the i = 2 formula
    true on the diagonal x = y even though the distance there is 0.
    """
    if i < 0:
        raise DomainError("distance must be nonnegative")
    names = names or _Names()
    reach = dist_formula(i, x, y, names)
    if i == 0:
        return reach
    shorter = tuple(dist_formula(j, x, y, names) for j in range(i))
    return And((reach, Not(disj(shorter))))


def dist_exact2_formula(i, j, x="x", y="y", z="z", names=None):
    """z at distance exactly i from x and exactly j from y."""
    names = names or _Names()
    return And((dist_exact_formula(i, x, z, names),
                dist_exact_formula(j, z, y, names)))


def clique_formula(variables):
    variables = list(variables)
    if len(variables) < 2:
        raise DomainError("clique formula needs at least 2 variables")
    return conj(Adjacent(u, v) for u, v in combinations(variables, 2))


def common_neighbor_formula(y, xs):
    xs = list(xs)
    if not xs:
        raise DomainError("common neighborhood needs at least one center")
    return conj(Adjacent(y, x) for x in xs)


def _distinct(variables):
    return [Not(Equal(u, v)) for u, v in combinations(variables, 2)]


def subgraph_sentence(g, cap=8):
    """Closed sentence: some injective tuple carries every edge of g."""
    if g.n > cap:
        raise CapacityError(f"subgraph sentence capped at {cap} pattern vertices")
    if g.n == 0:
        raise DomainError("empty pattern")
    vs = [f"s{i}" for i in range(g.n)]
    parts = _distinct(vs) + [Adjacent(vs[u], vs[v]) for u, v in sorted(g.edges)]
    body = conj(parts) if parts else Equal(vs[0], vs[0])
    return exists_block(vs, body)


def extension_sentence(pair, cap=8):
    """Closed sentence: every injective root tuple has a (non-strict) extension."""
    if pair.big.n > cap:
        raise CapacityError(f"extension sentence capped at {cap} pattern vertices")
    roots = pair.roots
    news = pair.new_vertices()
    names = {v: f"u{i}" for i, v in enumerate(roots)}
    names.update({v: f"w{i}" for i, v in enumerate(news)})
    added = sorted(pair.added_edges())
    inner = _distinct([names[v] for v in news])
    inner += [Not(Equal(names[w], names[r])) for w in news for r in roots]
    inner += [Adjacent(names[u], names[v]) for u, v in added]
    if not inner:
        inner = [Equal(names[roots[0]], names[roots[0]])]
    body = exists_block([names[v] for v in news], conj(inner))
    guard_parts = _distinct([names[v] for v in roots])
    if guard_parts:
        body = Implies(conj(guard_parts), body)
    return forall_block([names[v] for v in roots], body)


def clique_witness_sentence(k):
    """The clique-with-common-neighbors sentence, depth max(2q, q+3), q = k//2.

    Asserts a q-clique with a clique of common neighbors and no hub vertex
    z whose local extension pattern would enlarge the configuration.
    """
    if k < 5:
        raise DomainError("need k >= 5")
    q = k // 2
    xs = [f"x{i}" for i in range(1, q + 1)]
    ys = [f"y{i}" for i in range(1, q + 1)]
    names = _Names("v")

    def r_i(z, i):
        # i in 2..q: some common neighbor of z and the x's except x_i
        v = names.fresh()
        others = [x for t, x in enumerate(xs, start=1) if t != i]
        return Exists(v, common_neighbor_formula(v, [z] + others))

    def r_12(z, a):
        v = names.fresh()
        others = xs[2:]
        return Exists(v, And((common_neighbor_formula(v, [z, a] + others),
                              Not(Adjacent(v, xs[0])),
                              Not(Adjacent(v, xs[1])))))

    y_part = exists_block(
        ys, And(tuple(common_neighbor_formula(yv, xs) for yv in ys)
                + (clique_formula(ys),)))
    z = "z"
    yq = "y"
    z_inner = [r_i(z, i) for i in range(2, q + 1)]
    z_inner.append(forall_block(
        [yq], Implies(common_neighbor_formula(yq, xs), r_12(z, yq))))
    no_hub = Not(Exists(z, And(tuple(z_inner))))
    phi = And((clique_formula(xs), y_part, no_hub))
    return exists_block(xs, phi)


def path_witness_sentence(k):
    """The long-disjoint-paths sentence with quantifier depth exactly k.

    Built literally from the published predicate definitions (S, psi, R,
    xi) over exact-distance formulas at scales 2^(k-5), 2^(k-6), 2^(k-7).
    Note the scope caveat in the package docs: its pointwise truth value
    on small graphs is governed by the literal predicate nesting.
    """
    if k < 8:
        raise DomainError("need k >= 8")
    full = 2 ** (k - 5)
    half = 2 ** (k - 6)
    quarter = 2 ** (k - 7)
    names = _Names("v")
    a, b = "a", "b"

    def d_exact(i, x, y):
        return dist_exact_formula(i, x, y, names)

    def d_exact2(i, j, x, y, z):
        return dist_exact2_formula(i, j, x, y, z, names)

    def psi(u1, u2, x):
        terms = []
        for s in range(half, full + 1):
            for i in range(1, s + 1):
                for j in range(max(half - i, 0), full - i + 1):
                    terms.append(And((d_exact2(i, s - i, a, u1, x),
                                      d_exact(j, x, u2))))
        for i in range(1, half + 1):
            terms.append(And((d_exact2(i, half - i, u1, b, x),
                              d_exact(i, u2, x))))
        return Not(disj(terms))

    def s_pred():
        u1, u2, x = "u1", "u2", "x"
        bad = exists_block(
            [u1, u2, x],
            And((Not(Equal(u1, u2)),
                 d_exact2(half, half, u1, u2, b),
                 d_exact2(half, half, u1, u2, a),
                 psi(u1, u2, x))))
        return And((d_exact(full, a, b), Not(bad)))

    def xi(center, x1, x2):
        y = names.fresh()
        terms = tuple(And((d_exact2(i, half - i, center, x1, y),
                           d_exact(quarter - i, y, x2)))
                      for i in range(1, quarter))
        return Not(Exists(y, disj(terms)))

    def r_pred(u):
        x1, x2 = "p1", "p2"
        return exists_block(
            [x1, x2],
            And((d_exact2(half, half, a, u, x1),
                 d_exact2(quarter, quarter, a, u, x2),
                 Not(d_exact(quarter, x1, x2)),
                 xi(a, x1, x2),
                 xi(u, x1, x2))))

    u = "u"
    mid_clause = forall_block([u], Implies(d_exact2(half, half, a, b, u), r_pred(u)))
    z = "z"
    hub = Exists(z, And((Not(Equal(z, a)),
                         forall_block([u], Implies(d_exact2(half, half, a, b, u),
                                                   d_exact(full, u, z))))))
    phi = And((s_pred(), mid_clause, Not(hub)))
    return exists_block([a, b], phi)
