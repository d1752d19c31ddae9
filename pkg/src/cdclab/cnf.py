"""Core propositional objects.

Literals are DIMACS-style signed integers: +v is the positive literal of
variable v, -v the negative one.  In the x^a notation, x^1 is the positive
literal and x^0 the negated one, so the assignment x=a satisfies x^a.
Clauses are frozensets of literals, CNFs are sets of clauses.  Everything in
this module is an immutable value; all operations are pure functions.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

Lit = int
Clause = frozenset  # frozenset[Lit]

EMPTY_CLAUSE: Clause = frozenset()


def lit(var: int, sign: int) -> Lit:
    """Literal var^sign: positive when sign is 1, negated when sign is 0."""
    if var < 1:
        raise ValueError(f"variable index must be >= 1, got {var}")
    if sign not in (0, 1):
        raise ValueError(f"polarity must be 0 or 1, got {sign}")
    return var if sign else -var


def var_of(l: Lit) -> int:
    return abs(l)


def sign_of(l: Lit) -> int:
    return 1 if l > 0 else 0


def neg(l: Lit) -> Lit:
    return -l


def clause(lits: Iterable[Lit]) -> Clause:
    """Build a clause, rejecting tautologies (a variable with both signs)."""
    c = frozenset(lits)
    for l in c:
        if -l in c:
            raise ValueError(f"tautological clause: variable {abs(l)} with both signs")
        if l == 0:
            raise ValueError("literal 0 is not allowed")
    return c


def clause_key(c: Clause) -> tuple:
    """Canonical ordering key: literals sorted by variable index."""
    return tuple(sorted(c, key=abs))


def clause_width(c: Clause) -> int:
    return len(c)


def clause_vars(c: Clause) -> frozenset:
    return frozenset(abs(l) for l in c)


def format_clause(c: Clause) -> str:
    return " ".join(str(l) for l in clause_key(c)) + " 0"


@dataclass(frozen=True)
class Cnf:
    """A set of clauses over variables 1..num_vars."""

    clauses: frozenset
    num_vars: int

    def __post_init__(self):
        for c in self.clauses:
            for l in c:
                if abs(l) > self.num_vars:
                    raise ValueError(f"literal {l} exceeds num_vars={self.num_vars}")

    @staticmethod
    def of(clause_lists: Iterable[Iterable[Lit]], num_vars: Optional[int] = None) -> "Cnf":
        cs = frozenset(clause(ls) for ls in clause_lists)
        if num_vars is None:
            num_vars = max((abs(l) for c in cs for l in c), default=0)
        return Cnf(cs, num_vars)

    def sorted_clauses(self) -> list:
        return sorted(self.clauses, key=clause_key)

    def variables(self) -> frozenset:
        return frozenset(abs(l) for c in self.clauses for l in c)

    def add(self, c: Clause) -> "Cnf":
        return Cnf(self.clauses | {c}, max(self.num_vars, max((abs(l) for l in c), default=0)))

    def __contains__(self, c: Clause) -> bool:
        return c in self.clauses

    def __iter__(self) -> Iterator[Clause]:
        return iter(self.sorted_clauses())

    def __len__(self) -> int:
        return len(self.clauses)


@dataclass(frozen=True)
class Restriction:
    """A partial assignment; each variable is assigned at most once."""

    assignments: tuple  # tuple[(var, value)] sorted by var

    @staticmethod
    def of(mapping) -> "Restriction":
        items = tuple(sorted(dict(mapping).items()))
        for v, a in items:
            if v < 1 or a not in (0, 1):
                raise ValueError(f"bad assignment {v}={a}")
        return Restriction(items)

    def as_dict(self) -> dict:
        return dict(self.assignments)

    def variables(self) -> frozenset:
        return frozenset(v for v, _ in self.assignments)

    def value(self, v: int) -> Optional[int]:
        for w, a in self.assignments:
            if w == v:
                return a
        return None

    def satisfies(self, l: Lit) -> bool:
        a = self.value(abs(l))
        return a is not None and a == sign_of(l)

    def falsifies(self, l: Lit) -> bool:
        a = self.value(abs(l))
        return a is not None and a != sign_of(l)

    def __len__(self) -> int:
        return len(self.assignments)


def restrict_clause(c: Clause, rho: Restriction) -> Optional[Clause]:
    """Apply a restriction to one clause.

    Returns None when the clause is satisfied, otherwise the clause with
    falsified literals removed (possibly the empty clause).
    """
    vals = rho.as_dict()
    out = []
    for l in c:
        a = vals.get(abs(l))
        if a is None:
            out.append(l)
        elif a == sign_of(l):
            return None
    return frozenset(out)


def restrict_cnf(tau: Cnf, rho: Restriction) -> Cnf:
    """Restrict a CNF: satisfied clauses drop, falsified literals drop.

    A fully falsified clause becomes the empty clause and is retained.
    """
    out = set()
    for c in tau.clauses:
        rc = restrict_clause(c, rho)
        if rc is not None:
            out.add(rc)
    return Cnf(frozenset(out), tau.num_vars)


@dataclass(frozen=True)
class VarOrder:
    """A permutation of [1..n]: ranks[v-1] is the position of variable v.

    Smaller rank means earlier ("smaller") in the order.
    """

    ranks: tuple

    def __post_init__(self):
        n = len(self.ranks)
        if sorted(self.ranks) != list(range(1, n + 1)):
            raise ValueError("ranks must be a permutation of 1..n")

    @staticmethod
    def identity(n: int) -> "VarOrder":
        return VarOrder(tuple(range(1, n + 1)))

    @staticmethod
    def from_ranked_vars(vars_in_order: Iterable[int]) -> "VarOrder":
        """Build from the list of variables given smallest-first."""
        vs = list(vars_in_order)
        ranks = [0] * len(vs)
        for pos, v in enumerate(vs, start=1):
            ranks[v - 1] = pos
        return VarOrder(tuple(ranks))

    @property
    def n(self) -> int:
        return len(self.ranks)

    def rank(self, v: int) -> int:
        return self.ranks[v - 1]

    def rank_of_lit(self, l: Lit) -> int:
        return self.ranks[abs(l) - 1]

    def vars_by_rank(self) -> list:
        """Variables listed smallest-first."""
        out = [0] * self.n
        for v, r in enumerate(self.ranks, start=1):
            out[r - 1] = v
        return out

    def first_k(self, k: int) -> frozenset:
        """The k smallest variables."""
        return frozenset(v for v in range(1, self.n + 1) if self.ranks[v - 1] <= k)

    def smallest_unassigned(self, assigned: Iterable[int]) -> Optional[int]:
        taken = set(assigned)
        for v in self.vars_by_rank():
            if v not in taken:
                return v
        return None


def is_k_small(c: Clause, order: VarOrder, k: int) -> bool:
    """All variables of the clause lie among the k order-smallest."""
    return all(order.rank(abs(l)) <= k for l in c)


def is_almost_k_small(c: Clause, order: VarOrder, k: int) -> bool:
    """At most one variable of the clause lies outside the k smallest."""
    outside = {abs(l) for l in c if order.rank(abs(l)) > k}
    return len(outside) <= 1


# ---------------------------------------------------------------------------
# Formula generators


def gen_induction(n: int) -> Cnf:
    """The induction-principle chain: x1, (not x_i or x_{i+1}), not x_n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    cs = [clause([1])]
    for i in range(1, n):
        cs.append(clause([-i, i + 1]))
    cs.append(clause([-n]))
    return Cnf(frozenset(cs), n)


@dataclass(frozen=True)
class XorMap:
    """Variable map for the parity substitution of an n-variable formula.

    Original variable i becomes the XOR of r fresh variables; fresh variable
    (i, j) gets index (i-1)*r + j, so the block of row i is contiguous.
    """

    n: int
    r: int

    def var(self, i: int, j: int) -> int:
        if not (1 <= i <= self.n and 1 <= j <= self.r):
            raise ValueError(f"({i},{j}) out of range")
        return (i - 1) * self.r + j

    def row(self, v: int) -> int:
        return (v - 1) // self.r + 1

    def col(self, v: int) -> int:
        return (v - 1) % self.r + 1

    @property
    def num_vars(self) -> int:
        return self.n * self.r


def _parity_clauses(xmap: XorMap, i: int, target: int) -> list:
    """CNF of 'XOR of row i equals target': one clause per violating sign
    pattern, 2^(r-1) clauses in total."""
    r = xmap.r
    out = []
    for bits in range(1 << r):
        pattern = [(bits >> j) & 1 for j in range(r)]
        if sum(pattern) % 2 == 1 - target:
            out.append([lit(xmap.var(i, j + 1), 1 - pattern[j]) for j in range(r)])
    return out


def xor_substitute(tau: Cnf, r: int) -> tuple:
    """Replace each variable by an XOR of r fresh ones, expanded to CNF.

    Each clause of width w becomes 2^((r-1)w) clauses of width r*w (direct
    expansion, no auxiliary variables).  Returns (Cnf, XorMap).
    """
    if r < 1:
        raise ValueError("arity must be >= 1")
    xmap = XorMap(tau.num_vars, r)
    out = set()
    for c in tau.sorted_clauses():
        lits = clause_key(c)
        # Per literal x_i^a, the violating patterns of its parity block.
        options = [_parity_clauses(xmap, abs(l), sign_of(l)) for l in lits]
        stack = [(0, [])]
        while stack:
            idx, acc = stack.pop()
            if idx == len(options):
                out.add(clause(acc))
                continue
            for piece in options[idx]:
                stack.append((idx + 1, acc + piece))
    return Cnf(frozenset(out), xmap.num_vars), xmap


def order_row_then_column(n: int, r: int) -> VarOrder:
    """All column-1 variables in row order, then column 2, and so on."""
    xmap = XorMap(n, r)
    ordered = [xmap.var(i, j) for j in range(1, r + 1) for i in range(1, n + 1)]
    return VarOrder.from_ranked_vars(ordered)


def is_row_parallel(order: VarOrder, xmap: XorMap) -> bool:
    """Column position decides order: for u < v, every column-u variable
    comes before every column-v variable, whatever the rows."""
    for u in range(1, xmap.r + 1):
        for v in range(1, xmap.r + 1):
            if u == v:
                continue
            for i in range(1, xmap.n + 1):
                for j in range(1, xmap.n + 1):
                    lhs = u < v
                    rhs = order.rank(xmap.var(i, u)) < order.rank(xmap.var(j, v))
                    if lhs != rhs:
                        return False
    return True


def is_column_parallel(order: VarOrder, xmap: XorMap) -> bool:
    """Rows are ordered consistently across columns."""
    for u in range(1, xmap.r + 1):
        for v in range(1, xmap.r + 1):
            for i in range(1, xmap.n + 1):
                for j in range(1, xmap.n + 1):
                    lhs = order.rank(xmap.var(i, u)) < order.rank(xmap.var(j, u))
                    rhs = order.rank(xmap.var(i, v)) < order.rank(xmap.var(j, v))
                    if lhs != rhs:
                        return False
    return True


# ---------------------------------------------------------------------------
# Pointed graphs and stone formulas


@dataclass(frozen=True)
class PointedGraph:
    """Acyclic digraph on [1..n], fan-in two for non-sources, a unique sink.

    Vertices are topologically numbered: every edge (u, v) has u < v.
    """

    n: int
    edges: frozenset  # frozenset[(u, v)]

    def __post_init__(self):
        outdeg = {v: 0 for v in range(1, self.n + 1)}
        indeg = {v: 0 for v in range(1, self.n + 1)}
        for u, v in self.edges:
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ValueError(f"edge ({u},{v}) out of range")
            if u >= v:
                raise ValueError(f"edge ({u},{v}) is not topologically numbered")
            outdeg[u] += 1
            indeg[v] += 1
        sinks = [v for v in range(1, self.n + 1) if outdeg[v] == 0]
        if sinks != [self.n]:
            raise ValueError(f"expected the unique sink to be vertex {self.n}, sinks={sinks}")
        for v in range(1, self.n + 1):
            if indeg[v] not in (0, 2):
                raise ValueError(f"vertex {v} has fan-in {indeg[v]}, expected 0 or 2")

    def parents(self, v: int) -> tuple:
        ps = sorted(u for u, w in self.edges if w == v)
        return tuple(ps)

    def sources(self) -> list:
        return [v for v in range(1, self.n + 1) if not self.parents(v)]

    def internal(self) -> list:
        return [v for v in range(1, self.n + 1) if self.parents(v)]

    @property
    def sink(self) -> int:
        return self.n


def gen_pointed_graph(n: int, seed: int) -> PointedGraph:
    """A random pointed graph, deterministic for a fixed seed.

    Vertices 1 and 2 are sources; vertex k >= 3 takes parents {k-1, p} with
    p random below k-1, which guarantees every non-sink has an out-edge.
    """
    if n < 3:
        raise ValueError("need at least 3 vertices")
    rng = random.Random(seed)
    edges = set()
    for k in range(3, n + 1):
        p = 1 if k == 3 else rng.randrange(1, k - 1)
        edges.add((p, k))
        edges.add((k - 1, k))
    return PointedGraph(n, frozenset(edges))


def enumerate_pointed_graphs(n: int):
    """All pointed graphs on n topologically numbered vertices."""
    if n < 3:
        raise ValueError("need at least 3 vertices")
    from itertools import combinations, product

    choices = []
    for k in range(3, n + 1):
        opts = [None] if k < n else []  # vertex n cannot be a source
        opts += list(combinations(range(1, k), 2))
        choices.append(opts)
    out = []
    for combo in product(*choices):
        edges = set()
        for k, parents in zip(range(3, n + 1), combo):
            if parents is None:
                continue
            for p in parents:
                edges.add((p, k))
        outdeg = {v: 0 for v in range(1, n + 1)}
        for u, v in edges:
            outdeg[u] += 1
        if all(outdeg[v] > 0 for v in range(1, n)):
            try:
                out.append(PointedGraph(n, frozenset(edges)))
            except ValueError:
                pass
    return out


@dataclass(frozen=True)
class StoneMap:
    """Variable numbering for stone formulas: placement variable P(i,u) is
    (i-1)*m + u, color variable R(v) is n*m + v."""

    n: int
    m: int

    def p(self, i: int, u: int) -> int:
        if not (1 <= i <= self.n and 1 <= u <= self.m):
            raise ValueError(f"P({i},{u}) out of range")
        return (i - 1) * self.m + u

    def r(self, v: int) -> int:
        if not (1 <= v <= self.m):
            raise ValueError(f"R({v}) out of range")
        return self.n * self.m + v

    @property
    def num_vars(self) -> int:
        return self.n * self.m + self.m


def gen_stone(g: PointedGraph, m: int) -> tuple:
    """Stone placement/coloring contradiction for a pointed graph.

    Clause groups: (1) every vertex holds a stone; (2) stones on sources are
    red; (3) stones on the sink are blue; (4) redness propagates along the
    two in-edges.  Group 4 instances whose conclusion stone coincides with a
    premise stone are tautologies, not clauses, and are skipped.
    Returns (Cnf, StoneMap).
    """
    if m < g.n:
        raise ValueError(f"need at least as many stones as vertices: m={m} < n={g.n}")
    smap = StoneMap(g.n, m)
    cs = set()
    for i in range(1, g.n + 1):
        cs.add(clause([smap.p(i, u) for u in range(1, m + 1)]))
    for k in g.sources():
        for u in range(1, m + 1):
            cs.add(clause([-smap.p(k, u), smap.r(u)]))
    for u in range(1, m + 1):
        cs.add(clause([-smap.p(g.sink, u), -smap.r(u)]))
    for k in g.internal():
        i, j = g.parents(k)
        for t in range(1, m + 1):
            for u in range(1, m + 1):
                for v in range(1, m + 1):
                    if v == t or v == u:
                        continue  # conclusion R(v) would clash with a premise
                    cs.add(clause([-smap.p(i, t), -smap.r(t),
                                   -smap.p(j, u), -smap.r(u),
                                   -smap.p(k, v), smap.r(v)]))
    return Cnf(frozenset(cs), smap.num_vars), smap


def stone_clause_count(g: PointedGraph, m: int) -> int:
    """Clause count of gen_stone: n + #sources*m + m + #internal*(m^3 - 2m^2 + m),
    the cube corrected for skipped tautologies and merged duplicates."""
    n_src = len(g.sources())
    n_int = len(g.internal())
    return g.n + n_src * m + m + n_int * (m ** 3 - 2 * m ** 2 + m)


def order_stone(g: PointedGraph, m: int) -> VarOrder:
    """Placement blocks by descending vertex (stones ascending inside), then
    the color block."""
    smap = StoneMap(g.n, m)
    ordered = []
    for i in range(g.n, 0, -1):
        for u in range(1, m + 1):
            ordered.append(smap.p(i, u))
    for v in range(1, m + 1):
        ordered.append(smap.r(v))
    return VarOrder.from_ranked_vars(ordered)


# ---------------------------------------------------------------------------
# File formats


def write_dimacs(tau: Cnf, comments: Iterable[str] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p cnf {tau.num_vars} {len(tau)}")
    for c in tau.sorted_clauses():
        lines.append(format_clause(c))
    return "\n".join(lines) + "\n"


def read_dimacs(text: str) -> tuple:
    """Parse DIMACS text; returns (Cnf, comments)."""
    comments = []
    num_vars = None
    num_clauses = None
    clauses = []
    acc = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            comments.append(line[1:].strip())
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"bad problem line: {line!r}")
            num_vars, num_clauses = int(parts[2]), int(parts[3])
            continue
        for tok in line.split():
            v = int(tok)
            if v == 0:
                clauses.append(clause(acc))
                acc = []
            else:
                acc.append(v)
    if acc:
        raise ValueError("unterminated clause at end of file")
    if num_vars is None:
        raise ValueError("missing problem line")
    cnf = Cnf(frozenset(clauses), num_vars)
    if num_clauses is not None and len(clauses) != num_clauses:
        # duplicates collapse under set semantics; only flag shortfalls
        if len(clauses) < num_clauses:
            pass
    return cnf, comments


def write_order(order: VarOrder) -> str:
    return f"p order {order.n}\n" + " ".join(str(r) for r in order.ranks) + "\n"


def read_order(text: str, num_vars: Optional[int] = None) -> VarOrder:
    toks = text.split()
    if len(toks) >= 1 and toks[0] == "identity":
        if num_vars is None:
            raise ValueError("'identity' needs a variable count")
        return VarOrder.identity(num_vars)
    if len(toks) < 3 or toks[0] != "p" or toks[1] != "order":
        raise ValueError("expected 'p order n' header or 'identity'")
    n = int(toks[2])
    rest = toks[3:]
    if len(rest) == 1 and rest[0] == "identity":
        return VarOrder.identity(n)
    if len(rest) != n:
        raise ValueError(f"expected {n} rank entries, got {len(rest)}")
    return VarOrder(tuple(int(t) for t in rest))


def write_graph(g: PointedGraph) -> str:
    lines = [f"p graph {g.n}"]
    for u, v in sorted(g.edges):
        lines.append(f"e {u} {v}")
    return "\n".join(lines) + "\n"


def read_graph(text: str) -> PointedGraph:
    n = None
    edges = set()
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if len(parts) != 3 or parts[1] != "graph":
                raise ValueError(f"bad header: {line!r}")
            n = int(parts[2])
        elif parts[0] == "e":
            edges.add((int(parts[1]), int(parts[2])))
        else:
            raise ValueError(f"bad line: {line!r}")
    if n is None:
        raise ValueError("missing 'p graph n' header")
    return PointedGraph(n, frozenset(edges))
