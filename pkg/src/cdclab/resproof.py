"""Resolution proof DAGs with optional weakening, structural utilities,
subsystem checkers, proof restriction and weakening contraction.

A proof is a topologically ordered tuple of nodes; parents are indices into
that tuple, so parents always precede children.  The clause labelling need
not be injective: the same clause may appear at several nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .cnf import (
    Clause,
    Cnf,
    Restriction,
    VarOrder,
    clause_key,
    format_clause,
    restrict_clause,
    sign_of,
)

# rules: ("a",) axiom | ("r", p1, p2, pivot) resolution | ("w", p) weakening


@dataclass(frozen=True)
class ProofNode:
    clause: Clause
    rule: tuple

    @property
    def kind(self) -> str:
        return self.rule[0]

    def parents(self) -> tuple:
        if self.rule[0] == "a":
            return ()
        if self.rule[0] == "r":
            return (self.rule[1], self.rule[2])
        return (self.rule[1],)


@dataclass(frozen=True)
class ResolutionProof:
    nodes: tuple
    allow_weakening: bool = False

    def __len__(self) -> int:
        return len(self.nodes)

    def size(self) -> int:
        """Number of lines."""
        return len(self.nodes)

    def width(self) -> int:
        return max((len(n.clause) for n in self.nodes), default=0)

    def children(self) -> list:
        out = [[] for _ in self.nodes]
        for i, n in enumerate(self.nodes):
            for p in n.parents():
                out[p].append(i)
        return out

    def sinks(self) -> list:
        ch = self.children()
        return [i for i in range(len(self.nodes)) if not ch[i]]

    def axiom_clauses(self) -> set:
        return {n.clause for n in self.nodes if n.kind == "a"}

    def variables(self) -> frozenset:
        return frozenset(abs(l) for n in self.nodes for l in n.clause)

    def conclusions(self) -> list:
        return [self.nodes[i].clause for i in self.sinks()]

    def first_empty(self) -> Optional[int]:
        for i, n in enumerate(self.nodes):
            if not n.clause:
                return i
        return None


@dataclass
class Violation:
    where: object
    code: str
    detail: str = ""


@dataclass
class CheckReport:
    ok: bool
    violations: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @staticmethod
    def passed(**stats) -> "CheckReport":
        return CheckReport(True, [], stats)

    @staticmethod
    def failed(where, code, detail="", **stats) -> "CheckReport":
        return CheckReport(False, [Violation(where, code, detail)], stats)


def proof_size(pi: ResolutionProof) -> int:
    return pi.size()


def proof_width(pi: ResolutionProof) -> int:
    return pi.width()


def _check_resolution_node(pi: ResolutionProof, i: int) -> Optional[Violation]:
    node = pi.nodes[i]
    rule = node.rule
    if rule[0] == "a":
        return None
    if rule[0] == "w":
        (p,) = (rule[1],)
        if p >= i:
            return Violation(i, "order", "parent does not precede node")
        if not pi.nodes[p].clause <= node.clause:
            return Violation(i, "weakening", "parent clause is not a subclause")
        return None
    if rule[0] == "r":
        _, p1, p2, pivot = rule
        if p1 >= i or p2 >= i:
            return Violation(i, "order", "parent does not precede node")
        c1, c2 = pi.nodes[p1].clause, pi.nodes[p2].clause
        if pivot in c1 and -pivot in c2:
            pos, neg_ = c1, c2
        elif pivot in c2 and -pivot in c1:
            pos, neg_ = c2, c1
        else:
            return Violation(i, "pivot", f"variable {pivot} does not occur with both signs in the parents")
        for l in pos:
            if abs(l) != pivot and -l in neg_:
                return Violation(i, "conflict", f"parents also conflict on variable {abs(l)}")
        expected = frozenset(l for l in c1 if abs(l) != pivot) | frozenset(
            l for l in c2 if abs(l) != pivot
        )
        if node.clause != expected:
            return Violation(i, "resolvent", "clause differs from the resolvent of its parents")
        return None
    return Violation(i, "rule", f"unknown rule {rule[0]!r}")


def check_resolution(pi: ResolutionProof, tau: Cnf) -> CheckReport:
    """Verify local rules, axiom membership and topological order."""
    for i, node in enumerate(pi.nodes):
        if node.kind == "a" and node.clause not in tau.clauses:
            return CheckReport.failed(i, "axiom", "axiom clause not in the formula")
        if node.kind == "w" and not pi.allow_weakening:
            return CheckReport.failed(i, "weakening-off", "weakening used but not allowed")
        v = _check_resolution_node(pi, i)
        if v is not None:
            return CheckReport(False, [v], {})
    return CheckReport.passed(size=pi.size(), width=pi.width())


def check_ordered(pi: ResolutionProof, order: VarOrder) -> CheckReport:
    """Every resolution step has all resolvent literals below its pivot."""
    for i, node in enumerate(pi.nodes):
        if node.kind != "r":
            continue
        pivot = node.rule[3]
        pr = order.rank(pivot)
        for l in node.clause:
            if order.rank(abs(l)) >= pr:
                return CheckReport.failed(i, "ordered", f"literal {l} not below pivot {pivot}")
    return CheckReport.passed(size=pi.size(), width=pi.width())


def check_half_ordered(pi: ResolutionProof, order: VarOrder) -> CheckReport:
    """Every resolution step has one premise whose non-pivot literals all
    rank below the pivot."""
    for i, node in enumerate(pi.nodes):
        if node.kind != "r":
            continue
        _, p1, p2, pivot = node.rule
        pr = order.rank(pivot)
        ok = False
        for p in (p1, p2):
            side = pi.nodes[p].clause
            if all(order.rank(abs(l)) < pr for l in side if abs(l) != pivot):
                ok = True
                break
        if not ok:
            return CheckReport.failed(i, "half-ordered", f"no small premise for pivot {pivot}")
    return CheckReport.passed(size=pi.size(), width=pi.width())


def ordered_up_to(pi: ResolutionProof, order: VarOrder, k: int) -> bool:
    """Audit: a resolution on a variable ranked <= k has every resolution
    above it on a strictly smaller rank."""
    n = len(pi.nodes)
    max_above = [0] * n  # max pivot rank among strict descendants
    ch = pi.children()
    for i in range(n - 1, -1, -1):
        m = 0
        for c in ch[i]:
            r = order.rank(pi.nodes[c].rule[3]) if pi.nodes[c].kind == "r" else 0
            m = max(m, r, max_above[c])
        max_above[i] = m
    for i, node in enumerate(pi.nodes):
        if node.kind != "r":
            continue
        pr = order.rank(node.rule[3])
        if pr <= k and max_above[i] >= pr:
            return False
    return True


# ---------------------------------------------------------------------------
# Closures and structural predicates


def ucl(pi: ResolutionProof, s: Iterable[int]) -> frozenset:
    """Upward closure: the given nodes and everything above them."""
    ch = pi.children()
    out = set(s)
    stack = list(out)
    while stack:
        v = stack.pop()
        for c in ch[v]:
            if c not in out:
                out.add(c)
                stack.append(c)
    return frozenset(out)


def dcl(pi: ResolutionProof, s: Iterable[int]) -> frozenset:
    """Downward closure: the given nodes and everything below them."""
    out = set(s)
    stack = list(out)
    while stack:
        v = stack.pop()
        for p in pi.nodes[v].parents():
            if p not in out:
                out.add(p)
                stack.append(p)
    return frozenset(out)


def is_parent_complete(pi: ResolutionProof, s: Iterable[int]) -> bool:
    ss = set(s)
    for v in ss:
        node = pi.nodes[v]
        if node.kind == "r":
            p1, p2 = node.rule[1], node.rule[2]
            if (p1 in ss) != (p2 in ss):
                return False
    return True


def is_path_complete(pi: ResolutionProof, s: Iterable[int]) -> bool:
    ss = set(s)
    up = ucl(pi, ss)
    down = dcl(pi, ss)
    for v in range(len(pi.nodes)):
        if v not in ss and v in up and v in down:
            return False
    return True


def min_nodes(pi: ResolutionProof, s: Iterable[int]) -> frozenset:
    ss = set(s)
    has_below = [False] * len(pi.nodes)
    for i in range(len(pi.nodes)):
        for p in pi.nodes[i].parents():
            if p in ss or has_below[p]:
                has_below[i] = True
    return frozenset(v for v in ss if not has_below[v])


def max_nodes(pi: ResolutionProof, s: Iterable[int]) -> frozenset:
    ss = set(s)
    ch = pi.children()
    has_above = [False] * len(pi.nodes)
    for i in range(len(pi.nodes) - 1, -1, -1):
        for c in ch[i]:
            if c in ss or has_above[c]:
                has_above[i] = True
    return frozenset(v for v in ss if not has_above[v])


def subproof_on(pi: ResolutionProof, s: Iterable[int]) -> tuple:
    """The induced subproof on a parent- and path-complete node set.

    Minimal nodes become axioms of the subproof.  Returns (proof, node_map)
    where node_map maps original indices to subproof indices.
    """
    ss = sorted(set(s))
    sset = set(ss)
    if not is_parent_complete(pi, sset) or not is_path_complete(pi, sset):
        raise ValueError("node set is not parent- and path-complete")
    mins = min_nodes(pi, sset)
    node_map = {}
    nodes = []
    for v in ss:
        node = pi.nodes[v]
        if v in mins:
            nodes.append(ProofNode(node.clause, ("a",)))
        elif node.kind == "r":
            nodes.append(
                ProofNode(node.clause, ("r", node_map[node.rule[1]], node_map[node.rule[2]], node.rule[3]))
            )
        elif node.kind == "w":
            nodes.append(ProofNode(node.clause, ("w", node_map[node.rule[1]])))
        else:
            nodes.append(node)
        node_map[v] = len(nodes) - 1
    return ResolutionProof(tuple(nodes), pi.allow_weakening), node_map


def connected_core(pi: ResolutionProof) -> tuple:
    """The subproof below the first empty-clause node.

    Returns (proof, node_map); node_map covers only surviving nodes.  The
    result has a unique sink labelled by the empty clause.
    """
    root = pi.first_empty()
    if root is None:
        raise ValueError("proof contains no empty clause")
    keep = dcl(pi, [root])
    nodes = []
    node_map = {}
    for v in sorted(keep):
        node = pi.nodes[v]
        if node.kind == "r":
            rule = ("r", node_map[node.rule[1]], node_map[node.rule[2]], node.rule[3])
        elif node.kind == "w":
            rule = ("w", node_map[node.rule[1]])
        else:
            rule = ("a",)
        nodes.append(ProofNode(node.clause, rule))
        node_map[v] = len(nodes) - 1
    return ResolutionProof(tuple(nodes), pi.allow_weakening), node_map


def is_connected(pi: ResolutionProof) -> bool:
    return len(pi.sinks()) == 1


# ---------------------------------------------------------------------------
# Restriction


SAT = None  # marker for satisfied nodes in restriction maps


def restrict_proof(pi: ResolutionProof, rho: Restriction) -> tuple:
    """Restrict a proof by a partial assignment.

    Satisfied clauses are pruned; a resolution whose pivot was assigned (or
    whose pivot literal disappeared upstream) contracts to the surviving
    premise.  The result is pruned to the ancestors of the surviving images
    of the original sinks.  Returns (proof, node_map, origins): node_map
    takes an original node to its image index or None when satisfied or
    pruned; origins maps each kept node back to the original node it was
    created at.
    """
    n = len(pi.nodes)
    entry_of: dict = {}  # original index -> provisional entry index, or None
    entries: list = []  # (clause, rule-in-entry-space, origin)

    def new_entry(cl, rule, origin):
        entries.append((cl, rule, origin))
        return len(entries) - 1

    for i, node in enumerate(pi.nodes):
        if node.kind == "a":
            rc = restrict_clause(node.clause, rho)
            entry_of[i] = None if rc is None else new_entry(rc, ("a",), i)
            continue
        if node.kind == "w":
            p = node.rule[1]
            pe = entry_of[p]
            rc = restrict_clause(node.clause, rho)
            if rc is None:
                entry_of[i] = None
                continue
            if pe is None:
                # parent satisfied implies child satisfied; cannot happen
                raise AssertionError("weakening child survived a satisfied parent")
            entry_of[i] = new_entry(rc, ("w", pe), i)
            continue
        _, p1, p2, pivot = node.rule
        if restrict_clause(node.clause, rho) is None:
            entry_of[i] = None  # resolvent satisfied
            continue
        e1, e2 = entry_of[p1], entry_of[p2]
        if e1 is None and e2 is None:
            raise AssertionError("both premises satisfied but resolvent is not")
        if e1 is None or e2 is None:
            # the satisfied side was satisfied through its pivot literal
            # (its remainder is part of the unsatisfied resolvent), so the
            # sibling lost its pivot literal; contract to the sibling
            entry_of[i] = e2 if e1 is None else e1
            continue
        c1 = entries[e1][0]
        c2 = entries[e2][0]
        l1 = pivot if pivot in pi.nodes[p1].clause else -pivot
        l2 = -l1
        if l1 not in c1:
            entry_of[i] = e1
        elif l2 not in c2:
            entry_of[i] = e2
        else:
            rc = frozenset(l for l in c1 if abs(l) != pivot) | frozenset(
                l for l in c2 if abs(l) != pivot
            )
            entry_of[i] = new_entry(rc, ("r", e1, e2, pivot), i)

    # prune to ancestors of surviving sink images
    sink_entries = {entry_of[s] for s in pi.sinks() if entry_of[s] is not None}
    keep = set()
    stack = list(sink_entries)
    while stack:
        e = stack.pop()
        if e in keep:
            continue
        keep.add(e)
        rule = entries[e][1]
        if rule[0] == "r":
            stack.extend([rule[1], rule[2]])
        elif rule[0] == "w":
            stack.append(rule[1])
    remap = {}
    nodes = []
    origins = []
    for e in sorted(keep):
        cl, rule, origin = entries[e]
        if rule[0] == "r":
            rule = ("r", remap[rule[1]], remap[rule[2]], rule[3])
        elif rule[0] == "w":
            rule = ("w", remap[rule[1]])
        nodes.append(ProofNode(cl, rule))
        origins.append(origin)
        remap[e] = len(nodes) - 1
    node_map = [
        (remap.get(entry_of[i]) if entry_of[i] is not None and entry_of[i] in remap else None)
        for i in range(n)
    ]
    return ResolutionProof(tuple(nodes), pi.allow_weakening), node_map, origins


# ---------------------------------------------------------------------------
# Weakening contraction


def contract_weakenings(pi: ResolutionProof) -> tuple:
    """Remove weakening steps, keeping subclause conclusions.

    Returns (proof, repr_map) where repr_map maps each node of the output to
    the node of the input it stands for (the clause there is a superset).
    """
    entry_of = [None] * len(pi.nodes)  # original index -> output index
    nodes: list = []
    reps: list = []

    def push(cl, rule, origin):
        nodes.append(ProofNode(cl, rule))
        reps.append(origin)
        return len(nodes) - 1

    for i, node in enumerate(pi.nodes):
        if node.kind == "a":
            entry_of[i] = push(node.clause, ("a",), i)
        elif node.kind == "w":
            entry_of[i] = entry_of[node.rule[1]]
        else:
            _, p1, p2, pivot = node.rule
            e1, e2 = entry_of[p1], entry_of[p2]
            c1, c2 = nodes[e1].clause, nodes[e2].clause
            l1 = pivot if pivot in pi.nodes[p1].clause else -pivot
            l2 = -l1
            if l1 not in c1:
                entry_of[i] = e1
            elif l2 not in c2:
                entry_of[i] = e2
            else:
                rc = frozenset(l for l in c1 if abs(l) != pivot) | frozenset(
                    l for l in c2 if abs(l) != pivot
                )
                entry_of[i] = push(rc, ("r", e1, e2, pivot), i)

    # prune to ancestors of the images of the original sinks
    keep = set()
    stack = [entry_of[s] for s in pi.sinks()]
    while stack:
        e = stack.pop()
        if e in keep:
            continue
        keep.add(e)
        r = nodes[e].rule
        if r[0] == "r":
            stack.extend([r[1], r[2]])
    remap = {}
    out_nodes = []
    out_reps = []
    for e in sorted(keep):
        node = nodes[e]
        rule = node.rule
        if rule[0] == "r":
            rule = ("r", remap[rule[1]], remap[rule[2]], rule[3])
        out_nodes.append(ProofNode(node.clause, rule))
        out_reps.append(reps[e])
        remap[e] = len(out_nodes) - 1
    return ResolutionProof(tuple(out_nodes), allow_weakening=False), out_reps


# ---------------------------------------------------------------------------
# Rename helpers (used by transforms to reduce a general order to identity)


def rename_clause(c: Clause, mapping: dict) -> Clause:
    return frozenset((1 if l > 0 else -1) * mapping[abs(l)] for l in c)


def rename_proof(pi: ResolutionProof, mapping: dict) -> ResolutionProof:
    nodes = []
    for node in pi.nodes:
        rule = node.rule
        if rule[0] == "r":
            rule = ("r", rule[1], rule[2], mapping[rule[3]])
        nodes.append(ProofNode(rename_clause(node.clause, mapping), rule))
    return ResolutionProof(tuple(nodes), pi.allow_weakening)


def rename_cnf(tau: Cnf, mapping: dict, num_vars: int) -> Cnf:
    return Cnf(frozenset(rename_clause(c, mapping) for c in tau.clauses), num_vars)


# ---------------------------------------------------------------------------
# File format and DOT export


def write_proof(pi: ResolutionProof, num_vars: int) -> str:
    lines = [f"p res {num_vars}"]
    for i, node in enumerate(pi.nodes, start=1):
        body = format_clause(node.clause)
        if node.kind == "a":
            lines.append(f"a {i} {body}")
        elif node.kind == "r":
            _, p1, p2, pivot = node.rule
            lines.append(f"r {i} {p1 + 1} {p2 + 1} {pivot} {body}")
        else:
            lines.append(f"w {i} {node.rule[1] + 1} {body}")
    return "\n".join(lines) + "\n"


def read_proof(text: str) -> tuple:
    """Parse the proof format; returns (ResolutionProof, num_vars)."""
    num_vars = None
    nodes = []
    ids = {}
    allow_weakening = False
    last_id = 0
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if len(parts) != 3 or parts[1] != "res":
                raise ValueError(f"bad header: {line!r}")
            num_vars = int(parts[2])
            continue
        kind = parts[0]
        ident = int(parts[1])
        if ident <= last_id:
            raise ValueError(f"ids must be strictly increasing at {line!r}")
        last_id = ident
        if parts[-1] != "0":
            raise ValueError(f"missing clause terminator in {line!r}")
        if kind == "a":
            lits = [int(t) for t in parts[2:-1]]
            nodes.append(ProofNode(frozenset(lits), ("a",)))
        elif kind == "r":
            p1, p2, pivot = int(parts[2]), int(parts[3]), int(parts[4])
            lits = [int(t) for t in parts[5:-1]]
            nodes.append(ProofNode(frozenset(lits), ("r", ids[p1], ids[p2], pivot)))
        elif kind == "w":
            p = int(parts[2])
            lits = [int(t) for t in parts[3:-1]]
            nodes.append(ProofNode(frozenset(lits), ("w", ids[p])))
            allow_weakening = True
        else:
            raise ValueError(f"unknown line kind {kind!r}")
        ids[ident] = len(nodes) - 1
    if num_vars is None:
        raise ValueError("missing 'p res n' header")
    return ResolutionProof(tuple(nodes), allow_weakening), num_vars


def to_dot(pi: ResolutionProof) -> str:
    lines = ["digraph proof {", "  rankdir=BT;"]
    for i, node in enumerate(pi.nodes):
        label = " ".join(str(l) for l in clause_key(node.clause)) or "0"
        shape = "box" if node.kind == "a" else "ellipse"
        lines.append(f'  n{i} [label="{label}", shape={shape}];')
        for p in node.parents():
            lines.append(f"  n{p} -> n{i};")
    lines.append("}")
    return "\n".join(lines) + "\n"
