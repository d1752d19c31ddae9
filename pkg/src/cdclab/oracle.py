"""Brute-force ground truth: a saturation resolution prover and a DPLL
satisfiability decider.

Deliberately implementation-naive (no subsumption, duplicate removal only)
so it stays auditable; intended for desk-scale inputs.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

from .cnf import Clause, Cnf, VarOrder, clause_key, sign_of
from .resproof import ProofNode, ResolutionProof


@dataclass(frozen=True)
class OracleBudget:
    max_clauses: int = 40000
    max_width: Optional[int] = None
    max_seconds: float = 60.0

    def __post_init__(self):
        if self.max_clauses <= 0 or self.max_seconds <= 0:
            raise ValueError("budget fields must be positive")
        if self.max_width is not None and self.max_width <= 0:
            raise ValueError("budget fields must be positive")


def resolvable(c: Clause, d: Clause) -> Optional[int]:
    """The unique conflicting variable of two clauses, or None."""
    conflicts = [abs(l) for l in c if -l in d]
    if len(conflicts) == 1:
        return conflicts[0]
    return None


def resolve(c: Clause, d: Clause, pivot: int) -> Clause:
    return frozenset(l for l in c if abs(l) != pivot) | frozenset(
        l for l in d if abs(l) != pivot
    )


@dataclass
class SaturateResult:
    status: str  # "refuted" | "saturated" | "budget"
    proof: Optional[ResolutionProof]
    derived: int


def saturate(tau: Cnf, budget: OracleBudget = OracleBudget()) -> SaturateResult:
    """Breadth-first resolution closure with parent bookkeeping.

    On deriving the empty clause, extracts the refutation DAG (each clause
    kept with its first derivation).  "saturated" without the empty clause
    means the closure is complete, which certifies satisfiability when no
    width cap was in force.
    """
    t0 = time.monotonic()
    known: dict = {}  # clause -> ('a',) | ('r', c1, c2, pivot)
    for c in tau.sorted_clauses():
        known[c] = ("a",)
    if frozenset() in known:
        return SaturateResult("refuted", _extract(frozenset(), known, tau), 0)

    frontier = list(known)
    derived = 0
    while frontier:
        if time.monotonic() - t0 > budget.max_seconds:
            return SaturateResult("budget", None, derived)
        new_clauses = []
        all_clauses = list(known)
        for c in frontier:
            for d in all_clauses:
                pivot = resolvable(c, d)
                if pivot is None:
                    continue
                r = resolve(c, d, pivot)
                if r in known:
                    continue
                if budget.max_width is not None and len(r) > budget.max_width:
                    continue
                known[r] = ("r", c, d, pivot)
                new_clauses.append(r)
                derived += 1
                if not r:
                    return SaturateResult("refuted", _extract(r, known, tau), derived)
                if len(known) > budget.max_clauses:
                    return SaturateResult("budget", None, derived)
        frontier = new_clauses
    return SaturateResult("saturated", None, derived)


def _extract(goal: Clause, known: dict, tau: Cnf) -> ResolutionProof:
    """Walk the parent bookkeeping back from the goal clause."""
    order = []
    seen = set()

    def visit(c):
        if c in seen:
            return
        how = known[c]
        if how[0] == "r":
            visit(how[1])
            visit(how[2])
        seen.add(c)
        order.append(c)

    visit(goal)
    index = {}
    nodes = []
    for c in order:
        how = known[c]
        if how[0] == "a":
            nodes.append(ProofNode(c, ("a",)))
        else:
            nodes.append(ProofNode(c, ("r", index[how[1]], index[how[2]], how[3])))
        index[c] = len(nodes) - 1
    return ResolutionProof(tuple(nodes))


def dpll_sat(tau: Cnf) -> bool:
    """Exact satisfiability by unit propagation plus splitting."""
    return _dpll(frozenset(tau.clauses))


def _dpll(clauses: frozenset) -> bool:
    clauses = set(clauses)
    # unit propagation
    while True:
        if frozenset() in clauses:
            return False
        units = [next(iter(c)) for c in clauses if len(c) == 1]
        if not units:
            break
        l = units[0]
        nxt = set()
        for c in clauses:
            if l in c:
                continue
            if -l in c:
                nxt.add(c - {-l})
            else:
                nxt.add(c)
        clauses = nxt
    if not clauses:
        return True
    v = min(abs(l) for c in clauses for l in c)
    for val in (1, -1):
        l = val * v
        branch = set()
        ok = True
        for c in clauses:
            if l in c:
                continue
            nc = c - {-l}
            if not nc:
                ok = False
                break
            branch.add(nc)
        if ok and _dpll(frozenset(branch)):
            return True
    return False


def min_ordered_width(tau: Cnf, order: VarOrder, budget: OracleBudget = OracleBudget()) -> Optional[int]:
    """Minimum width of an order-respecting refutation, by width-layered
    saturation; None when the budget runs out undecided.

    An ordered step requires every literal of the resolvent to rank below
    the pivot.  Tiny instances only.
    """
    t0 = time.monotonic()
    if frozenset() in tau.clauses:
        return 0
    base_width = max((len(c) for c in tau.clauses), default=0)
    for w in range(1, tau.num_vars + base_width + 1):
        known = {c for c in tau.clauses if len(c) <= w}
        frontier = list(known)
        while frontier:
            if time.monotonic() - t0 > budget.max_seconds or len(known) > budget.max_clauses:
                return None
            new_clauses = []
            all_clauses = list(known)
            for c in frontier:
                for d in all_clauses:
                    pivot = resolvable(c, d)
                    if pivot is None:
                        continue
                    r = resolve(c, d, pivot)
                    if len(r) > w or r in known:
                        continue
                    if any(order.rank(abs(l)) >= order.rank(pivot) for l in r):
                        continue  # not an ordered step
                    known.add(r)
                    if not r:
                        return w
                    new_clauses.append(r)
            frontier = new_clauses
        # a wider layer may admit wider axioms or wider intermediates
    return None
