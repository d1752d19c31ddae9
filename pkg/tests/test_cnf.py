import itertools
import random

import pytest

from cdclab.cnf import (
    Cnf,
    Restriction,
    VarOrder,
    XorMap,
    clause,
    enumerate_pointed_graphs,
    gen_induction,
    gen_pointed_graph,
    gen_stone,
    is_almost_k_small,
    is_column_parallel,
    is_k_small,
    is_row_parallel,
    order_row_then_column,
    order_stone,
    read_dimacs,
    read_graph,
    read_order,
    restrict_cnf,
    stone_clause_count,
    write_dimacs,
    write_graph,
    write_order,
    xor_substitute,
)
from cdclab.oracle import dpll_sat


def C(*lits):
    return clause(lits)


def test_clause_rejects_tautology():
    with pytest.raises(ValueError):
        clause([1, -1])


def test_restrict_cnf_basic():
    # x2=0 falsifies the literal x2 and satisfies the clause {-2}
    tau = Cnf.of([[1, 2], [-2]])
    out = restrict_cnf(tau, Restriction.of({2: 0}))
    assert out.clauses == frozenset({C(1)})
    # x2=1 satisfies the first clause and fully falsifies the second
    out = restrict_cnf(tau, Restriction.of({2: 1}))
    assert out.clauses == frozenset({frozenset()})


def test_restrict_cnf_empty_restriction_is_identity():
    tau = Cnf.of([[1, 2]])
    assert restrict_cnf(tau, Restriction.of({})) == tau


def test_restrict_cnf_keeps_empty_clause():
    # {x1, -x1 v x2, -x2} under x1=0: middle clause satisfied, x1 falsified
    tau = Cnf.of([[1], [-1, 2], [-2]])
    out = restrict_cnf(tau, Restriction.of({1: 0}))
    assert out.clauses == frozenset({frozenset(), C(-2)})


def test_restrict_cnf_idempotent_and_commutes():
    rng = random.Random(7)
    for _ in range(50):
        n = rng.randint(2, 6)
        cls = [
            [rng.choice([-1, 1]) * rng.randint(1, n) for _ in range(rng.randint(1, 3))]
            for _ in range(rng.randint(1, 8))
        ]
        try:
            tau = Cnf.of([list(set(c)) for c in cls], n)
        except ValueError:
            continue
        vs = rng.sample(range(1, n + 1), min(n, 3))
        rho1 = Restriction.of({vs[0]: rng.randint(0, 1)})
        rest = {v: rng.randint(0, 1) for v in vs[1:]}
        rho2 = Restriction.of(rest)
        combined = Restriction.of({**rho1.as_dict(), **rest})
        assert restrict_cnf(restrict_cnf(tau, rho1), rho1) == restrict_cnf(tau, rho1)
        assert restrict_cnf(restrict_cnf(tau, rho1), rho2) == restrict_cnf(tau, combined)
        assert restrict_cnf(restrict_cnf(tau, rho2), rho1) == restrict_cnf(tau, combined)


def test_gen_induction_shape():
    tau = gen_induction(3)
    assert tau.clauses == frozenset({C(1), C(-1, 2), C(-2, 3), C(-3)})
    assert len(gen_induction(1)) == 2
    for n in range(1, 9):
        assert len(gen_induction(n)) == n + 1


def test_gen_induction_rejects_zero():
    with pytest.raises(ValueError):
        gen_induction(0)


def test_gen_induction_minimally_unsatisfiable():
    for n in range(1, 9):
        tau = gen_induction(n)
        assert not dpll_sat(tau)
        for c in tau.sorted_clauses():
            weaker = Cnf(tau.clauses - {c}, tau.num_vars)
            assert dpll_sat(weaker), f"dropping {sorted(c)} should give a satisfiable CNF"


def _models(num_vars):
    return itertools.product((0, 1), repeat=num_vars)


def _eval_cnf(tau, model):
    return all(any(model[abs(l) - 1] == (1 if l > 0 else 0) for l in c) for c in tau.clauses)


def _eval_xor_formula(tau, xmap, ymodel):
    # truth of the original CNF under the parity interpretation
    xvals = []
    for i in range(1, xmap.n + 1):
        xvals.append(sum(ymodel[xmap.var(i, j) - 1] for j in range(1, xmap.r + 1)) % 2)
    return _eval_cnf(tau, xvals)


def test_xor_substitute_counts_and_semantics():
    tau = gen_induction(3)
    sub, xmap = xor_substitute(tau, 2)
    assert sub.num_vars == 6
    assert len(sub) == 12  # 2^{2(m-1)}(n-1) + 2^m at m=2, n=3
    # semantics agree model-by-model (brute force oracle)
    for model in _models(6):
        assert _eval_cnf(sub, model) == _eval_xor_formula(tau, xmap, model)


def test_xor_substitute_identity_arity():
    tau = gen_induction(4)
    sub, _ = xor_substitute(tau, 1)
    assert len(sub) == len(tau)
    assert sub.num_vars == 4


def test_xor_substitute_single_positive_unit():
    sub, xmap = xor_substitute(Cnf.of([[1]]), 2)
    assert sub.clauses == frozenset({C(1, 2), C(-1, -2)})


def test_xor_substitute_clause_count_formula():
    for n in range(1, 5):
        for m in (2, 3):
            sub, _ = xor_substitute(gen_induction(n), m)
            expected = (2 ** (2 * (m - 1))) * (n - 1) + 2 ** m
            assert len(sub) == expected


def test_xor_substitute_contradictory_iff_base_is():
    rng = random.Random(3)
    for _ in range(20):
        n = rng.randint(1, 3)
        cls = []
        for _ in range(rng.randint(1, 5)):
            width = rng.randint(1, n)
            vs = rng.sample(range(1, n + 1), width)
            cls.append([v * rng.choice([-1, 1]) for v in vs])
        tau = Cnf.of(cls, n)
        for r in (2, 3):
            if n * r > 12:
                continue
            sub, _ = xor_substitute(tau, r)
            assert dpll_sat(sub) == dpll_sat(tau)


def test_order_row_then_column():
    order = order_row_then_column(2, 2)
    xmap = XorMap(2, 2)
    ranked = order.vars_by_rank()
    assert ranked == [xmap.var(1, 1), xmap.var(2, 1), xmap.var(1, 2), xmap.var(2, 2)]
    assert order_row_then_column(5, 1).ranks == VarOrder.identity(5).ranks


def test_order_row_then_column_is_parallel():
    for n in range(1, 7):
        for r in range(1, 7):
            if n * r > 24:
                continue
            order = order_row_then_column(n, r)
            xmap = XorMap(n, r)
            assert is_row_parallel(order, xmap)
            assert is_column_parallel(order, xmap)


def test_row_parallel_counterexample():
    # y11 < y12 < y21 < y22 fails row-parallelism at (i=2, j=1, u=1, v=2)
    xmap = XorMap(2, 2)
    order = VarOrder.from_ranked_vars(
        [xmap.var(1, 1), xmap.var(1, 2), xmap.var(2, 1), xmap.var(2, 2)]
    )
    assert not is_row_parallel(order, xmap)
    assert is_column_parallel(order, xmap)


def test_single_row_parallel_iff_columns_ascending():
    xmap = XorMap(1, 3)
    asc = VarOrder.from_ranked_vars([1, 2, 3])
    desc = VarOrder.from_ranked_vars([3, 2, 1])
    assert is_row_parallel(asc, xmap)
    assert not is_row_parallel(desc, xmap)


def test_k_small_predicates():
    order = VarOrder.identity(4)
    assert is_k_small(C(1, 2), order, 2)
    assert not is_k_small(C(1, 3), order, 2)
    assert is_almost_k_small(C(1, 3), order, 2)
    assert not is_k_small(C(3, 4), order, 2)
    assert not is_almost_k_small(C(3, 4), order, 2)


def test_gen_pointed_graph_smallest_and_deterministic():
    g = gen_pointed_graph(3, seed=11)
    assert g.sources() == [1, 2]
    assert g.parents(3) == (1, 2)
    for seed in range(5):
        assert gen_pointed_graph(6, seed) == gen_pointed_graph(6, seed)
    with pytest.raises(ValueError):
        gen_pointed_graph(2, 0)


def test_gen_pointed_graph_invariants():
    for seed in range(10):
        g = gen_pointed_graph(5, seed)  # constructor validates the invariants
        assert g.sink == 5


def test_enumerate_pointed_graphs_counts():
    assert len(enumerate_pointed_graphs(3)) == 1
    assert len(enumerate_pointed_graphs(4)) == 2
    assert len(enumerate_pointed_graphs(5)) == 11


def test_gen_stone_counts():
    g = enumerate_pointed_graphs(3)[0]
    tau, smap = gen_stone(g, 3)
    # four groups: 3 + 2*3 + 3 + (3^3 - 2*9 + 3) = 24 once tautologies and
    # duplicate-merging are accounted for
    assert len(tau) == stone_clause_count(g, 3)
    assert tau.num_vars == 12
    # group 1 shape
    assert clause([smap.p(1, 1), smap.p(1, 2), smap.p(1, 3)]) in tau.clauses
    # group 4 shape for distinct stones
    assert clause(
        [-smap.p(1, 1), -smap.r(1), -smap.p(2, 2), -smap.r(2), -smap.p(3, 3), smap.r(3)]
    ) in tau.clauses
    with pytest.raises(ValueError):
        gen_stone(g, 2)


def test_gen_stone_unsatisfiable_small():
    g = enumerate_pointed_graphs(3)[0]
    tau, _ = gen_stone(g, 3)
    assert not dpll_sat(tau)


def test_order_stone_layout():
    g = enumerate_pointed_graphs(3)[0]
    order = order_stone(g, 3)
    smap_vars = order.vars_by_rank()
    from cdclab.cnf import StoneMap

    smap = StoneMap(3, 3)
    expected = [smap.p(3, 1), smap.p(3, 2), smap.p(3, 3),
                smap.p(2, 1), smap.p(2, 2), smap.p(2, 3),
                smap.p(1, 1), smap.p(1, 2), smap.p(1, 3),
                smap.r(1), smap.r(2), smap.r(3)]
    assert smap_vars == expected
    assert order.n == 3 * 3 + 3


def test_dimacs_roundtrip():
    tau = gen_induction(4)
    text = write_dimacs(tau, comments=["generated chain"])
    back, comments = read_dimacs(text)
    assert back == tau
    assert comments == ["generated chain"]


def test_order_file_roundtrip():
    order = order_row_then_column(3, 2)
    back = read_order(write_order(order))
    assert back == order
    assert read_order("identity", num_vars=4) == VarOrder.identity(4)
    assert read_order("p order 4\nidentity") == VarOrder.identity(4)


def test_graph_file_roundtrip():
    g = gen_pointed_graph(6, 2)
    assert read_graph(write_graph(g)) == g
