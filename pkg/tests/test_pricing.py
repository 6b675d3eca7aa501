import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from graphgen.column import big_m, make_route, reduced_cost
from graphgen.instance import CvrpInstance, generate
from graphgen.pricing import (END, START, EdgeReducedCosts, brute_force_price, completion_bound,
                              count_routes, enumerate_routes, price, price_many)
from oracles import enumerate_sequences, random_duals, random_instance


def test_zero_duals_give_empty_route():
    inst = generate(3, n=8, k=3, d0=3)
    route, value = price(inst, np.zeros(9))
    assert route.sequence == () and value == 0.0


def test_single_customer():
    inst = CvrpInstance([(3, 4)], [1], (0, 0), 1, 1)
    route, value = price(inst, np.array([25.0, 0.0]))
    assert route.sequence == (0,)
    assert value == pytest.approx(5 + 5 - 25)


def test_no_customers():
    inst = CvrpInstance([], [], (0, 0), 1, 1)
    assert brute_force_price(inst, np.zeros(1)) == (make_route((), inst), 0.0)
    route, value = price(inst, np.zeros(1))
    assert route.sequence == () and value == 0.0


def test_symmetric_tie_takes_smallest_sequence():
    # mirror-image customers with equal duals: [0] ties [1], [0,1] ties [1,0]
    inst = CvrpInstance([(3, 4), (-3, 4)], [1, 1], (0, 0), 2, 2)
    for pi in ([12.0, 12.0, 0.0], [20.0, 20.0, 0.0]):
        route, value = price(inst, np.array(pi))
        ref_route, ref_value = brute_force_price(inst, np.array(pi))
        assert value == pytest.approx(ref_value, abs=1e-9)
        assert route.sequence == ref_route.sequence
        assert route.sequence[0] == 0


def test_matches_brute_force_n8_d3():
    inst = generate(5, n=8, k=3, d0=3)
    rng = np.random.default_rng(0)
    for _ in range(10):
        duals = random_duals(rng, inst)
        assert price(inst, duals)[1] == pytest.approx(brute_force_price(inst, duals)[1], abs=1e-9)


def test_random_pairs_match_brute_force():
    rng = np.random.default_rng(1234)
    for trial in range(100):
        n = int(rng.integers(1, 11))
        d0 = int(rng.integers(1, 5))
        inst = random_instance(rng, n, d0, max_demand=2 if trial % 3 == 0 and d0 > 1 else 1)
        duals = random_duals(rng, inst)
        route, value = price(inst, duals)
        ref_route, ref_value = brute_force_price(inst, duals)
        assert value == pytest.approx(ref_value, abs=1e-9)
        assert value == pytest.approx(reduced_cost(route, duals), abs=1e-9)
        assert route.total_demand <= inst.capacity
        assert route.sequence == ref_route.sequence


def test_large_duals_match_brute_force():
    # duals of big-M size, as in the first iterations of column generation
    rng = np.random.default_rng(77)
    for seed in range(8):
        inst = generate(seed, n=12, k=3, d0=4)
        duals = rng.uniform(0, big_m(inst), size=inst.n + 1)
        duals[-1] = 0.0
        assert price(inst, duals)[1] == pytest.approx(brute_force_price(inst, duals)[1], rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_dominance_and_pruning_never_change_value(seed):
    rng = np.random.default_rng(seed)
    inst = random_instance(rng, int(rng.integers(1, 8)), int(rng.integers(1, 4)))
    duals = random_duals(rng, inst)
    full = price(inst, duals)[1]
    assert price(inst, duals, dominance=False)[1] == pytest.approx(full, abs=1e-9)
    assert price(inst, duals, prune=False)[1] == pytest.approx(full, abs=1e-9)
    assert price(inst, duals, dominance=False, prune=False)[1] == pytest.approx(full, abs=1e-9)


def test_termination_signal():
    rng = np.random.default_rng(3)
    for seed in range(20):
        inst = generate(seed, n=7, k=2, d0=3, grid=20)
        duals = random_duals(rng, inst, scale=8.0)
        _, value = price(inst, duals)
        if value >= -1e-6:
            assert all(reduced_cost(make_route(s, inst), duals) >= -1e-6
                       for s in enumerate_routes(inst))


def test_price_many():
    inst = generate(2, n=9, k=3, d0=3)
    duals = random_duals(np.random.default_rng(4), inst)
    many = price_many(inst, duals, 5)
    assert many[0][1] == pytest.approx(price(inst, duals)[1])
    seqs = [r.sequence for r, _ in many]
    assert len(set(seqs)) == len(seqs) <= 5
    assert all(v < 0 and v == pytest.approx(reduced_cost(r, duals)) for r, v in many)
    assert price_many(inst, np.zeros(10), 3) == []


def test_edge_reduced_costs():
    inst = generate(4, n=5, k=2, d0=3)
    duals = np.arange(6, dtype=float)
    R = EdgeReducedCosts.build(inst, duals)
    D = inst.distances
    assert R.cost(1, 2) == D[1, 2] - duals[2]
    assert R.cost(START, 3) == D[5, 3] - duals[3]
    assert R.cost(4, END) == D[4, 5] + duals[5]
    triples = list(R.triples())
    assert all(R.is_valid(*t) for t in triples)
    assert len(triples) == len(set(triples)) == 5 + 5 * 3 + 20 * 2
    assert not R.is_valid(1, 1, 2)
    assert not R.is_valid(1, 2, 3)
    with pytest.raises(ValueError):
        EdgeReducedCosts.build(inst, np.zeros(3))


def test_completion_bound_is_a_lower_bound():
    rng = np.random.default_rng(8)
    for _ in range(10):
        inst = random_instance(rng, 6, 3)
        duals = random_duals(rng, inst)
        R = EdgeReducedCosts.build(inst, duals).matrix
        g = completion_bound(R, inst.demands, inst.capacity)
        n = inst.n
        for seq in enumerate_sequences(inst):
            # the completion after the first stop never beats the bound
            rem = inst.capacity - sum(inst.demands[u] for u in seq)
            stops = list(seq) + [n]
            tail = sum(R[a, b] for a, b in zip(stops[1:], stops[2:]))
            assert R[seq[0], stops[1]] + tail >= g[seq[0], inst.capacity - inst.demands[seq[0]]] - 1e-9
            assert rem >= 0


def test_enumeration_guard():
    inst = generate(0, n=30, k=5, d0=7)
    with pytest.raises(ValueError):
        brute_force_price(inst, np.zeros(31), limit=1000)
    assert count_routes(generate(0, n=3, k=1, d0=2)) == 1 + 3 + 6
