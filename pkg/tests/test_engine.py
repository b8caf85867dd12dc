import math
from collections import Counter

import numpy as np
import pytest
from scipy import stats

from conftest import complete_graph, path_graph
from uncover.engine import (StepPath, TimeAssignment, discrete_edge_samples, evaluate, realization_csv, run,
                            sample_uncover_times)
from uncover.errors import DimensionMismatch, OutOfDomain
from uncover.generators import ModelSpec, generate
from uncover.graph import Graph


def k3_run():
    return run(complete_graph(3), TimeAssignment.from_times([0.2, 0.5, 0.9]))


def test_k3_hand_trace():
    r = k3_run()
    assert r.L_dot.tolist() == [0, 0, 1, 3]
    assert r.K_dot.tolist() == [0, 1, 1, 1]
    assert r.assignment.tau[1] == 0.5
    assert [r.L(t) for t in (0.0, 0.49, 0.5, 0.89, 0.9, 1.0)] == [0, 0, 1, 1, 3, 3]
    assert r.N(0.6) == 2 and r.K(0.6) == 1


def test_step_path_right_continuous():
    p = StepPath(np.array([0.5, 0.9]), np.array([1, 3]), 0)
    assert p(0.5) == 1 and p(0.49) == 0 and p(1.0) == 3
    assert evaluate(p, np.array([0.0, 0.95])).tolist() == [0, 3]
    for bad in (-0.1, 1.1, float("nan")):
        with pytest.raises(OutOfDomain):
            p(bad)


def test_single_vertex():
    a = sample_uncover_times(1, 0)
    assert a.order.tolist() == [1] and a.tau[0] == a.times[0]
    r = run(Graph(1), a)
    assert r.L_dot.tolist() == [0, 0] and r.K_dot.tolist() == [0, 1]


def test_seeded_times_reproducible():
    a, b = sample_uncover_times(3, 42), sample_uncover_times(3, 42)
    assert np.array_equal(a.order, b.order) and np.array_equal(a.times, b.times)


def test_ties_broken_by_index():
    a = TimeAssignment.from_times([0.5, 0.2, 0.5, 0.2])
    assert a.order.tolist() == [2, 4, 1, 3]


def test_time_domain_checked():
    with pytest.raises(OutOfDomain):
        TimeAssignment.from_times([0.2, 1.5])


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        run(path_graph(4), sample_uncover_times(3, 0))


def test_k4_triangles():
    rng = np.random.default_rng(0)
    for _ in range(10):
        r = run(complete_graph(4), sample_uncover_times(4, rng), track_triangles=True)
        assert r.T_dot[3] == 1 and r.T(1.0) == 4 and r.T_dot.tolist() == [0, 0, 0, 1, 4]


def test_final_values_and_components():
    rng = np.random.default_rng(1)
    g = Graph(7, [(1, 2), (2, 3), (4, 5), (5, 6), (4, 6)])
    for _ in range(20):
        r = run(g, sample_uncover_times(7, rng))
        assert r.L_dot[-1] == g.m and r.K_dot[-1] == 3 and r.N(1.0) == 7 and r.L(1.0) == g.m


def test_coupling_and_forest_identity():
    rng = np.random.default_rng(2)
    g = generate(ModelSpec("labelled_tree", 200), rng)
    a = sample_uncover_times(200, rng)
    r = run(g, a)
    ks = np.arange(201)
    assert np.array_equal(r.K_dot, ks - r.L_dot)
    assert np.array_equal(r.L(a.tau), r.L_dot[1:])
    ts = rng.random(50)
    assert np.array_equal(r.K(ts), r.N(ts) - r.L(ts))


def test_jump_sizes_bounded_by_degree():
    rng = np.random.default_rng(3)
    g = generate(ModelSpec("gnp", 80, p=0.1), rng)
    r = run(g, sample_uncover_times(80, rng))
    jumps = np.diff(r.L_dot)
    assert (jumps >= 0).all() and jumps.max() <= g.degrees.max()
    later = g.degrees[r.assignment.order0]
    assert (jumps <= later).all()


def test_order_uniform_n5():
    rng = np.random.default_rng(4)
    orders = np.argsort(rng.random((100_000, 5)), axis=1, kind="stable")
    codes = Counter(map(bytes, orders.astype(np.int8)))
    assert len(codes) == 120
    assert stats.chisquare(list(codes.values())).pvalue > 1e-4


def test_discrete_samples_mean_small_graphs():
    rng = np.random.default_rng(5)
    for g in (path_graph(6), complete_graph(5), Graph(8, [(1, 2), (3, 4), (5, 6), (7, 8), (1, 8)])):
        x = discrete_edge_samples(g, 100_000, rng)
        n = g.n
        for k in range(n + 1):
            exact = g.m * k * (k - 1) / (n * (n - 1))
            se = x[:, k].std() / math.sqrt(len(x))
            assert abs(x[:, k].mean() - exact) <= 4 * se + 1e-12


def test_realization_csv():
    text = realization_csv(k3_run())
    lines = text.splitlines()
    assert lines[0] == "event_time,L,N,K,T"
    assert lines[1] == "0,0,0,0,"
    assert lines[2] == "0.20000000000000001,0,1,1,"
    assert lines[-1] == "0.90000000000000002,3,3,1,"


def test_coupling_at_end_of_tie_blocks():
    g = complete_graph(4)
    a = TimeAssignment.from_times([0.3, 0.3, 0.7, 0.3])
    r = run(g, a)
    # the path only sees the state after the whole block of equal times
    assert r.L(0.3) == r.L_dot[3] == 3
    assert r.L(0.7) == r.L_dot[4]
