"""Both kernel backends must agree exactly on identical inputs."""
import os
import subprocess
import sys

import numpy as np
import pytest

from uncover._kernels import _numba as nb
from uncover._kernels import _numpy as npk
from uncover.generators import ModelSpec, generate


def _graphs():
    rng = np.random.default_rng(0)
    return [generate(s, rng) for s in (
        ModelSpec("gnp", 30, p=0.3), ModelSpec("labelled_tree", 50), ModelSpec("complete_bipartite", 12),
        ModelSpec("gnm", 40, m=0), ModelSpec("cycle", 9), ModelSpec("gnp", 1, p=0.5))]


@pytest.mark.parametrize("graph", _graphs(), ids=lambda g: repr(g))
def test_process_kernels_agree(graph):
    rng = np.random.default_rng(1)
    for _ in range(5):
        order = rng.permutation(graph.n).astype(np.int64)
        for name in ("edge_counts", "component_counts", "triangle_counts"):
            a = getattr(nb, name)(graph.indptr, graph.indices, order)
            b = getattr(npk, name)(graph.indptr, graph.indices, order)
            assert np.array_equal(a, b), name
    orders = np.argsort(rng.random((7, graph.n)), axis=1).astype(np.int64)
    eu, ev = graph.edges[:, 0] - 1, graph.edges[:, 1] - 1
    assert np.array_equal(nb.edge_counts_batch(eu, ev, orders), npk.edge_counts_batch(eu, ev, orders))
    ta = nb.list_triangles(graph.indptr, graph.indices)
    tb = npk.list_triangles(graph.indptr, graph.indices)
    assert np.array_equal(ta, tb)


def test_tree_builders_agree():
    rng = np.random.default_rng(2)
    for n in (2, 3, 10, 200):
        seq = rng.integers(0, n, size=max(n - 2, 0)).astype(np.int64)
        assert np.array_equal(nb.prufer_decode(seq, n), npk.prufer_decode(seq, n))
        keys = rng.permutation(n).astype(np.int64)
        assert np.array_equal(nb.bst_edges(keys), npk.bst_edges(keys))
    from uncover.generators import gw_degree_sequence

    outdeg = gw_degree_sequence("geometric", 100, rng)
    assert np.array_equal(nb.dfs_tree_edges(outdeg), npk.dfs_tree_edges(outdeg))


def test_stub_match_agree():
    rng = np.random.default_rng(3)
    degrees = np.array([2] * 30, dtype=np.int64)
    stubs = np.repeat(np.arange(30, dtype=np.int64), degrees)
    hits = 0
    for _ in range(200):
        perm = rng.permutation(stubs)
        ok_a, ea = nb.stub_match(perm, degrees)
        ok_b, eb = npk.stub_match(perm, degrees)
        assert ok_a == ok_b
        if ok_a:
            hits += 1
            assert np.array_equal(ea, eb)
    assert hits > 0


def test_prufer_star_and_path():
    # constant sequence -> star centred there
    e = npk.prufer_decode(np.array([0, 0, 0], dtype=np.int64), 5)
    assert sorted(map(tuple, np.sort(e, axis=1).tolist())) == [(0, 1), (0, 2), (0, 3), (0, 4)]


def test_backend_flag_selects_numpy():
    code = "import uncover._kernels as k; print(k.BACKEND)"
    env = dict(os.environ, UNCOVER_BACKEND="numpy")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"


def test_ensemble_identical_across_backends():
    code = (
        "from uncover.ensemble import ExperimentSpec, run_ensemble;"
        "from uncover.generators import ModelSpec;"
        "s = ExperimentSpec(ModelSpec('config', 60, degrees=(2,)*60), 100, (0.3, 0.6), 'ComponentsContinuous', seed=4);"
        "print(run_ensemble(s, workers=1).to_json())"
    )
    outs = []
    for backend in ("numba", "numpy"):
        env = dict(os.environ, UNCOVER_BACKEND=backend)
        outs.append(subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                                   check=True).stdout)
    assert outs[0] == outs[1]
