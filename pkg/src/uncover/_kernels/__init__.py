"""Backend selection for the hot loops.

``UNCOVER_BACKEND=numpy`` forces the pure numpy/Python implementations;
anything else (or unset) uses numba when it imports cleanly. Both backends
consume the same pre-drawn random numbers, so results are identical.
"""
import os

from . import _numpy

BACKEND = os.environ.get("UNCOVER_BACKEND", "numba").strip().lower()

if BACKEND != "numpy":
    try:
        from . import _numba as _impl
        BACKEND = "numba"
    except ImportError:  # pragma: no cover - numba is a hard dependency
        _impl = _numpy
        BACKEND = "numpy"
else:
    _impl = _numpy

prufer_decode = _impl.prufer_decode
bst_edges = _impl.bst_edges
dfs_tree_edges = _impl.dfs_tree_edges
stub_match = _impl.stub_match
edge_counts = _impl.edge_counts
edge_counts_batch = _impl.edge_counts_batch
component_counts = _impl.component_counts
triangle_counts = _impl.triangle_counts
list_triangles = _impl.list_triangles

__all__ = [
    "BACKEND",
    "prufer_decode",
    "bst_edges",
    "dfs_tree_edges",
    "stub_match",
    "edge_counts",
    "edge_counts_batch",
    "component_counts",
    "triangle_counts",
    "list_triangles",
]
