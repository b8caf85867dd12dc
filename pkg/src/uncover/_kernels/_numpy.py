"""Reference implementations of the compiled kernels.

Vectorized with numpy where the loop structure allows it; the inherently
sequential ones (Prufer decode, BST insertion, union-find) are plain Python.
"""
import heapq

import numpy as np


def prufer_decode(seq, n):
    edges = np.empty((n - 1, 2), dtype=np.int64)
    if n == 2:
        edges[0] = (0, 1)
        return edges
    deg = np.ones(n, dtype=np.int64)
    np.add.at(deg, seq, 1)
    leaves = [int(i) for i in np.flatnonzero(deg == 1)]
    heapq.heapify(leaves)
    for e, x in enumerate(seq.tolist()):
        leaf = heapq.heappop(leaves)
        edges[e] = (leaf, x)
        deg[x] -= 1
        if deg[x] == 1:
            heapq.heappush(leaves, x)
    edges[n - 2] = (heapq.heappop(leaves), n - 1)
    return edges


def bst_edges(keys):
    n = len(keys)
    keys = keys.tolist()
    left = [-1] * n
    right = [-1] * n
    edges = np.empty((max(n - 1, 0), 2), dtype=np.int64)
    for j in range(1, n):
        cur = 0
        k = keys[j]
        while True:
            side = left if k < keys[cur] else right
            if side[cur] < 0:
                side[cur] = j
                break
            cur = side[cur]
        edges[j - 1] = (cur, j)
    return edges


def dfs_tree_edges(outdeg):
    n = len(outdeg)
    edges = np.empty((max(n - 1, 0), 2), dtype=np.int64)
    remaining = outdeg.tolist()
    stack = [0]
    for v in range(1, n):
        while remaining[stack[-1]] == 0:
            stack.pop()
        p = stack[-1]
        remaining[p] -= 1
        edges[v - 1] = (p, v)
        stack.append(v)
    return edges


def stub_match(stubs, degrees):
    n = len(degrees)
    a = stubs[0::2]
    b = stubs[1::2]
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    empty = np.empty((0, 2), dtype=np.int64)
    if np.any(lo == hi):
        return False, empty
    keys = lo * n + hi
    if np.unique(keys).size != keys.size:
        return False, empty
    return True, np.column_stack([lo, hi]).astype(np.int64)


def _positions(order):
    pos = np.empty_like(order)
    pos[order] = np.arange(order.size)
    return pos


def edge_counts(indptr, indices, order):
    n = order.size
    pos = _positions(order)
    src = np.repeat(np.arange(n), np.diff(indptr))
    keep = src < indices
    reveal = np.maximum(pos[src[keep]], pos[indices[keep]])
    out = np.zeros(n + 1, dtype=np.int64)
    out[1:] = np.cumsum(np.bincount(reveal, minlength=n))
    return out


def edge_counts_batch(eu, ev, orders):
    reps, n = orders.shape
    pos = np.empty_like(orders)
    np.put_along_axis(pos, orders, np.arange(n)[None, :], axis=1)
    reveal = np.maximum(pos[:, eu], pos[:, ev])
    flat = (reveal + np.arange(reps)[:, None] * n).ravel()
    counts = np.bincount(flat, minlength=reps * n).reshape(reps, n)
    out = np.zeros((reps, n + 1), dtype=np.int64)
    np.cumsum(counts, axis=1, out=out[:, 1:])
    return out


def component_counts(indptr, indices, order):
    n = order.size
    parent = list(range(n))

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    visible = [False] * n
    ip = indptr.tolist()
    ix = indices.tolist()
    out = np.zeros(n + 1, dtype=np.int64)
    comps = 0
    for k, v in enumerate(order.tolist()):
        visible[v] = True
        comps += 1
        for w in ix[ip[v]:ip[v + 1]]:
            if visible[w]:
                rv, rw = find(v), find(w)
                if rv != rw:
                    parent[rw] = rv
                    comps -= 1
        out[k + 1] = comps
    return out


def triangle_counts(indptr, indices, order):
    n = order.size
    tri = list_triangles(indptr, indices)
    out = np.zeros(n + 1, dtype=np.int64)
    if len(tri) == 0:
        return out
    pos = _positions(order)
    reveal = pos[tri].max(axis=1)
    out[1:] = np.cumsum(np.bincount(reveal, minlength=n))
    return out


def list_triangles(indptr, indices):
    n = indptr.size - 1
    nbrs = [set(indices[indptr[u]:indptr[u + 1]].tolist()) for u in range(n)]
    found = []
    for u in range(n):
        for v in sorted(x for x in nbrs[u] if x > u):
            for w in sorted(x for x in nbrs[u] & nbrs[v] if x > v):
                found.append((u, v, w))
    return np.array(found, dtype=np.int64).reshape(-1, 3)
