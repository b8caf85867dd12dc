"""Compiled inner loops. All arrays are 0-based and int64.

Every function here has a twin of the same name in ``_numpy.py`` that
returns identical output for identical input.
"""
import numba
import numpy as np


@numba.njit(cache=True)
def prufer_decode(seq, n):
    edges = np.empty((n - 1, 2), dtype=np.int64)
    if n == 2:
        edges[0, 0] = 0
        edges[0, 1] = 1
        return edges
    deg = np.ones(n, dtype=np.int64)
    for x in seq:
        deg[x] += 1
    # linear-time decode: track the smallest leaf without a heap
    ptr = 0
    while deg[ptr] != 1:
        ptr += 1
    leaf = ptr
    e = 0
    for x in seq:
        edges[e, 0] = leaf
        edges[e, 1] = x
        e += 1
        deg[x] -= 1
        if deg[x] == 1 and x < ptr:
            leaf = x
        else:
            ptr += 1
            while deg[ptr] != 1:
                ptr += 1
            leaf = ptr
    edges[e, 0] = leaf
    edges[e, 1] = n - 1
    return edges


@numba.njit(cache=True)
def bst_edges(keys):
    n = keys.shape[0]
    edges = np.empty((max(n - 1, 0), 2), dtype=np.int64)
    left = -np.ones(n, dtype=np.int64)
    right = -np.ones(n, dtype=np.int64)
    e = 0
    for j in range(1, n):
        cur = 0
        k = keys[j]
        while True:
            if k < keys[cur]:
                if left[cur] < 0:
                    left[cur] = j
                    break
                cur = left[cur]
            else:
                if right[cur] < 0:
                    right[cur] = j
                    break
                cur = right[cur]
        edges[e, 0] = cur
        edges[e, 1] = j
        e += 1
    return edges


@numba.njit(cache=True)
def dfs_tree_edges(outdeg):
    n = outdeg.shape[0]
    edges = np.empty((max(n - 1, 0), 2), dtype=np.int64)
    stack = np.empty(n, dtype=np.int64)
    remaining = outdeg.copy()
    top = 0
    stack[0] = 0
    e = 0
    for v in range(1, n):
        while remaining[stack[top]] == 0:
            top -= 1
        p = stack[top]
        remaining[p] -= 1
        edges[e, 0] = p
        edges[e, 1] = v
        e += 1
        top += 1
        stack[top] = v
    return edges


@numba.njit(cache=True)
def stub_match(stubs, degrees):
    """Pair ``stubs[2i]`` with ``stubs[2i+1]``; abort on the first loop or
    repeated pair. Returns (ok, edges)."""
    n = degrees.shape[0]
    m = stubs.shape[0] // 2
    edges = np.empty((m, 2), dtype=np.int64)
    offs = np.zeros(n + 1, dtype=np.int64)
    for i in range(n):
        offs[i + 1] = offs[i] + degrees[i]
    fill = np.zeros(n, dtype=np.int64)
    adj = np.empty(offs[n], dtype=np.int64)
    for e in range(m):
        a = stubs[2 * e]
        b = stubs[2 * e + 1]
        if a == b:
            return False, edges[:0]
        for q in range(fill[a]):
            if adj[offs[a] + q] == b:
                return False, edges[:0]
        adj[offs[a] + fill[a]] = b
        fill[a] += 1
        adj[offs[b] + fill[b]] = a
        fill[b] += 1
        if a < b:
            edges[e, 0] = a
            edges[e, 1] = b
        else:
            edges[e, 0] = b
            edges[e, 1] = a
    return True, edges


@numba.njit(cache=True)
def edge_counts(indptr, indices, order):
    n = order.shape[0]
    pos = np.empty(n, dtype=np.int64)
    for k in range(n):
        pos[order[k]] = k
    out = np.zeros(n + 1, dtype=np.int64)
    for k in range(n):
        v = order[k]
        c = 0
        for q in range(indptr[v], indptr[v + 1]):
            if pos[indices[q]] < k:
                c += 1
        out[k + 1] = out[k] + c
    return out


@numba.njit(cache=True)
def edge_counts_batch(eu, ev, orders):
    reps, n = orders.shape
    m = eu.shape[0]
    out = np.zeros((reps, n + 1), dtype=np.int64)
    pos = np.empty(n, dtype=np.int64)
    jumps = np.zeros(n + 1, dtype=np.int64)
    for r in range(reps):
        for k in range(n):
            pos[orders[r, k]] = k
        jumps[:] = 0
        for e in range(m):
            a = pos[eu[e]]
            b = pos[ev[e]]
            jumps[(a if a > b else b) + 1] += 1
        acc = 0
        for k in range(n + 1):
            acc += jumps[k]
            out[r, k] = acc
    return out


@numba.njit(cache=True)
def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


@numba.njit(cache=True)
def component_counts(indptr, indices, order):
    n = order.shape[0]
    parent = np.arange(n)
    visible = np.zeros(n, dtype=np.bool_)
    out = np.zeros(n + 1, dtype=np.int64)
    comps = 0
    for k in range(n):
        v = order[k]
        visible[v] = True
        comps += 1
        for q in range(indptr[v], indptr[v + 1]):
            w = indices[q]
            if visible[w]:
                rv = _find(parent, v)
                rw = _find(parent, w)
                if rv != rw:
                    parent[rw] = rv
                    comps -= 1
        out[k + 1] = comps
    return out


@numba.njit(cache=True)
def triangle_counts(indptr, indices, order):
    n = order.shape[0]
    visible = np.zeros(n, dtype=np.bool_)
    mark = -np.ones(n, dtype=np.int64)
    out = np.zeros(n + 1, dtype=np.int64)
    for k in range(n):
        v = order[k]
        for q in range(indptr[v], indptr[v + 1]):
            w = indices[q]
            if visible[w]:
                mark[w] = k
        c = 0
        for q in range(indptr[v], indptr[v + 1]):
            w = indices[q]
            if mark[w] != k:
                continue
            for r in range(indptr[w], indptr[w + 1]):
                x = indices[r]
                if x > w and mark[x] == k:
                    c += 1
        visible[v] = True
        out[k + 1] = out[k] + c
    return out


@numba.njit(cache=True)
def _scan_triangles(indptr, indices, tri, fill):
    n = indptr.shape[0] - 1
    mark = -np.ones(n, dtype=np.int64)
    count = 0
    for u in range(n):
        for q in range(indptr[u], indptr[u + 1]):
            mark[indices[q]] = u
        for q in range(indptr[u], indptr[u + 1]):
            v = indices[q]
            if v <= u:
                continue
            for r in range(indptr[v], indptr[v + 1]):
                w = indices[r]
                if w > v and mark[w] == u:
                    if fill:
                        tri[count, 0] = u
                        tri[count, 1] = v
                        tri[count, 2] = w
                    count += 1
    return count


@numba.njit(cache=True)
def list_triangles(indptr, indices):
    tri = np.empty((0, 3), dtype=np.int64)
    count = _scan_triangles(indptr, indices, tri, False)
    tri = np.empty((count, 3), dtype=np.int64)
    _scan_triangles(indptr, indices, tri, True)
    return tri
