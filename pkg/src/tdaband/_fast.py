"""Streaming Rips persistence for homology dimensions 0 and 1.

Connected-component pairs come from a union-find with the elder rule.
Loop pairs come from reducing edge coboundary columns in decreasing
filtration order, which yields the same pairing as reducing the boundary
matrix of the explicit filtration. Tree edges are skipped outright (their
coboundary columns always cancel), and an edge whose minimal cofacet
triangle is unclaimed pairs with it immediately, so almost every column
finishes without touching a single stored column. Only colliding columns
are materialized, into a min-heap keyed by triangle order with lazy
mod-2 cancellation.

Triangles are never stored globally: a column enumerates the common
neighbors of its edge on demand via adjacency bitsets, so memory scales
with the number of edges, not the number of triangles. The diagram equals
the reference reduction up to zero-persistence pairs, which are dropped.
"""

from __future__ import annotations

import numpy as np
from numba import njit, types
from numba.typed import Dict


@njit(cache=True)
def _find(parent, v):
    root = v
    while parent[root] != root:
        root = parent[root]
    while parent[v] != root:
        nxt = parent[v]
        parent[v] = root
        v = nxt
    return root


@njit(cache=True, inline="always")
def _msb64(x):
    # Position of the highest set bit of a nonzero uint64.
    k = 0
    if x & np.uint64(0xFFFFFFFF00000000):
        k += 32
        x >>= np.uint64(32)
    if x & np.uint64(0xFFFF0000):
        k += 16
        x >>= np.uint64(16)
    if x & np.uint64(0xFF00):
        k += 8
        x >>= np.uint64(8)
    if x & np.uint64(0xF0):
        k += 4
        x >>= np.uint64(4)
    if x & np.uint64(0xC):
        k += 2
        x >>= np.uint64(2)
    if x & np.uint64(0x2):
        k += 1
    return k


@njit(cache=True, inline="always")
def _heap_push(heap, hn, key):
    if hn >= heap.shape[0]:
        grown = np.empty(2 * heap.shape[0], dtype=np.int64)
        grown[:hn] = heap[:hn]
        heap = grown
    heap[hn] = key
    i = hn
    hn += 1
    while i > 0:
        par = (i - 1) >> 1
        if heap[par] <= heap[i]:
            break
        heap[par], heap[i] = heap[i], heap[par]
        i = par
    return heap, hn


@njit(cache=True, inline="always")
def _heap_pop(heap, hn):
    hn -= 1
    heap[0] = heap[hn]
    i = 0
    while True:
        left = 2 * i + 1
        right = left + 1
        small = i
        if left < hn and heap[left] < heap[small]:
            small = left
        if right < hn and heap[right] < heap[small]:
            small = right
        if small == i:
            break
        heap[small], heap[i] = heap[i], heap[small]
        i = small
    return hn


@njit(cache=True)
def _stream(n, ei, ej, ev, words):
    m = ei.shape[0]
    one = np.uint64(1)
    zero = np.uint64(0)
    # Pass 1, increasing order: H0 via union-find, tree edge flags, and
    # the full adjacency structure used for cofacet enumeration below.
    parent = np.arange(n, dtype=np.int32)
    oldest = np.arange(n, dtype=np.int32)
    h0_death = np.empty(m, dtype=np.float64)
    n_h0 = 0
    tree_edge = np.zeros(m, dtype=np.bool_)
    adj = np.zeros((n, words), dtype=np.uint64)
    pos = np.full((n, n), -1, dtype=np.int32)
    for e in range(m):
        i = ei[e]
        j = ej[e]
        ri = _find(parent, i)
        rj = _find(parent, j)
        if ri != rj:
            # Tree edge: the component with the younger oldest vertex dies here.
            if oldest[ri] < oldest[rj]:
                parent[rj] = ri
            else:
                parent[ri] = rj
                oldest[rj] = min(oldest[ri], oldest[rj])
            h0_death[n_h0] = ev[e]
            n_h0 += 1
            tree_edge[e] = True
        adj[i, j >> 6] |= one << np.uint64(j & 63)
        adj[j, i >> 6] |= one << np.uint64(i & 63)
        pos[i, j] = e
        pos[j, i] = e
    # Pass 2, decreasing order: coboundary reduction for loop pairs.
    # A triangle is keyed by (position of its maximal edge, vertex missing
    # from that edge), flattened to maxpos * n + x. The key is canonical:
    # every edge of the triangle computes the same one, and key order
    # refines the filtration order.
    paired_death = np.full(m, -1.0, dtype=np.float64)
    essential_edge = np.zeros(m, dtype=np.bool_)
    claimed = Dict.empty(types.int64, types.int64)
    stored = Dict.empty(types.int64, types.int64[:])
    heap = np.empty(1024, dtype=np.int64)
    for e in range(m - 1, -1, -1):
        i = ei[e]
        j = ej[e]
        if tree_edge[e]:
            continue
        # First sweep over the cofacets only tracks the minimal key.
        min_key = np.int64(-1)
        count = 0
        for w in range(words):
            inter = adj[i, w] & adj[j, w]
            while inter != zero:
                bit = inter & (zero - inter)
                inter ^= bit
                k = np.int64((w << 6) + _msb64(bit))
                mp = np.int64(e)
                if pos[i, k] > mp:
                    mp = np.int64(pos[i, k])
                if pos[j, k] > mp:
                    mp = np.int64(pos[j, k])
                key = mp * n + (i + j + k - ei[mp] - ej[mp])
                if min_key < 0 or key < min_key:
                    min_key = key
                count += 1
        if count == 0:
            essential_edge[e] = True
            continue
        if min_key not in claimed:
            # The column's own pivot is free: pair without reducing, and
            # without storing anything. Later collisions rebuild this raw
            # column from the adjacency structure.
            claimed[min_key] = np.int64(e)
            paired_death[e] = ev[min_key // n]
            continue
        # Collision: materialize the column and reduce it.
        hn = 0
        for w in range(words):
            inter = adj[i, w] & adj[j, w]
            while inter != zero:
                bit = inter & (zero - inter)
                inter ^= bit
                k = np.int64((w << 6) + _msb64(bit))
                mp = np.int64(e)
                if pos[i, k] > mp:
                    mp = np.int64(pos[i, k])
                if pos[j, k] > mp:
                    mp = np.int64(pos[j, k])
                key = mp * n + (i + j + k - ei[mp] - ej[mp])
                heap, hn = _heap_push(heap, hn, key)
        while True:
            # Extract the pivot; equal keys cancel mod 2.
            pivot = np.int64(-1)
            while hn > 0:
                p = heap[0]
                hn = _heap_pop(heap, hn)
                if hn > 0 and heap[0] == p:
                    hn = _heap_pop(heap, hn)
                    continue
                pivot = p
                break
            if pivot < 0:
                essential_edge[e] = True
                break
            if pivot in claimed:
                owner = claimed[pivot]
                if owner in stored:
                    arr = stored[owner]
                    for idx in range(arr.shape[0]):
                        heap, hn = _heap_push(heap, hn, arr[idx])
                else:
                    # Emergent owner: its reduced column is its raw
                    # coboundary. Push everything except the shared pivot.
                    oi = ei[owner]
                    oj = ej[owner]
                    for w in range(words):
                        inter = adj[oi, w] & adj[oj, w]
                        while inter != zero:
                            bit = inter & (zero - inter)
                            inter ^= bit
                            k = np.int64((w << 6) + _msb64(bit))
                            mp = owner
                            if pos[oi, k] > mp:
                                mp = np.int64(pos[oi, k])
                            if pos[oj, k] > mp:
                                mp = np.int64(pos[oj, k])
                            key = mp * n + (oi + oj + k - ei[mp] - ej[mp])
                            if key != pivot:
                                heap, hn = _heap_push(heap, hn, key)
            else:
                claimed[pivot] = np.int64(e)
                paired_death[e] = ev[pivot // n]
                # Keep the reduced remainder for future collisions. The
                # empty case still needs an entry so it is not mistaken
                # for an unreduced emergent column.
                stored[np.int64(e)] = heap[:hn].copy()
                break
    return h0_death[:n_h0], essential_edge, paired_death


def streaming_rips_pairs(points: np.ndarray, max_scale: float) -> np.ndarray:
    """Rips diagram rows (dim, birth, death) for dims 0 and 1.

    Zero-persistence classes are omitted; essential classes carry
    death = inf. ``points`` must be a (n, D) float64 array. The edge
    position table is dense, so memory grows with n^2; that is fine for
    the sample sizes this library targets.
    """
    pts = np.ascontiguousarray(points, dtype=np.float64)
    n = pts.shape[0]
    rows: list[tuple[float, float, float]] = []
    if n == 1:
        return np.array([[0.0, 0.0, np.inf]])
    iu, ju = np.triu_indices(n, 1)
    diff = pts[iu] - pts[ju]
    half = np.sqrt((diff * diff).sum(axis=1)) / 2.0
    keep = half <= max_scale
    ei = iu[keep].astype(np.int32)
    ej = ju[keep].astype(np.int32)
    ev = half[keep]
    order = np.lexsort((ej, ei, ev))
    ei, ej, ev = ei[order], ej[order], np.ascontiguousarray(ev[order])
    words = (n + 63) // 64
    h0_death, essential_edge, paired_death = _stream(
        np.int64(n), ei, ej, ev, np.int64(words)
    )
    for d in h0_death:
        if d > 0.0:
            rows.append((0.0, 0.0, float(d)))
    components = n - h0_death.shape[0]
    for _ in range(components):
        rows.append((0.0, 0.0, np.inf))
    for e in range(ev.shape[0]):
        if paired_death[e] > ev[e]:
            rows.append((1.0, float(ev[e]), float(paired_death[e])))
        elif essential_edge[e]:
            rows.append((1.0, float(ev[e]), np.inf))
    return np.array(rows, dtype=np.float64).reshape(-1, 3)
