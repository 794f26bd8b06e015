"""Pure-python kernels: heapq Dijkstra and BFS hop balls over CSR adjacency.

Reference implementation for the compiled extension; both backends must
produce the same distances on the same inputs (cross-checked in tests).
"""
from __future__ import annotations

import heapq
from collections import deque

import numpy as np

BACKEND_NAME = "pure"


def hop_ball_csr(indptr, indices, source: int, radius: int):
    """Membership mask (uint8, length n) of the <= radius hop ball around source."""
    n = len(indptr) - 1
    mask = np.zeros(n, dtype=np.uint8)
    ip = indptr.tolist()
    idx = indices.tolist()
    mask[source] = 1
    queue = deque([(source, 0)])
    while queue:
        u, hops = queue.popleft()
        if hops == radius:
            continue
        for k in range(ip[u], ip[u + 1]):
            v = idx[k]
            if not mask[v]:
                mask[v] = 1
                queue.append((v, hops + 1))
    return mask


def dijkstra_csr(indptr, indices, lengths, source: int, mask):
    """Single-source shortest-path distances restricted to masked vertices.

    Returns a float64 array of length n with np.inf for vertices outside
    the mask or unreachable within it.  The source must be masked in.
    """
    n = len(indptr) - 1
    if not mask[source]:
        raise ValueError(f"source vertex {source} lies outside the subgraph mask")
    ip = indptr.tolist()
    idx = indices.tolist()
    lens = lengths.tolist()
    member = mask.tolist()
    dist = [float("inf")] * n
    done = [False] * n
    dist[source] = 0.0
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for k in range(ip[u], ip[u + 1]):
            v = idx[k]
            if not member[v] or done[v]:
                continue
            alt = d + lens[k]
            if alt < dist[v]:
                dist[v] = alt
                heapq.heappush(heap, (alt, v))
    return np.asarray(dist, dtype=np.float64)
