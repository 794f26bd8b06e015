# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: array-heap Dijkstra and BFS hop balls over CSR adjacency.

Semantics mirror poseweights._kernels.pure exactly.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND_NAME = "compiled"


def hop_ball_csr(cnp.int32_t[::1] indptr, cnp.int32_t[::1] indices,
                 int source, int radius):
    """Membership mask (uint8, length n) of the <= radius hop ball around source."""
    cdef int n = indptr.shape[0] - 1
    mask_arr = np.zeros(n, dtype=np.uint8)
    queue_arr = np.empty(n, dtype=np.int32)
    depth_arr = np.empty(n, dtype=np.int32)
    cdef cnp.uint8_t[::1] mask = mask_arr
    cdef cnp.int32_t[::1] queue = queue_arr
    cdef cnp.int32_t[::1] depth = depth_arr
    cdef int head = 0, tail = 0, u, v, k, hops

    mask[source] = 1
    queue[tail] = source
    depth[tail] = 0
    tail += 1
    while head < tail:
        u = queue[head]
        hops = depth[head]
        head += 1
        if hops == radius:
            continue
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            if mask[v] == 0:
                mask[v] = 1
                queue[tail] = v
                depth[tail] = hops + 1
                tail += 1
    return mask_arr


def dijkstra_csr(cnp.int32_t[::1] indptr, cnp.int32_t[::1] indices,
                 cnp.float64_t[::1] lengths, int source,
                 cnp.uint8_t[::1] mask):
    """Single-source shortest-path distances restricted to masked vertices.

    Returns a float64 array of length n with np.inf for vertices outside
    the mask or unreachable within it.  The source must be masked in.
    """
    cdef int n = indptr.shape[0] - 1
    if mask[source] == 0:
        raise ValueError(f"source vertex {source} lies outside the subgraph mask")

    dist_arr = np.full(n, np.inf, dtype=np.float64)
    done_arr = np.zeros(n, dtype=np.uint8)
    # lazy-deletion binary heap: at most one push per directed edge + 1
    cdef int cap = indices.shape[0] + 1
    key_arr = np.empty(cap, dtype=np.float64)
    vert_arr = np.empty(cap, dtype=np.int32)

    cdef cnp.float64_t[::1] dist = dist_arr
    cdef cnp.uint8_t[::1] done = done_arr
    cdef cnp.float64_t[::1] hkey = key_arr
    cdef cnp.int32_t[::1] hvert = vert_arr
    cdef int size = 0
    cdef int u, v, k, i, child
    cdef double d, alt, tmpk
    cdef int tmpv

    dist[source] = 0.0
    hkey[0] = 0.0
    hvert[0] = source
    size = 1

    while size > 0:
        # pop min
        d = hkey[0]
        u = hvert[0]
        size -= 1
        hkey[0] = hkey[size]
        hvert[0] = hvert[size]
        i = 0
        while True:
            child = 2 * i + 1
            if child >= size:
                break
            if child + 1 < size and hkey[child + 1] < hkey[child]:
                child += 1
            if hkey[child] < hkey[i]:
                tmpk = hkey[i]; hkey[i] = hkey[child]; hkey[child] = tmpk
                tmpv = hvert[i]; hvert[i] = hvert[child]; hvert[child] = tmpv
                i = child
            else:
                break

        if done[u]:
            continue
        done[u] = 1

        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            if mask[v] == 0 or done[v]:
                continue
            alt = d + lengths[k]
            if alt < dist[v]:
                dist[v] = alt
                # push (alt, v)
                i = size
                hkey[i] = alt
                hvert[i] = v
                size += 1
                while i > 0 and hkey[(i - 1) // 2] > hkey[i]:
                    child = (i - 1) // 2
                    tmpk = hkey[i]; hkey[i] = hkey[child]; hkey[child] = tmpk
                    tmpv = hvert[i]; hvert[i] = hvert[child]; hvert[child] = tmpv
                    i = child
    return dist_arr
