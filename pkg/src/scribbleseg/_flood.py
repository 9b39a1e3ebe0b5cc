"""Compiled priority-queue flood used by the growing engine.

The kernel commits pixels in increasing order of their joint
spatial/color distance to a cluster centroid. Ordering is total:
ties on distance fall back to an int64 key packing
(cluster_id * n_pixels + pixel_index), so equal-distance pops resolve
toward the smaller cluster id, then the smaller pixel index. This
makes the flood bit-reproducible regardless of scheduling.
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True, inline="always")
def _heap_push(heap_d, heap_k, size, d, k):
    pos = size
    heap_d[pos] = d
    heap_k[pos] = k
    while pos > 0:
        parent = (pos - 1) >> 1
        pd = heap_d[parent]
        pk = heap_k[parent]
        if pd > d or (pd == d and pk > k):
            heap_d[pos] = pd
            heap_k[pos] = pk
            pos = parent
        else:
            break
    heap_d[pos] = d
    heap_k[pos] = k
    return size + 1


@njit(cache=True, nogil=True, inline="always")
def _heap_pop(heap_d, heap_k, size):
    top_d = heap_d[0]
    top_k = heap_k[0]
    size -= 1
    d = heap_d[size]
    k = heap_k[size]
    pos = 0
    while True:
        left = 2 * pos + 1
        if left >= size:
            break
        right = left + 1
        best = left
        bd = heap_d[left]
        bk = heap_k[left]
        if right < size:
            rd = heap_d[right]
            rk = heap_k[right]
            if rd < bd or (rd == bd and rk < bk):
                best = right
                bd = rd
                bk = rk
        if bd < d or (bd == d and bk < k):
            heap_d[pos] = bd
            heap_k[pos] = bk
            pos = best
        else:
            break
    heap_d[pos] = d
    heap_k[pos] = k
    return size, top_d, top_k


@njit(cache=True, nogil=True)
def flood(lab_l, lab_a, lab_b, width, height, seed_idx, inv_ss, inv_ms,
          update_centroids):
    """Assign every pixel to the cluster of one seed.

    lab_l/lab_a/lab_b: flattened float64 color planes.
    seed_idx: int64 pixel indices; seed i founds cluster i.
    inv_ss / inv_ms: 1/theta^2 for the spatial and color scales.
    Returns an int32 array of cluster ids, one per pixel.
    """
    n = width * height
    k = seed_idx.shape[0]
    assign = np.full(n, -1, np.int32)

    cx = np.empty(k, np.float64)
    cy = np.empty(k, np.float64)
    cl = np.empty(k, np.float64)
    ca = np.empty(k, np.float64)
    cb = np.empty(k, np.float64)
    csize = np.zeros(k, np.int64)

    # One heap slot per possible push: each commit pushes <= 4 neighbors,
    # plus the k seed entries, so pushes never exceed 4n + k.
    cap = 4 * n + k + 1
    heap_d = np.empty(cap, np.float64)
    heap_k = np.empty(cap, np.int64)
    size = 0

    # Dominated entries are pruned at push time: a pixel only enters the
    # heap again if the new (distance, key) sorts before its current best.
    best_d = np.full(n, np.inf, np.float64)
    best_k = np.full(n, np.int64(0x7FFFFFFFFFFFFFFF), np.int64)

    for c in range(k):
        p = seed_idx[c]
        cx[c] = np.float64(p % width)
        cy[c] = np.float64(p // width)
        cl[c] = lab_l[p]
        ca[c] = lab_a[p]
        cb[c] = lab_b[p]
        key = np.int64(c) * n + p
        if 0.0 < best_d[p] or (0.0 == best_d[p] and key < best_k[p]):
            best_d[p] = 0.0
            best_k[p] = key
            size = _heap_push(heap_d, heap_k, size, 0.0, key)

    while size > 0:
        size, d, key = _heap_pop(heap_d, heap_k, size)
        p = key % n
        if assign[p] >= 0:
            continue
        c = key // n
        assign[p] = np.int32(c)
        x = p % width
        y = p // width
        if update_centroids:
            m = csize[c] + 1
            inv = 1.0 / m
            cx[c] += (np.float64(x) - cx[c]) * inv
            cy[c] += (np.float64(y) - cy[c]) * inv
            cl[c] += (lab_l[p] - cl[c]) * inv
            ca[c] += (lab_a[p] - ca[c]) * inv
            cb[c] += (lab_b[p] - cb[c]) * inv
            csize[c] = m

        base = np.int64(c) * n
        for step in range(4):
            if step == 0:
                if x == 0:
                    continue
                q = p - 1
            elif step == 1:
                if x == width - 1:
                    continue
                q = p + 1
            elif step == 2:
                if y == 0:
                    continue
                q = p - width
            else:
                if y == height - 1:
                    continue
                q = p + width
            if assign[q] >= 0:
                continue
            dx = np.float64(q % width) - cx[c]
            dy = np.float64(q // width) - cy[c]
            dl = lab_l[q] - cl[c]
            da = lab_a[q] - ca[c]
            db = lab_b[q] - cb[c]
            dist = np.sqrt((dx * dx + dy * dy) * inv_ss
                           + (dl * dl + da * da + db * db) * inv_ms)
            qkey = base + q
            if dist < best_d[q] or (dist == best_d[q] and qkey < best_k[q]):
                best_d[q] = dist
                best_k[q] = qkey
                size = _heap_push(heap_d, heap_k, size, dist, qkey)

    return assign
