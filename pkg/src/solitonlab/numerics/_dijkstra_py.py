"""Pure-Python Dijkstra, bit-compatible with the compiled kernel."""

from __future__ import annotations

import heapq
import math

import numpy as np


def dijkstra_grid(g11, g12, g22, nx, ny, hx, hy, stencil, source, target=-1):
    dist = np.full(nx * ny, np.inf)
    done = bytearray(nx * ny)
    G11 = g11.tolist()
    G12 = g12.tolist()
    G22 = g22.tolist()
    steps = [(int(a), int(b), int(a) * hx, int(b) * hy) for a, b in np.asarray(stencil)]
    d = dist.tolist()
    d[source] = 0.0
    heap = [(0.0, source)]
    pop, push, sqrt = heapq.heappop, heapq.heappush, math.sqrt
    while heap:
        du, u = pop(heap)
        if done[u]:
            continue
        done[u] = 1
        if u == target:
            break
        i, j = divmod(u, ny)
        for a, b, dx, dy in steps:
            ii = i + a
            jj = j + b
            if ii < 0 or ii >= nx or jj < 0 or jj >= ny:
                continue
            v = ii * ny + jj
            if done[v]:
                continue
            r = 2 * i + a
            c = 2 * j + b
            q = G11[r][c] * dx * dx + 2.0 * G12[r][c] * dx * dy + G22[r][c] * dy * dy
            nd = du + sqrt(q)
            if nd < d[v]:
                d[v] = nd
                push(heap, (nd, v))
    dist[:] = d
    return dist
