# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Dijkstra over a stencil grid with midpoint-metric edge weights."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, INFINITY
from libc.stdlib cimport malloc, realloc, free

cnp.import_array()


cdef inline bint _less(double da, Py_ssize_t ia, double db, Py_ssize_t ib) noexcept nogil:
    return da < db or (da == db and ia < ib)


cdef struct Heap:
    double* key
    Py_ssize_t* idx
    Py_ssize_t size
    Py_ssize_t cap


cdef int _push(Heap* h, double d, Py_ssize_t i) noexcept nogil:
    cdef Py_ssize_t k, p
    cdef double* nk
    cdef Py_ssize_t* ni
    if h.size == h.cap:
        h.cap = 2 * h.cap
        nk = <double*> realloc(h.key, h.cap * sizeof(double))
        ni = <Py_ssize_t*> realloc(h.idx, h.cap * sizeof(Py_ssize_t))
        if nk == NULL or ni == NULL:
            return -1
        h.key = nk
        h.idx = ni
    k = h.size
    h.size += 1
    while k > 0:
        p = (k - 1) >> 1
        if _less(d, i, h.key[p], h.idx[p]):
            h.key[k] = h.key[p]
            h.idx[k] = h.idx[p]
            k = p
        else:
            break
    h.key[k] = d
    h.idx[k] = i
    return 0


cdef void _pop(Heap* h, double* d, Py_ssize_t* i) noexcept nogil:
    cdef Py_ssize_t k = 0, c, n
    cdef double lk
    cdef Py_ssize_t li
    d[0] = h.key[0]
    i[0] = h.idx[0]
    h.size -= 1
    n = h.size
    if n == 0:
        return
    lk = h.key[n]
    li = h.idx[n]
    while True:
        c = 2 * k + 1
        if c >= n:
            break
        if c + 1 < n and _less(h.key[c + 1], h.idx[c + 1], h.key[c], h.idx[c]):
            c += 1
        if _less(h.key[c], h.idx[c], lk, li):
            h.key[k] = h.key[c]
            h.idx[k] = h.idx[c]
            k = c
        else:
            break
    h.key[k] = lk
    h.idx[k] = li


def dijkstra_grid(const double[:, ::1] g11, const double[:, ::1] g12, const double[:, ::1] g22,
                  Py_ssize_t nx, Py_ssize_t ny, double hx, double hy,
                  const long[:, ::1] stencil, Py_ssize_t source, Py_ssize_t target=-1):
    """Distances from ``source`` (flat index ``i * ny + j``) to every node.

    ``g11``/``g12``/``g22`` are sampled on the half-step grid of shape
    ``(2 nx - 1, 2 ny - 1)``.  Stops early once ``target`` is settled.
    """
    cdef Py_ssize_t nnodes = nx * ny
    dist_arr = np.full(nnodes, np.inf)
    cdef double[::1] dist = dist_arr
    done_arr = np.zeros(nnodes, dtype=np.uint8)
    cdef unsigned char[::1] done = done_arr
    cdef Py_ssize_t ns = stencil.shape[0]
    cdef Py_ssize_t u, i, j, ii, jj, s, v
    cdef long a, b
    cdef double du, dx, dy, w, nd, q
    cdef Heap h
    h.cap = 1024
    h.size = 0
    h.key = <double*> malloc(h.cap * sizeof(double))
    h.idx = <Py_ssize_t*> malloc(h.cap * sizeof(Py_ssize_t))
    if h.key == NULL or h.idx == NULL:
        raise MemoryError()
    try:
        with nogil:
            dist[source] = 0.0
            if _push(&h, 0.0, source) != 0:
                with gil:
                    raise MemoryError()
            while h.size > 0:
                _pop(&h, &du, &u)
                if done[u]:
                    continue
                done[u] = 1
                if u == target:
                    break
                i = u // ny
                j = u - i * ny
                for s in range(ns):
                    a = stencil[s, 0]
                    b = stencil[s, 1]
                    ii = i + a
                    jj = j + b
                    if ii < 0 or ii >= nx or jj < 0 or jj >= ny:
                        continue
                    v = ii * ny + jj
                    if done[v]:
                        continue
                    dx = a * hx
                    dy = b * hy
                    q = g11[2 * i + a, 2 * j + b] * dx * dx + 2.0 * g12[2 * i + a, 2 * j + b] * dx * dy + g22[2 * i + a, 2 * j + b] * dy * dy
                    w = sqrt(q)
                    nd = du + w
                    if nd < dist[v]:
                        dist[v] = nd
                        if _push(&h, nd, v) != 0:
                            with gil:
                                raise MemoryError()
    finally:
        free(h.key)
        free(h.idx)
    return dist_arr
