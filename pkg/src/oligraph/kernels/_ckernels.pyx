# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled graph kernels (preferred backend).

Contracts mirror _pykernels.py: CSR adjacency with int64 indptr and int32
indices, neighbor lists sorted ascending, undirected edges stored both ways.
"""

from libc.stdlib cimport free, malloc

import numpy as np

NAME = "c"


def betweenness(indptr, indices):
    """Exact unnormalized shortest-path betweenness (Brandes accumulation)."""
    n = len(indptr) - 1
    return betweenness_sources(indptr, indices, np.arange(n, dtype=np.int64))


def betweenness_sources(indptr, indices, sources):
    """Brandes accumulation restricted to the given source nodes (pivot
    sampling support); contributions are NOT rescaled here."""
    cdef const long long[::1] ptr = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef const int[::1] nbr = np.ascontiguousarray(indices, dtype=np.int32)
    cdef const long long[::1] src = np.ascontiguousarray(sources, dtype=np.int64)
    cdef Py_ssize_t n = ptr.shape[0] - 1
    cdef Py_ssize_t n_src = src.shape[0]
    out = np.zeros(n, dtype=np.float64)
    cdef double[::1] bc = out
    if n == 0 or n_src == 0:
        return out

    cdef int *dist = <int *> malloc(n * sizeof(int))
    cdef int *queue = <int *> malloc(n * sizeof(int))
    cdef double *sigma = <double *> malloc(n * sizeof(double))
    cdef double *delta = <double *> malloc(n * sizeof(double))
    if dist == NULL or queue == NULL or sigma == NULL or delta == NULL:
        free(dist); free(queue); free(sigma); free(delta)
        raise MemoryError()

    cdef Py_ssize_t si, s, v, w, i, head, tail, qlen
    cdef int dv, dw
    cdef double sv, coeff
    with nogil:
        for v in range(n):
            dist[v] = -1
            sigma[v] = 0.0
            delta[v] = 0.0
        for si in range(n_src):
            s = src[si]
            head = 0
            tail = 0
            queue[tail] = <int> s
            tail += 1
            dist[s] = 0
            sigma[s] = 1.0
            while head < tail:
                v = queue[head]
                head += 1
                dv = dist[v]
                sv = sigma[v]
                for i in range(ptr[v], ptr[v + 1]):
                    w = nbr[i]
                    if dist[w] < 0:
                        dist[w] = dv + 1
                        queue[tail] = <int> w
                        tail += 1
                    if dist[w] == dv + 1:
                        sigma[w] += sv
            qlen = tail
            while qlen > 0:
                qlen -= 1
                w = queue[qlen]
                coeff = (1.0 + delta[w]) / sigma[w]
                dw = dist[w]
                for i in range(ptr[w], ptr[w + 1]):
                    v = nbr[i]
                    if dist[v] == dw - 1:
                        delta[v] += sigma[v] * coeff
                if w != s:
                    bc[w] += delta[w]
            for i in range(tail):
                v = queue[i]
                dist[v] = -1
                sigma[v] = 0.0
                delta[v] = 0.0
    free(dist); free(queue); free(sigma); free(delta)
    out /= 2.0
    return out


def component_labels(indptr, indices):
    """BFS component labels; label = discovery order scanning node 0..n-1."""
    cdef const long long[::1] ptr = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef const int[::1] nbr = np.ascontiguousarray(indices, dtype=np.int32)
    cdef Py_ssize_t n = ptr.shape[0] - 1
    out = np.full(n, -1, dtype=np.int64)
    cdef long long[::1] labels = out
    if n == 0:
        return out, 0

    cdef int *queue = <int *> malloc(n * sizeof(int))
    if queue == NULL:
        raise MemoryError()
    cdef Py_ssize_t s, v, w, i, head, tail
    cdef long long current = 0
    with nogil:
        for s in range(n):
            if labels[s] >= 0:
                continue
            labels[s] = current
            head = 0
            tail = 0
            queue[tail] = <int> s
            tail += 1
            while head < tail:
                v = queue[head]
                head += 1
                for i in range(ptr[v], ptr[v + 1]):
                    w = nbr[i]
                    if labels[w] < 0:
                        labels[w] = current
                        queue[tail] = <int> w
                        tail += 1
            current += 1
    free(queue)
    return out, int(current)


def triangle_count(indptr, indices):
    """Closed 3-cycles via sorted neighbor-list intersection."""
    cdef const long long[::1] ptr = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef const int[::1] nbr = np.ascontiguousarray(indices, dtype=np.int32)
    cdef Py_ssize_t n = ptr.shape[0] - 1
    cdef long long total = 0
    cdef Py_ssize_t u, j, a, b, a_end, b_end
    cdef int v, x, y
    with nogil:
        for u in range(n):
            for j in range(ptr[u], ptr[u + 1]):
                v = nbr[j]
                if v <= u:
                    continue
                a = ptr[u]
                a_end = ptr[u + 1]
                b = ptr[v]
                b_end = ptr[v + 1]
                while a < a_end and b < b_end:
                    x = nbr[a]
                    y = nbr[b]
                    if x < y:
                        a += 1
                    elif y < x:
                        b += 1
                    else:
                        if x > v:
                            total += 1
                        a += 1
                        b += 1
    return int(total)
