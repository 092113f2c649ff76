"""Pure-Python graph kernels (fallback backend).

Same contracts as the compiled backend in _ckernels.pyx: all functions take a
CSR adjacency (indptr int64, indices int32, neighbor lists sorted ascending,
every undirected edge stored in both directions) and are deterministic.
"""

from collections import deque

import numpy as np

NAME = "python"


def betweenness(indptr, indices):
    """Exact unnormalized shortest-path betweenness (Brandes accumulation).

    Each unordered node pair contributes once. Sources are processed in
    ascending index order, so float accumulation order is fixed.
    """
    n = len(indptr) - 1
    return betweenness_sources(indptr, indices, range(n))


def betweenness_sources(indptr, indices, sources):
    """Brandes accumulation restricted to the given source nodes (pivot
    sampling support); contributions are NOT rescaled here."""
    n = len(indptr) - 1
    ptr = indptr.tolist()
    nbr = indices.tolist()
    bc = [0.0] * n
    dist = [-1] * n
    sigma = [0.0] * n
    delta = [0.0] * n
    for s in sources:
        s = int(s)
        order = []
        q = deque([s])
        dist[s] = 0
        sigma[s] = 1.0
        while q:
            v = q.popleft()
            order.append(v)
            dv = dist[v]
            sv = sigma[v]
            for w in nbr[ptr[v] : ptr[v + 1]]:
                if dist[w] < 0:
                    dist[w] = dv + 1
                    q.append(w)
                if dist[w] == dv + 1:
                    sigma[w] += sv
        for w in reversed(order):
            coeff = (1.0 + delta[w]) / sigma[w]
            dw = dist[w]
            for v in nbr[ptr[w] : ptr[w + 1]]:
                if dist[v] == dw - 1:
                    delta[v] += sigma[v] * coeff
            if w != s:
                bc[w] += delta[w]
        for v in order:
            dist[v] = -1
            sigma[v] = 0.0
            delta[v] = 0.0
    return np.asarray(bc, dtype=np.float64) / 2.0


def component_labels(indptr, indices):
    """BFS component labels; label = discovery order scanning node 0..n-1."""
    n = len(indptr) - 1
    ptr = indptr.tolist()
    nbr = indices.tolist()
    labels = [-1] * n
    current = 0
    for s in range(n):
        if labels[s] >= 0:
            continue
        labels[s] = current
        q = deque([s])
        while q:
            v = q.popleft()
            for w in nbr[ptr[v] : ptr[v + 1]]:
                if labels[w] < 0:
                    labels[w] = current
                    q.append(w)
        current += 1
    return np.asarray(labels, dtype=np.int64), current


def triangle_count(indptr, indices):
    """Closed 3-cycles in the simple graph, by sorted-list intersection.

    Triangle u < v < w is counted exactly once: at edge (u, v) with w a
    common neighbor greater than v.
    """
    n = len(indptr) - 1
    ptr = indptr.tolist()
    nbr = indices.tolist()
    total = 0
    for u in range(n):
        u_start, u_end = ptr[u], ptr[u + 1]
        for j in range(u_start, u_end):
            v = nbr[j]
            if v <= u:
                continue
            a, b = u_start, ptr[v]
            a_end, b_end = u_end, ptr[v + 1]
            while a < a_end and b < b_end:
                x, y = nbr[a], nbr[b]
                if x < y:
                    a += 1
                elif y < x:
                    b += 1
                else:
                    if x > v:
                        total += 1
                    a += 1
                    b += 1
    return total
