"""Compiled node counter for the search without link tracking.

Without union-find structures the only tests are short edge-link walks, and
the tree is large enough that the Python search cannot traverse it at n = 5.
This kernel walks the same tree (same pair order, same permutation order,
same tests) but does nothing at the leaves, so it yields node, leaf and
prune counts only.  ``tests/test_search.py`` checks it against
``SearchState`` node for node.
"""

import numpy as np
from numba import njit

from .triangulation import EDGE_VERTICES, FACE_EDGES, FACE_PERMS, INVERSE, PERMS

_PERMS = np.array(PERMS, dtype=np.int64)
_FACE_PERMS = np.array(FACE_PERMS, dtype=np.int64)
_FACE_EDGES = np.array(FACE_EDGES, dtype=np.int64)
_EDGE_VERTICES = np.array(EDGE_VERTICES, dtype=np.int64)
_INVERSE = np.array(INVERSE, dtype=np.int64)

# prune reason slots, in search.PRUNE_REASONS order
_EDGE_REVERSED = 0
_EDGE_DEGREE_LOW = 2
_EDGE_DEGREE3 = 3


@njit(cache=True)
def _walk(t0, e0, glue, partner, perms, edge_vertices, limit, out):
    # out = [closed, degree, distinct tets, reversed]
    a0 = edge_vertices[e0, 0]
    b0 = edge_vertices[e0, 1]
    c = -1
    d = -1
    for v in range(4):
        if v != a0 and v != b0:
            if c < 0:
                c = v
            else:
                d = v
    t, a, b = t0, a0, b0
    seen0 = t0
    seen1 = -1
    seen2 = -1
    ntets = 1
    for step in range(1, limit + 1):
        code = glue[4 * t + c]
        if code < 0:
            out[0] = 0
            return
        slot = partner[4 * t + c]
        t = slot // 4
        na = perms[code, a]
        nb = perms[code, b]
        nc = perms[code, d]
        nd = perms[code, c]
        a, b, c, d = na, nb, nc, nd
        if t == t0 and ((a == a0 and b == b0) or (a == b0 and b == a0)):
            out[0] = 1
            out[1] = step
            out[2] = ntets
            out[3] = 1 if a != a0 else 0
            return
        if t != seen0 and t != seen1 and t != seen2:
            if ntets == 1:
                seen1 = t
            else:
                seen2 = t
            ntets += 1
    out[0] = 0


@njit(cache=True)
def _count(pairs, partner, face_perms, face_edges, edge_vertices, perms, inverse, census, prefix):
    npairs = pairs.shape[0]
    nslots = partner.shape[0]
    glue = np.full(nslots, -1, dtype=np.int64)
    idx = np.zeros(npairs + 1, dtype=np.int64)
    prunes = np.zeros(10, dtype=np.int64)
    walk = np.zeros(4, dtype=np.int64)
    nodes = 0
    leaves = 0
    base = prefix.shape[0]
    for j in range(base):
        glue[4 * pairs[j, 0] + pairs[j, 1]] = prefix[j]
        glue[4 * pairs[j, 2] + pairs[j, 3]] = inverse[prefix[j]]
    k = base
    while k >= base:
        if k == npairs:
            leaves += 1
            k -= 1
            if k < base:
                break
            glue[4 * pairs[k, 0] + pairs[k, 1]] = -1
            glue[4 * pairs[k, 2] + pairs[k, 3]] = -1
            idx[k] += 1
            continue
        if idx[k] >= 6:
            idx[k] = 0
            k -= 1
            if k >= base:
                glue[4 * pairs[k, 0] + pairs[k, 1]] = -1
                glue[4 * pairs[k, 2] + pairs[k, 3]] = -1
                idx[k] += 1
            continue
        t = pairs[k, 0]
        f = pairs[k, 1]
        u = pairs[k, 2]
        g = pairs[k, 3]
        code = face_perms[f, g, idx[k]]
        glue[4 * t + f] = code
        glue[4 * u + g] = inverse[code]
        reason = -1
        for i in range(3):
            _walk(t, face_edges[f, i], glue, partner, perms, edge_vertices, 3, walk)
            if walk[0] == 0:
                continue
            if walk[3] == 1:
                reason = _EDGE_REVERSED
                break
            if census and walk[1] <= 2:
                reason = _EDGE_DEGREE_LOW
                break
            if census and walk[1] == 3 and walk[2] == 3:
                reason = _EDGE_DEGREE3
                break
        if reason >= 0:
            prunes[reason] += 1
            glue[4 * t + f] = -1
            glue[4 * u + g] = -1
            idx[k] += 1
            continue
        nodes += 1
        k += 1
        idx[k] = 0
    return nodes, leaves, prunes


def count_untracked(pairing, census: bool, prefix=()) -> tuple[int, int, np.ndarray]:
    """Node, leaf and per-reason prune counts of the link-free search on one pairing.

    With a ``prefix`` the first pairs are glued as given (assumed to pass the
    tests) and only the subtree below is counted.
    """
    pairs = np.array(pairing.pairs, dtype=np.int64).reshape(-1, 4)
    partner = np.array([4 * u + g for row in pairing.partner for u, g in row], dtype=np.int64)
    pre = np.array(prefix, dtype=np.int64)
    if len(pre) > len(pairs):
        raise ValueError("prefix longer than the pairing")
    return _count(pairs, partner, _FACE_PERMS, _FACE_EDGES, _EDGE_VERTICES, _PERMS,
                  _INVERSE, census, pre)
