"""Slow, independent reference computations used by several test modules."""

from itertools import permutations, product

import numpy as np

from tricensus.triangulation import FACE_PERMS, PERMS, Triangulation, realize_pairing

S4 = list(permutations(range(4)))


def all_closed(graph_list):
    """Every complete gluing of every realised pairing: (pairing, codes, triangulation)."""
    for g in graph_list:
        pairing = realize_pairing(g)
        choices = [FACE_PERMS[f][h] for _, f, _, h in pairing.pairs]
        for codes in product(*choices):
            yield pairing, codes, Triangulation.from_pairing(pairing, codes)


def _perm_parity(seq):
    seq = list(seq)
    odd = False
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                odd = not odd
    return odd


class _DSU:
    def __init__(self):
        self.p = {}

    def find(self, x):
        self.p.setdefault(x, x)
        while self.p[x] != x:
            x = self.p[x]
        return x

    def union(self, a, b):
        self.p[self.find(a)] = self.find(b)


def link_surfaces(t: Triangulation):
    """Build every vertex link as a surface of corner triangles.

    Returns a list of (orientable, euler characteristic), one per link.
    Triangle (tet, v) has corners at the other three vertices, oriented by
    their ascending cyclic order; its side opposite corner f lies in face f.
    """
    corners = [(a, v) for a in range(t.n) for v in range(4)]
    tri = _DSU()
    pts = _DSU()
    rel = []  # (triangle, triangle, signs must differ)
    sides = 0
    for a, row in enumerate(t.gluings):
        for f, (u, g, c) in enumerate(row):
            p = PERMS[c]
            for v in range(4):
                if v == f:
                    continue
                sides += 1
                x, y = (w for w in range(4) if w not in (v, f))
                src, dst = (a, v), (u, p[v])
                tri.union(src, dst)
                pts.union((a, v, x), (u, p[v], p[x]))
                pts.union((a, v, y), (u, p[v], p[y]))
                d1 = _direction(v, x, y)
                d2 = _direction(p[v], p[x], p[y])
                rel.append((src, dst, d1 == d2))
    comps = {}
    for c in corners:
        comps.setdefault(tri.find(c), []).append(c)
    out = []
    for root, members in comps.items():
        mset = set(members)
        faces = len(members)
        edges = 3 * faces // 2
        verts = len({pts.find((a, v, w)) for a, v in members for w in range(4) if w != v})
        sign = {members[0]: False}
        ok = True
        changed = True
        local = [r for r in rel if r[0] in mset]
        while changed:
            changed = False
            for s, d, differ in local:
                if s in sign and d not in sign:
                    sign[d] = sign[s] ^ differ
                    changed = True
                elif d in sign and s not in sign:
                    sign[s] = sign[d] ^ differ
                    changed = True
                elif s in sign and d in sign and sign[d] != sign[s] ^ differ:
                    ok = False
        out.append((ok, verts - edges + faces))
    return out


def _direction(v, x, y):
    """+1 if x -> y follows the ascending cyclic order of the corners of triangle v."""
    cyc = [w for w in range(4) if w != v]
    i = cyc.index(x)
    return 1 if cyc[(i + 1) % 3] == y else -1


def h3_orientable(t: Triangulation) -> bool:
    """Orientable iff the simplicial 3-chain complex has a nonzero 3-cycle."""
    rows = []
    for a, row in enumerate(t.gluings):
        for f, (u, g, c) in enumerate(row):
            if (a, f) > (u, g):
                continue
            p = PERMS[c]
            face = [w for w in range(4) if w != f]
            image = [p[w] for w in face]
            # the face of u with its vertices listed ascending versus the image order
            s = -1 if _perm_parity(image) else 1
            r = np.zeros(t.n)
            r[a] += (-1) ** f
            r[u] += (-1) ** g * s
            rows.append(r)
    m = np.array(rows)
    return np.linalg.matrix_rank(m) < t.n


def iso_key(t: Triangulation):
    """Lexicographically least gluing table over all relabellings."""
    best = None
    for tp in permutations(range(t.n)):
        for vps in product(S4, repeat=t.n):
            inv = [[0] * 4 for _ in range(t.n)]
            for a in range(t.n):
                for w in range(4):
                    inv[a][vps[a][w]] = w
            table = [None] * t.n
            for a in range(t.n):
                row = [None] * 4
                for nf in range(4):
                    f = inv[a][nf]
                    u, g, c = t.gluings[a][f]
                    p = PERMS[c]
                    images = tuple(vps[u][p[inv[a][x]]] for x in range(4))
                    row[nf] = (tp[u], vps[u][g], images)
                table[tp[a]] = tuple(row)
            key = tuple(table)
            if best is None or key < best:
                best = key
    return best
