"""Gluings of tetrahedra.

Conventions: face ``f`` of a tetrahedron is the face opposite vertex ``f``.
A gluing of face ``f`` of tetrahedron ``t`` to face ``g`` of ``u`` is a
permutation ``p`` of {0,1,2,3} with ``p[f] == g``; vertex ``a`` of ``t``
lands on vertex ``p[a]`` of ``u``.  Tetrahedron edges are canonically
oriented from the lower to the higher vertex and numbered in
``EDGE_VERTICES`` order.  Edge slot ``6*t + e`` and corner slot ``4*t + v``
index the individual tetrahedron edges and vertices.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from itertools import permutations
from typing import Sequence

from .multigraph import Multigraph

# --------------------------------------------------------------------------
# S4

PERMS: tuple[tuple[int, ...], ...] = tuple(permutations(range(4)))
PERM_CODE = {p: i for i, p in enumerate(PERMS)}
IDENTITY = 0


def _sign(seq: Sequence[int]) -> int:
    inv = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return -1 if inv % 2 else 1


SIGN = tuple(_sign(p) for p in PERMS)
INVERSE = tuple(PERM_CODE[tuple(p.index(i) for i in range(4))] for p in PERMS)
# COMPOSE[a][b] is "a after b"
COMPOSE = tuple(tuple(PERM_CODE[tuple(PERMS[a][PERMS[b][i]] for i in range(4))]
                      for b in range(24)) for a in range(24))


@dataclass(frozen=True)
class Perm4:
    """A permutation of {0,1,2,3}, identified by its lexicographic rank."""

    code: int

    @classmethod
    def from_images(cls, images: Sequence[int]) -> "Perm4":
        return cls(PERM_CODE[tuple(images)])

    @property
    def images(self) -> tuple[int, ...]:
        return PERMS[self.code]

    def __getitem__(self, i: int) -> int:
        return PERMS[self.code][i]

    def __mul__(self, other: "Perm4") -> "Perm4":
        return Perm4(COMPOSE[self.code][other.code])

    def inverse(self) -> "Perm4":
        return Perm4(INVERSE[self.code])

    def sign(self) -> int:
        return SIGN[self.code]


EDGE_VERTICES: tuple[tuple[int, int], ...] = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
EDGE_NUMBER = {}
for _i, (_a, _b) in enumerate(EDGE_VERTICES):
    EDGE_NUMBER[(_a, _b)] = EDGE_NUMBER[(_b, _a)] = _i

FACE_VERTICES = tuple(tuple(v for v in range(4) if v != f) for f in range(4))

# For a face (a < b < c): its edges ab, bc, ac and whether walking a->b->c->a
# traverses each against its canonical orientation.
FACE_EDGES = tuple((EDGE_NUMBER[(a, b)], EDGE_NUMBER[(b, c)], EDGE_NUMBER[(a, c)])
                   for a, b, c in FACE_VERTICES)
FACE_EDGE_AGAINST = (False, False, True)

# Codes of the six gluings that send face f onto face g.
FACE_PERMS = tuple(tuple(tuple(c for c in range(24) if PERMS[c][f] == g) for g in range(4))
                   for f in range(4))


def _link_reversed(v: int, p: tuple[int, ...]) -> bool:
    # Corner triangles are oriented by the ascending order of the three
    # opposite vertices.  Two glued triangles are consistently oriented when
    # they induce opposite directions on the shared arc, so an order-preserving
    # correspondence means the canonical orientations disagree.
    src = [w for w in range(4) if w != v]
    return _sign([p[w] for w in src]) == 1


def _edge_ids(f: int, c: int) -> tuple:
    p = PERMS[c]
    a, b, d = FACE_VERTICES[f]
    return tuple((EDGE_NUMBER[(x, y)], EDGE_NUMBER[(p[x], p[y])], p[x] > p[y])
                 for x, y in ((a, b), (a, d), (b, d)))


# EDGE_IDS[f][code]: three (edge of t, edge of u, reversed)
EDGE_IDS = tuple(tuple(_edge_ids(f, c) for c in range(24)) for f in range(4))
# CORNER_IDS[f][code]: three (vertex of t, vertex of u, link reversed)
CORNER_IDS = tuple(tuple(
    tuple((v, PERMS[c][v], _link_reversed(v, PERMS[c])) for v in FACE_VERTICES[f])
    for c in range(24)) for f in range(4))


# --------------------------------------------------------------------------
# face pairings

@dataclass(frozen=True)
class FacePairing:
    """A perfect matching of the 4n face slots.

    ``partner[t][f] == (u, g)``.  ``pairs`` lists ``(t, f, u, g)`` in the
    order the search glues them, with ``(t, f) < (u, g)``.
    """

    n: int
    partner: tuple[tuple[tuple[int, int], ...], ...]
    pairs: tuple[tuple[int, int, int, int], ...]

    def quotient(self) -> Multigraph:
        return Multigraph(self.n, tuple((t, u) for t, _, u, _ in self.pairs))


def realize_pairing(g: Multigraph) -> FacePairing:
    """Assign faces to graph edges, lowest unused face first, in edge order."""
    used = [0] * g.order
    partner = [[None] * 4 for _ in range(g.order)]
    pairs = []
    for a, b in g.edges:
        f = used[a]
        used[a] += 1
        h = used[b]
        used[b] += 1
        partner[a][f] = (b, h)
        partner[b][h] = (a, f)
        pairs.append((a, f, b, h))
    return FacePairing(g.order, tuple(tuple(row) for row in partner), tuple(pairs))


def induced_edge_identifications(pairing: FacePairing, pair: int, perm: Perm4 | int):
    """Edge-slot identifications ``(slot_a, slot_b, reversed)`` made by one gluing."""
    t, f, u, g = pairing.pairs[pair]
    code = perm.code if isinstance(perm, Perm4) else perm
    if PERMS[code][f] != g:
        raise ValueError(f"perm {PERMS[code]} does not send face {f} to face {g}")
    return [(6 * t + a, 6 * u + b, r) for a, b, r in EDGE_IDS[f][code]]


def induced_vertex_identifications(pairing: FacePairing, pair: int, perm: Perm4 | int):
    """Corner-slot identifications ``(slot_a, slot_b, link_reversed)`` made by one gluing."""
    t, f, u, g = pairing.pairs[pair]
    code = perm.code if isinstance(perm, Perm4) else perm
    if PERMS[code][f] != g:
        raise ValueError(f"perm {PERMS[code]} does not send face {f} to face {g}")
    return [(4 * t + a, 4 * u + b, r) for a, b, r in CORNER_IDS[f][code]]


# --------------------------------------------------------------------------
# triangulations

Gluing = tuple[int, int, int]  # (partner tetrahedron, partner face, perm code)


class IncompleteError(ValueError):
    pass


@dataclass(frozen=True)
class Triangulation:
    """``gluings[t][f] = (u, g, code)``; ``None`` marks an unglued face."""

    n: int
    gluings: tuple[tuple[Gluing | None, ...], ...]

    def __post_init__(self):
        if len(self.gluings) != self.n or any(len(row) != 4 for row in self.gluings):
            raise ValueError("gluing table has the wrong shape")
        for t, row in enumerate(self.gluings):
            for f, gl in enumerate(row):
                if gl is None:
                    continue
                u, g, c = gl
                if not (0 <= u < self.n and 0 <= g < 4 and 0 <= c < 24):
                    raise ValueError(f"gluing {gl} out of range")
                if PERMS[c][f] != g:
                    raise ValueError(f"gluing at {t}:{f} does not map face {f} to face {g}")
                if (u, g) == (t, f):
                    raise ValueError(f"face {t}:{f} glued to itself")
                back = self.gluings[u][g]
                if back != (t, f, INVERSE[c]):
                    raise ValueError(f"gluing at {t}:{f} is not matched by its inverse")

    @classmethod
    def from_pairing(cls, pairing: FacePairing, codes: Sequence[int]) -> "Triangulation":
        table = [[None] * 4 for _ in range(pairing.n)]
        for (t, f, u, g), c in zip(pairing.pairs, codes):
            table[t][f] = (u, g, c)
            table[u][g] = (t, f, INVERSE[c])
        return cls(pairing.n, tuple(tuple(r) for r in table))

    @property
    def closed(self) -> bool:
        return all(gl is not None for row in self.gluings for gl in row)

    def relabel(self, tet_perm: Sequence[int], vertex_perms: Sequence[int]) -> "Triangulation":
        """Rename tetrahedron t to tet_perm[t], relabelling its vertices by the code vertex_perms[t]."""
        table = [[None] * 4 for _ in range(self.n)]
        for t, row in enumerate(self.gluings):
            for f, gl in enumerate(row):
                if gl is None:
                    continue
                u, g, c = gl
                rt, ru = vertex_perms[t], vertex_perms[u]
                nc = COMPOSE[COMPOSE[ru][c]][INVERSE[rt]]
                table[tet_perm[t]][PERMS[rt][f]] = (tet_perm[u], PERMS[ru][g], nc)
        return Triangulation(self.n, tuple(tuple(r) for r in table))


def _classes(count: int, relations) -> tuple[list[int], list[bool], bool]:
    """Label connected components of an identification graph with parities.

    Returns (component label, parity relative to the component root, consistent).
    """
    adj = [[] for _ in range(count)]
    for x, y, r in relations:
        adj[x].append((y, r))
        adj[y].append((x, r))
    label = [-1] * count
    par = [False] * count
    ok = True
    nxt = 0
    for s in range(count):
        if label[s] >= 0:
            continue
        label[s] = nxt
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y, r in adj[x]:
                want = par[x] ^ r
                if label[y] < 0:
                    label[y] = nxt
                    par[y] = want
                    queue.append(y)
                elif par[y] != want:
                    ok = False
        nxt += 1
    return label, par, ok


@dataclass(frozen=True)
class Skeleton:
    """Edge and vertex classes of a triangulation, built from scratch."""

    n: int
    edge_label: tuple[int, ...]
    edge_parity: tuple[bool, ...]
    edge_consistent: bool
    vertex_label: tuple[int, ...]
    vertex_consistent: bool
    num_edges: int
    num_vertices: int

    def edge_degree(self, cls: int) -> int:
        return self.edge_label.count(cls)


def skeleton(t: Triangulation) -> Skeleton:
    edge_rel = []
    corner_rel = []
    for a, row in enumerate(t.gluings):
        for f, gl in enumerate(row):
            if gl is None:
                continue
            u, g, c = gl
            if (a, f) > (u, g):
                continue
            edge_rel += [(6 * a + x, 6 * u + y, r) for x, y, r in EDGE_IDS[f][c]]
            corner_rel += [(4 * a + x, 4 * u + y, r) for x, y, r in CORNER_IDS[f][c]]
    el, ep, eok = _classes(6 * t.n, edge_rel)
    vl, _, vok = _classes(4 * t.n, corner_rel)
    return Skeleton(t.n, tuple(el), tuple(ep), eok, tuple(vl), vok,
                    len(set(el)), len(set(vl)))


@dataclass(frozen=True)
class ClosedReport:
    is_3mfd: bool
    vertices: int
    edges: int
    orientable: bool


def is_orientable(t: Triangulation) -> bool:
    """Whether tetrahedron orientations can be chosen compatibly across every gluing.

    Glued by the identity, two tetrahedra sit on opposite sides of their common
    face, so equal orientations require an odd gluing permutation.
    """
    rel = []
    for a, row in enumerate(t.gluings):
        for f, gl in enumerate(row):
            if gl is not None:
                u, _, c = gl
                rel.append((a, u, SIGN[c] == 1))
    return _classes(t.n, rel)[2]


def validate_closed(t: Triangulation) -> ClosedReport:
    if not t.closed:
        raise IncompleteError("triangulation has unglued faces")
    sk = skeleton(t)
    is_3mfd = (sk.edge_consistent and sk.vertex_consistent
               and sk.num_vertices - sk.num_edges + t.n == 0)
    return ClosedReport(is_3mfd, sk.num_vertices, sk.num_edges, is_orientable(t))


@dataclass(frozen=True)
class CensusReport:
    """Local properties every closed minimal P2-irreducible triangulation has (n >= 3)."""

    one_vertex: bool
    edge_count_ok: bool
    no_low_degree_edge: bool
    no_degree3_distinct_tets: bool
    no_cone_face: bool
    no_l31_face: bool

    @property
    def ok(self) -> bool:
        return all((self.one_vertex, self.edge_count_ok, self.no_low_degree_edge,
                    self.no_degree3_distinct_tets, self.no_cone_face, self.no_l31_face))


def face_pattern(labels: Sequence[int], parities: Sequence[bool], t: int, f: int) -> str:
    """Classify face f of tetrahedron t as "cone", "l31" or "ok" from edge-slot classes."""
    slots = [6 * t + e for e in FACE_EDGES[f]]
    cls = [labels[s] for s in slots]
    walk = [parities[s] ^ FACE_EDGE_AGAINST[i] for i, s in enumerate(slots)]
    for i in range(3):
        for j in range(i + 1, 3):
            if cls[i] == cls[j] and walk[i] != walk[j]:
                return "cone"
    if cls[0] == cls[1] == cls[2]:
        return "l31"
    return "ok"


def census_report(t: Triangulation) -> CensusReport:
    if not t.closed:
        raise IncompleteError("triangulation has unglued faces")
    sk = skeleton(t)
    members: dict[int, list[int]] = {}
    for slot, cls in enumerate(sk.edge_label):
        members.setdefault(cls, []).append(slot)
    low = any(len(m) <= 2 for m in members.values())
    deg3 = any(len(m) == 3 and len({s // 6 for s in m}) == 3 for m in members.values())
    patterns = {face_pattern(sk.edge_label, sk.edge_parity, a, f)
                for a in range(t.n) for f in range(4)}
    return CensusReport(
        one_vertex=sk.num_vertices == 1,
        edge_count_ok=sk.num_edges == t.n + 1,
        no_low_degree_edge=not low,
        no_degree3_distinct_tets=not deg3,
        no_cone_face="cone" not in patterns,
        no_l31_face="l31" not in patterns,
    )


# --------------------------------------------------------------------------
# isomorphism signatures

_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


def _b36(x: int, width: int) -> str:
    out = []
    for _ in range(width):
        x, r = divmod(x, 36)
        out.append(_DIGITS[r])
    if x:
        raise ValueError("value too wide")
    return "".join(reversed(out))


def _relabelled_sequence(t: Triangulation, start: int, perm: int) -> list[int]:
    index = [-1] * t.n
    relab = [0] * t.n
    order = [start]
    index[start] = 0
    relab[start] = perm
    seq = []
    for i in range(t.n):
        a = order[i]
        inv = INVERSE[relab[a]]
        for face in range(4):
            f = PERMS[inv][face]
            u, g, c = t.gluings[a][f]
            if index[u] < 0:
                index[u] = len(order)
                order.append(u)
                # label u so that this gluing reads as the identity
                relab[u] = COMPOSE[relab[a]][INVERSE[c]]
            nc = COMPOSE[COMPOSE[relab[u]][c]][inv]
            seq.append((index[u] * 4 + PERMS[relab[u]][g]) * 24 + nc)
    return seq


def iso_signature(t: Triangulation) -> str:
    """Lowercase base-36 code, equal for combinatorially isomorphic triangulations."""
    if not t.closed:
        raise IncompleteError("triangulation has unglued faces")
    best = min(_relabelled_sequence(t, s, p) for s in range(t.n) for p in range(24))
    width = len(_b36(96 * t.n, 8).lstrip("0")) or 1
    return _b36(t.n, 2) + "".join(_b36(x, width) for x in best)


def from_signature(sig: str) -> Triangulation:
    """Rebuild the relabelled triangulation a signature encodes."""
    try:
        n = int(sig[:2], 36)
    except ValueError:
        raise ValueError(f"bad signature {sig!r}") from None
    width = len(_b36(96 * n, 8).lstrip("0")) or 1
    body = sig[2:]
    if n < 1 or len(body) != 4 * n * width:
        raise ValueError(f"bad signature length for {n} tetrahedra")
    table = [[None] * 4 for _ in range(n)]
    for k in range(4 * n):
        x = int(body[k * width:(k + 1) * width], 36)
        rest, c = divmod(x, 24)
        u, g = divmod(rest, 4)
        if u >= n:
            raise ValueError(f"signature names tetrahedron {u} of {n}")
        table[k // 4][k % 4] = (u, g, c)
    return Triangulation(n, tuple(tuple(r) for r in table))


# --------------------------------------------------------------------------
# text format:  "n | u,g,c u,g,c u,g,c u,g,c | ..."

def render_triangulation(t: Triangulation) -> str:
    blocks = [" ".join("-" if gl is None else f"{gl[0]},{gl[1]},{gl[2]}" for gl in row)
              for row in t.gluings]
    return f"{t.n} | " + " | ".join(blocks)


_TOKEN = re.compile(r"^(\d+),(\d+),(\d+)$")


def parse_triangulation(text: str) -> Triangulation:
    parts = [p.strip() for p in text.strip().split("|")]
    try:
        n = int(parts[0])
    except ValueError:
        raise ValueError(f"bad tetrahedron count in {text!r}") from None
    if len(parts) != n + 1:
        raise ValueError(f"expected {n} tetrahedron blocks, got {len(parts) - 1}")
    table = []
    for block in parts[1:]:
        toks = block.split()
        if len(toks) != 4:
            raise ValueError(f"expected 4 gluings per tetrahedron, got {block!r}")
        row = []
        for tok in toks:
            if tok == "-":
                row.append(None)
                continue
            m = _TOKEN.match(tok)
            if not m:
                raise ValueError(f"bad gluing token {tok!r}")
            row.append(tuple(int(x) for x in m.groups()))
        table.append(tuple(row))
    return Triangulation(n, tuple(table))
