"""Connected 4-valent multigraphs: the candidate face pairing graphs.

Graphs are generated one vertex at a time.  Every connected 4-valent
multigraph on n >= 2 vertices can be obtained from one on n - 1 vertices by
either

* cutting two edges ``ab`` and ``cd`` and joining a new vertex to ``a, b, c, d``,
* or cutting one edge ``ab``, joining a new vertex to ``a, b`` and giving it a loop,

so the classes on n vertices are the deduplicated images of the classes on
n - 1 vertices.  Isomorphism classes are keyed by a canonical labelling
computed with nauty (through pynauty).
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence

import pynauty

MAX_ORDER = 13

Edge = tuple[int, int]
GraphCode = tuple[Edge, ...]


class GraphError(ValueError):
    """Base class for malformed graph input."""


class GraphSyntaxError(GraphError):
    pass


class DegreeError(GraphError):
    pass


class DisconnectedError(GraphError):
    pass


@dataclass(frozen=True, order=True)
class Multigraph:
    """A 4-valent multigraph on ``order`` vertices.

    ``edges`` is a sorted tuple of pairs ``(a, b)`` with ``a <= b``; a pair
    ``(a, a)`` is a loop and contributes 2 to the degree of ``a``.
    """

    order: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        edges = tuple(sorted((min(a, b), max(a, b)) for a, b in self.edges))
        object.__setattr__(self, "edges", edges)
        check_invariants(self.order, edges)

    @property
    def n(self) -> int:
        return self.order

    def degree(self, v: int) -> int:
        return sum((a == v) + (b == v) for a, b in self.edges)

    def multiplicity(self, a: int, b: int) -> int:
        key = (min(a, b), max(a, b))
        return sum(1 for e in self.edges if e == key)

    def adjacency(self) -> list[Counter]:
        """Neighbour multisets; a loop at v appears as v twice in adj[v]."""
        adj = [Counter() for _ in range(self.order)]
        for a, b in self.edges:
            adj[a][b] += 1
            adj[b][a] += 1
        return adj

    def relabel(self, perm: Sequence[int]) -> "Multigraph":
        """Return the graph with vertex v renamed to perm[v]."""
        return Multigraph(self.order, tuple((perm[a], perm[b]) for a, b in self.edges))

    def __str__(self) -> str:
        return render_graph(self)


def check_invariants(order: int, edges: Sequence[Edge]) -> None:
    if order < 1:
        raise GraphError(f"graph order must be positive, got {order}")
    if len(edges) != 2 * order:
        raise DegreeError(f"expected {2 * order} edges on {order} vertices, got {len(edges)}")
    deg = [0] * order
    for a, b in edges:
        if not (0 <= a < order and 0 <= b < order):
            raise GraphError(f"edge {a}-{b} out of range for order {order}")
        deg[a] += 1
        deg[b] += 1
    bad = [v for v, d in enumerate(deg) if d != 4]
    if bad:
        raise DegreeError(f"vertex {bad[0]} has degree {deg[bad[0]]}, expected 4")
    if not _connected(order, edges):
        raise DisconnectedError("graph is not connected")


def _connected(order: int, edges: Iterable[Edge]) -> bool:
    parent = list(range(order))

    def root(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = order
    for a, b in edges:
        ra, rb = root(a), root(b)
        if ra != rb:
            parent[ra] = rb
            comps -= 1
    return comps == 1


# --------------------------------------------------------------------------
# canonical form

def _nauty_graph(order: int, edges: Sequence[Edge]):
    """Encode a multigraph as a vertex-coloured simple graph.

    Original vertices are coloured by loop count.  A single edge stays a
    plain edge; a bundle of m >= 2 parallel edges becomes a subdivision
    vertex coloured by m.
    """
    loops = [0] * order
    mult: Counter = Counter()
    for a, b in edges:
        if a == b:
            loops[a] += 1
        else:
            mult[(a, b)] += 1
    adj: dict[int, list[int]] = {v: [] for v in range(order)}
    bundles: dict[int, list[int]] = {2: [], 3: [], 4: []}
    nxt = order
    for (a, b), m in mult.items():
        if m == 1:
            adj[a].append(b)
        else:
            adj[nxt] = [a, b]
            bundles[m].append(nxt)
            nxt += 1
    cells = [{v for v in range(order) if loops[v] == k} for k in (0, 1, 2)]
    cells += [set(bundles[m]) for m in (2, 3, 4)]
    shape = tuple(len(c) for c in cells)
    coloring = [c for c in cells if c]
    return pynauty.Graph(nxt, adjacency_dict=adj, vertex_coloring=coloring), shape


def _iso_key(order: int, edges: Sequence[Edge]) -> tuple:
    g, shape = _nauty_graph(order, edges)
    return shape, pynauty.certificate(g)


def _canonical_edges(order: int, edges: Sequence[Edge]) -> GraphCode:
    g, _ = _nauty_graph(order, edges)
    lab = pynauty.canon_label(g)
    # colour cells keep their order, so the original vertices come first
    pos = {v: i for i, v in enumerate(lab[:order])}
    assert len(pos) == order and all(v < order for v in pos)
    return tuple(sorted((min(pos[a], pos[b]), max(pos[a], pos[b])) for a, b in edges))


def canonical_code(g: Multigraph) -> GraphCode:
    """Relabeling-invariant code of ``g``: its canonically relabeled sorted edge list.

    The code is itself a valid edge list, so ``Multigraph(g.order, code)`` is the
    canonical representative and ``render_code`` turns it into parseable text.
    """
    check_invariants(g.order, g.edges)
    return _canonical_edges(g.order, g.edges)


def canonical_form(g: Multigraph) -> Multigraph:
    return Multigraph(g.order, canonical_code(g))


# --------------------------------------------------------------------------
# enumeration

def _children(order: int, edges: GraphCode) -> Iterator[list[Edge]]:
    v = order
    m = len(edges)
    seen = set()
    for i, j in combinations(range(m), 2):
        pair = (edges[i], edges[j])
        if pair in seen:
            continue
        seen.add(pair)
        (a, b), (c, d) = pair
        rest = [e for k, e in enumerate(edges) if k != i and k != j]
        rest += [(a, v), (b, v), (c, v), (d, v)]
        yield rest
    for i, e in enumerate(edges):
        if i and edges[i - 1] == e:
            continue
        a, b = e
        rest = [x for k, x in enumerate(edges) if k != i]
        rest += [(a, v), (b, v), (v, v)]
        yield rest


def _next_level(order: int, codes: Iterable[GraphCode]) -> list[GraphCode]:
    found: dict[tuple, list[Edge]] = {}
    for code in codes:
        for child in _children(order, code):
            key = _iso_key(order + 1, child)
            if key not in found:
                found[key] = child
    return sorted(_canonical_edges(order + 1, e) for e in found.values())


def enumerate_codes(n: int) -> list[GraphCode]:
    """Canonical codes of all connected 4-valent multigraphs on ``n`` vertices, sorted."""
    if not isinstance(n, int) or not 1 <= n <= MAX_ORDER:
        raise ValueError(f"n must be an integer in 1..{MAX_ORDER}, got {n!r}")
    level = [((0, 0), (0, 0))]
    for k in range(1, n):
        level = _next_level(k, level)
    return level


def enumerate_graphs(n: int) -> list[Multigraph]:
    """One representative per isomorphism class, sorted by canonical code.

    Each representative is in canonical form, i.e. ``canonical_code(g) == g.edges``.
    """
    return [Multigraph(n, code) for code in enumerate_codes(n)]


# --------------------------------------------------------------------------
# text format:  "<n>: a-b a-b ..."

_LINE = re.compile(r"^\s*(\d+)\s*:\s*(.*?)\s*$")
_EDGE = re.compile(r"^(\d+)-(\d+)$")


def parse_graph(text: str) -> Multigraph:
    m = _LINE.match(text)
    if not m:
        raise GraphSyntaxError(f"cannot parse graph line: {text!r}")
    order = int(m.group(1))
    edges = []
    for tok in m.group(2).split():
        em = _EDGE.match(tok)
        if not em:
            raise GraphSyntaxError(f"bad edge token {tok!r}")
        edges.append((int(em.group(1)), int(em.group(2))))
    return Multigraph(order, tuple(edges))


def render_graph(g: Multigraph) -> str:
    return f"{g.order}: " + " ".join(f"{a}-{b}" for a, b in g.edges)


def read_graphs(lines: Iterable[str]) -> Iterator[tuple[int, Multigraph]]:
    """Yield ``(line_number, graph)`` pairs, skipping blanks, comments and the count trailer."""
    for lineno, line in enumerate(lines, 1):
        s = line.strip()
        if not s or s.startswith("#") or s.startswith("count"):
            continue
        try:
            yield lineno, parse_graph(s)
        except GraphError as exc:
            raise type(exc)(f"line {lineno}: {exc}") from None


def write_graphs(graphs: Sequence[Multigraph], fh) -> None:
    for g in graphs:
        fh.write(render_graph(g) + "\n")
    fh.write(f"count {len(graphs)}\n")
