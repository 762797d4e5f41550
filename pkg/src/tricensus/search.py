"""Depth-first search over the gluings of a face pairing.

Each of the 2n face pairs is glued by one of six permutations.  After every
gluing the induced edge and vertex identifications are pushed through
rollback union-find structures and the partial triangulation is tested; a
failed test undoes the gluing and the branch is abandoned.  Completed
triangulations are checked from scratch before their signatures are kept.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .graphfilter import FilterVerdict, filter_verdict
from .multigraph import Multigraph, enumerate_graphs
from .triangulation import (CORNER_IDS, EDGE_IDS, EDGE_VERTICES, FACE_EDGE_AGAINST, FACE_EDGES,
                            FACE_PERMS, INVERSE, PERMS, SIGN, FacePairing, Triangulation,
                            census_report, iso_signature, realize_pairing, validate_closed)
from .ufind import Mode, Outcome, RollbackUF


class Orientation(enum.Enum):
    ORIENTABLE = "orientable"
    NONORIENTABLE = "nonorientable"
    BOTH = "both"


class PruneReason(enum.Enum):
    EDGE_REVERSED = "edge_reversed"
    VERTEX_LINK_NONORIENTABLE = "vertex_link_nonorientable"
    EDGE_DEGREE_LOW = "edge_degree_low"
    EDGE_DEGREE3_DISTINCT_TETS = "edge_degree3_distinct_tets"
    VERTEX_LINK_CLOSED_EARLY = "vertex_link_closed_early"
    FACE_CONE = "face_cone"
    FACE_ALL_EDGES_IDENTIFIED = "face_all_edges_identified"
    VERTEX_CLASS_BOUND = "vertex_class_bound"
    EDGE_CLASS_BOUND = "edge_class_bound"
    ORIENTATION_PARITY = "orientation_parity"


PRUNE_REASONS = tuple(r.value for r in PruneReason)


@dataclass(frozen=True)
class SearchConfig:
    """Search parameters.

    ``relaxed`` drops every test that relies on minimality (edge degrees,
    early vertex closure, cone faces, class-count bounds, and the final one
    vertex / n + 1 edge requirement), leaving only the 3-manifold tests.
    """

    mode: Orientation = Orientation.BOTH
    track_vertex_links: bool = True
    track_edge_links: bool = True
    relaxed: bool = False

    @property
    def census_constraints(self) -> bool:
        return not self.relaxed

    @classmethod
    def from_links(cls, links: str, **kw) -> "SearchConfig":
        """Build from a ``none`` / ``edge`` / ``vertex`` / ``both`` tracking choice."""
        if links not in ("none", "edge", "vertex", "both"):
            raise ValueError(f"unknown link tracking {links!r}")
        return cls(track_vertex_links=links in ("vertex", "both"),
                   track_edge_links=links in ("edge", "both"), **kw)


@dataclass
class SearchStats:
    nodes: int = 0
    leaves: int = 0
    survivors: int = 0
    prunes: Counter = field(default_factory=Counter)

    def __iadd__(self, other: "SearchStats") -> "SearchStats":
        self.nodes += other.nodes
        self.leaves += other.leaves
        self.survivors += other.survivors
        self.prunes.update(other.prunes)
        return self

    def as_row(self) -> dict[str, int]:
        row = {"nodes": self.nodes, "leaves": self.leaves, "survivors": self.survivors}
        for r in PRUNE_REASONS:
            row[r] = self.prunes.get(r, 0)
        return row


class SearchState:
    """A partially glued triangulation with live edge and vertex classes."""

    def __init__(self, pairing: FacePairing, cfg: SearchConfig):
        n = pairing.n
        if cfg.census_constraints and n < 3:
            raise ValueError("census constraints need n >= 3; use relaxed mode for n < 3")
        self.pairing = pairing
        self.cfg = cfg
        self.n = n
        self.k = 0
        self.chosen: list[int | None] = [None] * (2 * n)
        self.glue = [-1] * (4 * n)  # perm code on face slot 4t + f
        self.partner = [4 * u + g for row in pairing.partner for u, g in row]
        self.edge_uf = RollbackUF(6 * n, Mode.EDGE) if cfg.track_edge_links else None
        self.vertex_uf = RollbackUF(4 * n, Mode.VERTEX, 3) if cfg.track_vertex_links else None
        self.tet_uf = RollbackUF(n, Mode.EDGE) if cfg.mode is Orientation.ORIENTABLE else None
        self._marks: list[tuple[int, int, int]] = []
        self.stats = SearchStats()

    # -- helpers -----------------------------------------------------------

    def allowed(self, code: int) -> bool:
        """Orientable mode: whether ``code`` keeps tetrahedron orientations consistent."""
        if self.tet_uf is None:
            return True
        t, _, u, _ = self.pairing.pairs[self.k]
        rt, pt = self.tet_uf.find(t)
        ru, pu = self.tet_uf.find(u)
        return rt != ru or (pt ^ pu) == (SIGN[code] == 1)

    def walk_edge(self, slot: int, limit: int) -> tuple[bool, int, set[int], bool]:
        """Walk around the link of an edge slot through glued faces.

        Returns ``(closed, degree, tetrahedra, reversed)``; ``closed`` is false
        if an unglued face is met or ``limit`` steps pass without returning.
        """
        t0, e0 = divmod(slot, 6)
        a0, b0 = EDGE_VERTICES[e0]
        c, d = (v for v in range(4) if v != a0 and v != b0)
        t, a, b = t0, a0, b0
        tets = {t0}
        glue = self.glue
        partner = self.partner
        for step in range(1, limit + 1):
            code = glue[4 * t + c]
            if code < 0:
                return False, step, tets, False
            p = PERMS[code]
            t = partner[4 * t + c] // 4
            a, b, c, d = p[a], p[b], p[d], p[c]
            if t == t0 and {a, b} == {a0, b0}:
                return True, step, tets, (a, b) != (a0, b0)
            tets.add(t)
        return False, limit, tets, False

    # -- gluing ------------------------------------------------------------

    def try_glue(self, code: int) -> PruneReason | None:
        """Glue the next pair by ``code``; return None if accepted, else the prune reason."""
        pair = self.k
        t, f, u, g = self.pairing.pairs[pair]
        if PERMS[code][f] != g:
            raise ValueError(f"perm code {code} does not send face {f} to face {g}")
        cfg = self.cfg
        census = cfg.census_constraints
        n = self.n
        remaining = 2 * n - (pair + 1)
        euf, vuf, tuf = self.edge_uf, self.vertex_uf, self.tet_uf
        ne = nv = nt = 0
        reason = None

        if tuf is not None:
            if tuf.union(t, u, SIGN[code] == 1) is Outcome.REDUNDANT_CONFLICT:
                tuf.undo()
                self.stats.prunes[PruneReason.ORIENTATION_PARITY.value] += 1
                return PruneReason.ORIENTATION_PARITY
            nt = 1

        self.glue[4 * t + f] = code
        self.glue[4 * u + g] = INVERSE[code]

        completed = []
        merged = False
        if euf is not None:
            for x, y, r in EDGE_IDS[f][code]:
                out = euf.union(6 * t + x, 6 * u + y, r)
                ne += 1
                if out is Outcome.REDUNDANT_CONFLICT:
                    reason = PruneReason.EDGE_REVERSED
                    break
                if out is Outcome.MERGED:
                    merged = True
                else:
                    completed.append(6 * t + x)

        if reason is None and vuf is not None:
            for x, y, r in CORNER_IDS[f][code]:
                out = vuf.union(4 * t + x, 4 * u + y, r)
                nv += 1
                if out is Outcome.REDUNDANT_CONFLICT:
                    reason = PruneReason.VERTEX_LINK_NONORIENTABLE
                    break

        if reason is None:
            if euf is not None:
                if census:
                    for slot in completed:
                        root, _ = euf.find(slot)
                        size = euf.size[root]
                        if size <= 2:
                            reason = PruneReason.EDGE_DEGREE_LOW
                            break
                        if size == 3 and len(self.walk_edge(slot, 3)[2]) == 3:
                            reason = PruneReason.EDGE_DEGREE3_DISTINCT_TETS
                            break
            else:
                reason = self._local_edge_checks(t, f, census)

        if reason is None and census and vuf is not None and remaining > 0:
            for x in FACE_CORNERS[f]:
                root, _ = vuf.find(4 * t + x)
                if vuf.boundary[root] == 0:
                    reason = PruneReason.VERTEX_LINK_CLOSED_EARLY
                    break

        if reason is None and census and merged:
            reason = self._face_scan()

        if reason is None and census:
            if vuf is not None and vuf.classes > 1 + 3 * remaining:
                reason = PruneReason.VERTEX_CLASS_BOUND
            elif euf is not None and not (n + 1 <= euf.classes <= n + 1 + 3 * remaining):
                reason = PruneReason.EDGE_CLASS_BOUND

        if reason is not None:
            for _ in range(ne):
                euf.undo()
            for _ in range(nv):
                vuf.undo()
            if nt:
                tuf.undo()
            self.glue[4 * t + f] = -1
            self.glue[4 * u + g] = -1
            self.stats.prunes[reason.value] += 1
            return reason

        self._marks.append((ne, nv, nt))
        self.chosen[pair] = code
        self.k += 1
        self.stats.nodes += 1
        return None

    def _local_edge_checks(self, t: int, f: int, census: bool) -> PruneReason | None:
        # Without edge classes, only short edge links are inspected.
        for e in FACE_EDGES[f]:
            closed, degree, tets, rev = self.walk_edge(6 * t + e, 3)
            if not closed:
                continue
            if rev:
                return PruneReason.EDGE_REVERSED
            if census and degree <= 2:
                return PruneReason.EDGE_DEGREE_LOW
            if census and degree == 3 and len(tets) == 3:
                return PruneReason.EDGE_DEGREE3_DISTINCT_TETS
        return None

    def _face_scan(self) -> PruneReason | None:
        find = self.edge_uf.find
        for t in range(self.n):
            base = 6 * t
            for f in range(4):
                e0, e1, e2 = FACE_EDGES[f]
                r0, p0 = find(base + e0)
                r1, p1 = find(base + e1)
                r2, p2 = find(base + e2)
                p2 = not p2  # FACE_EDGE_AGAINST: the third edge is walked backwards
                if (r0 == r1 and p0 != p1) or (r0 == r2 and p0 != p2) or (r1 == r2 and p1 != p2):
                    return PruneReason.FACE_CONE
                if r0 == r1 == r2:
                    return PruneReason.FACE_ALL_EDGES_IDENTIFIED
        return None

    def unglue(self) -> None:
        if self.k == 0:
            raise IndexError("nothing to unglue")
        self.k -= 1
        ne, nv, nt = self._marks.pop()
        for _ in range(ne):
            self.edge_uf.undo()
        for _ in range(nv):
            self.vertex_uf.undo()
        if nt:
            self.tet_uf.undo()
        t, f, u, g = self.pairing.pairs[self.k]
        self.glue[4 * t + f] = -1
        self.glue[4 * u + g] = -1
        self.chosen[self.k] = None

    def snapshot(self) -> tuple:
        return (self.k, tuple(self.chosen), tuple(self.glue),
                self.edge_uf.snapshot() if self.edge_uf else None,
                self.vertex_uf.snapshot() if self.vertex_uf else None,
                self.tet_uf.snapshot() if self.tet_uf else None)

    def triangulation(self) -> Triangulation:
        return Triangulation.from_pairing(self.pairing, self.chosen)

    def choices(self) -> tuple[int, ...]:
        t, f, u, g = self.pairing.pairs[self.k]
        return FACE_PERMS[f][g]


FACE_CORNERS = tuple(tuple(v for v in range(4) if v != f) for f in range(4))
assert FACE_EDGE_AGAINST == (False, False, True)


def accept_closed(t: Triangulation, cfg: SearchConfig) -> bool:
    """Final test on a completely glued triangulation, independent of the live structures."""
    rep = validate_closed(t)
    if not rep.is_3mfd:
        return False
    if cfg.mode is Orientation.ORIENTABLE and not rep.orientable:
        return False
    if cfg.mode is Orientation.NONORIENTABLE and rep.orientable:
        return False
    if cfg.census_constraints and not census_report(t).ok:
        return False
    return True


# --------------------------------------------------------------------------
# driving the search

@dataclass(frozen=True)
class WorkUnit:
    graph_index: int
    prefix: tuple[int, ...]


@dataclass
class PairingResult:
    signatures: set[str]
    stats: SearchStats


def _dfs(state: SearchState, out: set[str], on_leaf=None) -> None:
    total = 2 * state.n
    if state.k == total:
        state.stats.leaves += 1
        tri = state.triangulation()
        if on_leaf is not None:
            on_leaf(state)
        if accept_closed(tri, state.cfg):
            state.stats.survivors += 1
            out.add(iso_signature(tri))
        return
    for code in state.choices():
        if not state.allowed(code):
            state.stats.prunes[PruneReason.ORIENTATION_PARITY.value] += 1
            continue
        if state.try_glue(code) is None:
            _dfs(state, out, on_leaf)
            state.unglue()


def process_unit(pairing: FacePairing, cfg: SearchConfig, prefix: Iterable[int] = (),
                 on_leaf=None) -> PairingResult:
    """Search below a fixed choice of gluings for the first pairs.

    Nodes and prunes met while replaying the prefix are not counted.
    """
    state = SearchState(pairing, cfg)
    out: set[str] = set()
    for code in prefix:
        if not state.allowed(code) or state.try_glue(code) is not None:
            return PairingResult(set(), SearchStats())
    state.stats = SearchStats()
    _dfs(state, out, on_leaf)
    return PairingResult(out, state.stats)


def process_pairing(pairing: FacePairing, cfg: SearchConfig) -> PairingResult:
    return process_unit(pairing, cfg, ())


def partition_work(pairing: FacePairing, depth: int, cfg: SearchConfig | None = None,
                   graph_index: int = 0) -> tuple[list[WorkUnit], SearchStats]:
    """Split the search into disjoint units, one per surviving gluing prefix of length ``depth``.

    Also returns the statistics of the shallow search that produced the prefixes.
    """
    cfg = cfg or SearchConfig()
    if not 0 <= depth <= 2 * pairing.n:
        raise ValueError("depth out of range")
    state = SearchState(pairing, cfg)
    units: list[WorkUnit] = []

    def go():
        if state.k == depth:
            units.append(WorkUnit(graph_index, tuple(state.chosen[:depth])))
            return
        for code in state.choices():
            if not state.allowed(code):
                state.stats.prunes[PruneReason.ORIENTATION_PARITY.value] += 1
                continue
            if state.try_glue(code) is None:
                go()
                state.unglue()

    go()
    return units, state.stats


@dataclass
class GraphResult:
    graph: Multigraph
    verdict: FilterVerdict
    processed: bool
    signatures: set[str]
    stats: SearchStats


@dataclass
class CensusResult:
    n: int
    graphs: list[GraphResult]
    signatures: list[str]
    stats: SearchStats


def run_census(n: int, cfg: SearchConfig, graph_filter: bool = True,
               graphs: Iterable[Multigraph] | None = None) -> CensusResult:
    """Enumerate graphs, gate them through the filter and search every survivor."""
    if n < 1:
        raise ValueError("n must be positive")
    if cfg.census_constraints and n < 3:
        raise ValueError("census constraints need n >= 3; use relaxed mode for n < 3")
    results = []
    allsigs: set[str] = set()
    total = SearchStats()
    for g in (enumerate_graphs(n) if graphs is None else graphs):
        verdict = filter_verdict(g)
        if graph_filter and verdict.eliminated:
            results.append(GraphResult(g, verdict, False, set(), SearchStats()))
            continue
        res = process_pairing(realize_pairing(g), cfg)
        results.append(GraphResult(g, verdict, True, res.signatures, res.stats))
        allsigs |= res.signatures
        total += res.stats
    return CensusResult(n, results, sorted(allsigs), total)


def iter_units(graphs: list[Multigraph], cfg: SearchConfig, depth: int = 2) -> Iterator[WorkUnit]:
    """Work units for a list of graphs, in graph order then prefix order."""
    for i, g in enumerate(graphs):
        units, _ = partition_work(realize_pairing(g), min(depth, 2 * g.order), cfg, i)
        yield from units


def count_unit(pairing: FacePairing, cfg: SearchConfig, prefix: Iterable[int] = ()) -> SearchStats:
    """Statistics of one unit without keeping signatures.

    Link-free searches outside orientable mode go through the compiled
    counter, which walks the identical tree; leaves are not validated there,
    so ``survivors`` stays zero.
    """
    prefix = tuple(prefix)
    if cfg.track_edge_links or cfg.track_vertex_links or cfg.mode is Orientation.ORIENTABLE:
        return process_unit(pairing, cfg, prefix).stats
    from ._untracked import count_untracked
    if cfg.census_constraints and pairing.n < 3:
        raise ValueError("census constraints need n >= 3; use relaxed mode for n < 3")
    nodes, leaves, prunes = count_untracked(pairing, cfg.census_constraints, prefix)
    stats = SearchStats(int(nodes), int(leaves))
    for i, r in enumerate(PRUNE_REASONS):
        if prunes[i]:
            stats.prunes[r] = int(prunes[i])
    return stats
