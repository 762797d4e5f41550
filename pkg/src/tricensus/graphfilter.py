"""Elimination of face pairing graphs via prohibited subgraphs.

All predicates work on maximal chains.  A one-ended chain that is not
maximal ends in a double edge, so it can never be the chain in a prohibited
configuration whose end vertex meets single edges only (square, mountains),
and in the stray bigon setting it always satisfies the "longer chain"
resolution.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterable

from .multigraph import Multigraph


@dataclass(frozen=True)
class Chain:
    """A maximal chain of double edges.

    ``vertices[0]`` carries a loop.  ``end`` is the last vertex; for a
    one-ended chain it has two free edge-ends leaving the chain.
    """

    vertices: tuple[int, ...]
    double_ended: bool

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    @property
    def end(self) -> int:
        return self.vertices[-1]

    @property
    def capped(self) -> tuple[bool, bool]:
        return True, self.double_ended


@dataclass(frozen=True)
class ChainSet:
    chains: tuple[Chain, ...]

    @property
    def one_ended(self) -> tuple[Chain, ...]:
        return tuple(c for c in self.chains if not c.double_ended)

    @property
    def double_ended(self) -> tuple[Chain, ...]:
        return tuple(c for c in self.chains if c.double_ended)

    def end_map(self) -> dict[int, Chain]:
        """End vertex -> one-ended chain."""
        return {c.end: c for c in self.one_ended}


@dataclass(frozen=True)
class FilterVerdict:
    eliminated_old: bool
    eliminated_straybigon: bool
    eliminated_square: bool
    eliminated_mountains: bool

    @property
    def eliminated_new(self) -> bool:
        return self.eliminated_straybigon or self.eliminated_square or self.eliminated_mountains

    @property
    def eliminated(self) -> bool:
        return self.eliminated_old or self.eliminated_new

    @property
    def kept(self) -> bool:
        return not self.eliminated


def find_chains(g: Multigraph) -> ChainSet:
    adj = g.adjacency()
    chains = []
    seen_double = set()
    for start in range(g.order):
        loops = adj[start][start] // 2
        if loops == 2:
            chains.append(Chain((start,), True))
            continue
        if loops != 1:
            continue
        path = [start]
        double_ended = False
        while True:
            cur = path[-1]
            if len(path) > 1 and adj[cur][cur]:
                double_ended = True
                break
            nbrs = [w for w in adj[cur] if w != cur and w not in path]
            if len(nbrs) == 1 and adj[cur][nbrs[0]] == 2:
                path.append(nbrs[0])
                continue
            break
        if double_ended:
            key = frozenset(path)
            if key in seen_double:
                continue
            seen_double.add(key)
        chains.append(Chain(tuple(path), double_ended))
    return ChainSet(tuple(chains))


def _free_neighbours(adj, chain: Chain) -> list[int]:
    """Neighbours of a one-ended chain's end outside the chain, with multiplicity."""
    inside = set(chain.vertices)
    return sorted(w for w, m in adj[chain.end].items() if w not in inside for _ in range(m))


def eliminated_by_old(g: Multigraph, chains: ChainSet) -> bool:
    adj = g.adjacency()
    # (i) triple edge
    for a in range(g.order):
        for b, m in adj[a].items():
            if b != a and m >= 3:
                return True
    ends = chains.end_map()
    for c in chains.one_ended:
        x, y = _free_neighbours(adj, c)
        if x == y:
            continue
        # (ii) chain end joined to both ends of a double edge
        if adj[x][y] == 2:
            return True
    # (iii) a single edge joining the ends of two one-ended chains
    for c in chains.one_ended:
        for w in _free_neighbours(adj, c):
            if w in ends and w != c.end and adj[c.end][w] == 1:
                return True
    return False


def eliminated_by_straybigon(g: Multigraph, chains: ChainSet) -> bool:
    adj = g.adjacency()
    for c in chains.one_ended:
        inside = set(c.vertices)
        free = _free_neighbours(adj, c)
        if free[0] == free[1]:
            continue  # cannot happen for a maximal chain
        for v2, v4 in (free, free[::-1]):
            for v3, m in adj[v2].items():
                if v3 == v2 or v3 in inside or m < 2:
                    continue
                if v4 == v3:
                    return True
                if adj[v4][v3] >= 2:
                    continue
                if adj[v4][v2] and adj[v4][v3]:
                    continue
                return True
    return False


def _chain_ends_joined_to(adj, chains: ChainSet) -> dict[tuple[int, int], list[int]]:
    """Map each vertex pair {U, V} to the one-ended chain ends joined to both."""
    pairs: dict[tuple[int, int], list[int]] = {}
    for c in chains.one_ended:
        x, y = _free_neighbours(adj, c)
        if x != y:
            pairs.setdefault((x, y), []).append(c.end)
    return pairs


def eliminated_by_square(g: Multigraph, chains: ChainSet) -> bool:
    adj = g.adjacency()
    for (u, v), ends in _chain_ends_joined_to(adj, chains).items():
        if len(ends) >= 2 and adj[u][v] >= 1:
            return True
    return False


def eliminated_by_mountains(g: Multigraph, chains: ChainSet) -> bool:
    adj = g.adjacency()
    return any(len(ends) >= 3 for ends in _chain_ends_joined_to(adj, chains).values())


def filter_verdict(g: Multigraph) -> FilterVerdict:
    chains = find_chains(g)
    return FilterVerdict(
        eliminated_old=eliminated_by_old(g, chains),
        eliminated_straybigon=eliminated_by_straybigon(g, chains),
        eliminated_square=eliminated_by_square(g, chains),
        eliminated_mountains=eliminated_by_mountains(g, chains),
    )


# --------------------------------------------------------------------------
# reporting

REPORT_COLUMNS = ("n", "total", "old", "straybigon", "square", "mountains",
                  "new_union", "all_union", "kept")


def tally(graphs: Iterable[Multigraph]) -> dict[int, dict[str, int]]:
    """Per-order elimination counts for the report table."""
    rows: dict[int, dict[str, int]] = {}
    for g in graphs:
        row = rows.setdefault(g.order, dict.fromkeys(REPORT_COLUMNS, 0))
        row["n"] = g.order
        v = filter_verdict(g)
        row["total"] += 1
        row["old"] += v.eliminated_old
        row["straybigon"] += v.eliminated_straybigon
        row["square"] += v.eliminated_square
        row["mountains"] += v.eliminated_mountains
        row["new_union"] += v.eliminated_new
        row["all_union"] += v.eliminated
        row["kept"] += v.kept
    return dict(sorted(rows.items()))


def write_report(rows: dict[int, dict[str, int]], fh) -> None:
    w = csv.DictWriter(fh, fieldnames=REPORT_COLUMNS, lineterminator="\n")
    w.writeheader()
    for row in rows.values():
        w.writerow(row)
