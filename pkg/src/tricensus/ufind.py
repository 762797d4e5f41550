"""Union-find with height balancing, LIFO undo and per-class link data.

Path compression is deliberately absent: every tree change is a single
parent link, so undoing a relationship is constant time.  Each root keeps
the class size and, for vertex links, the number of boundary arcs of the
partially built link surface.  Every child stores whether it is identified
with its parent orientation-reversingly.
"""

from __future__ import annotations

import enum
import io


class Mode(enum.Enum):
    EDGE = "edge"
    VERTEX = "vertex"


class Outcome(enum.Enum):
    MERGED = "merged"
    REDUNDANT_CONSISTENT = "redundant_consistent"
    REDUNDANT_CONFLICT = "redundant_conflict"


class NotARootError(ValueError):
    pass


# log entry tags
_MERGE = 0
_REDUNDANT = 1
_CONFLICT = 2


class RollbackUF:
    """Backtrackable union-find over ``count`` objects.

    In ``Mode.VERTEX`` every object starts with ``initial_boundary`` link
    arcs (3 for the corner triangle of a tetrahedron).  In ``Mode.EDGE`` a
    class is marked complete when a relationship arrives between two members
    already in the class.
    """

    __slots__ = ("mode", "parent", "depth", "size", "boundary", "parity",
                 "complete", "log", "classes", "initial_boundary")

    def __init__(self, count: int, mode: Mode = Mode.EDGE, initial_boundary: int = 0):
        if count < 1:
            raise ValueError("count must be positive")
        if mode is Mode.VERTEX and initial_boundary < 1:
            raise ValueError("vertex-link mode needs a positive initial boundary")
        self.mode = mode
        self.initial_boundary = initial_boundary
        self.parent = [-1] * count
        self.depth = [1] * count
        self.size = [1] * count
        self.boundary = [initial_boundary] * count
        self.parity = [False] * count
        self.complete = [False] * count
        self.log: list[tuple] = []
        self.classes = count

    def __len__(self) -> int:
        return len(self.parent)

    def find(self, x: int) -> tuple[int, bool]:
        """Return the root of ``x`` and the orientation parity of ``x`` relative to it."""
        parent = self.parent
        par = self.parity
        p = False
        while parent[x] >= 0:
            p ^= par[x]
            x = parent[x]
        return x, p

    def union(self, x: int, y: int, reversed_: bool) -> Outcome:
        """Record that ``x`` and ``y`` are identified, reversingly if ``reversed_``."""
        rx, px = self.find(x)
        ry, py = self.find(y)
        if rx == ry:
            if (px ^ py) != reversed_:
                self.log.append((_CONFLICT, rx))
                return Outcome.REDUNDANT_CONFLICT
            if self.mode is Mode.VERTEX:
                self.boundary[rx] -= 2
                self.log.append((_REDUNDANT, rx, False))
            else:
                was = self.complete[rx]
                self.complete[rx] = True
                self.log.append((_REDUNDANT, rx, not was))
            return Outcome.REDUNDANT_CONSISTENT
        depth = self.depth
        if depth[rx] < depth[ry]:
            child, par = rx, ry
        else:
            child, par = ry, rx
        old_depth = depth[par]
        if depth[child] == depth[par]:
            depth[par] += 1
        self.parent[child] = par
        self.parity[child] = px ^ py ^ reversed_
        self.size[par] += self.size[child]
        inherited = False
        if self.mode is Mode.VERTEX:
            self.boundary[par] += self.boundary[child] - 2
        elif self.complete[child] and not self.complete[par]:
            self.complete[par] = inherited = True
        self.classes -= 1
        self.log.append((_MERGE, child, old_depth, inherited))
        return Outcome.MERGED

    def undo(self) -> None:
        if not self.log:
            raise IndexError("undo on an empty log")
        entry = self.log.pop()
        tag = entry[0]
        if tag == _MERGE:
            _, child, old_depth, inherited = entry
            par = self.parent[child]
            if inherited:
                self.complete[par] = False
            self.parent[child] = -1
            self.parity[child] = False
            self.depth[par] = old_depth
            self.size[par] -= self.size[child]
            if self.mode is Mode.VERTEX:
                self.boundary[par] -= self.boundary[child] - 2
            self.classes += 1
        elif tag == _REDUNDANT:
            _, root, flag_set = entry
            if self.mode is Mode.VERTEX:
                self.boundary[root] += 2
            elif flag_set:
                self.complete[root] = False

    # constant-time queries on roots

    def _check_root(self, r: int) -> None:
        if self.parent[r] >= 0:
            raise NotARootError(f"node {r} is not a class representative")

    def class_size(self, root: int) -> int:
        self._check_root(root)
        return self.size[root]

    def boundary_arcs(self, root: int) -> int:
        self._check_root(root)
        return self.boundary[root]

    def is_complete(self, root: int) -> bool:
        self._check_root(root)
        if self.mode is Mode.VERTEX:
            return self.boundary[root] == 0
        return self.complete[root]

    def num_classes(self) -> int:
        return self.classes

    def snapshot(self) -> tuple:
        """All mutable fields, for equality checks in tests."""
        return (tuple(self.parent), tuple(self.depth), tuple(self.size), tuple(self.boundary),
                tuple(self.parity), tuple(self.complete), self.classes, len(self.log))

    def dump(self) -> str:
        """Node table as TSV."""
        out = io.StringIO()
        out.write("node\tparent\tdepth\tsize\tboundary\tparity\tcomplete\n")
        for i in range(len(self.parent)):
            out.write(f"{i}\t{self.parent[i]}\t{self.depth[i]}\t{self.size[i]}\t"
                      f"{self.boundary[i]}\t{int(self.parity[i])}\t{int(self.complete[i])}\n")
        return out.getvalue()
