"""
Union-find with undo
====================

The search glues faces one at a time and backtracks constantly, so the
structure that tracks edge and vertex classes must undo its last change in
constant time.  No path compression, just height balancing.
"""

from tricensus.ufind import Mode, RollbackUF

# four corner triangles, each contributing three boundary arcs to its link
uf = RollbackUF(4, Mode.VERTEX, initial_boundary=3)

print(uf.union(0, 1, False))
print(uf.union(2, 3, True))
print(uf.union(1, 3, False))
root, _ = uf.find(0)
print("one class of size", uf.class_size(root), "with", uf.boundary_arcs(root), "arcs")

# 0 and 3 are already in one class; a relation that disagrees with their
# relative orientation would make the link non-orientable
r0, p0 = uf.find(0)
r3, p3 = uf.find(3)
print("relative orientation of 0 and 3:", p0 ^ p3)
print(uf.union(0, 3, not (p0 ^ p3)))

# undo everything, newest first
while uf.log:
    uf.undo()
print(uf.num_classes(), "classes again")
print(uf.dump())
