"""
Face pairing graphs and the graph filter
========================================

Every closed triangulation with n tetrahedra has a face pairing graph: one
vertex per tetrahedron, one edge per pair of glued faces.  Most of these
graphs can be thrown away before any gluing is tried.
"""

from tricensus.graphfilter import filter_verdict, find_chains, tally
from tricensus.multigraph import enumerate_graphs, parse_graph

# The connected 4-valent multigraphs, level by level
for n in range(1, 7):
    print(n, len(enumerate_graphs(n)))

# A one-ended chain: a loop at vertex 0 followed by double edges
g = parse_graph("7: 0-0 0-1 0-1 1-2 1-2 2-3 2-3 3-4 3-4 4-5 4-6 5-6 5-6 5-6")
chain, = find_chains(g).one_ended
print("chain", chain.vertices, "length", chain.length)

# This graph also has a triple edge, so it never needs searching
print(filter_verdict(g))

# Per-order counts of eliminated graphs
for n, row in tally(enumerate_graphs(6)).items():
    print(row)
