"""
A census of three-tetrahedron triangulations
============================================

Run the full pipeline for n = 3: enumerate graphs, filter them, search the
gluings of the survivors and keep one signature per isomorphism class.
"""

from tricensus.search import SearchConfig, run_census
from tricensus.triangulation import from_signature, render_triangulation, validate_closed

res = run_census(3, SearchConfig())
print(len(res.graphs), "graphs,", sum(r.processed for r in res.graphs), "searched")
print(res.stats.nodes, "search nodes,", res.stats.leaves, "complete gluings")

for sig in res.signatures:
    t = from_signature(sig)
    rep = validate_closed(t)
    print(sig, "orientable" if rep.orientable else "non-orientable")
    print("   ", render_triangulation(t))

# which tests cut the tree
for reason, count in res.stats.prunes.most_common():
    print(f"{reason:28s} {count}")
