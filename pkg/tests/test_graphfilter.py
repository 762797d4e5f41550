import io

import pytest

from tricensus.graphfilter import (ChainSet, eliminated_by_mountains, eliminated_by_old,
                                   eliminated_by_square, eliminated_by_straybigon, filter_verdict,
                                   find_chains, tally, write_report)
from tricensus.multigraph import parse_graph

# n: (old, new, all, straybigon, square, mountains)
TABLE = {
    3: (2, 1, 2, 1, 0, 0),
    4: (6, 4, 6, 4, 1, 0),
    5: (16, 14, 19, 13, 2, 1),
    6: (58, 60, 74, 56, 5, 2),
    7: (221, 238, 290, 227, 13, 5),
    8: (997, 1116, 1343, 1083, 46, 14),
    9: (4930, 5834, 6904, 5730, 170, 47),
}


@pytest.mark.parametrize("n", sorted(TABLE))
def test_elimination_counts(n, graphs):
    row = tally(graphs(n))[n]
    got = (row["old"], row["new_union"], row["all_union"], row["straybigon"], row["square"],
           row["mountains"])
    assert got == TABLE[n]
    assert row["kept"] == row["total"] - row["all_union"]


def oracle_chains(g):
    """Chains as components of the loops-and-double-edges subgraph that contain a loop."""
    adj = g.adjacency()
    sub = {v: [w for w, m in adj[v].items() if w != v and m == 2] for v in range(g.order)}
    seen = set()
    found = set()
    for v in range(g.order):
        if v in seen or not adj[v][v]:
            continue
        comp = {v}
        stack = [v]
        while stack:
            x = stack.pop()
            for y in sub[x]:
                if y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        if sum(adj[x][x] // 2 for x in comp) == 1:
            ends = [x for x in comp if x != v and len(sub[x]) == 1] or [v]
            found.add((frozenset(comp), False, ends[0]))
        else:
            found.add((frozenset(comp), True, None))
    return found


def ours(chains: ChainSet):
    return {(frozenset(c.vertices), c.double_ended, None if c.double_ended else c.end)
            for c in chains.chains}


@pytest.mark.parametrize("n", range(1, 8))
def test_chain_scanner_against_component_oracle(n, graphs):
    for g in graphs(n):
        chains = find_chains(g)
        assert ours(chains) == oracle_chains(g), str(g)
        assert len({frozenset(c.vertices) for c in chains.chains}) == len(chains.chains)


def test_double_loop_is_degenerate_double_ended_chain():
    chains = find_chains(parse_graph("1: 0-0 0-0"))
    assert len(chains.chains) == 1
    c = chains.chains[0]
    assert c.double_ended and c.length == 0


def test_one_ended_chain_of_length_four():
    g = parse_graph("7: 0-0 0-1 0-1 1-2 1-2 2-3 2-3 3-4 3-4 4-5 4-6 5-6 5-6 5-6")
    chains = find_chains(g)
    assert len(chains.one_ended) == 1 and not chains.double_ended
    c = chains.one_ended[0]
    assert c.length == 4 and c.vertices == (0, 1, 2, 3, 4) and c.end == 4


def test_cycle_of_double_edges_has_no_chain():
    g = parse_graph("5: 0-1 0-1 1-2 1-2 2-3 2-3 3-4 3-4 0-4 0-4")
    assert find_chains(g).chains == ()
    assert filter_verdict(g).kept


def test_triple_edge():
    g = parse_graph("4: 0-1 0-1 0-1 0-2 1-3 2-3 2-3 2-3")
    assert eliminated_by_old(g, find_chains(g))


def test_chain_end_into_both_ends_of_double_edge_is_eliminated():
    # vertex 0 (a loop) is joined once to each end of the double edge 1=2
    g = parse_graph("4: 0-0 0-1 0-2 1-2 1-2 1-3 2-3 3-3")
    ch = find_chains(g)
    assert eliminated_by_old(g, ch)
    assert eliminated_by_straybigon(g, ch)


def test_straybigon_resolved_by_third_vertex():
    # chain end 0, edge 0-1, double edge 1=2; vertex 3 meets 0, 1 and 2
    g = parse_graph("4: 0-0 0-1 0-3 1-2 1-2 1-3 2-3 2-3")
    ch = find_chains(g)
    assert not eliminated_by_straybigon(g, ch)


def test_straybigon_unresolved():
    # chain end 0 -> 1, 1=2 double edge, 0's other edge goes to 3 which misses 2
    g = parse_graph("5: 0-0 0-1 0-3 1-2 1-2 1-4 2-4 2-4 3-3 3-4")
    ch = find_chains(g)
    assert eliminated_by_straybigon(g, ch)


def test_square_and_mountains():
    # two chain ends (0, 1) joined to both of the adjacent vertices 2, 3
    sq = parse_graph("4: 0-0 0-2 0-3 1-1 1-2 1-3 2-3 2-3")
    ch = find_chains(sq)
    assert eliminated_by_square(sq, ch)
    assert not eliminated_by_mountains(sq, ch)
    # three chain ends (0, 1, 2) joined to both of 3 and 4
    mt = parse_graph("5: 0-0 0-3 0-4 1-1 1-3 1-4 2-2 2-3 2-4 3-4")
    ch = find_chains(mt)
    assert eliminated_by_mountains(mt, ch)
    assert eliminated_by_square(mt, ch)


def test_n3_verdicts(graphs):
    kept = [g for g in graphs(3) if filter_verdict(g).kept]
    assert len(kept) == 2
    assert not any(eliminated_by_square(g, find_chains(g)) for g in graphs(3))


def test_report_csv(graphs):
    buf = io.StringIO()
    write_report(tally(graphs(6)), buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "n,total,old,straybigon,square,mountains,new_union,all_union,kept"
    assert lines[1] == "6,97,58,56,5,2,60,74,23"


def test_empty_report():
    buf = io.StringIO()
    write_report(tally([]), buf)
    assert buf.getvalue().splitlines() == [
        "n,total,old,straybigon,square,mountains,new_union,all_union,kept"]
