"""Command-line driver: ``tricensus graphs|filter|census|stats``.

Census runs are split into work units (graph index, gluing prefix of length
two).  ``--partition i/m`` takes units i, i+m, i+2m, ... so independent
invocations cover the search between them.  A checkpoint is an append-only
JSON-lines file: a header describing the run, then one record per finished
unit carrying its signatures, statistics and a digest of both.
"""

from __future__ import annotations

import argparse
import contextlib
import hashlib
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Iterable, Sequence

from .graphfilter import filter_verdict, tally, write_report
from .multigraph import (MAX_ORDER, GraphError, enumerate_graphs, read_graphs, render_graph,
                         write_graphs)
from .search import (PRUNE_REASONS, Orientation, SearchConfig, SearchStats, WorkUnit,
                     count_unit, partition_work, process_unit)
from .triangulation import realize_pairing

VERSION = "0.1.0"
CHECKPOINT_FORMAT = 1

EXIT_OK = 0
EXIT_PARAM = 2
EXIT_INPUT = 3
EXIT_CHECKPOINT = 4

STATS_COLUMNS = ("unit", "nodes", "leaves", "survivors") + PRUNE_REASONS


class ParamError(Exception):
    pass


class InputFormatError(Exception):
    pass


class CheckpointError(Exception):
    pass


# -- file helpers ------------------------------------------------------------

def _load_graphs(path: str):
    try:
        with open(path) as fh:
            return [g for _, g in read_graphs(fh)]
    except GraphError as e:
        raise InputFormatError(f"{path}: {e}") from e


def write_signatures(sigs: Sequence[str], fh) -> None:
    for s in sigs:
        fh.write(s + "\n")
    fh.write(f"count {len(sigs)}\n")


def read_signatures(fh) -> list[str]:
    """Read a signature file; the trailing count line must agree with the body."""
    sigs = []
    count = None
    for lineno, line in enumerate(fh, 1):
        line = line.strip()
        if not line:
            continue
        if count is not None:
            raise InputFormatError(f"line {lineno}: content after count line")
        if line.startswith("count "):
            try:
                count = int(line.split()[1])
            except ValueError:
                raise InputFormatError(f"line {lineno}: bad count line") from None
            continue
        sigs.append(line)
    if count is None:
        raise InputFormatError("missing count line")
    if count != len(sigs):
        raise InputFormatError(f"count line says {count}, found {len(sigs)} signatures")
    return sigs


def write_stats(rows: Iterable[tuple[str, SearchStats]], fh) -> None:
    rows = list(rows)
    fh.write("\t".join(STATS_COLUMNS) + "\n")
    for name, st in rows:
        r = st.as_row()
        fh.write("\t".join([name] + [str(r[c]) for c in STATS_COLUMNS[1:]]) + "\n")
    fh.write(f"count {len(rows)}\n")


def read_stats(fh) -> list[tuple[str, SearchStats]]:
    lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    if not lines:
        raise InputFormatError("empty stats file")
    header = tuple(lines[0].split("\t"))
    if header != STATS_COLUMNS:
        raise InputFormatError("stats header does not match this version's columns")
    if not lines[-1].startswith("count "):
        raise InputFormatError("missing count line")
    body = lines[1:-1]
    try:
        count = int(lines[-1].split()[1])
    except (IndexError, ValueError):
        raise InputFormatError("bad count line") from None
    if count != len(body):
        raise InputFormatError(f"count line says {count}, found {len(body)} rows")
    rows = []
    for i, line in enumerate(body, 2):
        cells = line.split("\t")
        if len(cells) != len(STATS_COLUMNS):
            raise InputFormatError(f"line {i}: expected {len(STATS_COLUMNS)} fields")
        try:
            vals = [int(c) for c in cells[1:]]
        except ValueError:
            raise InputFormatError(f"line {i}: non-integer field") from None
        st = SearchStats(vals[0], vals[1], vals[2])
        for r, v in zip(PRUNE_REASONS, vals[3:]):
            if v:
                st.prunes[r] = v
        rows.append((cells[0], st))
    return rows


def _stats_from_dict(d: dict) -> SearchStats:
    st = SearchStats(d["nodes"], d["leaves"], d["survivors"])
    for r in PRUNE_REASONS:
        if d.get(r):
            st.prunes[r] = d[r]
    return st


def _digest(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True).encode()).hexdigest()


# -- graphs / filter -----------------------------------------------------------

def cmd_graphs(args) -> int:
    if not 1 <= args.n <= MAX_ORDER:
        raise ParamError(f"n must be between 1 and {MAX_ORDER}")
    with _out(args.output) as fh:
        write_graphs(enumerate_graphs(args.n), fh)
    return EXIT_OK


def _out(path):
    return contextlib.nullcontext(sys.stdout) if path in (None, "-") else open(path, "w")


def cmd_filter(args) -> int:
    graphs = _load_graphs(args.input)
    kept = [g for g in graphs if filter_verdict(g).kept]
    if args.output:
        with _out(args.output) as fh:
            write_graphs(kept, fh)
    with _out(args.report) as fh:
        write_report(tally(graphs), fh)
    return EXIT_OK


# -- census --------------------------------------------------------------------

def _parse_partition(text: str) -> tuple[int, int]:
    try:
        i, m = (int(x) for x in text.split("/"))
    except ValueError:
        raise ParamError(f"bad partition {text!r}; expected i/m") from None
    if m < 1 or not 0 <= i < m:
        raise ParamError(f"bad partition {text!r}; need 0 <= i < m")
    return i, m


def _census_config(args) -> SearchConfig:
    mode = Orientation.BOTH
    if args.orientable:
        mode = Orientation.ORIENTABLE
    elif args.non_orientable:
        mode = Orientation.NONORIENTABLE
    return SearchConfig.from_links(args.track_links, mode=mode, relaxed=args.relaxed)


def plan_units(graphs, cfg: SearchConfig, graph_filter: bool, depth: int = 2):
    """Work units of a census plus the shallow-search statistics of every searched graph."""
    units: list[WorkUnit] = []
    shallow: list[tuple[int, SearchStats]] = []
    for i, g in enumerate(graphs):
        if graph_filter and filter_verdict(g).eliminated:
            continue
        us, st = partition_work(realize_pairing(g), min(depth, 2 * g.order), cfg, i)
        units.extend(us)
        shallow.append((i, st))
    return units, shallow


def _run_unit(job):
    graph, prefix, cfg, count_only = job
    pairing = realize_pairing(graph)
    if count_only:
        return [], count_unit(pairing, cfg, prefix)
    res = process_unit(pairing, cfg, prefix)
    return sorted(res.signatures), res.stats


def _unit_name(u: WorkUnit) -> str:
    return f"{u.graph_index}:" + ".".join(str(c) for c in u.prefix)


def _header(args, cfg: SearchConfig, graphs_digest: str, units: list[WorkUnit], part) -> dict:
    return {
        "kind": "header",
        "format": CHECKPOINT_FORMAT,
        "tool": f"tricensus {VERSION}",
        "params": {
            "n": args.n,
            "mode": cfg.mode.value,
            "track_links": args.track_links,
            "relaxed": cfg.relaxed,
            "graph_filter": not args.no_graph_filter,
            "count_only": args.count_only,
            "partition": list(part),
        },
        "graphs_digest": graphs_digest,
        "units_digest": _digest([_unit_name(u) for u in units]),
    }


_HEADER_KEYS = ("format", "tool", "params", "graphs_digest", "units_digest")


def _unit_record(index: int, sigs: list[str], st: SearchStats) -> dict:
    body = {"index": index, "signatures": sigs, "stats": st.as_row()}
    return {"kind": "unit", **body, "digest": _digest(body), "time": time.time()}


def load_checkpoint(path: str, header: dict, allowed: set[int]) -> dict[int, tuple[list[str], SearchStats]]:
    """Finished units recorded in a checkpoint.

    A final line without its newline is a write torn by a crash and is
    dropped (and cut from the file); anything else that does not verify is
    corruption.
    """
    with open(path, "rb") as fh:
        data = fh.read()
    if not data:
        raise CheckpointError("checkpoint is empty")
    lines = data.split(b"\n")
    tail = lines.pop()
    if tail:
        with open(path, "r+b") as fh:
            fh.truncate(len(data) - len(tail))
    if not lines:
        raise CheckpointError("checkpoint has no complete header")
    try:
        records = [json.loads(ln) for ln in lines]
    except ValueError as e:
        raise CheckpointError(f"unreadable checkpoint line: {e}") from None
    head = records[0]
    if not isinstance(head, dict) or head.get("kind") != "header":
        raise CheckpointError("first checkpoint record is not a header")
    for k in _HEADER_KEYS:
        if head.get(k) != header[k]:
            raise CheckpointError(f"checkpoint header field {k!r} does not match this run")
    done = {}
    for rec in records[1:]:
        try:
            body = {"index": rec["index"], "signatures": rec["signatures"], "stats": rec["stats"]}
            ok = rec["kind"] == "unit" and rec["digest"] == _digest(body)
            st = _stats_from_dict(rec["stats"])
        except (KeyError, TypeError):
            ok = False
        if not ok:
            raise CheckpointError("checkpoint unit record fails verification")
        idx = rec["index"]
        if idx not in allowed:
            raise CheckpointError(f"checkpoint names unit {idx} outside this partition")
        if idx in done:
            raise CheckpointError(f"unit {idx} recorded twice")
        done[idx] = (rec["signatures"], st)
    return done


def cmd_census(args) -> int:
    if not 1 <= args.n <= MAX_ORDER:
        raise ParamError(f"n must be between 1 and {MAX_ORDER}")
    if args.n < 3 and not args.relaxed:
        raise ParamError("census constraints need n >= 3; pass --relaxed for smaller n")
    if args.jobs < 1:
        raise ParamError("--jobs must be positive")
    part = _parse_partition(args.partition)
    cfg = _census_config(args)

    if args.graphs:
        graphs = _load_graphs(args.graphs)
        bad = [g for g in graphs if g.order != args.n]
        if bad:
            raise InputFormatError(f"graph file contains a graph of order {bad[0].order}, expected {args.n}")
    else:
        graphs = list(enumerate_graphs(args.n))
    graphs_digest = _digest([render_graph(g) for g in graphs])

    units, shallow = plan_units(graphs, cfg, not args.no_graph_filter)
    i, m = part
    mine = [k for k in range(len(units)) if k % m == i]
    if args.seed_order == "reverse":
        order = mine[::-1]
    else:
        order = mine

    header = _header(args, cfg, graphs_digest, units, part)
    done: dict[int, tuple[list[str], SearchStats]] = {}
    ckpt = None
    if args.checkpoint:
        if os.path.exists(args.checkpoint) and os.path.getsize(args.checkpoint) > 0:
            done = load_checkpoint(args.checkpoint, header, set(mine))
            ckpt = open(args.checkpoint, "a")
        else:
            ckpt = open(args.checkpoint, "w")
            ckpt.write(json.dumps({**header, "started": time.time()}, sort_keys=True) + "\n")
            ckpt.flush()

    todo = [k for k in order if k not in done]
    if args.max_units is not None:
        todo = todo[:args.max_units]
    jobs = [(graphs[units[k].graph_index], units[k].prefix, cfg, args.count_only) for k in todo]

    def record(k, result):
        done[k] = result
        if ckpt is not None:
            ckpt.write(json.dumps(_unit_record(k, *result), sort_keys=True) + "\n")
            ckpt.flush()
            os.fsync(ckpt.fileno())

    try:
        if args.jobs == 1:
            for k, job in zip(todo, jobs):
                record(k, _run_unit(job))
        else:
            with ProcessPoolExecutor(args.jobs) as ex:
                for k, result in zip(todo, ex.map(_run_unit, jobs, chunksize=4)):
                    record(k, result)
    finally:
        if ckpt is not None:
            ckpt.close()

    if len(done) < len(mine):
        print(f"incomplete: {len(done)} of {len(mine)} units done; rerun with the same "
              "checkpoint to continue", file=sys.stderr)
        return EXIT_OK

    sigs = sorted(set().union(*(set(done[k][0]) for k in mine))) if mine else []
    rows = []
    # shallow searches that produced the prefixes are attributed to partition 0
    if i == 0:
        rows.extend((f"{gi}:prefix", st) for gi, st in shallow)
    rows.extend((_unit_name(units[k]), done[k][1]) for k in mine)
    if not args.count_only:
        with _out(args.output) as fh:
            write_signatures(sigs, fh)
    if args.stats:
        with _out(args.stats) as fh:
            write_stats(rows, fh)
    return EXIT_OK


# -- stats -----------------------------------------------------------------------

def cmd_stats(args) -> int:
    total = SearchStats()
    per_file = []
    for path in args.files:
        with open(path) as fh:
            try:
                rows = read_stats(fh)
            except InputFormatError as e:
                raise InputFormatError(f"{path}: {e}") from None
        sub = SearchStats()
        for _, st in rows:
            sub += st
        per_file.append((path, sub))
        total += sub
    out = per_file + [("total", total)] if args.per_file else [("total", total)]
    cols = STATS_COLUMNS[1:]
    print("\t".join(("source",) + cols))
    for name, st in out:
        r = st.as_row()
        print("\t".join([name] + [str(r[c]) for c in cols]))
    return EXIT_OK


# -- entry point -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    # argparse exits with 2 on bad usage, which is also our parameter-error code
    p = argparse.ArgumentParser(prog="tricensus", description="Census of closed minimal 3-manifold triangulations.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("graphs", help="enumerate connected 4-valent multigraphs")
    g.add_argument("n", type=int)
    g.add_argument("-o", "--output", help="graph file (default stdout)")
    g.set_defaults(func=cmd_graphs)

    f = sub.add_parser("filter", help="apply the face pairing graph filters")
    f.add_argument("input", help="graph file")
    f.add_argument("-o", "--output", help="write surviving graphs here")
    f.add_argument("-r", "--report", help="CSV report (default stdout)")
    f.set_defaults(func=cmd_filter)

    c = sub.add_parser("census", help="search gluings of every surviving face pairing graph")
    c.add_argument("n", type=int)
    mode = c.add_mutually_exclusive_group()
    mode.add_argument("--orientable", action="store_true")
    mode.add_argument("--non-orientable", action="store_true")
    mode.add_argument("--both", action="store_true", help="default")
    c.add_argument("--track-links", choices=("none", "edge", "vertex", "both"), default="both")
    c.add_argument("--no-graph-filter", action="store_true")
    c.add_argument("--relaxed", action="store_true",
                   help="drop minimality constraints, keep only the 3-manifold tests")
    c.add_argument("--partition", default="0/1", help="take units i, i+m, ... (0 <= i < m)")
    c.add_argument("--checkpoint", help="append-only unit log; resumed if it exists")
    c.add_argument("--jobs", type=int, default=1, help="worker processes")
    c.add_argument("--seed-order", choices=("fixed", "reverse"), default="fixed",
                   help="order in which units are processed; output does not depend on it")
    c.add_argument("--graphs", help="read graphs from this file instead of enumerating")
    c.add_argument("--count-only", action="store_true",
                   help="skip leaf validation and signatures, report statistics only")
    c.add_argument("--max-units", type=int, help="stop after this many new units")
    c.add_argument("-o", "--output", help="signature file (default stdout)")
    c.add_argument("--stats", help="per-unit statistics TSV")
    c.set_defaults(func=cmd_census)

    s = sub.add_parser("stats", help="sum statistics files")
    s.add_argument("files", nargs="+")
    s.add_argument("--per-file", action="store_true", help="also print one row per file")
    s.set_defaults(func=cmd_stats)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParamError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARAM
    except InputFormatError as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except CheckpointError as e:
        print(f"checkpoint error: {e}", file=sys.stderr)
        return EXIT_CHECKPOINT
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARAM


if __name__ == "__main__":
    sys.exit(main())
