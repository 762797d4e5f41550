import functools

import pytest

from tricensus.multigraph import enumerate_graphs


@functools.lru_cache(maxsize=None)
def graphs_of(n):
    return tuple(enumerate_graphs(n))


@pytest.fixture(scope="session")
def graphs():
    return graphs_of


ACCEPTANCE_LINES = []


def report(criterion, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
