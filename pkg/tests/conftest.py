import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from parads.generators import erdos_renyi  # noqa: E402
from parads.graph import Graph  # noqa: E402

ER_SEED = 20190901
DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture(scope="session")
def er100() -> Graph:
    return erdos_renyi(100, 0.05, ER_SEED)


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


def small_graphs() -> dict[str, Graph]:
    """Fixed set of graphs with at most 8 vertices."""
    return {
        "c4": Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]),
        "c6": Graph.from_edges(6, [(i, (i + 1) % 6) for i in range(6)]),
        "diamond": Graph.from_edges(4, [(0, 1), (0, 2), (1, 3), (2, 3), (1, 2)]),
        "k23": Graph.from_edges(5, [(a, b) for a in (0, 1) for b in (2, 3, 4)]),
        "grid2x3": Graph.from_edges(6, [(0, 1), (1, 2), (3, 4), (4, 5), (0, 3), (1, 4), (2, 5)]),
        "cube": Graph.from_edges(8, [(u, u ^ (1 << b)) for u in range(8) for b in range(3) if u < u ^ (1 << b)]),
        "two_parts": Graph.from_edges(7, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (5, 6), (6, 3)]),
    }


_ACCEPTANCE_KEY = pytest.StashKey[list]()


@pytest.fixture
def report(request):
    """Record one acceptance line; all lines are repeated in the terminal summary."""
    lines = request.config.stash.setdefault(_ACCEPTANCE_KEY, [])

    def record(number: int, ok: bool, detail: str, status: str | None = None):
        line = f"criterion {number}: {status or ('PASS' if ok else 'FAIL')}  {detail}"
        lines.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
