from __future__ import annotations

import functools

import pytest

from effitri.named import load
from effitri.toolbox import census


@functools.lru_cache(maxsize=None)
def closed_census(t: int) -> tuple:
    return tuple(census(t, "closed-orientable"))


@pytest.fixture(scope="session")
def census1():
    return closed_census(1)


@pytest.fixture(scope="session")
def census2():
    return closed_census(2)


@pytest.fixture(scope="session")
def census3():
    return closed_census(3)


@pytest.fixture(scope="session")
def named():
    return load


def inflate(T, rng, steps: int, max_size: int = 5):
    """Apply up to ``steps`` random legal 2-3 or 1-4 moves without exceeding ``max_size``."""
    from effitri.errors import IllegalMove
    from effitri.toolbox import pachner

    for _ in range(steps):
        options = []
        if T.size + 1 <= max_size:
            options += [("2-3", f) for f in range(T.skeleton.num_faces)]
        if T.size + 3 <= max_size:
            options += [("1-4", a) for a in range(T.size)]
        rng.shuffle(options)
        for move, loc in options:
            try:
                T = pachner(T, move, loc)
                break
            except IllegalMove:
                continue
    return T


ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
