import os
from pathlib import Path

import pytest

from odlab import generation as G
from odlab import oracle as O


@pytest.fixture(scope="session")
def cache_dir(tmp_path_factory) -> Path:
    env = os.environ.get("ODLAB_CACHE")
    return Path(env) if env else tmp_path_factory.mktemp("odlab-cache")


@pytest.fixture(scope="session")
def corpus5(cache_dir) -> O.OracleCorpus:
    return O.build_corpus(5, cache_dir)


@pytest.fixture(scope="session")
def corpus6(cache_dir) -> O.OracleCorpus:
    return O.build_corpus(6, cache_dir)


@pytest.fixture(scope="session")
def enumerator() -> G.Enumerator:
    return G.Enumerator(3)


@pytest.fixture(scope="session")
def enumerator4() -> G.Enumerator:
    return G.Enumerator(4)


# acceptance rows recorded by tests/test_acceptance.py, summarised per criterion at the end of the run
ACCEPTANCE_ROWS: list = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_ROWS:
        return
    by_criterion: dict[int, list] = {}
    for row in ACCEPTANCE_ROWS:
        by_criterion.setdefault(row.criterion, []).append(row)
    terminalreporter.section("acceptance criteria")
    for c in sorted(by_criterion):
        rows = by_criterion[c]
        failed = [r for r in rows if not r.passed]
        mark = "PASS" if not failed else "FAIL"
        terminalreporter.write_line(f"criterion {c}: {mark} ({len(rows) - len(failed)}/{len(rows)} claims)")
        for r in failed:
            terminalreporter.write_line(f"    {r.line()}")
