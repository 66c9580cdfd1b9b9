import csv
from functools import lru_cache
from pathlib import Path

import pytest

from bianchitess.pipeline import run_field
from bianchitess.polytope import build_polytope, classify
from bianchitess.qfield import make_context
from bianchitess.voronoi import enumerate_classes

DATA = Path(__file__).parent / "data"

ACCEPTANCE_RESULTS: dict[str, tuple[bool, str]] = {}


@lru_cache(maxsize=None)
def graph_for(d):
    return enumerate_classes(make_context(d))


@lru_cache(maxsize=None)
def polytopes_for(d):
    return [build_polytope(pf) for pf in graph_for(d).classes]


@lru_cache(maxsize=None)
def types_for(d):
    return [classify(p).name for p in polytopes_for(d)]


@lru_cache(maxsize=None)
def report_for(d):
    return run_field(d)


def golden_rows():
    with open(DATA / "golden_counts.csv") as f:
        rows = list(csv.DictReader(f))
    out = {}
    for row in rows:
        d = int(row.pop("d"))
        h = int(row.pop("h_F"))
        out[d] = (h, {k: int(v) for k, v in row.items()})
    return out


@pytest.fixture(scope="session")
def golden():
    return golden_rows()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE_RESULTS, key=lambda s: [int(t) if t.isdigit() else t for t in s.split()]):
        ok, detail = ACCEPTANCE_RESULTS[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
