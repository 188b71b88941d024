import functools
import os
import sys

import pytest
from hypothesis import settings

from k2forge import catalog
from k2forge.gbasis import complete
from k2forge.resolution import resolve_trivial

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@functools.lru_cache(maxsize=None)
def corpus_gb(name: str, d_max: int):
    return complete(catalog.presentation(name), d_max)


@functools.lru_cache(maxsize=None)
def corpus_resolution(name: str, n_max: int, d_max: int):
    g = corpus_gb(name, d_max)
    return g, resolve_trivial(g, n_max, d_max)


@pytest.fixture
def gb():
    return corpus_gb


@pytest.fixture
def resolution():
    return corpus_resolution


# acceptance results, printed as one PASS/FAIL line per criterion at the end of the run
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record_criterion(number: int, checks: list[tuple[str, bool]]) -> tuple[bool, str]:
    ok = all(passed for _, passed in checks)
    failed = [label for label, passed in checks if not passed]
    detail = "; ".join(label for label, _ in checks) if ok else "failed: " + "; ".join(failed)
    ACCEPTANCE[number] = (ok, detail)
    print(f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
    return ok, detail


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
