import functools

import pytest
from hypothesis import settings

from hilbertpair.factorize import design_bank

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@functools.lru_cache(maxsize=None)
def cached_bank(L, M, phase="mid", method="recursive"):
    return design_bank(L, M, phase, method)


@pytest.fixture
def bank():
    return cached_bank


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS, key=lambda k: (int(k.rstrip("b")), k)):
        ok, detail = RESULTS[n]
        terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
