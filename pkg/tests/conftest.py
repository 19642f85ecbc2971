"""Acceptance bookkeeping: one pass/fail line per criterion in the terminal summary."""

import time

import pytest

RESULTS = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[RESULTS] = {}


class Criterion:
    """Context manager collecting the checks and timing of one criterion part."""

    def __init__(self, results, number, limit):
        self.results = results
        self.number = number
        self.limit = limit
        self.failures = []
        self.notes = []

    def check(self, ok, message):
        if not ok:
            self.failures.append(message)

    def note(self, message):
        self.notes.append(message)

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        if exc is not None:
            self.failures.append(f"{exc_type.__name__}: {exc}")
        if elapsed >= self.limit:
            self.failures.append(f"took {elapsed:.2f} s, limit {self.limit:g} s")
        detail = "; ".join(self.failures or self.notes)
        self.results.setdefault(self.number, []).append((not self.failures, f"{detail} [{elapsed:.2f} s]"))
        if exc is None and self.failures:
            raise AssertionError("; ".join(self.failures))
        return False


@pytest.fixture
def criterion(request):
    results = request.config.stash[RESULTS]
    return lambda number, limit: Criterion(results, number, limit)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(RESULTS, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        parts = results[number]
        status = "PASS" if all(ok for ok, _ in parts) else "FAIL"
        details = " | ".join(d for _, d in parts)
        terminalreporter.write_line(f"criterion {number:>2}: {status}  {details}")
