"""Shared fixtures and the acceptance-summary reporting hook."""

from __future__ import annotations

import time

import pytest

# Each entry: (number, label, passed, detail, elapsed seconds).
_CRITERIA: list[tuple[int, str, bool, str, float]] = []


def pytest_terminal_summary(terminalreporter) -> None:
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num, label, ok, detail, elapsed in sorted(_CRITERIA):
        status = "PASS" if ok else "FAIL"
        line = f"[{status}] criterion {num:2d}: {label}"
        if detail:
            line += f" -- {detail}"
        line += f"  ({elapsed:.1f}s)"
        terminalreporter.write_line(line)


@pytest.fixture
def criterion():
    """Run one acceptance criterion, record its pass/fail line, re-raise.

    ``fn`` performs the checks (raising on failure) and returns a detail
    string; ``budget`` is the allowed wall-clock time in seconds.
    """

    def _run(num: int, label: str, fn, budget: float | None = None,
             precomputed: float = 0.0) -> None:
        t0 = time.perf_counter()
        try:
            detail = fn() or ""
        except BaseException as exc:
            elapsed = time.perf_counter() - t0 + precomputed
            _CRITERIA.append((num, label, False,
                              f"{type(exc).__name__}: {exc}", elapsed))
            raise
        elapsed = time.perf_counter() - t0 + precomputed
        if budget is not None and elapsed > budget:
            _CRITERIA.append((num, label, False,
                              f"runtime {elapsed:.1f}s exceeds budget "
                              f"{budget:.0f}s", elapsed))
            raise AssertionError(
                f"criterion {num} exceeded its runtime budget: "
                f"{elapsed:.1f}s > {budget:.0f}s")
        _CRITERIA.append((num, label, True, detail, elapsed))

    return _run


@pytest.fixture(scope="session")
def experiment_reports():
    """Reports and wall-clock timings for the experiments E1..E5."""
    from walklab import experiments

    reports: dict[str, experiments.ExperimentReport] = {}
    timings: dict[str, float] = {}
    for ident in ("E1", "E2", "E3", "E4", "E5"):
        t0 = time.perf_counter()
        reports[ident] = experiments.run_experiment(ident)
        timings[ident] = time.perf_counter() - t0
    return reports, timings
