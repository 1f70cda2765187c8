import time

import pytest

from catgini.config import load_config
from catgini.simulation import coverage_study

# criterion lines collected by test_acceptance and echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def run_bundled_study(name, methods):
    cfg = load_config(name)
    start = time.perf_counter()
    reports = coverage_study(cfg.scenario, cfg.n, methods, cfg.level, cfg.replications, cfg.batches,
                             cfg.rho_true, cfg.seed, allocation=cfg.allocation)
    return {r.method: r for r in reports}, time.perf_counter() - start


@pytest.fixture(scope="session")
def location_study():
    """500 x 5 coverage study of the two-normal location scenario, all four methods."""
    return run_bundled_study("table1_row1", ("jel", "ajel", "wjel", "jv"))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
