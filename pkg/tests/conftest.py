import numpy as np
import pytest
from hypothesis import settings

from aggrex.instance import Area, Demand, Instance, ProductionUnit

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")


def one_area(demand=10.0, hours=24, units=(), **kw):
    """Single power area with a constant demand."""
    return Instance(
        name="toy",
        horizon=hours,
        areas=(Area("P"),),
        units=tuple(units),
        demands=(Demand("d", "P", np.full(hours, float(demand)), slack_penalty=kw.pop("penalty", 1000.0)),),
        **kw,
    )


@pytest.fixture
def toy_unit():
    return ProductionUnit("g", "P", capacity=20.0, variable_cost=1.0)


# -- acceptance reporting ------------------------------------------------------

_CRITERIA: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion implemented by a test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, title = mark.args
    failed = report.failed or (report.when == "call" and report.skipped)
    if report.when == "call" or failed:
        prev = _CRITERIA.get(n, (title, "PASS"))[1]
        _CRITERIA[n] = (title, "FAIL" if failed or prev == "FAIL" else "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, status = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n}: {status}  {title}")
