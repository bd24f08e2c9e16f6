from __future__ import annotations

import pytest

from hochschild import RankCache, builtin, hh
from hochschild.specseq import configuration

# criterion number -> (label, list of outcomes); filled by the report hook
_CRITERIA: dict[int, list] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, label): test belongs to acceptance criterion n")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m is not None:
            n, label = m.args
            _CRITERIA.setdefault(n, [label, []])
            item.user_properties.append(("criterion", n))


def pytest_runtest_logreport(report):
    crit = dict(report.user_properties).get("criterion")
    if crit is None:
        return
    if report.when == "call" or report.failed:
        _CRITERIA[crit][1].append(report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        label, outcomes = _CRITERIA[n]
        if not outcomes:
            status = "NOT RUN"
        else:
            status = "PASS" if all(outcomes) else "FAIL"
        terminalreporter.write_line(f"criterion {n:>2}: {status}  {label}")


# ------------------------------------------------------------ shared results

@pytest.fixture(scope="session")
def cache():
    return RankCache()


@pytest.fixture(scope="session")
def a1():
    return builtin("a1")


@pytest.fixture(scope="session")
def hh_a1(a1, cache):
    return hh(a1, 5, cache)


@pytest.fixture(scope="session")
def ab_config():
    return configuration("abelianizing")


@pytest.fixture(scope="session")
def ab_pages(ab_config, cache):
    return ab_config.pages(5, cache=cache)


@pytest.fixture(scope="session")
def ab_fcx(ab_config):
    return ab_config.filtered_complex(3)


@pytest.fixture(scope="session")
def ab_registry(ab_config, ab_fcx):
    return ab_config.registry(ab_fcx)


@pytest.fixture(scope="session")
def ab_to_may_pages(cache):
    return configuration("ab_to_may").pages(5, cache=cache)


@pytest.fixture(scope="session")
def may_ground_pages(cache):
    return configuration("may_ground").pages(4, cache=cache)
