import os
import sys
from collections import defaultdict

import pytest
from hypothesis import HealthCheck, settings

from repcert.fields import make_field

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

_criteria = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        status = rep.outcome
        if hasattr(rep, "wasxfail"):
            status = "xfailed" if rep.outcome == "skipped" else "xpassed"
        _criteria[mark.args[0]].append((item.name, status))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_criteria):
        results = _criteria[n]
        ok = all(s == "passed" for _, s in results)
        detail = ", ".join(f"{name}={s}" for name, s in results if s != "passed")
        line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}"
        tr.write_line(line + (f"  ({detail})" if detail else ""))


@pytest.fixture(scope="session")
def K():
    """Q(r), r = sqrt(2 - sqrt(2)) (root index 2 of r^4 - 4r^2 + 2)."""
    return make_field([2, 0, -4, 0, 1], 2)


@pytest.fixture(scope="session")
def Kt():
    return make_field([2, 0, -4, 0, 1], 2, "t")


@pytest.fixture(scope="session")
def family():
    from repcert.goldman import default_family
    return default_family()
