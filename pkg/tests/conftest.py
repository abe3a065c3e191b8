import re

import pytest
from hypothesis import settings

from qtoric import load_example
from qtoric.quasifold import MonomialMap

settings.register_profile("deterministic", derandomize=True, deadline=None)
settings.load_profile("deterministic")

# Every MonomialMap constructed while the suite runs; acceptance criterion 11
# re-verifies their membership certificates at the end of the session.
BUILT_MAPS: list = []

_orig_init = MonomialMap.__init__


def _recording_init(self, *args, **kwargs):
    _orig_init(self, *args, **kwargs)
    BUILT_MAPS.append(self)


MonomialMap.__init__ = _recording_init

EXAMPLES = ("quasisphere", "wps", "hirzebruch", "kite")
_CRITERION = re.compile(r"test_criterion_(\d\d)_")
_results: dict = {}


@pytest.fixture(scope="session")
def examples():
    return {name: load_example(name) for name in EXAMPLES}


def pytest_collection_modifyitems(session, config, items):
    # the certificate audit must see the maps built by every other test
    last = [it for it in items if it.name.startswith("test_criterion_11_")]
    rest = [it for it in items if not it.name.startswith("test_criterion_11_")]
    items[:] = rest + last


def pytest_runtest_logreport(report):
    m = _CRITERION.match(report.head_line.split(".")[-1] if report.head_line else "")
    if not m:
        return
    key = int(m.group(1))
    if report.when == "call" or report.outcome != "passed":
        prev = _results.get(key, "PASS")
        _results[key] = "PASS" if (report.passed and prev == "PASS") else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_results):
        terminalreporter.write_line(f"criterion {key:2d}: {_results[key]}")
