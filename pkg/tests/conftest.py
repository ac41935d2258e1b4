import time

import numpy as np
import pytest

from pcmkit.core import SampleBuffer

RATE = 44100


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def sine(f, seconds=1.0, rate=RATE, amp=1.0):
    i = np.arange(int(seconds * rate))
    return SampleBuffer(amp * np.sin(2 * np.pi * f * i / rate), rate)


# -- acceptance report ---------------------------------------------------------

_SESSION_START = time.perf_counter()
_CRITERIA = {}
SUITE_BUDGET = 60.0  # seconds for the whole suite


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None or call.when != "call" and call.excinfo is None:
        return
    n = mark.args[0]
    ok = call.excinfo is None
    _CRITERIA.setdefault(n, []).append((item.name, ok))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    elapsed = time.perf_counter() - _SESSION_START
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        results = _CRITERIA[n]
        failed = [name for name, ok in results if not ok]
        extra = ""
        if n == 13:
            extra = f"; suite ran {elapsed:.1f} s (budget {SUITE_BUDGET:.0f} s)"
            if elapsed >= SUITE_BUDGET:
                failed.append("suite runtime")
        verdict = "FAIL" if failed else "PASS"
        detail = f" ({', '.join(failed)})" if failed else ""
        tr.write_line(f"criterion {n}: {verdict}{detail} [{len(results)} checks{extra}]")
