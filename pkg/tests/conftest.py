import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from xshutter.formation import LatentSequence
from xshutter.timing import scaled_timing

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_sequence(rng, h=16, w=12, n=5, c=3) -> LatentSequence:
    return LatentSequence(rng.random((n, h, w, c)), scaled_timing(h, w, n))


# -- acceptance summary: one line per criterion ------------------------------

_CRITERIA: dict = {}
_NOTES: dict = {}


def note(number: int, text: str) -> None:
    """Attach a measured value to a criterion's summary line."""
    _NOTES.setdefault(number, []).append(text)


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    if report.when != "call" and report.passed:
        return
    name = report.nodeid.split("::test_criterion_")[1]
    number = int(name.split("_")[0])
    entry = _CRITERIA.setdefault(number, {"parts": [], "ok": True})
    if report.when == "call" or report.failed:
        entry["parts"].append(name)
        entry["ok"] &= report.passed


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        status = "PASS" if entry["ok"] else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {status}  ({', '.join(entry['parts'])})")
        for text in _NOTES.get(number, []):
            terminalreporter.write_line(f"    {text}")
