import pytest

_RESULTS = {}
_NOTES = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        ok = rep.passed
        prev = _RESULTS.get(number, (title, True))
        _RESULTS[number] = (title, prev[1] and ok)


@pytest.fixture
def acceptance_log():
    """Append a line to the acceptance summary printed at the end of the run."""
    return _NOTES.append


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_RESULTS):
        title, ok = _RESULTS[number]
        tr.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {title}")
    for line in _NOTES:
        tr.write_line(f"note: {line}")
