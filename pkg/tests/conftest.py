import pytest

_results = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers",
        "acceptance(num, title): marks a test as one numbered acceptance criterion",
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        mark = item.get_closest_marker("acceptance")
        if mark:
            num, title = mark.args
            _results[num] = (title, "PASS" if rep.passed else "FAIL")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_results):
        title, verdict = _results[num]
        terminalreporter.write_line(f"criterion {num:>2}: {verdict}  {title}")
