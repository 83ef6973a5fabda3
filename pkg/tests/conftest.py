import pytest

_ACCEPTANCE: dict[str, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    label = marker.args[0]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        if report.passed:
            status = "PASS"
        elif report.skipped:
            status = "XFAIL" if hasattr(report, "wasxfail") else "SKIP"
        else:
            status = "FAIL"
        _ACCEPTANCE[item.nodeid] = (label, status)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, status in sorted(_ACCEPTANCE.values()):
        terminalreporter.write_line(f"{status:5} {label}")
