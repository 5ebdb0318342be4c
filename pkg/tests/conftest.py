import pytest

_ACCEPTANCE_RESULTS: dict[int, dict] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is not None and report.when == "call":
        _ACCEPTANCE_RESULTS[marker.kwargs["criterion"]] = {
            "summary": marker.kwargs["summary"],
            "passed": report.passed,
        }


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(_ACCEPTANCE_RESULTS):
        info = _ACCEPTANCE_RESULTS[criterion]
        status = "PASS" if info["passed"] else "FAIL"
        terminalreporter.write_line(f"criterion {criterion}: {status} - {info['summary']}")
