import re

_CRITERION = re.compile(r"test_criterion_(\d+)_")
_results: dict[int, tuple[str, str, str]] = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m or (report.when != "call" and report.passed):
        return
    n = int(m.group(1))
    if n in _results and _results[n][0] == "FAIL":
        return
    detail = dict(report.user_properties).get("detail", "")
    _results[n] = ("PASS" if report.passed else "FAIL", report.nodeid.split("::")[-1], detail)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_results):
        status, name, detail = _results[n]
        terminalreporter.write_line(f"criterion {n:2d}: {status}  {name}  {detail}".rstrip())
