import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).parent))

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if "acceptance" not in report.keywords:
        return
    if report.when == "call" or report.outcome != "passed":
        name = report.nodeid.split("::")[-1]
        prev = _ACCEPTANCE.get(name, "PASS")
        _ACCEPTANCE[name] = prev if report.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE, key=lambda s: int(s.split("_")[2])):
        terminalreporter.write_line(f"{_ACCEPTANCE[name]}  {name}")
