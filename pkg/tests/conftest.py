import sys
from pathlib import Path

from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large, HealthCheck.filter_too_much],
)
settings.load_profile("default")

_criteria: dict = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rpartition("::")[2]
    if "test_acceptance.py" not in report.nodeid or not name.startswith("test_ac"):
        return
    if report.when == "call" or report.failed:
        _criteria[name] = _criteria.get(name, True) and report.passed


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria, key=lambda n: int(n[7:].split("_")[0])):
        number = name[7:].split("_")[0]
        terminalreporter.write_line(f"AC{number} {'PASS' if _criteria[name] else 'FAIL'}  {name}")
