import os

from hypothesis import HealthCheck, settings

settings.register_profile(
    "qbundle",
    deadline=None,
    max_examples=int(os.environ.get("QBUNDLE_EXAMPLES", "30")),
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("qbundle")

# acceptance outcomes, filled by test_acceptance.py and printed at the end
CRITERIA = {}


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    num = int(report.nodeid.rsplit("_", 1)[-1])
    CRITERIA[num] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    from test_acceptance import TITLES
    terminalreporter.section("acceptance criteria")
    for num in sorted(CRITERIA):
        terminalreporter.write_line(f"criterion {num:2d}: {CRITERIA[num]}  {TITLES[num]}")
