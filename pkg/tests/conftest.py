import pytest

_ACCEPTANCE = []


@pytest.fixture
def criterion():
    """Record a pass/fail line for an acceptance criterion."""

    class Recorder:
        def __init__(self):
            self.name = None
            self.detail = ""

        def __call__(self, name, detail=""):
            self.name, self.detail = name, detail
            return self

    rec = Recorder()
    yield rec
    if rec.name is not None:
        _ACCEPTANCE.append(rec)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call" and "criterion" in item.funcargs:
        item.funcargs["criterion"].passed = report.passed


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for rec in _ACCEPTANCE:
        status = "PASS" if getattr(rec, "passed", False) else "FAIL"
        terminalreporter.write_line(f"{status}  {rec.name}  {rec.detail}")
