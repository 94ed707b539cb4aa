import pytest

_CRITERIA = []


@pytest.fixture
def criterion(request):
    """Record a named acceptance criterion as PASS or FAIL for the summary."""
    entries = []

    def record(label):
        entries.append(label)

    yield record
    rep = getattr(request.node, "rep_call", None)
    ok = rep is not None and rep.passed
    for label in entries:
        _CRITERIA.append(("PASS" if ok else "FAIL", label))


@pytest.hookimpl(hookwrapper=True, tryfirst=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for status, label in _CRITERIA:
        terminalreporter.write_line(f"[{status}] {label}")
